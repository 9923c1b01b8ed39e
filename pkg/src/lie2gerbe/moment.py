"""Finite-dimensional Lie algebra actions and homotopy moment maps into the observables.

Conventions:

* actions are homomorphisms, [xi, zeta]_M = [xi_M, zeta_M];
* J0(e_m) = (X_m, -P(iota_{X_m} chi)) and J2(e_m, e_n) = P(residual of the
  bracket axiom), with P the radial homotopy operator;
* under chi -> chi + d tau for an invariant tau,
  J0' = J0 + (0, iota_X tau) and J2'(xi, zeta) = J2(xi, zeta) - tau(xi_M, zeta_M).
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from .algebras import ObservablePair, gauge_courant, is_observable, mk_observables, rogers_embedding
from .butterfly import (
    ButterflyIso,
    check_butterfly_iso,
    flip,
    pullback_lie_algebra,
    pushout_strict,
)
from .cartan import Form, Q, Space, VectorField, d, interior, lie_derivative, vf_bracket
from .cartan.primitive import poincare_primitive
from .cartan.sampling import DEFAULT, SamplerSettings, random_rational
from .gerbe import Curving, GerbeData, butterfly_E, curving_inclusion, shift_curving, validate_connective
from .lie2core import (
    NULL,
    AxiomReport,
    Checker,
    Lie2,
    WeakMorphism,
    check_weak_morphism,
    compose_weak,
    morphisms_equal,
)


class InvalidAlgebra(ValueError):
    pass


class InvalidAction(ValueError):
    pass


class NotInvariant(ValueError):
    pass


# -- Lie algebras --------------------------------------------------------------------

class LieVec:
    __slots__ = ("c",)

    def __init__(self, c):
        self.c = tuple(Q(v) for v in c)

    def __add__(self, o):
        return LieVec(a + b for a, b in zip(self.c, o.c))

    def __sub__(self, o):
        return LieVec(a - b for a, b in zip(self.c, o.c))

    def __neg__(self):
        return LieVec(-a for a in self.c)

    def __mul__(self, q):
        return LieVec(a * q for a in self.c)

    __rmul__ = __mul__

    def iszero(self):
        return not any(self.c)

    def __eq__(self, o):
        return isinstance(o, LieVec) and self.c == o.c

    def __hash__(self):
        return hash(self.c)

    def render(self):
        parts = []
        for i, a in enumerate(self.c):
            if a:
                parts.append(f"{a}*e{i + 1}" if a != 1 else f"e{i + 1}")
        return " + ".join(parts).replace("+ -", "- ") or "0"


@dataclass(frozen=True)
class FiniteLieAlgebra:
    """Basis e_1..e_k with [e_m, e_n] = sum_l c[(m, n)][l] e_l (0-based, m < n stored)."""

    labels: tuple
    structure: tuple  # ((m, n, l, c), ...)

    def __post_init__(self):
        k = self.dim
        for m, n, l, _ in self.structure:
            if not (0 <= m < n < k and 0 <= l < k):
                raise InvalidAlgebra("structure constants must be stored for m < n")
        for a, b, c in product(range(k), repeat=3):
            jac = (self.bracket(self.basis(a), self.bracket(self.basis(b), self.basis(c)))
                   + self.bracket(self.basis(b), self.bracket(self.basis(c), self.basis(a)))
                   + self.bracket(self.basis(c), self.bracket(self.basis(a), self.basis(b))))
            if not jac.iszero():
                raise InvalidAlgebra(f"Jacobi identity fails on (e{a + 1}, e{b + 1}, e{c + 1})")

    @property
    def dim(self) -> int:
        return len(self.labels)

    def basis(self, m) -> LieVec:
        return LieVec(1 if i == m else 0 for i in range(self.dim))

    def zero(self) -> LieVec:
        return LieVec((0,) * self.dim)

    def _table(self):
        t = {}
        for m, n, l, c in self.structure:
            t.setdefault((m, n), [0] * self.dim)[l] += Q(c)
        return t

    def bracket(self, u: LieVec, v: LieVec) -> LieVec:
        out = [Q(0)] * self.dim
        for (m, n), row in self._table().items():
            coef = u.c[m] * v.c[n] - u.c[n] * v.c[m]
            if coef:
                for l, c in enumerate(row):
                    out[l] += coef * c
        return LieVec(out)


def abelian(k: int) -> FiniteLieAlgebra:
    return FiniteLieAlgebra(tuple(f"e{i + 1}" for i in range(k)), ())


def heisenberg() -> FiniteLieAlgebra:
    return FiniteLieAlgebra(("e1", "e2", "e3"), ((0, 1, 2, 1),))


def so3() -> FiniteLieAlgebra:
    return FiniteLieAlgebra(("e1", "e2", "e3"), ((0, 1, 2, 1), (1, 2, 0, 1), (0, 2, 1, -1)))


@lru_cache(maxsize=64)
def lie_algebra_as_lie2(g: FiniteLieAlgebra, max_num: int = 5) -> Lie2:
    cfg = SamplerSettings(max_num=max_num)

    def sample0(rng):
        return LieVec(random_rational(rng, cfg) if rng.random() < 0.8 else 0 for _ in range(g.dim))

    return Lie2(
        name="g(" + ",".join(g.labels) + ")",
        d=lambda f: g.zero(),
        br00=g.bracket,
        br01=lambda x, f: NULL,
        jac=lambda x, y, z: NULL,
        sample0=sample0,
        sample1=lambda rng: NULL,
        zero0=g.zero(),
        zero1=NULL,
        member0=lambda x: isinstance(x, LieVec),
        strict=True,
    )


# -- actions -------------------------------------------------------------------------

@dataclass(frozen=True)
class ActionData:
    algebra: FiniteLieAlgebra
    fields: tuple  # one VectorField per basis element

    def __call__(self, xi: LieVec) -> VectorField:
        out = VectorField.zero(self.fields[0].space)
        for a, X in zip(xi.c, self.fields):
            if a:
                out = out + X * a
        return out

    def check(self, chi: Form | None = None) -> AxiomReport:
        g = self.algebra
        ck = Checker("action")
        ck.declare("homomorphism [xi,zeta]_M = [xi_M,zeta_M]")
        for m, n in product(range(g.dim), repeat=2):
            res = self(g.bracket(g.basis(m), g.basis(n))) - vf_bracket(self.fields[m], self.fields[n])
            ck.zero("homomorphism [xi,zeta]_M = [xi_M,zeta_M]", res, xi=g.basis(m), zeta=g.basis(n))
        if chi is not None:
            ck.declare("preserves chi")
            for m, X in enumerate(self.fields):
                ck.zero("preserves chi", lie_derivative(X, chi), xi=g.basis(m))
        return ck.report()


def translations(space: Space, k: int | None = None) -> ActionData:
    k = space.n if k is None else k
    return ActionData(abelian(k), tuple(VectorField.coordinate(space, i) for i in range(k)))


def heisenberg_action(space: Space) -> ActionData:
    """d1, d2 + x1 d3, d3 on R^3."""
    x1 = space.coord(0)
    return ActionData(heisenberg(), (
        VectorField.coordinate(space, 0),
        VectorField.coordinate(space, 1) + VectorField.coordinate(space, 2, x1),
        VectorField.coordinate(space, 2),
    ))


def rotations(space: Space) -> ActionData:
    """X_i = -(x_j d_k - x_k d_j), (i,j,k) cyclic; a homomorphism from so(3)."""
    x = [space.coord(i) for i in range(3)]
    F = VectorField.coordinate
    return ActionData(so3(), tuple(
        F(space, j, x[k]) - F(space, k, x[j]) for j, k in ((1, 2), (2, 0), (0, 1))
    ))


# -- moment maps ---------------------------------------------------------------------------

@dataclass(frozen=True)
class MomentMap:
    action: ActionData
    chi: Form
    J0: tuple       # ObservablePair per basis element
    J2: tuple       # ((m, n, Scalar), ...) for m < n

    @property
    def algebra(self) -> FiniteLieAlgebra:
        return self.action.algebra

    def j2(self, m, n):
        if m == n:
            return self.chi.space.zero()
        for a, b, s in self.J2:
            if (a, b) == (m, n):
                return s
            if (a, b) == (n, m):
                return -s
        return self.chi.space.zero()

    def phi0(self, xi: LieVec) -> ObservablePair:
        space = self.chi.space
        out = ObservablePair(VectorField.zero(space), Form.zero(space, 1))
        for a, e in zip(xi.c, self.J0):
            if a:
                out = out + e * a
        return out

    def phi2(self, xi: LieVec, zeta: LieVec):
        out = self.chi.space.zero()
        for m, n, s in self.J2:
            coef = xi.c[m] * zeta.c[n] - xi.c[n] * zeta.c[m]
            if coef:
                out = out + s * coef
        return out

    def morphism(self, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
        space = self.chi.space
        return WeakMorphism(
            lie_algebra_as_lie2(self.algebra),
            mk_observables(space, self.chi, cfg),
            phi0=self.phi0,
            phi1=lambda f: space.zero(),
            phi2=self.phi2,
            name="J",
        )

    def with_J2(self, m, n, s) -> "MomentMap":
        """Copy with J2(e_m, e_n) replaced (mutation helper)."""
        rest = tuple(t for t in self.J2 if (t[0], t[1]) != (m, n))
        return MomentMap(self.action, self.chi, self.J0, rest + ((m, n, s),))


def construct_moment_map(action: ActionData, chi: Form) -> MomentMap:
    """Build J0 by the homotopy operator and J2 from the bracket-axiom residual."""
    g = action.algebra
    space = chi.space
    rep = action.check(chi)
    if not rep.ok:
        raise InvalidAction(rep.render())
    J0 = []
    for X in action.fields:
        c = interior(X, chi)
        beta = -poincare_primitive(c) if not c.iszero() else Form.zero(space, 1)
        J0.append(ObservablePair(X, beta))
    partial = MomentMap(action, chi, tuple(J0), ())
    L = mk_observables(space, chi)
    J2 = []
    for m in range(g.dim):
        for n in range(m + 1, g.dim):
            res = partial.phi0(g.bracket(g.basis(m), g.basis(n))) - L.br00(J0[m], J0[n])
            s = poincare_primitive(res.beta) if not res.beta.iszero() else space.zero()
            J2.append((m, n, s))
    return MomentMap(action, chi, tuple(J0), tuple(J2))


def _tuples(g: FiniteLieAlgebra, L: Lie2, cases: int, seed):
    basis = [g.basis(m) for m in range(g.dim)]
    out = [(a, b, c, NULL) for a, b, c in product(basis, repeat=3)]
    rng = random.Random(seed)
    out += [(L.sample0(rng), L.sample0(rng), L.sample0(rng), NULL) for _ in range(cases)]
    return out


def check_moment_map(J: MomentMap, cases: int = 20, seed=0) -> AxiomReport:
    g = J.algebra
    phi = J.morphism()
    rep = AxiomReport(f"moment map for {','.join(g.labels)}")
    rep.extend(J.action.check(J.chi))
    if g.dim:
        rep.extend(check_weak_morphism(phi, tuples=_tuples(g, phi.source, cases, seed)))
    ck = Checker("covering")
    ck.declare("J0 covers the action")
    for m, (e, X) in enumerate(zip(J.J0, J.action.fields)):
        ck.zero("J0 covers the action", e.x - X, xi=g.basis(m))
        ck.truth("J0 covers the action", is_observable(J.chi, e), detail="not an observable pair", xi=g.basis(m))
    return rep.extend(ck.report())


def check_invariant(action: ActionData, tau: Form):
    for m, X in enumerate(action.fields):
        if not lie_derivative(X, tau).iszero():
            raise NotInvariant(f"L_X tau != 0 for generator e{m + 1}")


def shift_moment_map(J: MomentMap, tau: Form) -> MomentMap:
    check_invariant(J.action, tau)
    X = J.action.fields
    J0 = tuple(ObservablePair(e.x, e.beta + interior(e.x, tau)) for e in J.J0)
    J2 = tuple((m, n, s - interior(X[n], interior(X[m], tau))) for m, n, s in J.J2)
    return MomentMap(J.action, J.chi + d(tau), J0, J2)


# -- compatibility with the gerbe side ---------------------------------------------------

def prop41_composites(J: MomentMap, data: GerbeData, curving: Curving, tau: Form,
                      cfg: SamplerSettings = DEFAULT):
    """The two fibre-product butterflies g ⇢ X(G,gamma) built from chi and chi + d tau."""
    chi = validate_connective(data, curving)
    if not (chi - J.chi).iszero():
        raise ValueError("the curving's 3-curvature does not match the moment map's twist")
    check_invariant(J.action, tau)
    out = []
    for c, JJ in ((curving, J), (shift_curving(curving, tau), shift_moment_map(J, tau))):
        E = butterfly_E(data, c, cfg)
        P = pushout_strict(flip(E), curving_inclusion(data, c, cfg), name=f"j∘E^-1[{'B' if c is curving else 'B+tau'}]")
        out.append(pullback_lie_algebra(P, JJ.morphism(cfg), name=f"({P.name})∘J"))
    return tuple(out)


def check_prop41(J: MomentMap, data: GerbeData, curving: Curving, tau: Form,
                 cases: int = 20, seed=0) -> AxiomReport:
    B1, B2 = prop41_composites(J, data, curving, tau)
    iso = ButterflyIso(B1, B2, m=lambda p: p, m_inv=lambda p: p, name="identity on g (+)_{L0} E")
    return check_butterfly_iso(iso, cases=cases, seed=seed)


def outer_edge_check(J: MomentMap, tau: Form) -> AxiomReport:
    chi = J.chi
    Js = shift_moment_map(J, tau)
    left = compose_weak(gauge_courant(chi, tau), compose_weak(rogers_embedding(chi), J.morphism()))
    right = compose_weak(rogers_embedding(Js.chi), Js.morphism())
    g = J.algebra
    rep = morphisms_equal(left, right, [g.basis(m) for m in range(g.dim)])
    rep.subject = "outer edge: T_tau∘R∘J = R'∘J'"
    return rep
