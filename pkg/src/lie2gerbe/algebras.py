"""The observables, Courant and Atiyah Lie 2-algebras of a closed 3-form, and the maps between them.

All constructors are memoised on ``(space, chi)`` so that two calls with the
same data return the same :class:`Lie2` object; this lets composites of
morphisms be checked for matching endpoints by identity.
"""
from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache

from .cartan import Form, GenSection, Q, Scalar, Space, VectorField, d, interior, lie_derivative, pairing_plus, vf_bracket
from .cartan.primitive import primitive
from .cartan.sampling import (
    DEFAULT,
    SamplerSettings,
    exact_contraction_fields,
    random_form,
    random_rational,
    random_scalar,
    random_vector_field,
)
from .lie2core import AxiomReport, Checker, Lie2, MembershipError, WeakMorphism

HALF = Q(1, 2)


class NotClosed(ValueError):
    pass


@dataclass(frozen=True)
class ObservablePair:
    """(x, beta) with iota_x chi = -d beta; validity is relative to chi, see :func:`observable`."""

    x: VectorField
    beta: Form

    def __add__(self, o):
        return ObservablePair(self.x + o.x, self.beta + o.beta)

    def __neg__(self):
        return ObservablePair(-self.x, -self.beta)

    def __sub__(self, o):
        return ObservablePair(self.x - o.x, self.beta - o.beta)

    def __mul__(self, c):
        return ObservablePair(self.x * c, self.beta * c)

    __rmul__ = __mul__

    def iszero(self):
        return self.x.iszero() and self.beta.iszero()

    def render(self):
        return f"({self.x.render()}, {self.beta.render()})"

    def as_section(self) -> GenSection:
        return GenSection(self.x, self.beta)


def is_observable(chi: Form, e: ObservablePair) -> bool:
    return (interior(e.x, chi) + d(e.beta)).iszero()


def observable(chi: Form, x: VectorField, beta: Form) -> ObservablePair:
    e = ObservablePair(x, beta)
    if not is_observable(chi, e):
        raise MembershipError(f"iota_x chi != -d beta for {e.render()}")
    return e


def _require_closed(chi: Form):
    if chi.k != 3:
        raise ValueError("twisting form must have degree 3")
    if not d(chi).iszero():
        raise NotClosed("chi is not closed")


# -- observables ---------------------------------------------------------------

def observable_sampler(chi: Form, cfg: SamplerSettings = DEFAULT, max_basis: int = 3):
    """Seeded sampler of valid pairs.

    The vector field is a random rational combination of a precomputed basis of
    fields with iota_x chi exact; beta = -P(iota_x chi) + d f for random f.
    """
    space = chi.space
    basis = exact_contraction_fields(chi, 2, 1)
    small = SamplerSettings(max_degree=min(cfg.max_degree, 2), max_terms=2,
                            max_num=cfg.max_num, max_freq=cfg.max_freq)

    def sample(rng: random.Random) -> ObservablePair:
        x = VectorField.zero(space)
        if basis:
            for _ in range(rng.randint(1, max_basis)):
                x = x + basis[rng.randrange(len(basis))] * random_rational(rng, cfg)
        c = interior(x, chi)
        beta = -primitive(c) if not c.iszero() else Form.zero(space, 1)
        beta = beta + d(random_scalar(space, rng, small))
        return ObservablePair(x, beta)

    return sample


@lru_cache(maxsize=128)
def mk_observables(space: Space, chi: Form, cfg: SamplerSettings = DEFAULT) -> Lie2:
    _require_closed(chi)
    zero1 = space.zero()

    def br00(a, b):
        return ObservablePair(vf_bracket(a.x, b.x), interior(b.x, interior(a.x, chi)))

    def jac(a, b, c):
        return -interior(c.x, interior(b.x, interior(a.x, chi)))

    return Lie2(
        name=f"L(M,chi={chi.render()})",
        d=lambda f: ObservablePair(VectorField.zero(space), d(f)),
        br00=br00,
        br01=lambda a, f: zero1,
        jac=jac,
        sample0=observable_sampler(chi, cfg),
        sample1=lambda rng: random_scalar(space, rng, cfg),
        zero0=ObservablePair(VectorField.zero(space), Form.zero(space, 1)),
        zero1=zero1,
        member0=lambda e: isinstance(e, ObservablePair) and is_observable(chi, e),
        member1=lambda f: isinstance(f, Scalar),
    )


# -- Courant ---------------------------------------------------------------------

def courant_bracket(chi: Form, e1: GenSection, e2: GenSection) -> GenSection:
    u, a = e1.u, e1.alpha
    v, b = e2.u, e2.alpha
    form = (lie_derivative(u, b) - lie_derivative(v, a)
            - d(interior(u, b) - interior(v, a)) * HALF
            - interior(v, interior(u, chi)))
    return GenSection(vf_bracket(u, v), form)


def courant_jacobiator(chi: Form, e1, e2, e3, bracket=None) -> Scalar:
    bracket = bracket or (lambda a, b: courant_bracket(chi, a, b))
    total = e1.u.space.zero()
    for a, b, c in ((e1, e2, e3), (e2, e3, e1), (e3, e1, e2)):
        br = bracket(a, b)
        total = total + interior(br.u, c.alpha) + interior(c.u, br.alpha)
    return total * Q(-1, 6)


@lru_cache(maxsize=128)
def mk_courant(space: Space, chi: Form, cfg: SamplerSettings = DEFAULT) -> Lie2:
    _require_closed(chi)

    def sample0(rng):
        return GenSection(random_vector_field(space, rng, cfg), random_form(space, 1, rng, cfg))

    # nested brackets in the coherence checks revisit the same pairs
    @lru_cache(maxsize=2048)
    def br00(a, b):
        return courant_bracket(chi, a, b)

    return Lie2(
        name=f"L(C_chi={chi.render()})",
        d=lambda f: GenSection(VectorField.zero(space), d(f)),
        br00=br00,
        br01=lambda e, f: e.u(f) * HALF,
        jac=lambda a, b, c: courant_jacobiator(chi, a, b, c, br00),
        sample0=sample0,
        sample1=lambda rng: random_scalar(space, rng, cfg),
        zero0=GenSection.zero(space),
        zero1=space.zero(),
        member0=lambda e: isinstance(e, GenSection),
        member1=lambda f: isinstance(f, Scalar),
    )


# -- Atiyah ----------------------------------------------------------------------

@lru_cache(maxsize=128)
def mk_atiyah(space: Space, chi: Form, cfg: SamplerSettings = DEFAULT) -> Lie2:
    _require_closed(chi)
    return Lie2(
        name=f"A(M,chi={chi.render()})",
        d=lambda f: VectorField.zero(space),
        br00=vf_bracket,
        br01=lambda x, f: x(f),
        jac=lambda x, y, z: -interior(z, interior(y, interior(x, chi))),
        sample0=lambda rng: random_vector_field(space, rng, cfg),
        sample1=lambda rng: random_scalar(space, rng, cfg),
        zero0=VectorField.zero(space),
        zero1=space.zero(),
        member0=lambda x: isinstance(x, VectorField),
        member1=lambda f: isinstance(f, Scalar),
    )


# -- morphisms ---------------------------------------------------------------------

def rogers_homotopy(a: ObservablePair, b: ObservablePair) -> Scalar:
    return (interior(a.x, b.beta) - interior(b.x, a.beta)) * (-HALF)


def rogers_embedding(chi: Form, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    space = chi.space
    return WeakMorphism(
        mk_observables(space, chi, cfg),
        mk_courant(space, chi, cfg),
        phi0=ObservablePair.as_section,
        phi1=lambda f: f,
        phi2=rogers_homotopy,
        name="R",
    )


def psi_homotopy(e1: GenSection, e2: GenSection) -> Scalar:
    return (interior(e2.u, e1.alpha) - interior(e1.u, e2.alpha)) * HALF


def psi_to_atiyah(chi: Form, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    space = chi.space
    return WeakMorphism(
        mk_courant(space, chi, cfg),
        mk_atiyah(space, chi, cfg),
        phi0=lambda e: e.u,
        phi1=lambda f: f,
        phi2=psi_homotopy,
        name="psi",
    )


def gauge_courant(chi: Form, tau: Form, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    """Strict T_tau: (u, alpha) -> (u, alpha + iota_u tau)."""
    space = chi.space
    tgt = mk_courant(space, chi + d(tau), cfg)
    return WeakMorphism(
        mk_courant(space, chi, cfg),
        tgt,
        phi0=lambda e: GenSection(e.u, e.alpha + interior(e.u, tau)),
        phi1=lambda f: f,
        phi2=lambda a, b: tgt.zero1,
        name="T_tau",
    )


def check_pairing_preserved(phi: WeakMorphism, cases: int = 50, seed=0) -> AxiomReport:
    """<phi0 e1, phi0 e2>+ = <e1, e2>+ on sampled pairs."""
    rng = random.Random(seed)
    ck = Checker(f"{phi.name} preserves the pairing")
    for _ in range(cases):
        e1, e2 = phi.source.sample0(rng), phi.source.sample0(rng)
        ck.zero("pairing", pairing_plus(phi.phi0(e1), phi.phi0(e2)) - pairing_plus(e1, e2), e1=e1, e2=e2)
    return ck.report()


def gauge_atiyah(chi: Form, tau: Form, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    """Identity chain map A(M,chi) -> A(M,chi+d tau) with homotopy (x1,x2) -> iota_x2 iota_x1 tau."""
    space = chi.space
    return WeakMorphism(
        mk_atiyah(space, chi, cfg),
        mk_atiyah(space, chi + d(tau), cfg),
        phi0=lambda x: x,
        phi1=lambda f: f,
        phi2=lambda x1, x2: interior(x2, interior(x1, tau)),
        name="id_tau",
    )
