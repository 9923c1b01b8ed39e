"""Čech data of a connective structure and the element types built on it.

Conventions (arrow (i, j, theta) of the gerbe groupoid has target i, source j):

    (delta g)_ij    = g_j - g_i
    (delta L)_ijk   = L_jk - L_ik + L_ij = d h_ijk           connection
    (delta h)_ijkl  = h_jkl - h_ikl + h_ijl - h_ijk = 0       cocycle
    B_j - B_i       = d L_ij                                  curving
    f_ik            = f_ij + f_jk + iota_x d h_ijk            multiplicative vector field
    d f_ij + L_x L_ij = alpha_j - alpha_i                     preserves the connection

Chart and overlap quantities are global polynomial expressions; an identity
"on U_ij" is checked as a polynomial identity, which is sound because every
listed overlap has nonempty interior.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, fields

from ..cartan import Form, Scalar, Space, VectorField, d, interior, lie_derivative
from ..cartan.sampling import SamplerSettings, random_form, random_scalar
from ..lie2core import AxiomReport, Checker, render
from .cover import CechCover


class CurvingError(ValueError):
    pass


class DescentError(ValueError):
    pass


class WitnessMismatch(ValueError):
    pass


# -- elements --------------------------------------------------------------------

def _lin(a, b, op):
    if a is None:
        return None
    if isinstance(a, tuple):
        return tuple(op(x, y) for x, y in zip(a, b))
    return op(a, b)


def _un(a, op):
    if a is None:
        return None
    if isinstance(a, tuple):
        return tuple(op(x) for x in a)
    return op(a)


class _CechLinear:
    """Componentwise linear structure over dataclass fields (tuples are per chart / overlap)."""

    def _fieldvals(self):
        return [getattr(self, f.name) for f in fields(self)]

    def __add__(self, o):
        return type(self)(*(_lin(a, b, lambda x, y: x + y) for a, b in zip(self._fieldvals(), o._fieldvals())))

    def __sub__(self, o):
        return type(self)(*(_lin(a, b, lambda x, y: x - y) for a, b in zip(self._fieldvals(), o._fieldvals())))

    def __neg__(self):
        return type(self)(*(_un(a, lambda x: -x) for a in self._fieldvals()))

    def __mul__(self, c):
        return type(self)(*(_un(a, lambda x: x * c) for a in self._fieldvals()))

    __rmul__ = __mul__

    def __eq__(self, o):
        return type(o) is type(self) and self._fieldvals() == o._fieldvals()

    def __hash__(self):
        return hash((type(self).__name__, *self._fieldvals()))

    def iszero(self):
        for v in self._fieldvals():
            if v is None:
                continue
            if isinstance(v, tuple):
                if not all(x.iszero() for x in v):
                    return False
            elif not v.iszero():
                return False
        return True

    def render(self):
        parts = []
        for f in fields(self):
            v = getattr(self, f.name)
            if isinstance(v, tuple):
                parts.append(f"{f.name}=[{'; '.join(render(x) for x in v)}]")
            else:
                parts.append(f"{f.name}={render(v)}")
        return type(self).__name__ + "(" + ", ".join(parts) + ")"


@dataclass(frozen=True, eq=False)
class AlgebroidSection(_CechLinear):
    a: tuple


@dataclass(frozen=True, eq=False)
class MultVF(_CechLinear):
    x: VectorField
    f: tuple


@dataclass(frozen=True, eq=False)
class XGammaElem(_CechLinear):
    x: VectorField
    f: tuple
    alpha: tuple


@dataclass(frozen=True, eq=False)
class FElem(_CechLinear):
    x: VectorField
    f: tuple
    alpha: tuple
    g: tuple

    def base(self) -> XGammaElem:
        return XGammaElem(self.x, self.f, self.alpha)


@dataclass(frozen=True, eq=False)
class GElem(_CechLinear):
    x: VectorField
    f: tuple
    g: tuple

    def base(self) -> MultVF:
        return MultVF(self.x, self.f)


# -- gerbe data ----------------------------------------------------------------------

@dataclass(frozen=True)
class GerbeData:
    """Cocycle scalars h on ``cover.triples`` and connection 1-forms on ``cover.pairs``."""

    cover: CechCover
    h: tuple
    Lam: tuple

    @property
    def space(self) -> Space:
        return self.cover.space

    def h_at(self, i, j, k) -> Scalar:
        from .cover import _sort_sign
        if len({i, j, k}) < 3:
            return self.space.zero()
        srt, sign = _sort_sign((i, j, k))
        if srt not in self.cover.triples:
            raise KeyError(f"triple {srt} has empty overlap")
        v = self.h[self.cover.triples.index(srt)]
        return v if sign > 0 else -v

    def lam_at(self, i, j) -> Form:
        if i == j:
            return Form.zero(self.space, 1)
        pos, sign = self.cover.pair_index(i, j)
        v = self.Lam[pos]
        return v if sign > 0 else -v


@dataclass(frozen=True)
class Curving:
    B: tuple


@dataclass(frozen=True)
class TrivializationWitness:
    """B_i = B0 + d lam_i, L_ij = lam_j - lam_i + d mu_ij, h_ijk = mu_jk - mu_ik + mu_ij."""

    B0: Form
    lam: tuple
    mu: tuple

    def mu_at(self, cover: CechCover, i, j) -> Scalar:
        if i == j:
            return cover.space.zero()
        pos, sign = cover.pair_index(i, j)
        v = self.mu[pos]
        return v if sign > 0 else -v

    def check(self, data: GerbeData, curving: Curving) -> AxiomReport:
        cov = data.cover
        ck = Checker("trivialization witness")
        ck.declare("reproduces connection")
        ck.declare("reproduces cocycle")
        for i, j in cov.pairs:
            ck.zero("reproduces connection",
                    data.lam_at(i, j) - (self.lam[j] - self.lam[i] + d(self.mu_at(cov, i, j))), pair=_pl(i, j))
        for i, j, k in cov.triples:
            ck.zero("reproduces cocycle", data.h_at(i, j, k) - (
                self.mu_at(cov, j, k) - self.mu_at(cov, i, k) + self.mu_at(cov, i, j)), triple=_pl(i, j, k))
        for i in range(cov.size):
            ck.zero("reproduces curving", curving.B[i] - (self.B0 + d(self.lam[i])), chart=str(i + 1))
        return ck.report()

    def require(self, data: GerbeData, curving: Curving):
        rep = self.check(data, curving)
        if not rep.ok:
            raise WitnessMismatch(rep.render())


def _pl(*idx) -> str:
    return "".join(str(i + 1) for i in idx)


def validate_gerbe(data: GerbeData) -> AxiomReport:
    cov = data.cover
    ck = Checker("gerbe data")
    ck.declare("cocycle (delta h = 0)",
               note="constant shifts of h are invisible to the connection (integer ambiguity frozen to 0)")
    ck.declare("connection (delta Lambda = dh)")
    for i, j, k, l in cov.quads:
        res = data.h_at(j, k, l) - data.h_at(i, k, l) + data.h_at(i, j, l) - data.h_at(i, j, k)
        ck.zero("cocycle (delta h = 0)", res, quad=_pl(i, j, k, l))
    for i, j, k in cov.triples:
        res = data.lam_at(i, j) + data.lam_at(j, k) - data.lam_at(i, k) - d(data.h_at(i, j, k))
        ck.zero("connection (delta Lambda = dh)", res, triple=_pl(i, j, k))
    return ck.report()


def validate_connective(data: GerbeData, curving: Curving) -> Form:
    """Check the curving equations and return the descended 3-curvature."""
    cov = data.cover
    if len(curving.B) != cov.size:
        raise CurvingError("one curving 2-form per chart expected")
    for i, j in cov.pairs:
        res = curving.B[j] - curving.B[i] - d(data.lam_at(i, j))
        if not res.iszero():
            raise CurvingError(f"B_{j + 1} - B_{i + 1} != dLambda_{_pl(i, j)}: residual {res.render()}")
    dB = [d(b) for b in curving.B]
    for i, j in cov.pairs:
        if not (dB[i] - dB[j]).iszero():
            raise DescentError(f"dB differs on U_{_pl(i, j)}")
    chi = dB[0]
    if not d(chi).iszero():
        raise DescentError("3-curvature is not closed")
    return chi


def shift_curving(c: Curving, tau: Form) -> Curving:
    return Curving(tuple(b + tau for b in c.B))


# -- sampling ------------------------------------------------------------------------

def random_trivializable_gerbe(space: Space, cover: CechCover, seed=0, maxdeg: int = 3,
                               trivial: bool = False, B0: Form | None = None):
    """Random transition data with a known trivialization; B0 fixes chi = d B0 if given."""
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    cfg = SamplerSettings(max_degree=maxdeg, max_terms=3)
    B0 = random_form(space, 2, rng, cfg) if B0 is None else B0
    if trivial:
        lam = tuple(Form.zero(space, 1) for _ in range(cover.size))
        mu = tuple(space.zero() for _ in cover.pairs)
    else:
        lam = tuple(random_form(space, 1, rng, cfg) for _ in range(cover.size))
        mu = tuple(random_scalar(space, rng, cfg) for _ in cover.pairs)
    w = TrivializationWitness(B0, lam, mu)
    Lam = tuple(lam[j] - lam[i] + d(w.mu_at(cover, i, j)) for i, j in cover.pairs)
    h = tuple(w.mu_at(cover, j, k) - w.mu_at(cover, i, k) + w.mu_at(cover, i, j) for i, j, k in cover.triples)
    data = GerbeData(cover, h, Lam)
    curving = Curving(tuple(B0 + d(l) for l in lam))
    return data, curving, w


def gerbe_from_potential(cover: CechCover, B0: Form) -> tuple:
    """Gerbe with vanishing transition data and curving B0 on every chart."""
    space = cover.space
    data = GerbeData(cover, tuple(space.zero() for _ in cover.triples),
                     tuple(Form.zero(space, 1) for _ in cover.pairs))
    w = TrivializationWitness(B0, tuple(Form.zero(space, 1) for _ in range(cover.size)),
                              tuple(space.zero() for _ in cover.pairs))
    return data, Curving(tuple(B0 for _ in range(cover.size))), w


# -- extended space (theta is the last coordinate) -------------------------------------

def extended_space(space: Space) -> Space:
    return Space(space.n + 1, space.ring)


def embed(obj, ext: Space):
    """Pull a Scalar/Form/VectorField on M back to M x R_theta."""
    if isinstance(obj, Scalar):
        return Scalar(ext, {(e + (0,), p, f + (0,), k): c for (e, p, f, k), c in obj.terms.items()})
    if isinstance(obj, Form):
        return Form(ext, obj.k, {I: embed(c, ext) for I, c in obj.coeffs.items()})
    if isinstance(obj, VectorField):
        return VectorField(ext, tuple(embed(c, ext) for c in obj.comps) + (ext.zero(),))
    raise TypeError(f"cannot embed {type(obj).__name__}")


def vertical_potential(data: GerbeData, a: AlgebroidSection) -> tuple:
    """v_a chartwise: contract the connection dtheta + Lambda_ii (= dtheta at units) with a d/dtheta."""
    space = data.space
    ext = extended_space(space)
    dtheta = Form.basis(ext, (space.n,))
    out = []
    for ai in a.a:
        vert = VectorField.coordinate(ext, space.n, embed(ai, ext))
        v = interior(vert, dtheta)
        out.append(Scalar(space, {(e[:-1], p, f[:-1], k): c for (e, p, f, k), c in v.terms.items()}))
    return tuple(out)


def algebroid_differential(data: GerbeData, curving: Curving, a: AlgebroidSection,
                           potential: tuple | None = None) -> XGammaElem:
    """(anchor, abar, iota_anchor B - d v_a) with vanishing anchor in the Čech model."""
    space = data.space
    zero_x = VectorField.zero(space)
    v = vertical_potential(data, a) if potential is None else potential
    f = tuple(a.a[i] - a.a[j] for i, j in data.cover.pairs)
    alpha = tuple(interior(zero_x, curving.B[i]) - d(v[i]) for i in range(data.cover.size))
    return XGammaElem(zero_x, f, alpha)


def check_lemma_connex_pres(data: GerbeData, curving: Curving, a: AlgebroidSection,
                            potential: tuple | None = None) -> AxiomReport:
    """L_abar gamma = delta(iota_anchor B - d v_a), computed on U_ij x R_theta."""
    space = data.space
    ext = extended_space(space)
    dtheta = Form.basis(ext, (space.n,))
    rhs_elem = algebroid_differential(data, curving, a, potential)
    ck = Checker("L_abar gamma = delta(iota B - d v_a)")
    ck.declare("overlap identity")
    for i, j in data.cover.pairs:
        gamma = dtheta + embed(data.lam_at(i, j), ext)
        abar = VectorField.coordinate(ext, space.n, embed(a.a[i] - a.a[j], ext))
        lhs = lie_derivative(abar, gamma)
        rhs = embed(rhs_elem.alpha[j] - rhs_elem.alpha[i], ext)
        ck.zero("overlap identity", lhs - rhs, pair=_pl(i, j), a=a)
    return ck.report()
