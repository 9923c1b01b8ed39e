"""The butterflies F, G and E of a connective structure, with explicit lifts.

Middle elements carry chartwise scalars g_i with g_j - g_i = f_ij + iota_x Lambda_ij.
The lifts need no trivialization: rho is split by g = 0, f = -iota_x Lambda,
and sigma by solving delta g = f + iota_x Lambda along a spanning tree of the
nerve (then verified on every overlap).
"""
from __future__ import annotations

from functools import lru_cache

from ..algebras import ObservablePair, mk_courant, mk_observables, mk_atiyah
from ..butterfly import Butterfly, ButterflyIso, WitnessUnavailable
from ..cartan import Form, GenSection, Q, VectorField, d, interior
from ..cartan.sampling import DEFAULT, SamplerSettings
from .lie2 import (
    connexion_ok,
    curving_ok,
    g_ok,
    mk_xgamma,
    mk_xgamma_b,
    mk_xp,
    multiplicativity_ok,
    multvf_bracket,
    sample_f_elem,
    sample_g_elem,
    xgamma_bracket,
)
from .model import (
    AlgebroidSection,
    Curving,
    DescentError,
    FElem,
    GElem,
    GerbeData,
    TrivializationWitness,
    XGammaElem,
    validate_connective,
)

HALF = Q(1, 2)


def epsilon(data: GerbeData, curving: Curving, e) -> Form:
    """The global 1-form with eps = alpha_i - iota_x B_i - d g_i on every chart."""
    eps = [a - interior(e.x, B) - d(g) for a, B, g in zip(e.alpha, curving.B, e.g)]
    for i, j in data.cover.pairs:
        if not (eps[i] - eps[j]).iszero():
            raise DescentError(f"epsilon differs on U_{i + 1}{j + 1}")
    return eps[0]


def solve_g(data: GerbeData, x: VectorField, f: tuple) -> tuple:
    """g with g_j - g_i = f_ij + iota_x Lambda_ij, via a spanning tree of the nerve."""
    cov = data.cover
    c = {p: fij + interior(x, L) for p, fij, L in zip(cov.pairs, f, data.Lam)}
    g = [None] * cov.size
    g[0] = data.space.zero()
    for i, j in cov.tree_edges():
        cij = c[(i, j)] if i < j else -c[(j, i)]
        g[j] = g[i] + cij
    for (i, j), cij in c.items():
        if not (g[j] - g[i] - cij).iszero():
            raise WitnessUnavailable(f"delta g = f + iota_x Lambda has no solution around U_{i + 1}{j + 1}")
    return tuple(g)


def _zero_g(data):
    return tuple(data.space.zero() for _ in range(data.cover.size))


def _kappa_parts(data: GerbeData, a: AlgebroidSection):
    space = data.space
    f = tuple(a.a[i] - a.a[j] for i, j in data.cover.pairs)
    return VectorField.zero(space), f, tuple(-ai for ai in a.a)


# -- F ---------------------------------------------------------------------------------

def f_bracket(e: FElem, e2: FElem) -> FElem:
    base = xgamma_bracket(e, e2)
    g = tuple((interior(e.x, b + d(h)) - interior(e2.x, a + d(gi))) * HALF
              for a, b, gi, h in zip(e.alpha, e2.alpha, e.g, e2.g))
    return FElem(base.x, base.f, base.alpha, g)


def _f_common(data, curving, witness):
    if witness is not None:
        witness.require(data, curving)
    return validate_connective(data, curving)


def _f_member(data, curving, e) -> bool:
    if not isinstance(e, FElem):
        return False
    if not (multiplicativity_ok(data, e.x, e.f) and connexion_ok(data, e.x, e.f, e.alpha)
            and g_ok(data, e.x, e.f, e.g)):
        return False
    try:
        epsilon(data, curving, e)
    except DescentError:
        return False
    return True


def _f_maps(data: GerbeData, curving: Curving):
    space = data.space
    zx = VectorField.zero(space)
    zf = tuple(space.zero() for _ in data.cover.pairs)
    zalpha = tuple(Form.zero(space, 1) for _ in range(data.cover.size))

    def kappa(a):
        x, f, g = _kappa_parts(data, a)
        return FElem(x, f, tuple(-d(ai) for ai in a.a), g)

    def lam(phi):
        return FElem(zx, zf, zalpha, tuple(phi for _ in range(data.cover.size)))

    def lift_sigma(h: XGammaElem) -> FElem:
        return FElem(h.x, h.f, h.alpha, solve_g(data, h.x, h.f))

    def lift_from(u, eps):
        # element with vector field u and epsilon = eps: g = 0, f = -iota_u Lambda, alpha_i = eps + iota_u B_i
        f = tuple(-interior(u, L) for L in data.Lam)
        alpha = tuple(eps + interior(u, B) for B in curving.B)
        return FElem(u, f, alpha, _zero_g(data))

    return kappa, lam, lift_sigma, lift_from, FElem(zx, zf, zalpha, _zero_g(data))


@lru_cache(maxsize=64)
def butterfly_F(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT,
                witness: TrivializationWitness | None = None) -> Butterfly:
    """X(G,gamma) ⇢ L(C_chi)."""
    chi = _f_common(data, curving, witness)
    kappa, lam, lift_sigma, lift_from, zero = _f_maps(data, curving)
    return Butterfly(
        name="F",
        left=mk_xgamma(data, curving, cfg),
        right=mk_courant(data.space, chi, cfg),
        bracket=f_bracket,
        sigma=FElem.base,
        rho=lambda e: GenSection(e.x, -epsilon(data, curving, e)),
        kappa=kappa,
        lam=lam,
        sample=lambda rng: sample_f_elem(data, curving, rng, cfg),
        zero=zero,
        member=lambda e: _f_member(data, curving, e),
        lift_rho=lambda w: lift_from(w.u, -w.alpha),
        lift_sigma=lift_sigma,
        unkappa=lambda e: AlgebroidSection(tuple(-gi for gi in e.g)),
        unlam=lambda e: e.g[0],
        meta={"chi": chi, "data": data, "curving": curving},
    )


# -- E ---------------------------------------------------------------------------------

def e_bracket(curving: Curving, e: FElem, e2: FElem) -> FElem:
    """Bracket on curving-preserving elements; g-part iota_x beta - iota_z alpha + iota_z iota_x B."""
    base = xgamma_bracket(e, e2)
    g = tuple(interior(e.x, b) - interior(e2.x, a) + interior(e2.x, interior(e.x, B))
              for a, b, B in zip(e.alpha, e2.alpha, curving.B))
    return FElem(base.x, base.f, base.alpha, g)


@lru_cache(maxsize=64)
def butterfly_E(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT,
                witness: TrivializationWitness | None = None) -> Butterfly:
    """Prequantization butterfly X(G;gamma,B) ⇢ L(M,chi)."""
    chi = _f_common(data, curving, witness)
    kappa, lam, lift_sigma, lift_from, zero = _f_maps(data, curving)
    obs_alg = mk_observables(data.space, chi, cfg)

    def sample(rng):
        o = obs_alg.sample0(rng)
        return sample_f_elem(data, curving, rng, cfg, x=o.x, theta=-o.beta)

    return Butterfly(
        name="E",
        left=mk_xgamma_b(data, curving, cfg),
        right=obs_alg,
        bracket=lambda a, b: e_bracket(curving, a, b),
        sigma=FElem.base,
        rho=lambda e: ObservablePair(e.x, -epsilon(data, curving, e)),
        kappa=kappa,
        lam=lam,
        sample=sample,
        zero=zero,
        member=lambda e: _f_member(data, curving, e) and curving_ok(curving, e.x, e.alpha),
        lift_rho=lambda w: lift_from(w.x, -w.beta),
        lift_sigma=lift_sigma,
        unkappa=lambda e: AlgebroidSection(tuple(-gi for gi in e.g)),
        unlam=lambda e: e.g[0],
        meta={"chi": chi, "data": data, "curving": curving},
    )


# -- G ---------------------------------------------------------------------------------

def g_bracket(curving: Curving, e: GElem, e2: GElem) -> GElem:
    bx, bf = multvf_bracket(e.x, e.f, e2.x, e2.f)
    g = tuple(e.x(h) - e2.x(gi) - interior(e2.x, interior(e.x, B))
              for gi, h, B in zip(e.g, e2.g, curving.B))
    return GElem(bx, bf, g)


@lru_cache(maxsize=64)
def butterfly_G(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT,
                witness: TrivializationWitness | None = None) -> Butterfly:
    """X(P) ⇢ A(M,chi)."""
    chi = _f_common(data, curving, witness)
    space = data.space
    zx = VectorField.zero(space)
    zf = tuple(space.zero() for _ in data.cover.pairs)

    def kappa(a):
        x, f, g = _kappa_parts(data, a)
        return GElem(x, f, g)

    def member(e):
        return isinstance(e, GElem) and multiplicativity_ok(data, e.x, e.f) and g_ok(data, e.x, e.f, e.g)

    return Butterfly(
        name="G",
        left=mk_xp(data, cfg),
        right=mk_atiyah(space, chi, cfg),
        bracket=lambda a, b: g_bracket(curving, a, b),
        sigma=GElem.base,
        rho=lambda e: e.x,
        kappa=kappa,
        lam=lambda phi: GElem(zx, zf, tuple(phi for _ in range(data.cover.size))),
        sample=lambda rng: sample_g_elem(data, rng, cfg),
        zero=GElem(zx, zf, _zero_g(data)),
        member=member,
        lift_rho=lambda u: GElem(u, tuple(-interior(u, L) for L in data.Lam), _zero_g(data)),
        lift_sigma=lambda h: GElem(h.x, h.f, solve_g(data, h.x, h.f)),
        unkappa=lambda e: AlgebroidSection(tuple(-gi for gi in e.g)),
        unlam=lambda e: e.g[0],
        meta={"chi": chi, "data": data, "curving": curving},
    )


# -- witness-facing lifts --------------------------------------------------------------

def lift_gen_section(data: GerbeData, curving: Curving, witness: TrivializationWitness,
                     section: GenSection) -> FElem:
    """Element of F with rho = section; the witness is validated against the data."""
    witness.require(data, curving)
    return butterfly_F(data, curving).lift_rho(section)


def lift_vector_field(data: GerbeData, witness: TrivializationWitness, u: VectorField,
                      curving: Curving | None = None) -> GElem:
    if curving is None:
        curving = Curving(tuple(witness.B0 + d(l) for l in witness.lam))
    witness.require(data, curving)
    return butterfly_G(data, curving).lift_rho(u)


# -- change of connection --------------------------------------------------------------

def shift_connection(data: GerbeData, curving: Curving, nu: tuple) -> tuple[GerbeData, Curving]:
    """gamma' = gamma + delta nu: Lambda'_ij = Lambda_ij + nu_j - nu_i, B'_i = B_i + d nu_i."""
    lam = tuple(L + nu[j] - nu[i] for (i, j), L in zip(data.cover.pairs, data.Lam))
    return GerbeData(data.cover, data.h, lam), Curving(tuple(B + d(n) for B, n in zip(curving.B, nu)))


def connection_shift_iso(data: GerbeData, curving: Curving, nu: tuple,
                         cfg: SamplerSettings = DEFAULT) -> ButterflyIso:
    data2, curving2 = shift_connection(data, curving, nu)
    G1 = butterfly_G(data, curving, cfg)
    G2 = butterfly_G(data2, curving2, cfg)
    return ButterflyIso(
        G1, G2,
        m=lambda e: GElem(e.x, e.f, tuple(gi + interior(e.x, n) for gi, n in zip(e.g, nu))),
        m_inv=lambda e: GElem(e.x, e.f, tuple(gi - interior(e.x, n) for gi, n in zip(e.g, nu))),
        name="g -> g + iota_x nu",
    )
