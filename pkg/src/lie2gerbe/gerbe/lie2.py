"""Strict Lie 2-algebras of multiplicative vector fields on the Čech gerbe groupoid."""
from __future__ import annotations

import random
from functools import lru_cache

from ..cartan import Form, VectorField, d, interior, lie_derivative, vf_bracket
from ..cartan.sampling import DEFAULT, SamplerSettings, random_form, random_scalar, random_vector_field
from ..lie2core import Lie2, WeakMorphism, strict_morphism
from .model import (
    AlgebroidSection,
    Curving,
    FElem,
    GElem,
    GerbeData,
    MultVF,
    XGammaElem,
    algebroid_differential,
    validate_connective,
)

CHART_CFG = SamplerSettings(max_degree=2, max_terms=2)


def f_at(data: GerbeData, f: tuple, i: int, j: int):
    if i == j:
        return data.space.zero()
    pos, sign = data.cover.pair_index(i, j)
    return f[pos] if sign > 0 else -f[pos]


# -- constraint residuals ------------------------------------------------------------

def multiplicativity_ok(data: GerbeData, x: VectorField, f: tuple) -> bool:
    for i, j, k in data.cover.triples:
        res = f_at(data, f, i, k) - f_at(data, f, i, j) - f_at(data, f, j, k) - x(data.h_at(i, j, k))
        if not res.iszero():
            return False
    return True


def connexion_ok(data: GerbeData, x, f, alpha) -> bool:
    for (i, j), fij, L in zip(data.cover.pairs, f, data.Lam):
        if not (d(fij) + lie_derivative(x, L) - (alpha[j] - alpha[i])).iszero():
            return False
    return True


def g_ok(data: GerbeData, x, f, g) -> bool:
    for (i, j), fij, L in zip(data.cover.pairs, f, data.Lam):
        if not (g[j] - g[i] - fij - interior(x, L)).iszero():
            return False
    return True


def curving_ok(curving: Curving, x, alpha) -> bool:
    return all((lie_derivative(x, B) - d(a)).iszero() for B, a in zip(curving.B, alpha))


# -- samplers ------------------------------------------------------------------------

def _draw(data: GerbeData, rng: random.Random, cfg: SamplerSettings, x):
    space = data.space
    x = random_vector_field(space, rng, cfg) if x is None else x
    k = [random_scalar(space, rng, CHART_CFG) for _ in range(data.cover.size)]
    c = random_scalar(space, rng, CHART_CFG)
    f = tuple(-interior(x, L) + k[j] - k[i] for (i, j), L in zip(data.cover.pairs, data.Lam))
    return x, k, c, f


def sample_g_elem(data: GerbeData, rng: random.Random, cfg: SamplerSettings = DEFAULT,
                  x: VectorField | None = None) -> GElem:
    """(x, f = -iota_x Lambda + delta k ; g = k + c) with c global: the general element."""
    x, k, c, f = _draw(data, rng, cfg, x)
    return GElem(x, f, tuple(ki + c for ki in k))


def sample_f_elem(data: GerbeData, curving: Curving, rng: random.Random, cfg: SamplerSettings = DEFAULT,
                  x: VectorField | None = None, theta: Form | None = None) -> FElem:
    """As for G, plus alpha_i = iota_x B_i + d k_i + theta with theta a global 1-form."""
    x, k, c, f = _draw(data, rng, cfg, x)
    theta = random_form(data.space, 1, rng, cfg) if theta is None else theta
    alpha = tuple(interior(x, B) + d(ki) + theta for B, ki in zip(curving.B, k))
    return FElem(x, f, alpha, tuple(ki + c for ki in k))


def sample_section(data: GerbeData, rng: random.Random) -> AlgebroidSection:
    space = data.space
    return AlgebroidSection(tuple(random_scalar(space, rng, CHART_CFG) for _ in range(data.cover.size)))


# -- brackets ------------------------------------------------------------------------

def multvf_bracket(x, f, z, r):
    return vf_bracket(x, z), tuple(x(rij) - z(fij) for fij, rij in zip(f, r))


def mixed_bracket(x, a: AlgebroidSection) -> AlgebroidSection:
    return AlgebroidSection(tuple(x(ai) for ai in a.a))


def _section_zero(data):
    return AlgebroidSection(tuple(data.space.zero() for _ in range(data.cover.size)))


@lru_cache(maxsize=64)
def mk_xp(data: GerbeData, cfg: SamplerSettings = DEFAULT) -> Lie2:
    """X(P): multiplicative vector fields with d a = (0, abar)."""
    space = data.space
    zero1 = _section_zero(data)

    def dd(a):
        return MultVF(VectorField.zero(space), tuple(a.a[i] - a.a[j] for i, j in data.cover.pairs))

    def br(e, e2):
        return MultVF(*multvf_bracket(e.x, e.f, e2.x, e2.f))

    return Lie2(
        name="X(P)",
        d=dd,
        br00=br,
        br01=lambda e, a: mixed_bracket(e.x, a),
        jac=lambda a, b, c: zero1,
        sample0=lambda rng: sample_g_elem(data, rng, cfg).base(),
        sample1=lambda rng: sample_section(data, rng),
        zero0=MultVF(VectorField.zero(space), tuple(space.zero() for _ in data.cover.pairs)),
        zero1=zero1,
        member0=lambda e: isinstance(e, MultVF) and multiplicativity_ok(data, e.x, e.f),
        member1=lambda a: isinstance(a, AlgebroidSection),
        strict=True,
    )


def xgamma_bracket(e, e2) -> XGammaElem:
    bx, bf = multvf_bracket(e.x, e.f, e2.x, e2.f)
    alpha = tuple(lie_derivative(e.x, b) - lie_derivative(e2.x, a) for a, b in zip(e.alpha, e2.alpha))
    return XGammaElem(bx, bf, alpha)


def _xgamma(data: GerbeData, curving: Curving, cfg: SamplerSettings, preserve_curving: bool) -> Lie2:
    space = data.space
    zero1 = _section_zero(data)
    chi = validate_connective(data, curving)

    if preserve_curving:
        from ..algebras import observable_sampler

        obs = observable_sampler(chi, cfg)

        def sample0(rng):
            o = obs(rng)
            return sample_f_elem(data, curving, rng, cfg, x=o.x, theta=-o.beta).base()
    else:
        def sample0(rng):
            return sample_f_elem(data, curving, rng, cfg).base()

    def member0(e):
        ok = (isinstance(e, XGammaElem) and multiplicativity_ok(data, e.x, e.f)
              and connexion_ok(data, e.x, e.f, e.alpha))
        return ok and (not preserve_curving or curving_ok(curving, e.x, e.alpha))

    zx = VectorField.zero(space)
    return Lie2(
        name="X(G;gamma,B)" if preserve_curving else "X(G,gamma)",
        d=lambda a: algebroid_differential(data, curving, a),
        br00=xgamma_bracket,
        br01=lambda e, a: mixed_bracket(e.x, a),
        jac=lambda a, b, c: zero1,
        sample0=sample0,
        sample1=lambda rng: sample_section(data, rng),
        zero0=XGammaElem(zx, tuple(space.zero() for _ in data.cover.pairs),
                         tuple(Form.zero(space, 1) for _ in range(data.cover.size))),
        zero1=zero1,
        member0=member0,
        member1=lambda a: isinstance(a, AlgebroidSection),
        strict=True,
    )


@lru_cache(maxsize=64)
def mk_xgamma(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> Lie2:
    """X(G, gamma): the algebra depends on the curving only through d a and the sampler."""
    return _xgamma(data, curving, cfg, preserve_curving=False)


@lru_cache(maxsize=64)
def mk_xgamma_b(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> Lie2:
    """X(G; gamma, B): elements with L_x B_i = d alpha_i on every chart."""
    return _xgamma(data, curving, cfg, preserve_curving=True)


@lru_cache(maxsize=64)
def curving_inclusion(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    return strict_morphism(mk_xgamma_b(data, curving, cfg), mk_xgamma(data, curving, cfg),
                           lambda e: e, lambda a: a, name="j")


@lru_cache(maxsize=64)
def forget_connection(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> WeakMorphism:
    return strict_morphism(mk_xgamma(data, curving, cfg), mk_xp(data, cfg),
                           lambda e: MultVF(e.x, e.f), lambda a: a, name="forget")
