"""Explicit 2-isomorphisms between butterfly composites built from a connective structure."""
from __future__ import annotations

from .algebras import gauge_atiyah, gauge_courant, psi_to_atiyah, rogers_embedding
from .butterfly import (
    ButterflyIso,
    postcompose_weak,
    pullback_strict,
    pushout_strict,
    restrict_along_inclusion,
)
from .cartan import Form
from .cartan.sampling import DEFAULT, SamplerSettings
from .gerbe import (
    Curving,
    FElem,
    GElem,
    GerbeData,
    butterfly_E,
    butterfly_F,
    butterfly_G,
    curving_inclusion,
    forget_connection,
    shift_curving,
)


def prequantization_iso(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> ButterflyIso:
    """F restricted to curving-preserving symmetries vs R after E; e -> class of (e; 0)."""
    E = butterfly_E(data, curving, cfg)
    F = butterfly_F(data, curving, cfg)
    j = curving_inclusion(data, curving, cfg)
    left = restrict_along_inclusion(F, j, sample=E.sample, name="F|X(G;gamma,B)")
    right = postcompose_weak(E, rogers_embedding(E.meta["chi"], cfg), name="R∘E")
    embed, normal = right.meta["embed"], right.meta["normal"]
    return ButterflyIso(left, right, m=embed, m_inv=lambda p: normal(p).a, name="e -> (e;0)")


def courant_atiyah_iso(data: GerbeData, curving: Curving, cfg: SamplerSettings = DEFAULT) -> ButterflyIso:
    """G pulled back along the forgetful map vs psi after F."""
    F = butterfly_F(data, curving, cfg)
    G = butterfly_G(data, curving, cfg)
    left = pullback_strict(G, forget_connection(data, curving, cfg), name="G∘forget")
    right = postcompose_weak(F, psi_to_atiyah(F.meta["chi"], cfg), name="psi∘F")
    embed, normal = right.meta["embed"], right.meta["normal"]

    def m(p):
        h, ge = p.a, p.b
        return embed(FElem(ge.x, ge.f, h.alpha, ge.g))

    def m_inv(q):
        e = normal(q).a
        return type(left.zero)(e.base(), GElem(e.x, e.f, e.g))

    return ButterflyIso(left, right, m=m, m_inv=m_inv, name="(h, (x,f;g)) -> ((x,f,alpha;g); 0)")


def gauge_courant_iso(data: GerbeData, curving: Curving, tau: Form, cfg: SamplerSettings = DEFAULT) -> ButterflyIso:
    """T_tau after F vs F for the shifted curving B + tau; identity on the middle."""
    F = butterfly_F(data, curving, cfg)
    T = gauge_courant(F.meta["chi"], tau, cfg)
    left = pushout_strict(F, T, name="T_tau∘F")
    right = butterfly_F(data, shift_curving(curving, tau), cfg)
    return ButterflyIso(left, right, m=lambda e: e, m_inv=lambda e: e, name="identity")


def gauge_atiyah_iso(data: GerbeData, curving: Curving, tau: Form, cfg: SamplerSettings = DEFAULT) -> ButterflyIso:
    """G for the shifted curving vs id_tau after G; e -> class of (e; 0)."""
    G = butterfly_G(data, curving, cfg)
    left = butterfly_G(data, shift_curving(curving, tau), cfg)
    right = postcompose_weak(G, gauge_atiyah(G.meta["chi"], tau, cfg), name="id_tau∘G")
    embed, normal = right.meta["embed"], right.meta["normal"]
    return ButterflyIso(left, right, m=embed, m_inv=lambda p: normal(p).a, name="e -> (e;0)")
