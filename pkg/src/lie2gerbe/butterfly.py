"""Butterflies between Lie 2-algebras, their checkers, and the composites used in the comparisons.

A butterfly H ⇢ G is a middle space E with a bracket and four linear maps

    kappa: H1 -> E,  lambda: G1 -> E,  sigma: E -> H0,  rho: E -> G0.

Exactness is only ever certified through explicit witnesses: lifts through
sigma and rho, and inverses of kappa and lambda on the respective kernels.

Jacobi convention for (b5), pinned on the butterfly F:

    [e1,[e2,e3]] - [[e1,e2],e3] - [e2,[e1,e3]]
        = JACOBI_SIGN * (kappa J_H(sigma e) + lambda J_G(rho e))
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field, replace
from typing import Any, Callable

from . import lie2core
from .lie2core import AxiomReport, Checker, Lie2, WeakMorphism, render


class WitnessUnavailable(ValueError):
    """No explicit lift/splitting is available for this input."""


class MissingWitness(ValueError):
    pass


@dataclass
class Butterfly:
    name: str
    left: Lie2
    right: Lie2
    bracket: Callable
    sigma: Callable
    rho: Callable
    kappa: Callable
    lam: Callable
    sample: Callable[[random.Random], Any]
    zero: Any
    member: Callable[[Any], bool] = lambda e: True
    lift_rho: Callable | None = None
    lift_sigma: Callable | None = None
    unkappa: Callable | None = None
    unlam: Callable | None = None
    meta: dict = field(default_factory=dict)

    def with_(self, **kw) -> "Butterfly":
        return replace(self, **kw)


@dataclass
class ButterflyIso:
    """m: source.middle -> target.middle with inverse; legs may be identified by the given maps."""

    source: Butterfly
    target: Butterfly
    m: Callable
    m_inv: Callable
    name: str = "m"
    left0: Callable = lambda h: h
    left1: Callable = lambda a: a
    right0: Callable = lambda w: w
    right1: Callable = lambda f: f


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def check_butterfly(B: Butterfly, cases: int = 50, seed=0, triples=None) -> AxiomReport:
    rng = _rng(seed)
    H, G = B.left, B.right
    ck = Checker(f"butterfly {B.name}: {H.name} ⇢ {G.name}")
    if triples is None:
        triples = [(B.sample(rng), B.sample(rng), B.sample(rng), H.sample1(rng), G.sample1(rng))
                   for _ in range(cases)]
    br = B.bracket
    s = lie2core.JACOBI_SIGN
    for e1, e2, e3, a, f in triples:
        ka, lf = B.kappa(a), B.lam(f)
        ck.zero("(b1) sigma kappa = d_H", B.sigma(ka) - H.d(a), a=a)
        ck.zero("(b1) rho lambda = d_G", B.rho(lf) - G.d(f), f=f)
        ck.zero("(b1) sigma lambda = 0", B.sigma(lf), f=f)
        ck.zero("(b1) rho kappa = 0", B.rho(ka), a=a)
        b12 = br(e1, e2)
        ck.zero("(b2) antisymmetry", b12 + br(e2, e1), e1=e1, e2=e2)
        ck.zero("(b3) sigma preserves brackets", B.sigma(b12) - H.br00(B.sigma(e1), B.sigma(e2)), e1=e1, e2=e2)
        ck.zero("(b3) rho preserves brackets", B.rho(b12) - G.br00(B.rho(e1), B.rho(e2)), e1=e1, e2=e2)
        ck.zero("(b4) [e, kappa a] = kappa[sigma e, a]", br(e1, ka) - B.kappa(H.br01(B.sigma(e1), a)), e=e1, a=a)
        ck.zero("(b4) [e, lambda f] = lambda[rho e, f]", br(e1, lf) - B.lam(G.br01(B.rho(e1), f)), e=e1, f=f)
        defect = br(e1, br(e2, e3)) - br(b12, e3) - br(e2, br(e1, e3))
        sig = [B.sigma(e) for e in (e1, e2, e3)]
        rh = [B.rho(e) for e in (e1, e2, e3)]
        rhs = (B.kappa(H.jac(*sig)) + B.lam(G.jac(*rh))) * s
        ck.zero("(b5) Jacobi defect", defect - rhs, e1=e1, e2=e2, e3=e3)
        ck.truth("(closure) middle membership",
                 B.member(b12) and B.member(ka) and B.member(lf), e1=e1, e2=e2, a=a, f=f)
    return ck.report()


def check_exactness(B: Butterfly, cases: int = 50, seed=0) -> AxiomReport:
    """Witness-based exactness of both diagonals."""
    missing = [n for n in ("lift_rho", "lift_sigma", "unkappa", "unlam") if getattr(B, n) is None]
    if missing:
        raise MissingWitness(f"{B.name} lacks witnesses: {', '.join(missing)}")
    rng = _rng(seed)
    H, G = B.left, B.right
    ck = Checker(f"exactness of {B.name}")
    for _ in range(cases):
        e = B.sample(rng)
        a, f = H.sample1(rng), G.sample1(rng)
        if not a.iszero():
            ck.truth("kappa injective", not B.kappa(a).iszero(), a=a)
        if not f.iszero():
            ck.truth("lambda injective", not B.lam(f).iszero(), f=f)
        ck.zero("unkappa kappa = id", B.unkappa(B.kappa(a)) - a, a=a)
        ck.zero("unlambda lambda = id", B.unlam(B.lam(f)) - f, f=f)
        w = G.sample0(rng)
        ck.zero("rho lift_rho = id", B.rho(B.lift_rho(w)) - w, w=w)
        h = B.sigma(e)
        try:
            ls = B.lift_sigma(h)
        except WitnessUnavailable as exc:
            ck.truth("sigma lift_sigma = id", False, detail=f"witness unavailable: {exc}", h=h)
            continue
        ck.zero("sigma lift_sigma = id", B.sigma(ls) - h, h=h)
        k_sigma = e - ls
        ck.zero("ker sigma = im lambda", B.lam(B.unlam(k_sigma)) - k_sigma, e=e)
        k_rho = e - B.lift_rho(B.rho(e))
        ck.zero("ker rho = im kappa", B.kappa(B.unkappa(k_rho)) - k_rho, e=e)
    return ck.report()


def check_butterfly_iso(i: ButterflyIso, cases: int = 50, seed=0) -> AxiomReport:
    rng = _rng(seed)
    S, T = i.source, i.target
    ck = Checker(f"2-isomorphism {i.name}: {S.name} => {T.name}")
    for _ in range(cases):
        e, e2 = S.sample(rng), S.sample(rng)
        a, f = S.left.sample1(rng), S.right.sample1(rng)
        me = i.m(e)
        ck.truth("m lands in target middle", T.member(me), e=e)
        ck.zero("sigma' m = sigma", T.sigma(me) - i.left0(S.sigma(e)), e=e)
        ck.zero("rho' m = rho", T.rho(me) - i.right0(S.rho(e)), e=e)
        ck.zero("m kappa = kappa'", i.m(S.kappa(a)) - T.kappa(i.left1(a)), a=a)
        ck.zero("m lambda = lambda'", i.m(S.lam(f)) - T.lam(i.right1(f)), f=f)
        ck.zero("m preserves brackets", i.m(S.bracket(e, e2)) - T.bracket(me, i.m(e2)), e1=e, e2=e2)
        ck.zero("m_inv m = id", i.m_inv(me) - e, e=e)
        t = T.sample(rng)
        ck.zero("m m_inv = id", i.m(i.m_inv(t)) - t, e=t)
    return ck.report()


# -- middle-space element types for composites ----------------------------------

class PairElem:
    """Pair of middle-space components with componentwise linear structure.

    ``normal`` (optional) maps a pair to a canonical representative; zero
    tests go through it, which realises quotient spaces.
    """

    __slots__ = ("a", "b", "normal")

    def __init__(self, a, b, normal=None):
        self.a = a
        self.b = b
        self.normal = normal

    def _mk(self, a, b):
        return PairElem(a, b, self.normal)

    def __add__(self, o):
        return self._mk(self.a + o.a, self.b + o.b)

    def __sub__(self, o):
        return self._mk(self.a - o.a, self.b - o.b)

    def __neg__(self):
        return self._mk(-self.a, -self.b)

    def __mul__(self, c):
        return self._mk(self.a * c, self.b * c)

    __rmul__ = __mul__

    def canonical(self) -> "PairElem":
        return self.normal(self) if self.normal else self

    def iszero(self):
        c = self.canonical()
        return c.a.iszero() and c.b.iszero()

    def render(self):
        return f"[{render(self.a)} ; {render(self.b)}]"

    def __hash__(self):
        return id(self)


# -- composites ------------------------------------------------------------------

def flip(B: Butterfly) -> Butterfly:
    """The inverse butterfly G ⇢ H: swap sigma/rho and kappa/lambda."""
    return Butterfly(
        name=f"{B.name}^-1",
        left=B.right,
        right=B.left,
        bracket=B.bracket,
        sigma=B.rho,
        rho=B.sigma,
        kappa=B.lam,
        lam=B.kappa,
        sample=B.sample,
        zero=B.zero,
        member=B.member,
        lift_rho=B.lift_sigma,
        lift_sigma=B.lift_rho,
        unkappa=B.unlam,
        unlam=B.unkappa,
        meta=dict(B.meta),
    )


def pushout_strict(B: Butterfly, m: WeakMorphism, m1_inv: Callable = None, m0_inv: Callable = None,
                   name: str | None = None) -> Butterfly:
    """Pushout along a strict morphism m: G -> G' with invertible degree-1 part."""
    if m.source is not B.right:
        raise ValueError(f"pushout: {m.name} does not start at {B.right.name}")
    m1_inv = m1_inv or (lambda f: f)
    lift_rho = None
    if B.lift_rho is not None and m0_inv is not None:
        lift_rho = lambda w: B.lift_rho(m0_inv(w))
    unlam = None if B.unlam is None else (lambda e: m.phi1(B.unlam(e)))
    return replace(
        B,
        name=name or f"{m.name}∘{B.name}",
        right=m.target,
        rho=lambda e: m.phi0(B.rho(e)),
        lam=lambda f: B.lam(m1_inv(f)),
        lift_rho=lift_rho,
        unlam=unlam,
        meta=dict(B.meta),
    )


def postcompose_weak(B: Butterfly, phi: WeakMorphism, phi1_inv: Callable = None,
                     name: str | None = None) -> Butterfly:
    """Composite H ⇢ L -> K of a butterfly with a weak morphism.

    Middle (E + K1) / {(lambda_B l ; phi1 l)}, with

        [(e;k),(e';k')] = ([e,e']_B ; [phi0 rho e, k'] - [phi0 rho e', k] + phi2(rho e, rho e'))
        sigma(e;k) = sigma_B e,  rho(e;k) = phi0 rho_B e - d_K k,
        kappa(a) = (kappa_B a; 0),  lambda(k) = (0; -k).

    Classes are normalised to (e - lambda_B(phi1^-1 k); 0).
    """
    if phi.source is not B.right:
        raise ValueError(f"postcompose: {phi.name} does not start at {B.right.name}")
    K = phi.target
    inv = phi1_inv or (lambda k: k)

    def normal(p):
        if p.b.iszero():
            return p
        return PairElem(p.a - B.lam(inv(p.b)), K.zero1)

    def mk(e, k):
        return PairElem(e, k, normal)

    def bracket(p, q):
        re, rq = B.rho(p.a), B.rho(q.a)
        k = K.br01(phi.phi0(re), q.b) - K.br01(phi.phi0(rq), p.b) + phi.phi2(re, rq)
        return mk(B.bracket(p.a, q.a), k)

    def sample(rng):
        return mk(B.sample(rng), K.sample1(rng) if rng.random() < 0.5 else K.zero1)

    def unlam(p):
        c = normal(p)
        return -phi.phi1(B.unlam(c.a))

    return Butterfly(
        name=name or f"{phi.name}∘{B.name}",
        left=B.left,
        right=K,
        bracket=bracket,
        sigma=lambda p: B.sigma(p.a),
        rho=lambda p: phi.phi0(B.rho(p.a)) - K.d(p.b),
        kappa=lambda a: mk(B.kappa(a), K.zero1),
        lam=lambda k: mk(B.zero, -k),
        sample=sample,
        zero=mk(B.zero, K.zero1),
        member=lambda p: B.member(p.a),
        lift_sigma=None if B.lift_sigma is None else (lambda h: mk(B.lift_sigma(h), K.zero1)),
        unkappa=None,
        unlam=None if B.unlam is None else unlam,
        meta={"embed": lambda e: mk(e, K.zero1), "normal": normal, "inner": B},
    )


def pullback_strict(B: Butterfly, j: WeakMorphism, sample_left: Callable = None,
                    name: str | None = None) -> Butterfly:
    """Pullback along a strict morphism j: H' -> H; middle pairs (h', e) with j0 h' = sigma e."""
    if j.target is not B.left:
        raise ValueError(f"pullback: {j.name} does not end at {B.left.name}")
    Hp = j.source
    if B.lift_sigma is None:
        raise MissingWitness("pullback sampling needs lift_sigma on the butterfly")

    def sample(rng):
        h = (sample_left or Hp.sample0)(rng)
        e = B.lift_sigma(j.phi0(h)) + B.lam(B.right.sample1(rng))
        return PairElem(h, e)

    return Butterfly(
        name=name or f"{B.name}∘{j.name}",
        left=Hp,
        right=B.right,
        bracket=lambda p, q: PairElem(Hp.br00(p.a, q.a), B.bracket(p.b, q.b)),
        sigma=lambda p: p.a,
        rho=lambda p: B.rho(p.b),
        kappa=lambda a: PairElem(Hp.d(a), B.kappa(j.phi1(a))),
        lam=lambda f: PairElem(Hp.zero0, B.lam(f)),
        sample=sample,
        zero=PairElem(Hp.zero0, B.zero),
        member=lambda p: Hp.member0(p.a) and B.member(p.b) and (j.phi0(p.a) - B.sigma(p.b)).iszero(),
        meta={"inner": B},
    )


def restrict_along_inclusion(B: Butterfly, j: WeakMorphism, sample: Callable,
                             name: str | None = None) -> Butterfly:
    """Restriction along an injective strict j: H' -> H whose phi0 is the identity on elements.

    The middle is sigma^-1(H'0); ``sample`` must produce elements of it.
    """
    if j.target is not B.left:
        raise ValueError(f"restrict: {j.name} does not end at {B.left.name}")
    Hp = j.source
    return replace(
        B,
        name=name or f"{B.name}|{Hp.name}",
        left=Hp,
        kappa=lambda a: B.kappa(j.phi1(a)),
        sample=sample,
        member=lambda e: B.member(e) and Hp.member0(B.sigma(e)),
        lift_sigma=None,
        lift_rho=None,
        unkappa=None,
        meta={"inner": B},
    )


def pullback_lie_algebra(B: Butterfly, J: WeakMorphism, name: str | None = None) -> Butterfly:
    """Fibre product g x_{H0} E for a weak morphism J: g -> H from an honest Lie algebra.

    Bracket ([xi,zeta], [e,e'] + kappa J2(xi,zeta)); the sign of the correction
    is forced by sigma preserving brackets: J0[xi,zeta] - [J0 xi, J0 zeta] = d J2.
    """
    if J.target is not B.left:
        raise ValueError(f"pullback: {J.name} does not end at {B.left.name}")
    g = J.source
    if B.lift_sigma is None:
        raise MissingWitness("fibre product sampling needs lift_sigma on the butterfly")

    def sample(rng):
        xi = g.sample0(rng)
        try:
            e = B.lift_sigma(J.phi0(xi))
        except WitnessUnavailable as exc:
            raise WitnessUnavailable(f"no lift of J0({render(xi)}): {exc}") from exc
        return PairElem(xi, e + B.lam(B.right.sample1(rng)))

    return Butterfly(
        name=name or f"{B.name}∘{J.name}",
        left=g,
        right=B.right,
        bracket=lambda p, q: PairElem(g.br00(p.a, q.a),
                                      B.bracket(p.b, q.b) + B.kappa(J.phi2(p.a, q.a))),
        sigma=lambda p: p.a,
        rho=lambda p: B.rho(p.b),
        kappa=lambda a: PairElem(g.zero0, B.zero),
        lam=lambda f: PairElem(g.zero0, B.lam(f)),
        sample=sample,
        zero=PairElem(g.zero0, B.zero),
        member=lambda p: B.member(p.b) and (J.phi0(p.a) - B.sigma(p.b)).iszero(),
        meta={"inner": B},
    )
