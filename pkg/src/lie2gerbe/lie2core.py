"""Intensional 2-term L-infinity algebras, weak morphisms and axiom checkers.

A :class:`Lie2` is given by its operations on concrete elements plus seeded
samplers; elements only need ``+``, unary ``-``, ``-``, scaling by rationals
and ``iszero()``.

Sign table
----------
Conventions follow the Jacobiator-as-homotopy form

    [x,[y,z]] - [[x,y],z] - [y,[x,z]] = JACOBI_SIGN * d J(x,y,z)
    [x,[y,f]] - [[x,y],f] - [y,[x,f]] = JACOBI_SIGN * J(x,y,df)

and for a weak morphism (phi0, phi1, phi2)

    phi0[x,y] - [phi0 x, phi0 y] = d phi2(x,y)
    phi1[x,f] - [phi0 x, phi1 f] = phi2(x, df)
    J'(phi0 x, phi0 y, phi0 z) - phi1 J(x,y,z)
        = MORPHISM_SIGN * sum_cyc( phi2(x,[y,z]) + [phi0 x, phi2(y,z)] )

The degree-4 coherence is the Chevalley-Eilenberg form
sum_i (-1)^i [x_i, J(..^i..)] + sum_{i<j} (-1)^{i+j} J([x_i,x_j], ..) = 0,
which is invariant under J -> -J.  Both signs were fixed by running the three
algebras of observables/Courant/Atiyah type and the Rogers embedding through
these checkers (see ``tests/test_calibration.py``).
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import combinations
from typing import Any, Callable

JACOBI_SIGN = 1
MORPHISM_SIGN = -1


def render(obj) -> str:
    if hasattr(obj, "render"):
        return obj.render()
    return str(obj)


def is_zero(obj) -> bool:
    return obj.iszero()


class Null:
    """The zero vector space; used as the degree-1 part of honest Lie algebras."""

    __slots__ = ()

    def __add__(self, o):
        return self

    def __sub__(self, o):
        return self

    def __neg__(self):
        return self

    def __mul__(self, c):
        return self

    __rmul__ = __mul__

    def iszero(self):
        return True

    def render(self):
        return "0"

    def __eq__(self, o):
        return isinstance(o, Null)

    def __hash__(self):
        return 0


NULL = Null()


class MembershipError(ValueError):
    pass


@dataclass
class Lie2:
    name: str
    d: Callable
    br00: Callable
    br01: Callable
    jac: Callable
    sample0: Callable[[random.Random], Any]
    sample1: Callable[[random.Random], Any]
    zero0: Any
    zero1: Any
    member0: Callable[[Any], bool] = lambda x: True
    member1: Callable[[Any], bool] = lambda f: True
    strict: bool = False

    def br10(self, f, x):
        return -self.br01(x, f)


@dataclass
class WeakMorphism:
    source: Lie2
    target: Lie2
    phi0: Callable
    phi1: Callable
    phi2: Callable
    name: str = "phi"


def identity_morphism(L: Lie2) -> WeakMorphism:
    return WeakMorphism(L, L, lambda x: x, lambda f: f, lambda x, y: L.zero1, name=f"id[{L.name}]")


def strict_morphism(src: Lie2, tgt: Lie2, phi0, phi1, name="phi") -> WeakMorphism:
    return WeakMorphism(src, tgt, phi0, phi1, lambda x, y: tgt.zero1, name=name)


@dataclass
class AxiomResult:
    axiom: str
    passed: bool
    cases: int
    counterexample: str | None = None
    note: str | None = None


@dataclass
class AxiomReport:
    subject: str = ""
    entries: list[AxiomResult] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(e.passed for e in self.entries)

    def failures(self) -> list[AxiomResult]:
        return [e for e in self.entries if not e.passed]

    def get(self, axiom: str) -> AxiomResult:
        for e in self.entries:
            if e.axiom == axiom:
                return e
        raise KeyError(axiom)

    def extend(self, other: "AxiomReport", prefix: str = "") -> "AxiomReport":
        for e in other.entries:
            self.entries.append(AxiomResult(prefix + e.axiom, e.passed, e.cases, e.counterexample, e.note))
        return self

    def render(self) -> str:
        lines = [f"{self.subject}: {'PASS' if self.ok else 'FAIL'}"]
        for e in self.entries:
            line = f"  [{'ok' if e.passed else 'FAIL'}] {e.axiom} ({e.cases} cases)"
            if e.note:
                line += f" - {e.note}"
            lines.append(line)
            if e.counterexample:
                lines.append("      " + e.counterexample.replace("\n", "\n      "))
        return "\n".join(lines)

    def __str__(self):
        return self.render()


class Checker:
    """Accumulates exact-identity checks; keeps the first counterexample per axiom."""

    def __init__(self, subject: str):
        self.subject = subject
        self._order: list[str] = []
        self._cases: dict[str, int] = {}
        self._fail: dict[str, str] = {}
        self._notes: dict[str, str] = {}

    def declare(self, axiom: str, note: str | None = None):
        if axiom not in self._cases:
            self._order.append(axiom)
            self._cases[axiom] = 0
        if note:
            self._notes[axiom] = note

    def zero(self, axiom: str, residual, **inputs) -> bool:
        """Record a check that ``residual`` vanishes exactly."""
        self.declare(axiom)
        self._cases[axiom] += 1
        try:
            ok = residual.iszero()
        except Exception as exc:  # a malformed residual is itself a failure
            ok, residual = False, f"<error: {exc}>"
        if not ok and axiom not in self._fail:
            self._fail[axiom] = _format_counterexample(inputs, residual)
        return ok

    def truth(self, axiom: str, ok: bool, detail: str = "", **inputs) -> bool:
        self.declare(axiom)
        self._cases[axiom] += 1
        if not ok and axiom not in self._fail:
            self._fail[axiom] = _format_counterexample(inputs, detail or "predicate false")
        return ok

    def report(self) -> AxiomReport:
        rep = AxiomReport(self.subject)
        for ax in self._order:
            rep.entries.append(AxiomResult(ax, ax not in self._fail, self._cases[ax],
                                           self._fail.get(ax), self._notes.get(ax)))
        return rep


def _format_counterexample(inputs: dict, residual) -> str:
    parts = [f"{k} = {render(v)}" for k, v in inputs.items()]
    parts.append(f"residual = {render(residual) if not isinstance(residual, str) else residual}")
    return "\n".join(parts)


# -- single-identity helpers --------------------------------------------------

def jacobi_defect(L: Lie2, x, y, z):
    """[x,[y,z]] - [[x,y],z] - [y,[x,z]] - s dJ(x,y,z); zero iff the Jacobi-up-to-homotopy axiom holds."""
    for e in (x, y, z):
        if not L.member0(e):
            raise MembershipError(f"{render(e)} is not a degree-0 element of {L.name}")
    b = L.br00
    lhs = b(x, b(y, z)) - b(b(x, y), z) - b(y, b(x, z))
    return lhs - L.d(L.jac(x, y, z)) * JACOBI_SIGN


def degree4_coherence(L: Lie2, xs):
    terms = L.zero1
    for i in range(4):
        rest = xs[:i] + xs[i + 1:]
        t = L.br01(xs[i], L.jac(*rest))
        terms = terms + (t if i % 2 == 0 else -t)
    for i, j in combinations(range(4), 2):
        rest = [xs[k] for k in range(4) if k not in (i, j)]
        t = L.jac(L.br00(xs[i], xs[j]), *rest)
        terms = terms + (t if (i + j) % 2 == 0 else -t)
    return terms


def _rng(seed):
    return seed if isinstance(seed, random.Random) else random.Random(seed)


def check_l2_axioms(L: Lie2, cases: int = 50, seed=0, tuples=None) -> AxiomReport:
    """Exact check of the 2-term L-infinity axioms on sampled (or supplied) tuples.

    ``tuples`` may be a list of ``(x, y, z, w, f, g)``.
    """
    rng = _rng(seed)
    ck = Checker(f"L2 axioms of {L.name}")
    ck.declare("(ii) no degree-1 bracket", note="absent by construction")
    if tuples is None:
        tuples = ((L.sample0(rng), L.sample0(rng), L.sample0(rng), L.sample0(rng),
                   L.sample1(rng), L.sample1(rng)) for _ in range(cases))
    b, b01, d, J = L.br00, L.br01, L.d, L.jac
    s = JACOBI_SIGN
    for x, y, z, w, f, g in tuples:
        xy = b(x, y)
        ck.zero("(i) antisymmetry", xy + b(y, x), x=x, y=y)
        Jxyz = J(x, y, z)
        ck.zero("(i) J alternating", Jxyz + J(y, x, z), x=x, y=y, z=z)
        ck.zero("(i) J alternating", Jxyz + J(x, z, y), x=x, y=y, z=z)
        ck.zero("(lin) bilinearity", b(x + y, z) - b(x, z) - b(y, z), x=x, y=y, z=z)
        ck.zero("(iii) d[x,f] = [x,df]", d(b01(x, f)) - b(x, d(f)), x=x, f=f)
        ck.zero("(iv) [df,g] = [f,dg]", b01(d(f), g) + b01(d(g), f), f=f, g=g)
        ck.zero("(v) Jacobi up to dJ", jacobi_defect(L, x, y, z), x=x, y=y, z=z)
        lhs = b01(x, b01(y, f)) - b01(xy, f) - b01(y, b01(x, f))
        ck.zero("(vi) J(x,y,df)", lhs - J(x, y, d(f)) * s, x=x, y=y, f=f)
        ck.zero("(vii) degree-4 coherence", degree4_coherence(L, [x, y, z, w]), x=x, y=y, z=z, w=w)
        ck.truth("(closure) membership", L.member0(xy) and L.member0(d(f)) and L.member1(Jxyz)
                 and L.member1(b01(x, f)), x=x, y=y, f=f)
    return ck.report()


def check_weak_morphism(phi: WeakMorphism, cases: int = 50, seed=0, tuples=None) -> AxiomReport:
    rng = _rng(seed)
    S, T = phi.source, phi.target
    ck = Checker(f"weak morphism {phi.name}: {S.name} -> {T.name}")
    if tuples is None:
        tuples = ((S.sample0(rng), S.sample0(rng), S.sample0(rng), S.sample1(rng)) for _ in range(cases))
    p0, p1, p2 = phi.phi0, phi.phi1, phi.phi2
    for x, y, z, f in tuples:
        ck.zero("(m1) phi0 d = d phi1", p0(S.d(f)) - T.d(p1(f)), f=f)
        ck.zero("(m2) bracket up to d phi2",
                p0(S.br00(x, y)) - T.br00(p0(x), p0(y)) - T.d(p2(x, y)), x=x, y=y)
        ck.zero("(m3) mixed bracket up to phi2",
                p1(S.br01(x, f)) - T.br01(p0(x), p1(f)) - p2(x, S.d(f)), x=x, f=f)
        ck.zero("(m4) Jacobiator coherence", _m4_residual(phi, x, y, z), x=x, y=y, z=z)
        ck.zero("(phi2) antisymmetry", p2(x, y) + p2(y, x), x=x, y=y)
        ck.truth("(target) membership", T.member0(p0(x)) and T.member1(p1(f)), x=x, f=f)
    return ck.report()


def _m4_residual(phi: WeakMorphism, x, y, z):
    S, T = phi.source, phi.target
    p0, p1, p2 = phi.phi0, phi.phi1, phi.phi2
    lhs = T.jac(p0(x), p0(y), p0(z)) - p1(S.jac(x, y, z))
    rhs = T.zero1
    for a, b_, c in ((x, y, z), (y, z, x), (z, x, y)):
        rhs = rhs + p2(a, S.br00(b_, c)) + T.br01(p0(a), p2(b_, c))
    return lhs - rhs * MORPHISM_SIGN


def compose_weak(psi: WeakMorphism, phi: WeakMorphism) -> WeakMorphism:
    """psi o phi with homotopy psi2(phi0 x, phi0 y) + psi1(phi2(x, y))."""
    if phi.target is not psi.source:
        raise ValueError(f"cannot compose {psi.name} after {phi.name}: {phi.target.name} != {psi.source.name}")
    return WeakMorphism(
        phi.source,
        psi.target,
        lambda x: psi.phi0(phi.phi0(x)),
        lambda f: psi.phi1(phi.phi1(f)),
        lambda x, y: psi.phi2(phi.phi0(x), phi.phi0(y)) + psi.phi1(phi.phi2(x, y)),
        name=f"{psi.name}∘{phi.name}",
    )


def morphisms_equal(phi: WeakMorphism, psi: WeakMorphism, elements0, elements1=()) -> AxiomReport:
    """Exact componentwise comparison on given degree-0 elements (all pairs) and degree-1 elements."""
    ck = Checker(f"{phi.name} == {psi.name}")
    elements0 = list(elements0)
    for x in elements0:
        ck.zero("phi0 equal", phi.phi0(x) - psi.phi0(x), x=x)
    for f in elements1:
        ck.zero("phi1 equal", phi.phi1(f) - psi.phi1(f), f=f)
    for x in elements0:
        for y in elements0:
            ck.zero("phi2 equal", phi.phi2(x, y) - psi.phi2(x, y), x=x, y=y)
    ck.declare("phi0 equal")
    ck.declare("phi2 equal")
    return ck.report()
