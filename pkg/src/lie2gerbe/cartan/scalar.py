"""Exact coefficient ring for coordinate spaces.

A scalar is a finite sum of terms

    c * x^e * (2pi)^p * T(2pi k.x)

with ``c`` rational, ``e`` a multi-exponent, ``p`` an integer power of the
formal unit ``2pi``, and ``T`` either ``cos`` or ``sin`` of an integer frequency
vector ``k``.  Polynomial spaces only ever produce ``k = 0, p = 0`` terms and
trigonometric spaces only ``e = 0`` terms, but the ring is closed under the mixed
case so no operation has to special-case the space kind.

The dictionary of terms *is* the normal form: keys are canonical (frequency
sign-normalised, ``sin 0`` dropped) and zero coefficients are never stored, so
equality of scalars is equality of dictionaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import gmpy2

Q = gmpy2.mpq

COS, SIN = 0, 1

POLY = "poly"
TRIG = "trig"


class SpaceMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Space:
    """Coordinate space R^n (``poly``) or the unit-period torus T^n (``trig``)."""

    n: int
    ring: str = POLY

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("dimension must be >= 1")
        if self.ring not in (POLY, TRIG):
            raise ValueError(f"unknown ring kind {self.ring!r}")

    @property
    def is_poly(self) -> bool:
        return self.ring == POLY

    @property
    def coordinate_names(self) -> tuple[str, ...]:
        return tuple(f"x{i + 1}" for i in range(self.n))

    def zero(self) -> "Scalar":
        return Scalar(self, {})

    def const(self, c) -> "Scalar":
        c = Q(c)
        if c == 0:
            return Scalar(self, {})
        return Scalar(self, {self._unit_key: c})

    def one(self) -> "Scalar":
        return self.const(1)

    def coord(self, i: int) -> "Scalar":
        """The coordinate function x^{i+1} (0-based axis)."""
        self.check_axis(i)
        e = [0] * self.n
        e[i] = 1
        return Scalar(self, {(tuple(e), 0, self._zero_freq, COS): Q(1)})

    def monomial(self, exps, c=1) -> "Scalar":
        return Scalar(self, {(tuple(exps), 0, self._zero_freq, COS): Q(c)})

    def trig(self, kind: int, freq, c=1, pipow: int = 0) -> "Scalar":
        """c * (2pi)^pipow * cos/sin(2pi freq.x)."""
        return Scalar.from_terms(
            self, [((self._zero_exps, pipow, tuple(freq), kind), Q(c))]
        )

    def two_pi(self, power: int = 1) -> "Scalar":
        return Scalar(self, {(self._zero_exps, power, self._zero_freq, COS): Q(1)})

    def check_axis(self, i: int):
        if not 0 <= i < self.n:
            raise IndexError(f"axis {i + 1} out of range for dimension {self.n}")

    @property
    def _zero_exps(self):
        return (0,) * self.n

    @property
    def _zero_freq(self):
        return (0,) * self.n

    @property
    def _unit_key(self):
        return ((0,) * self.n, 0, (0,) * self.n, COS)


_EADD: dict = {}  # exponent-vector sums; the set of monomials met in practice is small


def _canon_trig(freq: tuple, kind: int):
    """Return (freq, kind, sign) in canonical form, or None if the term is zero."""
    for k in freq:
        if k > 0:
            return freq, kind, 1
        if k < 0:
            neg = tuple(-j for j in freq)
            return neg, kind, (-1 if kind == SIN else 1)
    # zero frequency
    if kind == SIN:
        return None
    return freq, COS, 1


@lru_cache(maxsize=65536)
def _trig_product(a: tuple, ka: int, b: tuple, kb: int):
    """Product-to-sum: list of (freq, kind, rational factor)."""
    if not any(a):
        return ((b, kb, Q(1)),)
    if not any(b):
        return ((a, ka, Q(1)),)
    s = tuple(x + y for x, y in zip(a, b))
    m = tuple(x - y for x, y in zip(a, b))
    h = Q(1, 2)
    if ka == COS and kb == COS:
        raw = ((m, COS, h), (s, COS, h))
    elif ka == SIN and kb == SIN:
        raw = ((m, COS, h), (s, COS, -h))
    elif ka == SIN:
        raw = ((s, SIN, h), (m, SIN, h))
    else:
        raw = ((s, SIN, h), (m, SIN, -h))
    out = []
    for f, k, c in raw:
        canon = _canon_trig(f, k)
        if canon is None:
            continue
        f2, k2, sg = canon
        out.append((f2, k2, c * sg))
    return tuple(out)


class Scalar:
    """Exact coefficient function in canonical form (see module docstring)."""

    __slots__ = ("space", "terms", "_hash")

    def __init__(self, space: Space, terms: dict):
        self.space = space
        self.terms = terms
        self._hash = None

    @classmethod
    def from_terms(cls, space: Space, items: Iterable) -> "Scalar":
        """Build from possibly non-canonical ``(key, coeff)`` pairs."""
        acc: dict = {}
        for (exps, p, freq, kind), c in items:
            canon = _canon_trig(tuple(freq), kind)
            if canon is None:
                continue
            f2, k2, sg = canon
            key = (tuple(exps), p, f2, k2)
            acc[key] = acc.get(key, 0) + Q(c) * sg
        return cls(space, {k: v for k, v in acc.items() if v != 0})

    # -- ring structure -------------------------------------------------
    def _coerce(self, other) -> "Scalar":
        if isinstance(other, Scalar):
            if other.space != self.space:
                raise SpaceMismatch(f"{self.space} vs {other.space}")
            return other
        return self.space.const(other)

    def __add__(self, other):
        if not isinstance(other, Scalar) and not hasattr(other, "numerator"):
            return NotImplemented
        other = self._coerce(other)
        if not other.terms:
            return self
        if not self.terms:
            return other
        out = dict(self.terms)
        for k, v in other.terms.items():
            w = out.get(k)
            if w is None:
                out[k] = v
            else:
                w = w + v
                if w == 0:
                    del out[k]
                else:
                    out[k] = w
        return Scalar(self.space, out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar(self.space, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Scalar) and not hasattr(other, "numerator"):
            return NotImplemented
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return (-self) + other

    def scale(self, c) -> "Scalar":
        c = Q(c)
        if c == 0:
            return Scalar(self.space, {})
        return Scalar(self.space, {k: v * c for k, v in self.terms.items()})

    def __mul__(self, other):
        if isinstance(other, Scalar):
            if other.space != self.space:
                raise SpaceMismatch(f"{self.space} vs {other.space}")
            return self._mul(other)
        if hasattr(other, "numerator"):
            return self.scale(other)
        return NotImplemented

    def __rmul__(self, other):
        if hasattr(other, "numerator"):
            return self.scale(other)
        return NotImplemented

    def _mul(self, other: "Scalar") -> "Scalar":
        if not self.terms or not other.terms:
            return Scalar(self.space, {})
        out: dict = {}
        get = out.get
        rhs = [(e2, any(e2), p2, f2, any(f2), k2, c2) for (e2, p2, f2, k2), c2 in other.terms.items()]
        for (e1, p1, f1, k1), c1 in self.terms.items():
            ne1, nf1 = any(e1), any(f1)
            for e2, ne2, p2, f2, nf2, k2, c2 in rhs:
                if ne1 and ne2:
                    e = _EADD.get((e1, e2))
                    if e is None:
                        if len(_EADD) > 200_000:
                            _EADD.clear()
                        e = _EADD[(e1, e2)] = tuple(a + b for a, b in zip(e1, e2))
                else:
                    e = e1 if ne1 else e2
                p = p1 + p2
                c = c1 * c2
                if not nf1 and not nf2:
                    key = (e, p, f1, COS)
                    out[key] = get(key, 0) + c
                    continue
                if not nf1:
                    key = (e, p, f2, k2)
                    out[key] = get(key, 0) + c
                    continue
                if not nf2:
                    key = (e, p, f1, k1)
                    out[key] = get(key, 0) + c
                    continue
                for f, k, fac in _trig_product(f1, k1, f2, k2):
                    key = (e, p, f, k)
                    out[key] = get(key, 0) + c * fac
        return Scalar(self.space, {k: v for k, v in out.items() if v != 0})

    def __pow__(self, m: int):
        if not isinstance(m, int) or m < 0:
            raise ValueError("only non-negative integer powers")
        result = self.space.one()
        base = self
        while m:
            if m & 1:
                result = result * base
            base = base * base
            m >>= 1
        return result

    # -- calculus -------------------------------------------------------
    def deriv(self, axis: int) -> "Scalar":
        """Exact partial derivative along a 0-based axis."""
        self.space.check_axis(axis)
        out: dict = {}
        for (e, p, f, k), c in self.terms.items():
            if e[axis]:
                e2 = list(e)
                e2[axis] -= 1
                key = (tuple(e2), p, f, k)
                out[key] = out.get(key, 0) + c * e[axis]
            if f[axis]:
                # d/dx cos(2pi k.x) = -2pi k_i sin, d/dx sin = 2pi k_i cos
                if k == COS:
                    key, fac = (e, p + 1, f, SIN), -f[axis]
                else:
                    key, fac = (e, p + 1, f, COS), f[axis]
                out[key] = out.get(key, 0) + c * fac
        return Scalar(self.space, {k: v for k, v in out.items() if v != 0})

    # -- predicates -----------------------------------------------------
    def iszero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return all(not any(e) and not any(f) for (e, _, f, _), _ in self.terms.items())

    def is_polynomial(self) -> bool:
        return all(p == 0 and not any(f) for (_, p, f, _) in self.terms)

    def constant_mode(self) -> "Scalar":
        """Part of the scalar with no x-dependence and zero frequency."""
        return Scalar(
            self.space,
            {k: v for k, v in self.terms.items() if not any(k[0]) and not any(k[2])},
        )

    def total_degree(self) -> int:
        return max((sum(e) for (e, _, _, _) in self.terms), default=-1)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.space == other.space and self.terms == other.terms
        if hasattr(other, "numerator"):
            return self.terms == self.space.const(other).terms
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.space, frozenset(self.terms.items())))
        return self._hash

    # -- evaluation and display -----------------------------------------
    def evaluate(self, point) -> float:
        """Numerical value at a point (used only by tests as an oracle)."""
        tp = 2 * math.pi
        total = 0.0
        for (e, p, f, k), c in self.terms.items():
            v = float(c) * tp**p
            for xi, ei in zip(point, e):
                v *= float(xi) ** ei
            arg = tp * sum(fi * float(xi) for fi, xi in zip(f, point))
            v *= math.cos(arg) if k == COS else math.sin(arg)
            total += v
        return total

    def sorted_terms(self):
        """Terms in degree-lexicographic order (highest first)."""
        return sorted(
            self.terms.items(),
            key=lambda kv: (-sum(kv[0][0]), tuple(-x for x in kv[0][0]), kv[0][1], kv[0][2], kv[0][3]),
        )

    def render(self) -> str:
        if not self.terms:
            return "0"
        parts = []
        for key, c in self.sorted_terms():
            parts.append(_render_term(key, c))
        s = parts[0]
        for t in parts[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    __str__ = render

    def __repr__(self):
        return f"Scalar({self.render()})"


def _render_term(key, c) -> str:
    e, p, f, k = key
    factors = []
    for i, ei in enumerate(e):
        if ei == 1:
            factors.append(f"x{i + 1}")
        elif ei > 1:
            factors.append(f"x{i + 1}^{ei}")
    if p == 1:
        factors.append("2pi")
    elif p:
        factors.append(f"2pi^{p}")
    if any(f):
        factors.append(("cos" if k == COS else "sin") + f"(2pi*({_render_freq(f)}))")
    sign = "-" if c < 0 else ""
    a = abs(c)
    if not factors:
        return sign + str(a)
    if a == 1:
        return sign + "*".join(factors)
    return sign + str(a) + "*" + "*".join(factors)


def _render_freq(f) -> str:
    out = ""
    for i, k in enumerate(f):
        if not k:
            continue
        mag = "" if abs(k) == 1 else f"{abs(k)}*"
        if k < 0:
            out += "-" + mag + f"x{i + 1}"
        else:
            out += ("+" if out else "") + mag + f"x{i + 1}"
    return out
