"""Differential forms, vector fields and the Cartan calculus.

Degree-0 forms are plain :class:`Scalar` values; :class:`Form` always has
degree >= 1 and stores coefficients sparsely over strictly increasing index
tuples (0-based axes).
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from .scalar import Q, Scalar, Space, SpaceMismatch


def _sort_sign(idx):
    """Sort a tuple of distinct indices; return (sorted, sign) or (None, 0) on repeats."""
    if len(set(idx)) != len(idx):
        return None, 0
    arr = list(idx)
    sign = 1
    for i in range(1, len(arr)):
        j = i
        while j > 0 and arr[j - 1] > arr[j]:
            arr[j - 1], arr[j] = arr[j], arr[j - 1]
            sign = -sign
            j -= 1
    return tuple(arr), sign


def _check_space(a, b):
    if a.space != b.space:
        raise SpaceMismatch(f"{a.space} vs {b.space}")


class Form:
    __slots__ = ("space", "k", "coeffs")

    def __init__(self, space: Space, k: int, coeffs: dict | None = None):
        if k < 1 or (k > space.n and coeffs):
            raise ValueError(f"form degree {k} invalid in dimension {space.n}")
        self.space = space
        self.k = k
        self.coeffs = {I: c for I, c in (coeffs or {}).items() if c.terms}

    @classmethod
    def zero(cls, space: Space, k: int) -> "Form":
        return cls(space, k, {})

    @classmethod
    def basis(cls, space: Space, idx, coeff: Scalar | None = None) -> "Form":
        """coeff * dx^{i1} ^ ... ^ dx^{ik} for 0-based (possibly unsorted) indices."""
        coeff = space.one() if coeff is None else coeff
        srt, sign = _sort_sign(tuple(idx))
        if srt is None:
            return cls(space, len(idx), {})
        return cls(space, len(idx), {srt: coeff.scale(sign)})

    def component(self, idx) -> Scalar:
        srt, sign = _sort_sign(tuple(idx))
        if srt is None:
            return self.space.zero()
        c = self.coeffs.get(srt)
        if c is None:
            return self.space.zero()
        return c if sign == 1 else -c

    # -- linear structure -----------------------------------------------
    def __add__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        _check_space(self, other)
        if other.k != self.k:
            raise ValueError(f"cannot add forms of degree {self.k} and {other.k}")
        out = dict(self.coeffs)
        for I, c in other.coeffs.items():
            out[I] = out[I] + c if I in out else c
        return Form(self.space, self.k, out)

    def __neg__(self):
        return Form(self.space, self.k, {I: -c for I, c in self.coeffs.items()})

    def __sub__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            _check_space(self, other)
            return Form(self.space, self.k, {I: c * other for I, c in self.coeffs.items()})
        if hasattr(other, "numerator"):
            q = Q(other)
            return Form(self.space, self.k, {I: c.scale(q) for I, c in self.coeffs.items()})
        return NotImplemented

    __rmul__ = __mul__

    def iszero(self) -> bool:
        return not self.coeffs

    def __eq__(self, other):
        if not isinstance(other, Form):
            return NotImplemented
        return self.space == other.space and self.k == other.k and self.coeffs == other.coeffs

    def __hash__(self):
        return hash((self.space, self.k, frozenset(self.coeffs.items())))

    def render(self) -> str:
        if not self.coeffs:
            return "0"
        parts = []
        for I in sorted(self.coeffs):
            basis = "∧".join(f"dx{i + 1}" for i in I)
            c = self.coeffs[I]
            if c == 1:
                parts.append(basis)
            elif c == -1:
                parts.append("-" + basis)
            else:
                parts.append(f"({c.render()})*{basis}")
        s = parts[0]
        for t in parts[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    __str__ = render

    def __repr__(self):
        return f"Form[{self.k}]({self.render()})"


class VectorField:
    __slots__ = ("space", "comps")

    def __init__(self, space: Space, comps):
        comps = tuple(comps)
        if len(comps) != space.n:
            raise ValueError("vector field needs one component per axis")
        self.space = space
        self.comps = comps

    @classmethod
    def zero(cls, space: Space) -> "VectorField":
        z = space.zero()
        return cls(space, (z,) * space.n)

    @classmethod
    def coordinate(cls, space: Space, i: int, coeff: Scalar | None = None) -> "VectorField":
        """coeff * d/dx^{i+1}."""
        space.check_axis(i)
        z = space.zero()
        coeff = space.one() if coeff is None else coeff
        return cls(space, tuple(coeff if j == i else z for j in range(space.n)))

    def __add__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        _check_space(self, other)
        return VectorField(self.space, tuple(a + b for a, b in zip(self.comps, other.comps)))

    def __neg__(self):
        return VectorField(self.space, tuple(-a for a in self.comps))

    def __sub__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self + (-other)

    def __mul__(self, other):
        if isinstance(other, Scalar):
            _check_space(self, other)
            return VectorField(self.space, tuple(a * other for a in self.comps))
        if hasattr(other, "numerator"):
            return VectorField(self.space, tuple(a.scale(other) for a in self.comps))
        return NotImplemented

    __rmul__ = __mul__

    def __call__(self, f: Scalar) -> Scalar:
        """Directional derivative v(f)."""
        _check_space(self, f)
        out = self.space.zero()
        for i, a in enumerate(self.comps):
            if a.terms:
                out = out + a * f.deriv(i)
        return out

    def iszero(self) -> bool:
        return all(not a.terms for a in self.comps)

    def __eq__(self, other):
        if not isinstance(other, VectorField):
            return NotImplemented
        return self.space == other.space and self.comps == other.comps

    def __hash__(self):
        return hash((self.space, self.comps))

    def render(self) -> str:
        parts = []
        for i, a in enumerate(self.comps):
            if not a.terms:
                continue
            if a == 1:
                parts.append(f"D{i + 1}")
            elif a == -1:
                parts.append(f"-D{i + 1}")
            else:
                parts.append(f"({a.render()})*D{i + 1}")
        if not parts:
            return "0"
        s = parts[0]
        for t in parts[1:]:
            s += " - " + t[1:] if t.startswith("-") else " + " + t
        return s

    __str__ = render

    def __repr__(self):
        return f"VectorField({self.render()})"


@dataclass(frozen=True)
class GenSection:
    """Section (u, alpha) of TM + T*M."""

    u: VectorField
    alpha: Form

    def __post_init__(self):
        if self.u.space != self.alpha.space:
            raise SpaceMismatch("vector and form parts live on different spaces")
        if self.alpha.k != 1:
            raise ValueError("generalized section needs a 1-form")

    @classmethod
    def zero(cls, space: Space) -> "GenSection":
        return cls(VectorField.zero(space), Form.zero(space, 1))

    def __add__(self, o):
        return GenSection(self.u + o.u, self.alpha + o.alpha)

    def __neg__(self):
        return GenSection(-self.u, -self.alpha)

    def __sub__(self, o):
        return GenSection(self.u - o.u, self.alpha - o.alpha)

    def __mul__(self, c):
        return GenSection(self.u * c, self.alpha * c)

    __rmul__ = __mul__

    def iszero(self) -> bool:
        return self.u.iszero() and self.alpha.iszero()

    def render(self) -> str:
        return f"({self.u.render()}, {self.alpha.render()})"


# -- operations --------------------------------------------------------------

def partial_derivative(s: Scalar, axis: int) -> Scalar:
    """Partial derivative along a 1-based axis."""
    if not 1 <= axis <= s.space.n:
        raise IndexError(f"axis {axis} out of range for dimension {s.space.n}")
    return s.deriv(axis - 1)


def dx(space: Space, i: int) -> Form:
    """The coordinate 1-form dx^{i+1} (0-based axis)."""
    space.check_axis(i)
    return Form.basis(space, (i,))


def wedge(a, b):
    """Exterior product; scalars act by multiplication."""
    if isinstance(a, Scalar):
        return a * b
    if isinstance(b, Scalar):
        return a * b
    _check_space(a, b)
    k = a.k + b.k
    if k > a.space.n:
        return Form.zero(a.space, k) if k else a.space.zero()
    out: dict = {}
    for I, c1 in a.coeffs.items():
        sI = set(I)
        for J, c2 in b.coeffs.items():
            if sI.intersection(J):
                continue
            srt, sign = _sort_sign(I + J)
            term = c1 * c2
            if sign < 0:
                term = -term
            out[srt] = out[srt] + term if srt in out else term
    return Form(a.space, k, out)


def exterior_derivative(w):
    """d on scalars and forms."""
    space = w.space
    n = space.n
    if isinstance(w, Scalar):
        return Form(space, 1, {(i,): w.deriv(i) for i in range(n)})
    if w.k >= n:
        return Form.zero(space, w.k + 1)
    out: dict = {}
    for I, c in w.coeffs.items():
        for j in range(n):
            if j in I:
                continue
            dc = c.deriv(j)
            if not dc.terms:
                continue
            srt, sign = _sort_sign((j,) + I)
            term = dc if sign > 0 else -dc
            out[srt] = out[srt] + term if srt in out else term
    return Form(space, w.k + 1, out)


d = exterior_derivative


def interior(v: VectorField, w):
    """Contraction iota_v; a 1-form contracts to a Scalar, a scalar to zero."""
    _check_space(v, w)
    space = v.space
    if isinstance(w, Scalar):
        return space.zero()
    if w.k == 1:
        out = space.zero()
        for (i,), c in w.coeffs.items():
            vi = v.comps[i]
            if vi.terms:
                out = out + vi * c
        return out
    acc: dict = {}
    for I, c in w.coeffs.items():
        for r, i in enumerate(I):
            vi = v.comps[i]
            if not vi.terms:
                continue
            J = I[:r] + I[r + 1:]
            term = vi * c
            if r % 2:
                term = -term
            acc[J] = acc[J] + term if J in acc else term
    return Form(space, w.k - 1, acc)


def lie_derivative(v: VectorField, w):
    """L_v computed componentwise (independent of the Cartan formula).

    (L_v w)_I = v(w_I) + sum_r sum_j w_{I with i_r -> j} d_{i_r} v^j
    """
    _check_space(v, w)
    space = v.space
    if isinstance(w, Scalar):
        return v(w)
    n = space.n
    dv = [[v.comps[j].deriv(i) for j in range(n)] for i in range(n)]  # dv[i][j] = d_i v^j
    out: dict = {}
    for I in combinations(range(n), w.k):
        total = space.zero()
        c = w.coeffs.get(I)
        if c is not None:
            total = total + v(c)
        for r, i in enumerate(I):
            for j in range(n):
                if not dv[i][j].terms:
                    continue
                J = I[:r] + (j,) + I[r + 1:]
                cj = w.component(J)
                if cj.terms:
                    total = total + cj * dv[i][j]
        if total.terms:
            out[I] = total
    return Form(space, w.k, out)


def vf_bracket(u: VectorField, v: VectorField) -> VectorField:
    """[u, v]^i = u(v^i) - v(u^i)."""
    _check_space(u, v)
    return VectorField(u.space, tuple(u(b) - v(a) for a, b in zip(u.comps, v.comps)))


def pairing_plus(e1: GenSection, e2: GenSection) -> Scalar:
    """<(u,a),(v,b)>+ = iota_u b + iota_v a."""
    return interior(e1.u, e2.alpha) + interior(e2.u, e1.alpha)


def is_closed(w) -> bool:
    return exterior_derivative(w).iszero()

