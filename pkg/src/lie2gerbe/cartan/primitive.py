"""Explicit primitives of closed forms.

``poincare_primitive`` is the radial homotopy operator on R^n with basepoint 0.
``torus_primitive`` is the Fourier-mode homotopy on T^n; it applies to closed
forms with no constant Fourier mode (exactly the exact forms on the torus).
"""
from __future__ import annotations

from .forms import Form, exterior_derivative
from .scalar import COS, SIN, Q, Scalar


class NotClosed(ValueError):
    pass


class PrimitiveUnavailable(ValueError):
    """No built-in homotopy operator applies; the caller must supply a primitive."""


def _check_closed(w):
    if isinstance(w, Scalar):
        raise ValueError("primitive needs a form of degree >= 1")
    if not exterior_derivative(w).iszero():
        raise NotClosed("form is not closed")


def _assemble(space, k, acc):
    if k == 1:
        total = space.zero()
        for c in acc.values():
            total = total + c
        return total
    return Form(space, k - 1, acc)


def poincare_primitive(w: Form):
    """Return eta with d eta = w for a closed polynomial form w on R^n."""
    _check_closed(w)
    space = w.space
    if not space.is_poly or not all(c.is_polynomial() for c in w.coeffs.values()):
        raise PrimitiveUnavailable("radial homotopy operator needs polynomial coefficients on R^n")
    k = w.k
    acc: dict = {}
    for I, c in w.coeffs.items():
        # int_0^1 t^(k-1) c(tx) dt scales each degree-m monomial by 1/(k+m)
        for (e, p, f, kind), q in c.terms.items():
            base = q / (k + sum(e))
            for r, i in enumerate(I):
                e2 = list(e)
                e2[i] += 1
                J = I[:r] + I[r + 1:]
                term = Scalar(space, {(tuple(e2), p, f, kind): base if r % 2 == 0 else -base})
                acc[J] = acc[J] + term if J in acc else term
    return _assemble(space, k, acc)


def torus_primitive(w: Form):
    """Return eta with d eta = w for a closed, zero-mean trigonometric form on T^n.

    On a Fourier mode with frequency k the operator is
    (1/|k|^2) sum_j k_j iota_{d_j} A, where A integrates the mode along k.
    """
    _check_closed(w)
    space = w.space
    k = w.k
    acc: dict = {}
    for I, c in w.coeffs.items():
        for (e, p, f, kind), q in c.terms.items():
            if any(e):
                raise PrimitiveUnavailable("torus primitive needs pure Fourier coefficients")
            if not any(f):
                raise PrimitiveUnavailable("form has a constant Fourier mode (not exact on the torus)")
            norm2 = sum(j * j for j in f)
            # A: cos -> sin/(2pi), sin -> -cos/(2pi)
            if kind == COS:
                a_kind, a_q = SIN, q
            else:
                a_kind, a_q = COS, -q
            for r, i in enumerate(I):
                if not f[i]:
                    continue
                coeff = a_q * Q(f[i], norm2)
                if r % 2:
                    coeff = -coeff
                J = I[:r] + I[r + 1:]
                term = Scalar(space, {(e, p - 1, f, a_kind): coeff})
                acc[J] = acc[J] + term if J in acc else term
    return _assemble(space, k, acc)


def primitive(w: Form):
    """Dispatch to the homotopy operator appropriate for the space."""
    if w.space.is_poly:
        return poincare_primitive(w)
    return torus_primitive(w)
