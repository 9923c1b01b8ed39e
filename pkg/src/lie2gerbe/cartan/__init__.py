from .scalar import COS, POLY, SIN, TRIG, Q, Scalar, Space, SpaceMismatch
from .forms import (
    Form,
    GenSection,
    VectorField,
    d,
    dx,
    exterior_derivative,
    interior,
    is_closed,
    lie_derivative,
    pairing_plus,
    partial_derivative,
    vf_bracket,
    wedge,
)
from .primitive import NotClosed, PrimitiveUnavailable, poincare_primitive, primitive, torus_primitive


def normalize(s: Scalar) -> Scalar:
    """Scalars are always stored in normal form; this re-canonicalises a raw term list."""
    return Scalar.from_terms(s.space, s.terms.items())
