"""Exact symbolic checks for Lie 2-algebras of gerbe symmetries, butterflies and moment maps."""
from .lie2core import (
    JACOBI_SIGN,
    MORPHISM_SIGN,
    AxiomReport,
    AxiomResult,
    Lie2,
    WeakMorphism,
    check_l2_axioms,
    check_weak_morphism,
    compose_weak,
    morphisms_equal,
)
from .algebras import mk_atiyah, mk_courant, mk_observables, psi_to_atiyah, rogers_embedding
from .butterfly import Butterfly, ButterflyIso, check_butterfly, check_butterfly_iso, check_exactness

__version__ = "0.1.0"
