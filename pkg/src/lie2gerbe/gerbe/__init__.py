"""Čech-model gerbes with connective structure, their symmetry Lie 2-algebras and butterflies."""
from .cover import CechCover, Cochain, DegenerateCover, single_chart, three_box_cube
from .model import (
    AlgebroidSection,
    Curving,
    CurvingError,
    DescentError,
    FElem,
    GElem,
    GerbeData,
    MultVF,
    TrivializationWitness,
    WitnessMismatch,
    XGammaElem,
    algebroid_differential,
    check_lemma_connex_pres,
    gerbe_from_potential,
    random_trivializable_gerbe,
    shift_curving,
    validate_connective,
    validate_gerbe,
    vertical_potential,
)
from .lie2 import (
    curving_inclusion,
    forget_connection,
    mk_xgamma,
    mk_xgamma_b,
    mk_xp,
    sample_f_elem,
    sample_g_elem,
    sample_section,
)
from .butterflies import (
    butterfly_E,
    butterfly_F,
    butterfly_G,
    connection_shift_iso,
    epsilon,
    lift_gen_section,
    lift_vector_field,
    shift_connection,
    solve_g,
)
