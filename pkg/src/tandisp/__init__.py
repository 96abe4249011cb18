"""Display maps, tangent display systems and derived constructions on finite tangent categories."""

from .fincat import (
    FinCategory, Functor, FunctorOrbit, NatTransformation, ValidationReport, enumerate_idempotents,
    enumerate_monos, enumerate_retract_pairs, functor_orbit, iterate_functor, validate_category,
    validate_functor, validate_nat,
)
from .limits import (
    Cospan, InputError, PullbackCertificate, Square, TPullbackCertificate, Verdict, compute_nfold_pullback,
    compute_pullback, compute_terminal, is_pullback_square, is_T_pullback, is_weak_pullback_square,
    is_weak_T_pullback, mediating_morphism,
)
from .tangent import (
    AxiomReport, DifferentialBundleData, TangentStructure, check_differential_bundle, check_negatives,
    check_tangent_axioms, compute_vertical_bundle, trivial_tangent,
)
from .display import (
    Check, DisplayVerdict, SystemVerdict, check_display_system, check_fully_displayed, check_retractive,
    check_split_idempotents_closed, check_well_displayed, classify_morphism, maximal_tangent_display_system,
)
from .data import bundled_files, data_path

__version__ = "0.1.0"
