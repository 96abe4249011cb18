"""Derived categories built from a finite tangent category."""

from .common import ConstructionError
from .karoubi import SplitOutput, karoubi_envelope
from .fibration import cartesian_lift
from .opens import OpenPoset, open_members, open_subobjects
from .par import ParOutput, check_restriction_equations, monic_system_clauses, par_category
from .slice import SliceOutput, slice_display_transfer, slice_tangent_category, term_slice_unit_counit

__all__ = [
    "ConstructionError", "SplitOutput", "karoubi_envelope", "SliceOutput",
    "slice_tangent_category", "slice_display_transfer", "term_slice_unit_counit",
    "cartesian_lift", "OpenPoset", "open_members", "open_subobjects", "ParOutput",
    "check_restriction_equations", "monic_system_clauses", "par_category",
]
