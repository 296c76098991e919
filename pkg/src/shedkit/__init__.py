"""Exact toric-fan toolkit: simplicial cones, sheds and desingularization."""

from .cone import SimplicialCone, dual_cone, face_multiplicities, multiplicity, support_form
from .desing import g_desingularize, hilbert_basis, minimal_resolution_2d
from .fan import Fan, SubdivisionSchedule, apply_schedule, star_subdivide
from .harness import RunReport, replay, sweep

__all__ = [
    "Fan", "RunReport", "SimplicialCone", "SubdivisionSchedule", "apply_schedule",
    "dual_cone", "face_multiplicities", "g_desingularize", "hilbert_basis",
    "minimal_resolution_2d", "multiplicity", "replay", "star_subdivide", "support_form",
    "sweep",
]
