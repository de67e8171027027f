"""Stabilizer reduction for toric quotient stacks via saturated blowups."""

from .cones import Cone, Fan, cone_contains, faces, is_smooth_cone, orbit_closure_cones, star_subdivision
from .linalg import hermite_normal_form, intersection_dim, kernel_lattice, smith_normal_form
from .reduction import ReductionTrace, reduce, verify_trace
from .saturation import destabilizes, monomial_saturated_blowup, reichstein_fan, saturation
from .stacks import (
    DiagonalizableGroup,
    MonomialStack,
    StabilityReport,
    ToricStack,
    ToricUnion,
    classify_gerbe,
    max_locus,
    monomial_partition,
    stabilizer_dim,
    stable_locus,
)

__version__ = "0.1.0"
