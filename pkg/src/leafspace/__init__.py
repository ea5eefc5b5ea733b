"""Exact De Rham, basic and leaf-space cohomology for linear foliations of tori."""

__version__ = "0.1.0"

from .cohomology import BettiTable, basic_betti, betti, build_mode_complex, de_rham_betti, quotient_betti
from .diffeology import (
    B_inverse,
    B_map,
    DForm,
    F_map,
    G_map,
    GeneratedDiffeology,
    check_dform,
    dform_d,
    dform_pullback,
    lift_independence_check,
    make_quotient_plot,
    pi_star,
    standard_quotient_diffeology,
    standard_torus_diffeology,
)
from .foliation import LinearFoliation, basic_mode_space, is_basic, tangential_homotopy
from .forms import AffineMap, DiffForm, exterior_d, interior_product, lie_derivative, pullback, wedge
from .scalars import QuadScalar, TrigScalar, parse_quad

__all__ = [
    "AffineMap",
    "B_inverse",
    "B_map",
    "BettiTable",
    "DForm",
    "DiffForm",
    "F_map",
    "G_map",
    "GeneratedDiffeology",
    "LinearFoliation",
    "QuadScalar",
    "TrigScalar",
    "basic_betti",
    "basic_mode_space",
    "betti",
    "build_mode_complex",
    "check_dform",
    "de_rham_betti",
    "dform_d",
    "dform_pullback",
    "exterior_d",
    "interior_product",
    "is_basic",
    "lie_derivative",
    "lift_independence_check",
    "make_quotient_plot",
    "parse_quad",
    "pi_star",
    "pullback",
    "quotient_betti",
    "standard_quotient_diffeology",
    "standard_torus_diffeology",
    "tangential_homotopy",
    "wedge",
]
