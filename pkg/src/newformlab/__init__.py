"""Exact finite models for newform dimensions of SL2 and U(1,1) over p-adic fields.

>>> from newformlab import make_ring, parse_char_literal, fixed_space
>>> R = make_ring("mixed", 3, 1, 5)
>>> [fixed_space(parse_char_literal("trivial", R, 0), None, m).dim for m in range(4)]
[1, 2, 4, 6]
"""

from .characters import (
    AdditivePsi,
    FieldChar,
    UnitChar,
    UnitGroup,
    abs_char,
    conductor,
    enumerate_unit_chars,
    legendre_char,
    omega_EF,
    parse_char_literal,
    psi_eval,
    trivial_char,
    unit_group,
    unramified_char,
)
from .cyclotomic import Cyclotomic, QHalfGraded, RootOfUnity
from .formulas import (
    ReprDescriptor,
    conductor_formula,
    depth_relations,
    descriptor_sweep,
    dim_formula,
    dim_table,
    genericity_assignment,
)
from .local_rings import (
    PrecisionError,
    QuadElem,
    RElem,
    RingSpec,
    galois_conj,
    invert,
    is_square_unit,
    make_quad_ext,
    make_ring,
    norm,
    trace,
    valuation,
)
from .principal_series import (
    CentralCharacterError,
    direct_fixed_dim,
    eta_conductor_search,
    fixed_space,
    packet_split,
    steinberg_subspace,
    theta_criterion_space,
)
from .supercuspidal import cuspidal_character, mackey_dims, regular_thetas
from .whittaker import genericity_profile, kernel_quotient_dim, whittaker_value

__version__ = "0.1.0"

__all__ = [
    "AdditivePsi", "CentralCharacterError", "Cyclotomic", "FieldChar", "PrecisionError", "QHalfGraded",
    "QuadElem", "RElem", "ReprDescriptor", "RingSpec", "RootOfUnity", "UnitChar", "UnitGroup",
    "abs_char", "conductor", "conductor_formula", "cuspidal_character", "depth_relations",
    "descriptor_sweep", "dim_formula", "dim_table", "direct_fixed_dim", "enumerate_unit_chars",
    "eta_conductor_search", "fixed_space", "galois_conj", "genericity_assignment", "genericity_profile",
    "invert", "is_square_unit", "kernel_quotient_dim", "legendre_char", "mackey_dims", "make_quad_ext",
    "make_ring", "norm", "omega_EF", "packet_split", "parse_char_literal", "psi_eval", "regular_thetas",
    "steinberg_subspace", "theta_criterion_space", "trace", "trivial_char", "unit_group",
    "unramified_char", "valuation", "whittaker_value",
]
