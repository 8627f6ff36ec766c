"""Betti numbers of planar linkages with one telescopic leg.

Exact counts of short and median subsets give the homology of the linkage
space; applied to the anti-ferromagnetic mean-field XY model they give the
growth rate of the total Betti number of its sub-energy sets.
"""

from .betti import BettiProfile, betti_profile, is_disconnected, profile_of, small_leg_stability
from .errors import (
    DomainError,
    EngineLimitError,
    IncompatibleRadicandError,
    InconclusiveError,
    LinkageError,
    RangeError,
)
from .exact import QuadraticScalar, parse_rational, qs_compare, qs_sign
from .subsets import (
    LengthVector,
    SubsetClass,
    SubsetCounts,
    classify_subset,
    count_alpha,
    count_ckdk,
    count_ckdk_dp,
    count_ckdk_enum,
    half_perimeter,
    is_generic,
    max_fixed_index,
)
from .xy import (
    XYParams,
    count_ckdk_xy_closed,
    euler_growth_xy,
    kink_scan,
    magnetization_radius,
    p_of_v,
    tau_analytic,
    tau_empirical,
    total_betti_xy,
    v_interval,
)

__version__ = "0.1.0"
