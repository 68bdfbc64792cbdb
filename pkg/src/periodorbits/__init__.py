"""Periodic orbits of interval maps: forcing, classification and universality."""

from .errors import (
    CoverageError,
    DegeneracyError,
    DomainError,
    NotRenormalizableError,
    PartialLadderError,
    PrecisionFloorError,
    ResourceError,
)
from .order import (
    PeriodDecomposition,
    ascending_predecessor,
    compare,
    decompose,
    descending_successor,
    sharkovskii_less,
)
from .perm import (
    TABLE_SECOND_MINIMAL_7,
    CyclicPermutation,
    TransitionDigraph,
    build_digraph,
    has_least_period,
    inverse,
    is_minimal,
    is_second_minimal,
    least_periods,
    lmap_eval,
    match_catalog,
    shape_signature,
    stefan,
)
from .enumeration import OrbitClass, count_minimal_double_odd_types, enumerate_classes, enumerate_permutations
from .dynamics import (
    FAMILIES,
    ScanConfig,
    SuperstableRecord,
    UnimodalFamily,
    family_eval,
    find_superstable,
    get_family,
    orbit_permutation,
    period_doubling_ladder,
    superstable_residual,
)
from .universality import (
    CascadeEstimate,
    PatternRow,
    alpha_ratios,
    block_rate,
    cascade,
    doubling_operator,
    feigenbaum_delta,
    lambda_inf_extrapolate,
    pattern_row,
    universal_function_approx,
    verify_pattern_against_scan,
)
