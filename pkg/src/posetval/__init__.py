"""Valuations and induced metrics on finite partially ordered sets."""

from .errors import (
    CycleDetected,
    DomainConditionFailed,
    EmptyFilterIntersection,
    EmptyPoset,
    InvalidGroup,
    NonMonotone,
    NonPositiveValue,
    NotBounded,
    NotNormalized,
    OrderCapExceeded,
    ParseError,
    PosetvalError,
    PreconditionUnmet,
    RowMismatch,
    UnknownElement,
    UnknownName,
    UnknownTarget,
    WeightPosetMismatch,
    ZeroScale,
)
from .poset import (
    Classification,
    Poset,
    build_poset,
    parse_poset_text,
    poset_to_text,
    to_dot,
)
from .valuation import (
    ANTITONE_NOT_STRICT,
    CONSTANT,
    DEFAULT_TOLERANCE,
    ISOTONE_NOT_STRICT,
    NONE,
    STRICTLY_ANTITONE,
    STRICTLY_ISOTONE,
    Valuation,
    ValuationVerdict,
    WeightFunction,
    Witness,
    affine_transform,
    cardinal_filter_valuation,
    cardinal_ideal_valuation,
    check_valuation,
    check_valuation_leclerc,
    check_valuation_monjardet,
    classify_monotonicity,
    cumulative_lower,
    cumulative_upper,
    ideal_sums,
    filter_sums,
    kappa_valuation,
    log_affine_transform,
    log_transform,
    make_valuation,
    parse_values_text,
    parse_weights_text,
)
from .metric import (
    METRIC,
    NOT_QUASIMETRIC,
    QUASIMETRIC,
    BoundGapResult,
    DistanceTable,
    JCDistanceTable,
    SearchResult,
    bound_gap,
    induce_metric,
    jc_distance,
    search_counterexample,
    verify_axioms,
)
from .catalog import (
    DEFAULT_ORDER_CAP,
    FiniteGroup,
    SubgroupLattice,
    enumerate_subgroups,
    named_group,
    named_poset,
    parse_group_table,
    product_formula_check,
    subgroup_metric,
)

__version__ = "0.1.0"
