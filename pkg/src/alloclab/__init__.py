"""Exact-arithmetic toolkit for allocation dictator tests, Efron-Stein
analysis, unique-games reductions and welfare hardness ratios."""
from .allocation import (
    Allocation,
    AllocationInstance,
    Good,
    Objective,
    evaluate_welfare,
    utilities,
    validate_family2,
)
from .core import (
    AllocLabError,
    DimensionError,
    InvalidAllocationError,
    InvalidParameterError,
    Permutation,
    ResourceLimitError,
    compose_with_permutation,
    format_rational,
    parse_rational,
)
from .distributions import (
    ProductDistribution,
    TupleDistribution,
    add_noise,
    analyze,
    iterate_support,
    make_eta,
    noisy_eta,
    sample_product,
)
from .functions import (
    FunctionTable,
    MonteCarloEstimate,
    correlation,
    dictator,
    efron_stein,
    influence_profile,
    random_mean_function,
)
from .gadgets import (
    build_dictator_test,
    chi,
    completeness_floor,
    completeness_utilities,
    function_from_allocation,
    soundness_landscape,
    soundness_limit,
    soundness_value,
)
from .reduction import (
    build_gap_instance,
    build_meta_instance,
    gap_yes_usw,
    limit_ratios,
    no_case_bound,
    theorem_ratios,
    yes_allocation,
)
from .solvers import SolveResult, check_single_large_good_property, solve_exact
from .unique_games import Labeling, UGInstance, decode_labeling, planted_instance, satisfaction

__version__ = "0.1.0"
