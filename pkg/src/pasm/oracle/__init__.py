from pasm.oracle.audits import audit_batch_semantics, audit_cardinality_trace, audit_density_trace
from pasm.oracle.checkers import (
    check_adaptive_monotonicity,
    check_adaptive_submodularity,
    check_policywise,
    check_weak_policywise,
    partial_realizations,
)
from pasm.oracle.dynamic_programming import (
    AdaptiveValueTable,
    CardinalityValueTable,
    FirstAction,
    knapsack_value,
    optimal_adaptive_value,
    optimal_first_action,
)
from pasm.oracle.evaluation import exact_expected_utility, mc_expected_utility
from pasm.types.reports import CheckerReport, EvalReport

__all__ = [
    "AdaptiveValueTable",
    "CardinalityValueTable",
    "CheckerReport",
    "EvalReport",
    "FirstAction",
    "audit_batch_semantics",
    "audit_cardinality_trace",
    "audit_density_trace",
    "check_adaptive_monotonicity",
    "check_adaptive_submodularity",
    "check_policywise",
    "check_weak_policywise",
    "exact_expected_utility",
    "knapsack_value",
    "mc_expected_utility",
    "optimal_adaptive_value",
    "optimal_first_action",
    "partial_realizations",
]
