from pasm.__version__ import VERSION
from pasm.adapters.json_instance_adapter import emit_instance, parse_instance
from pasm.domain.services import ExperimentConfig, ExperimentService
from pasm.impl.generators import generate_instance
from pasm.impl.marginals import MarginalEngine, MarginalMode, marginal_item, marginal_policy
from pasm.impl.realizations import condition_prior, enumerate_realizations, sample_realization
from pasm.impl.utility import CoverageWithPenalty, Tabular, VersionSpaceReduction, WeightedCoverage, evaluate
from pasm.oracle import (
    CheckerReport,
    EvalReport,
    check_adaptive_monotonicity,
    check_adaptive_submodularity,
    check_policywise,
    check_weak_policywise,
    exact_expected_utility,
    mc_expected_utility,
    optimal_adaptive_value,
    optimal_first_action,
)
from pasm.policies import (
    Cardinality,
    Knapsack,
    MixtureWeights,
    PolicyConfig,
    RunTrace,
    batch_budget_T,
    best_singleton,
    build_policy,
    concatenate,
    level_truncate,
    run_density_greedy,
    run_mixed_knapsack,
    run_partial_adaptive_greedy,
    top_k_set,
    truncate_batches,
)
from pasm.types.errors import PasmError
from pasm.types.model import (
    CostFunction,
    ExplicitPrior,
    IndependentPrior,
    Instance,
    Item,
    PartialRealization,
    Realization,
    StateSpace,
)
from pasm.types.reports import ResultRow

__version__ = VERSION
