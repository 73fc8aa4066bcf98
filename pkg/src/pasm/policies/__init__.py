from pasm.policies.base import FixedSetPolicy, Policy, RunState, simulate
from pasm.policies.combinators import (
    ConcatenatedPolicy,
    LevelTruncatedPolicy,
    TruncatedPolicy,
    concatenate,
    level_truncate,
    truncate_batches,
)
from pasm.policies.density import DensityGreedy, batch_budget_T, run_density_greedy
from pasm.policies.greedy import PartialAdaptiveGreedy, run_partial_adaptive_greedy, top_k_set
from pasm.policies.mixture import MixedKnapsack, SingletonPolicy, best_singleton, run_mixed_knapsack
from pasm.types.errors import ConfigurationError
from pasm.types.policy_config import Cardinality, Constraint, Knapsack, MixtureWeights, PolicyConfig
from pasm.types.trace import RunTrace, TerminationReason

POLICY_NAMES = (
    "pa-greedy",
    "fully-adaptive",
    "non-adaptive",
    "density-greedy",
    "mixed-knapsack",
    "best-singleton",
)

CARDINALITY_POLICIES = frozenset({"pa-greedy", "fully-adaptive", "non-adaptive"})
KNAPSACK_POLICIES = frozenset({"density-greedy", "mixed-knapsack"})


def effective_alpha(name: str, alpha: float) -> float:
    """fully-adaptive and non-adaptive pin alpha to 1 and 0."""
    return {"fully-adaptive": 1.0, "non-adaptive": 0.0}.get(name, alpha)


def build_policy(
    name: str,
    config: PolicyConfig,
    max_batches: int | None = None,
    deferred_coins: bool = False,
) -> Policy:
    """Policy registered under `name`; `max_batches` truncates it to that many batches."""
    if name not in POLICY_NAMES:
        raise ConfigurationError(f"unknown policy {name!r}, expected one of {', '.join(POLICY_NAMES)}")
    if name in CARDINALITY_POLICIES:
        config = PolicyConfig(effective_alpha(name, config.alpha), config.constraint, config.marginal_mode, config.seed)
        policy: Policy = PartialAdaptiveGreedy(config)
    elif name == "density-greedy":
        policy = DensityGreedy(config, deferred_coins)
    elif name == "mixed-knapsack":
        # truncation applies to the density branch only
        return MixedKnapsack(config, max_batches, deferred_coins)
    else:
        budget = config.budget if isinstance(config.constraint, Knapsack) else None
        policy = SingletonPolicy(budget)
    if max_batches is not None:
        policy = truncate_batches(policy, max_batches)
    return policy


__all__ = [
    "CARDINALITY_POLICIES",
    "Cardinality",
    "ConcatenatedPolicy",
    "Constraint",
    "DensityGreedy",
    "FixedSetPolicy",
    "KNAPSACK_POLICIES",
    "Knapsack",
    "LevelTruncatedPolicy",
    "MixedKnapsack",
    "MixtureWeights",
    "POLICY_NAMES",
    "PartialAdaptiveGreedy",
    "Policy",
    "PolicyConfig",
    "RunState",
    "RunTrace",
    "SingletonPolicy",
    "TerminationReason",
    "TruncatedPolicy",
    "batch_budget_T",
    "best_singleton",
    "build_policy",
    "concatenate",
    "effective_alpha",
    "level_truncate",
    "run_density_greedy",
    "run_mixed_knapsack",
    "run_partial_adaptive_greedy",
    "simulate",
    "top_k_set",
    "truncate_batches",
]
