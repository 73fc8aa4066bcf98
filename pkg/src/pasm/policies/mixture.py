"""
Randomized knapsack policy: the best singleton or density greedy, chosen by one weighted coin.
"""
from __future__ import annotations

from typing import Optional, Tuple

import numpy as np

from pasm.impl.branching import Chooser
from pasm.impl.marginals import MarginalEngine
from pasm.policies.base import Policy, RunState, simulate
from pasm.policies.combinators import truncate_batches
from pasm.policies.density import DensityGreedy
from pasm.types.model import Instance, PartialRealization, Realization
from pasm.types.policy_config import MixtureWeights, PolicyConfig
from pasm.types.trace import RunTrace, TerminationReason
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

_SINGLETON = "singleton"
_DENSITY = "density"


def best_singleton(
    instance: Instance, engine: MarginalEngine | None = None, budget: float | None = None
) -> Tuple[Optional[int], float]:
    """The item with the largest expected value on its own, ties by lowest id.

    With a budget only affordable items compete; (None, 0.0) when none is.
    """
    engine = engine or MarginalEngine.for_instance(instance)
    best: Tuple[Optional[int], float] = (None, 0.0)
    for e in range(instance.n):
        if budget is not None and instance.costs(e) > budget + 1e-9:
            continue
        value = engine.value({e}, PartialRealization.empty())
        if best[0] is None or round(value, 12) > round(best[1], 12):
            best = (e, value)
    return best


class SingletonPolicy(Policy):
    """Selects the best affordable singleton, or a fixed item when one is given."""

    def __init__(self, budget: float | None = None, item: int | None = None):
        self.budget = budget
        self.item = item
        self.name = "best-singleton"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        item = self.item
        if item is None:
            item, _ = best_singleton(state.instance, engine, self.budget)
        if item is not None and (self.budget is None or state.fits(item, self.budget)):
            state.select(item)
        return TerminationReason.COMPLETED


class MixedKnapsack(Policy):
    def __init__(self, config: PolicyConfig, max_batches: int | None = None, deferred_coins: bool = False):
        self.config = config
        self.weights = MixtureWeights.for_alpha(config.alpha)
        self.singleton = SingletonPolicy(config.budget)
        density: Policy = DensityGreedy(config, deferred_coins)
        if max_batches is not None:
            density = truncate_batches(density, max_batches)
        self.density = density
        self.name = f"mixed-knapsack(alpha={config.alpha:g})"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        branch = chooser.pick([_SINGLETON, _DENSITY], [self.weights.p_singleton, self.weights.p_density])
        _LOGGER.debug(f"mixture coin chose the {branch} policy")
        policy = self.singleton if branch == _SINGLETON else self.density
        return policy.run(state, chooser, engine)


def run_mixed_knapsack(
    instance: Instance,
    config: PolicyConfig,
    phi: Realization,
    rng: np.random.Generator,
    engine: MarginalEngine | None = None,
    max_batches: int | None = None,
) -> RunTrace:
    return simulate(MixedKnapsack(config, max_batches), instance, phi, rng, engine, config.marginal_mode)
