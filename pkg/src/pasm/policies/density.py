"""
Partial-adaptive density greedy under a knapsack constraint.

Candidates are restricted to a random half R of the ground set (one fair
coin per item). Within a batch the policy keeps adding the densest
candidate while its density stays above alpha times the density the
batch-opening item had when the batch opened; otherwise it reveals the
batch and opens a new one with the densest unobserved candidate.
"""
from __future__ import annotations

import math
from typing import Dict, FrozenSet, Optional, Tuple

import numpy as np

from pasm.impl.branching import Chooser
from pasm.impl.marginals import MarginalEngine
from pasm.policies.base import Policy, RunState, simulate
from pasm.types.errors import ConfigurationError
from pasm.types.model import Instance, PartialRealization, Realization
from pasm.types.policy_config import PolicyConfig
from pasm.types.trace import RunTrace, TerminationReason
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)


class _CandidateSample:
    """Membership in R. Up front: every coin flipped in id order before the first selection.
    Deferred: an item's coin is flipped the first time the item is the densest remaining candidate."""

    def __init__(self, n: int, chooser: Chooser, deferred: bool):
        self._chooser = chooser
        self._coins: Dict[int, bool] = {}
        if not deferred:
            for e in range(n):
                self._coins[e] = chooser.coin(0.5)

    def __contains__(self, item: int) -> bool:
        if item not in self._coins:
            self._coins[item] = self._chooser.coin(0.5)
        return self._coins[item]


def _density(engine: MarginalEngine, item: int, base: FrozenSet[int], psi: PartialRealization, cost: float) -> float:
    return engine.item(item, base, psi) / cost


def _densest(
    sample: _CandidateSample,
    excluded: FrozenSet[int],
    base: FrozenSet[int],
    psi: PartialRealization,
    instance: Instance,
    engine: MarginalEngine,
) -> Tuple[Optional[int], float]:
    scored = [
        (_density(engine, e, base, psi, instance.costs(e)), e) for e in range(instance.n) if e not in excluded
    ]
    scored.sort(key=lambda pair: (-round(pair[0], 12), pair[1]))
    for density, e in scored:
        if e in sample:
            return e, density
    return None, 0.0


class DensityGreedy(Policy):
    def __init__(self, config: PolicyConfig, deferred_coins: bool = False):
        self.config = config
        self.budget = config.budget
        self.deferred_coins = deferred_coins
        self.name = f"density-greedy(alpha={config.alpha:g})"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        instance, alpha = state.instance, self.config.alpha
        instance.require_positive_costs()
        sample = _CandidateSample(instance.n, chooser, self.deferred_coins)
        reference: Optional[float] = None

        while True:
            chosen, psi = state.chosen, state.information
            if reference is not None:
                item, density = _densest(sample, chosen, chosen, psi, instance, engine)
                if item is None:
                    return TerminationReason.GROUND_EXHAUSTED
                if density >= alpha * reference - engine.tolerance:
                    if not state.fits(item, self.budget):
                        return TerminationReason.BUDGET_EXHAUSTED
                    state.select(item, score=density, reference=reference)
                    continue
                state.close_batch()
                psi = state.information

            # open a batch with the densest candidate nobody has observed
            item, density = _densest(sample, chosen | psi.domain, psi.domain, psi, instance, engine)
            if item is None:
                return TerminationReason.GROUND_EXHAUSTED
            if density <= 0:
                return TerminationReason.NO_POSITIVE_DENSITY
            if not state.fits(item, self.budget):
                return TerminationReason.BUDGET_EXHAUSTED
            reference = density
            _LOGGER.debug(f"opening batch {state.batch_count + 1} with item {item} at density {density:.6g}")
            state.select(item, score=density, reference=reference)


def batch_budget_T(n: int, budget: float, c_min: float, alpha: float) -> Tuple[int, float]:
    """Batch count T after which truncating density greedy loses little, and its slack delta.

    With base b = 1 / (1 - (1 - alpha) / 2) and L = log_b(B / (c_min (1 - alpha))),
    delta = (1 - alpha) / L and T = ceil(log_b(n / delta)) * ceil(L).
    A degenerate budget (L <= 0) returns T = 0 and delta = inf.
    """
    if not 0.0 <= alpha < 1.0:
        raise ConfigurationError(f"the batch budget needs alpha in [0, 1), got {alpha}")
    if c_min <= 0 or budget < c_min:
        raise ConfigurationError(f"the batch budget needs B >= c_min > 0, got B={budget}, c_min={c_min}")
    base = 1.0 / (1.0 - (1.0 - alpha) / 2.0)
    levels = math.log(budget / (c_min * (1.0 - alpha)), base)
    if levels <= 1e-12:
        _LOGGER.warning(f"batch budget is degenerate for B={budget}, c_min={c_min}, alpha={alpha}: T=0")
        return 0, math.inf
    delta = (1.0 - alpha) / levels
    rounds = math.ceil(math.log(n / delta, base) - 1e-12)
    return max(rounds, 0) * math.ceil(levels - 1e-12), delta


def run_density_greedy(
    instance: Instance,
    config: PolicyConfig,
    phi: Realization,
    rng: np.random.Generator,
    engine: MarginalEngine | None = None,
    deferred_coins: bool = False,
) -> RunTrace:
    return simulate(DensityGreedy(config, deferred_coins), instance, phi, rng, engine, config.marginal_mode)

