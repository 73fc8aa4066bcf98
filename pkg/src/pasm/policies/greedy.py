"""
Partial-adaptive greedy under a cardinality constraint.

Each step samples uniformly from the k items with the largest expected
marginals. A new batch is opened, and the previous batch's states revealed,
only when the summed top-k marginal on top of the current set falls below
alpha times the same sum on top of what has already been observed.
"""
from __future__ import annotations

from typing import FrozenSet, Iterable, Tuple

import numpy as np

from pasm.impl.branching import Chooser
from pasm.impl.marginals import MarginalEngine
from pasm.policies.base import Policy, RunState, simulate
from pasm.types.model import Instance, PartialRealization, Realization
from pasm.types.policy_config import PolicyConfig
from pasm.types.trace import RunTrace, TerminationReason
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

_DUMMY = "dummy"


def _ranked(candidates: Iterable[int], base: FrozenSet[int], psi: PartialRealization, engine: MarginalEngine) -> list:
    scored = [(engine.item(e, base, psi), e) for e in candidates]
    scored.sort(key=lambda pair: (-round(pair[0], 12), pair[1]))
    return scored


def top_k_set(
    selected: Iterable[int],
    psi: PartialRealization,
    k: int,
    instance: Instance,
    engine: MarginalEngine | None = None,
) -> Tuple[int, ...]:
    """The k unselected items of the dummy-extended ground set with the largest marginals, ties by lowest id.

    Dummies score 0, so an item with a negative marginal is never returned.
    """
    engine = engine or MarginalEngine.for_instance(instance)
    base = frozenset(selected)
    ground = range(instance.n + len(instance.dummy_items(k)))
    return tuple(e for _, e in _ranked((e for e in ground if e not in base), base, psi, engine)[:k])


def top_k_sum(selected: Iterable[int], psi: PartialRealization, k: int, instance: Instance, engine: MarginalEngine) -> float:
    base = frozenset(selected)
    return sum(engine.item(e, base, psi) for e in top_k_set(base, psi, k, instance, engine))


def _draw(chooser: Chooser, candidates: Tuple[int, ...], n: int) -> int:
    """Uniform over `candidates`, with interchangeable dummies merged into one weighted option."""
    real = [e for e in candidates if e < n]
    dummies = [e for e in candidates if e >= n]
    options: list = list(real)
    weights = [1.0] * len(real)
    if dummies:
        options.append(_DUMMY)
        weights.append(float(len(dummies)))
    choice = chooser.pick(options, weights)
    return min(dummies) if choice == _DUMMY else choice


class PartialAdaptiveGreedy(Policy):
    def __init__(self, config: PolicyConfig):
        self.config = config
        self.k = config.cardinality
        self.name = f"pa-greedy(alpha={config.alpha:g})"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        instance, k, alpha = state.instance, self.k, self.config.alpha
        for t in range(1, k + 1):
            chosen, psi = state.chosen, state.information
            candidates = top_k_set(chosen, psi, k, instance, engine)
            score = sum(engine.item(e, chosen, psi) for e in candidates)
            reference = top_k_sum(psi.domain, psi, k, instance, engine)

            # the first step always fills batch one
            if t > 1 and score < alpha * reference - engine.tolerance:
                state.close_batch()
                psi = state.information
                candidates = top_k_set(chosen, psi, k, instance, engine)
                score = sum(engine.item(e, chosen, psi) for e in candidates)
                reference = top_k_sum(psi.domain, psi, k, instance, engine)
                _LOGGER.debug(f"step {t}: opened batch {state.batch_count + 1} after observing {sorted(psi.domain)}")

            state.select(_draw(chooser, candidates, instance.n), score=score, reference=reference)
        return TerminationReason.CARDINALITY_REACHED


def run_partial_adaptive_greedy(
    instance: Instance,
    config: PolicyConfig,
    phi: Realization,
    rng: np.random.Generator,
    engine: MarginalEngine | None = None,
) -> RunTrace:
    return simulate(PartialAdaptiveGreedy(config), instance, phi, rng, engine, config.marginal_mode)
