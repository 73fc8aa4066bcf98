"""
Optimal fully adaptive policy value by dynamic programming over partial realizations.

V(psi, b) = max( E[f(dom psi) | psi],
                 max over affordable e not in dom psi of sum_o P(o | psi) V(psi + (e, o), b - c(e)) )

The stop action matters because f need not be monotone. Memo keys are
the canonical (sorted) partial realization plus the rounded residual budget.
"""
from __future__ import annotations

import dataclasses
from typing import Dict, FrozenSet, Iterable, Optional, Tuple

from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.types.errors import ConfigurationError, OracleCapExceeded
from pasm.types.model import Instance, PartialRealization
from pasm.types.policy_config import Cardinality, Constraint, Knapsack
from pasm.types.settings import load_settings
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

_BUDGET_TOLERANCE = 1e-9


def check_oracle_caps(instance: Instance, max_items: int | None = None) -> None:
    settings = load_settings()
    max_items = max_items or settings.oracle_max_items
    if instance.n > max_items:
        raise OracleCapExceeded(f"{instance.name} has {instance.n} items, the oracle handles at most {max_items}")
    if instance.states.max_states > settings.oracle_max_states:
        raise OracleCapExceeded(
            f"{instance.name} has {instance.states.max_states} states per item, "
            f"the oracle handles at most {settings.oracle_max_states}"
        )


def _exact_engine(instance: Instance, engine: MarginalEngine | None) -> MarginalEngine:
    engine = engine or MarginalEngine.for_instance(instance, MarginalMode.exact())
    if not engine.mode.is_exact:
        raise ConfigurationError("the oracle needs exact marginals")
    return engine


def budget_of(instance: Instance, constraint: Constraint) -> Tuple[float, bool]:
    """Residual budget and whether costs are unit (cardinality) or the instance's own."""
    if isinstance(constraint, Cardinality):
        return float(constraint.k), True
    if isinstance(constraint, Knapsack):
        return constraint.budget, False
    raise ConfigurationError(f"unsupported constraint {constraint!r}")


class AdaptiveValueTable:
    """Memoized V(psi, b), optionally restricted to a candidate item set."""

    def __init__(
        self,
        instance: Instance,
        engine: MarginalEngine | None = None,
        unit_costs: bool = False,
        candidates: Iterable[int] | None = None,
    ):
        self.instance = instance
        self.engine = _exact_engine(instance, engine)
        self.unit_costs = unit_costs
        self.candidates: FrozenSet[int] = frozenset(range(instance.n) if candidates is None else candidates)
        self._memo: Dict[tuple, float] = {}

    def cost(self, item: int) -> float:
        return 1.0 if self.unit_costs else self.instance.costs(item)

    def stop_value(self, psi: PartialRealization) -> float:
        return self.engine.value(psi.domain, psi)

    def continuation(self, item: int, psi: PartialRealization, budget: float) -> float:
        """Expected optimal value after selecting `item` at `psi` and observing its state."""
        remaining = budget - self.cost(item)
        return sum(
            probability * self.value(psi.extend([(item, outcome[0])]), remaining)
            for outcome, probability in self.engine.outcome_distribution((item,), psi)
        )

    def affordable(self, psi: PartialRealization, budget: float) -> Tuple[int, ...]:
        return tuple(
            e
            for e in sorted(self.candidates)
            if e not in psi and self.cost(e) <= budget + _BUDGET_TOLERANCE
        )

    def value(self, psi: PartialRealization | None = None, budget: float = 0.0) -> float:
        psi = psi or PartialRealization.empty()
        key = (psi.key, round(budget, 12))
        cached = self._memo.get(key)
        if cached is not None:
            return cached
        best = self.stop_value(psi)
        for item in self.affordable(psi, budget):
            best = max(best, self.continuation(item, psi, budget))
        self._memo[key] = best
        return best

    def policy_marginal(self, psi: PartialRealization, budget: float) -> float:
        """Largest Delta(pi | dom psi, psi) over policies choosing from the candidates within `budget`."""
        return self.value(psi, budget) - self.stop_value(psi)

    @property
    def states_visited(self) -> int:
        return len(self._memo)


class CardinalityValueTable:
    """V(psi) with k - |dom psi| selections left; only reachable from the empty history."""

    def __init__(self, instance: Instance, k: int, engine: MarginalEngine | None = None):
        self.instance = instance
        self.k = k
        self.engine = _exact_engine(instance, engine)
        self._memo: Dict[tuple, float] = {}

    def value(self, psi: PartialRealization | None = None) -> float:
        psi = psi or PartialRealization.empty()
        cached = self._memo.get(psi.key)
        if cached is not None:
            return cached
        best = self.engine.value(psi.domain, psi)
        if len(psi) < self.k:
            for item in range(self.instance.n):
                if item in psi:
                    continue
                expected = sum(
                    probability * self.value(psi.extend([(item, outcome[0])]))
                    for outcome, probability in self.engine.outcome_distribution((item,), psi)
                )
                best = max(best, expected)
        self._memo[psi.key] = best
        return best


def optimal_adaptive_value(instance: Instance, constraint: Constraint, engine: MarginalEngine | None = None) -> float:
    """f_avg of the optimal fully adaptive policy; cardinality k is unit costs with budget k."""
    check_oracle_caps(instance)
    if isinstance(constraint, Cardinality):
        table = CardinalityValueTable(instance, constraint.k, engine)
        value = table.value()
    else:
        budget, unit_costs = budget_of(instance, constraint)
        table = AdaptiveValueTable(instance, engine, unit_costs=unit_costs)
        value = table.value(PartialRealization.empty(), budget)
    _LOGGER.info(f"oracle value for {instance.name} under {constraint}: {value:.6g}")
    return value


def knapsack_value(instance: Instance, budget: float, engine: MarginalEngine | None = None, unit_costs: bool = False) -> float:
    check_oracle_caps(instance)
    return AdaptiveValueTable(instance, engine, unit_costs=unit_costs).value(PartialRealization.empty(), budget)


@dataclasses.dataclass(frozen=True)
class OutcomeValue:
    state: int
    probability: float
    continuation: float


@dataclasses.dataclass(frozen=True)
class FirstAction:
    """The optimal policy's first selection; `item` is None when stopping immediately is optimal."""

    value: float
    item: Optional[int]
    outcomes: Tuple[OutcomeValue, ...] = ()

    def to_dict(self) -> dict:
        return {
            "value": self.value,
            "item": self.item,
            "outcomes": [dataclasses.asdict(o) for o in self.outcomes],
        }


def optimal_first_action(instance: Instance, constraint: Constraint, engine: MarginalEngine | None = None) -> FirstAction:
    check_oracle_caps(instance)
    budget, unit_costs = budget_of(instance, constraint)
    table = AdaptiveValueTable(instance, engine, unit_costs=unit_costs)
    empty = PartialRealization.empty()
    value = table.value(empty, budget)
    best_item: Optional[int] = None
    best = table.stop_value(empty)
    for item in table.affordable(empty, budget):
        expected = table.continuation(item, empty, budget)
        if round(expected, 12) > round(best, 12):
            best_item, best = item, expected
    if best_item is None:
        return FirstAction(value=value, item=None)
    outcomes = tuple(
        OutcomeValue(
            state=outcome[0],
            probability=probability,
            continuation=table.value(empty.extend([(best_item, outcome[0])]), budget - table.cost(best_item)),
        )
        for outcome, probability in table.engine.outcome_distribution((best_item,), empty)
    )
    return FirstAction(value=value, item=best_item, outcomes=outcomes)
