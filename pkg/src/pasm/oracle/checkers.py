"""
Exhaustive numerical checks of the structural properties the approximation guarantees assume.

Every check walks the lattice of positive-probability partial realizations
over real items and reports the worst violation it saw, with a witness.
"""
from __future__ import annotations

import itertools
from typing import Dict, FrozenSet, Iterator, List, Optional, Tuple

from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.oracle.dynamic_programming import AdaptiveValueTable, budget_of, check_oracle_caps
from pasm.types.errors import ConfigurationError, EnumerationCapExceeded, OracleCapExceeded
from pasm.types.model import Instance, PartialRealization
from pasm.types.policy_config import Constraint
from pasm.types.reports import CheckerReport, Witness
from pasm.types.settings import load_settings
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

STRONG_CHECK_MAX_ITEMS = 5


def partial_realizations(instance: Instance, engine: MarginalEngine, cap: int | None = None) -> List[PartialRealization]:
    """Every positive-probability partial realization over real items, smallest domains first."""
    cap = cap or load_settings().enumeration_cap
    lattice: List[PartialRealization] = []
    for size in range(instance.n + 1):
        for domain in itertools.combinations(range(instance.n), size):
            for outcome, _ in engine.outcome_distribution(domain, PartialRealization.empty()):
                lattice.append(PartialRealization(tuple(zip(domain, outcome))))
                if len(lattice) > cap:
                    raise EnumerationCapExceeded(f"more than {cap} partial realizations for {instance.name}")
    _LOGGER.debug(f"{instance.name}: {len(lattice)} partial realizations")
    return lattice


def _restrictions(psi: PartialRealization) -> Iterator[PartialRealization]:
    observations = psi.key
    for size in range(len(observations) + 1):
        for subset in itertools.combinations(observations, size):
            yield PartialRealization(subset)


def _engine(instance: Instance, engine: MarginalEngine | None) -> MarginalEngine:
    engine = engine or MarginalEngine.for_instance(instance, MarginalMode.exact())
    if not engine.mode.is_exact:
        raise ConfigurationError("structure checks need exact marginals")
    return engine


class _WorstViolation:
    def __init__(self, name: str, tol: float):
        self.name = name
        self.tol = tol
        self.worst = 0.0
        self.witness: Optional[Witness] = None
        self.checked = 0

    def record(self, violation: float, witness: Witness) -> None:
        self.checked += 1
        if violation > self.worst:
            self.worst = violation
            self.witness = witness

    def report(self) -> CheckerReport:
        holds = self.worst <= self.tol
        _LOGGER.info(f"{self.name}: {'holds' if holds else 'fails'} after {self.checked} checks, worst {self.worst:.3g}")
        return CheckerReport(
            property_name=self.name,
            holds=holds,
            worst_violation=self.worst,
            witness=None if holds else self.witness,
            tolerance=self.tol,
            checked=self.checked,
        )


def check_adaptive_submodularity(
    instance: Instance, tol: float | None = None, engine: MarginalEngine | None = None
) -> CheckerReport:
    """Delta(e | dom psi, psi) >= Delta(e | dom psi', psi') for all psi within psi' and e outside dom psi'."""
    engine = _engine(instance, engine)
    worst = _WorstViolation("adaptive_submodularity", tol if tol is not None else load_settings().tolerance)
    for larger in partial_realizations(instance, engine):
        for item in range(instance.n):
            if item in larger:
                continue
            later = engine.item(item, larger.domain, larger)
            for smaller in _restrictions(larger):
                earlier = engine.item(item, smaller.domain, smaller)
                worst.record(later - earlier, Witness(smaller, larger, item))
    return worst.report()


def check_adaptive_monotonicity(
    instance: Instance, tol: float | None = None, engine: MarginalEngine | None = None
) -> CheckerReport:
    engine = _engine(instance, engine)
    worst = _WorstViolation("adaptive_monotonicity", tol if tol is not None else load_settings().tolerance)
    for psi in partial_realizations(instance, engine):
        for item in range(instance.n):
            if item not in psi:
                worst.record(-engine.item(item, psi.domain, psi), Witness(psi, None, item))
    return worst.report()


def check_weak_policywise(
    instance: Instance, constraint: Constraint, tol: float | None = None, engine: MarginalEngine | None = None
) -> CheckerReport:
    """The optimum from scratch dominates the best policy marginal from any affordable history."""
    check_oracle_caps(instance)
    engine = _engine(instance, engine)
    budget, unit_costs = budget_of(instance, constraint)
    table = AdaptiveValueTable(instance, engine, unit_costs=unit_costs)
    optimum = table.value(PartialRealization.empty(), budget)
    worst = _WorstViolation("weak_policywise_submodularity", tol if tol is not None else load_settings().tolerance)
    for psi in partial_realizations(instance, engine):
        spent = sum(table.cost(e) for e in psi.domain)
        if spent > budget + 1e-9:
            continue
        worst.record(table.policy_marginal(psi, budget - spent) - optimum, Witness(psi))
    return worst.report()


def check_policywise(
    instance: Instance, constraint: Constraint, tol: float | None = None, engine: MarginalEngine | None = None
) -> CheckerReport:
    """Restricted to any candidate set S, the best policy marginal never grows as the history grows."""
    if instance.n > STRONG_CHECK_MAX_ITEMS:
        raise OracleCapExceeded(f"the strong policywise check handles at most {STRONG_CHECK_MAX_ITEMS} items")
    check_oracle_caps(instance)
    engine = _engine(instance, engine)
    budget, unit_costs = budget_of(instance, constraint)
    tables: Dict[FrozenSet[int], AdaptiveValueTable] = {}
    worst = _WorstViolation("policywise_submodularity", tol if tol is not None else load_settings().tolerance)

    def table_for(candidates: Tuple[int, ...]) -> AdaptiveValueTable:
        key = frozenset(candidates)
        if key not in tables:
            tables[key] = AdaptiveValueTable(instance, engine, unit_costs=unit_costs, candidates=key)
        return tables[key]

    for larger in partial_realizations(instance, engine):
        spent = sum(1.0 if unit_costs else instance.costs(e) for e in larger.domain)
        if spent > budget + 1e-9:
            continue
        residual = budget - spent
        free = [e for e in range(instance.n) if e not in larger]
        for size in range(1, len(free) + 1):
            for candidates in itertools.combinations(free, size):
                table = table_for(candidates)
                later = table.policy_marginal(larger, residual)
                for smaller in _restrictions(larger):
                    earlier = table.policy_marginal(smaller, residual)
                    worst.record(later - earlier, Witness(smaller, larger))
    return worst.report()
