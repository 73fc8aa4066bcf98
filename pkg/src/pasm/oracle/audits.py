"""
Post-hoc audits of recorded traces.

The trigger audits rebuild, for every decision, the set selected before it
and the states revealed before its batch, and recompute the comparison
from the instance. The score and reference a policy wrote into its own
decision records are not trusted.
"""
from __future__ import annotations

import math
from typing import Callable, FrozenSet, Iterable

from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.policies.greedy import top_k_set
from pasm.types.model import Instance, PartialRealization
from pasm.types.reports import CheckerReport, Witness
from pasm.types.trace import DecisionRecord, RunTrace

_DEFAULT_TOLERANCE = 1e-9


def observed_before(trace: RunTrace, batch: int) -> PartialRealization:
    """States revealed by batches 1..batch-1."""
    return PartialRealization(tuple(o for record in trace.batches[: batch - 1] for o in record.observations))


def selected_before(trace: RunTrace, decision: DecisionRecord) -> FrozenSet[int]:
    return frozenset(trace.selected[: decision.step - 1])


def _report(
    name: str,
    trace: RunTrace,
    decisions: Iterable[DecisionRecord],
    violation_of: Callable[[DecisionRecord], float],
    tol: float,
) -> CheckerReport:
    worst, witness, checked = 0.0, None, 0
    for decision in decisions:
        checked += 1
        violation = violation_of(decision)
        if violation > worst:
            worst = violation
            witness = Witness(observed_before(trace, decision.batch), item=decision.item)
    holds = worst <= tol
    return CheckerReport(name, holds, worst, None if holds else witness, tol, checked)


def _exact_engine(instance: Instance, engine: MarginalEngine | None) -> MarginalEngine:
    return engine or MarginalEngine.for_instance(instance, MarginalMode.exact())


def audit_cardinality_trace(
    trace: RunTrace,
    instance: Instance,
    alpha: float,
    k: int,
    engine: MarginalEngine | None = None,
    tol: float = _DEFAULT_TOLERANCE,
) -> CheckerReport:
    """Every greedy pick came from the top-k set M(S, psi), and M's summed marginal was
    at least alpha times the top-k sum on top of the observed domain.

    The violation of a pick outside M is how far its marginal falls short of the
    k-th largest one; a reselected item is an infinite violation.
    """
    engine = _exact_engine(instance, engine)

    def violation(decision: DecisionRecord) -> float:
        chosen = selected_before(trace, decision)
        if decision.item in chosen:
            return math.inf
        psi = observed_before(trace, decision.batch)
        candidates = top_k_set(chosen, psi, k, instance, engine)
        marginals = [engine.item(e, chosen, psi) for e in candidates]
        reference = sum(engine.item(e, psi.domain, psi) for e in top_k_set(psi.domain, psi, k, instance, engine))
        shortfall = 0.0
        if decision.item not in candidates:
            shortfall = min(marginals) - engine.item(decision.item, chosen, psi)
        return max(alpha * reference - sum(marginals), shortfall)

    return _report("greedy_trigger_soundness", trace, trace.decisions, violation, tol)


def audit_density_trace(
    trace: RunTrace,
    instance: Instance,
    alpha: float,
    engine: MarginalEngine | None = None,
    tol: float = _DEFAULT_TOLERANCE,
) -> CheckerReport:
    """Every batch opened on an unobserved item of positive density, and every item added
    inside a batch had density at least alpha times the opener's density at opening."""
    engine = _exact_engine(instance, engine)
    openers = {}
    for decision in trace.decisions:
        openers.setdefault(decision.batch, decision)

    def density(item: int, base: FrozenSet[int], psi: PartialRealization) -> float:
        return engine.item(item, base, psi) / instance.costs(item)

    def violation(decision: DecisionRecord) -> float:
        chosen = selected_before(trace, decision)
        if decision.item in chosen:
            return math.inf
        psi = observed_before(trace, decision.batch)
        opener = openers[decision.batch]
        opening_density = density(opener.item, psi.domain, psi)
        if decision is opener:
            return math.inf if opening_density <= 0 else 0.0
        return alpha * opening_density - density(decision.item, chosen, psi)

    return _report("density_trigger_soundness", trace, trace.decisions, violation, tol)


def audit_batch_semantics(trace: RunTrace) -> CheckerReport:
    """Items in batch q were chosen knowing exactly the items of batches 1..q-1."""

    def mismatch(decision: DecisionRecord) -> float:
        expected = {e for record in trace.batches[: decision.batch - 1] for e in record.items}
        return 0.0 if set(decision.information_domain) == expected else 1.0

    return _report("batch_semantics", trace, trace.decisions, mismatch, 0.0)
