"""
Expected utility of a policy, exactly or by Monte Carlo.

Exact evaluation replays the policy once per leaf of the joint tree of its
own coin flips and the states revealed at batch boundaries; each leaf is
credited with the conditional expectation of f given what was revealed.
"""
from __future__ import annotations

import math
from typing import Callable, List, Optional

import numpy as np

from pasm.impl.branching import Chooser, enumerate_branches
from pasm.impl.environment import BranchingEnvironment
from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.impl.realizations import sample_realization
from pasm.policies.base import Policy, simulate
from pasm.types.errors import ConfigurationError
from pasm.types.model import Instance, PartialRealization
from pasm.types.reports import EvalReport, EvaluationMethod
from pasm.types.trace import RunTrace
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

TraceObserver = Callable[[float, RunTrace], None]


def exact_expected_utility(
    policy: Policy,
    instance: Instance,
    engine: MarginalEngine | None = None,
    cap: int | None = None,
    observer: Optional[TraceObserver] = None,
) -> EvalReport:
    """f_avg(policy) with zero error; `observer` sees (probability, trace) for every leaf."""
    engine = engine or MarginalEngine.for_instance(instance, MarginalMode.exact())
    if not engine.mode.is_exact:
        raise ConfigurationError("exact evaluation needs exact marginals")

    def run(chooser: Chooser) -> RunTrace:
        environment = BranchingEnvironment(engine, chooser)
        return policy.execute(instance, environment, chooser, engine)

    expected = 0.0
    mean_batches = 0.0
    max_batches = 0
    leaves = 0
    for probability, trace in enumerate_branches(run, cap):
        expected += probability * trace.utility
        mean_batches += probability * trace.batch_count
        max_batches = max(max_batches, trace.batch_count)
        leaves += 1
        if observer is not None:
            observer(probability, trace)

    _LOGGER.info(f"{policy.name} on {instance.name}: exact value {expected:.6g} over {leaves} leaves")
    return EvalReport(
        expected_utility=expected,
        stderr=0.0,
        trials=leaves,
        mean_batches=mean_batches,
        max_batches=max_batches,
        method=EvaluationMethod.EXACT,
    )


def mc_expected_utility(
    policy: Policy,
    instance: Instance,
    trials: int,
    seed: int,
    engine: MarginalEngine | None = None,
    observer: Optional[TraceObserver] = None,
) -> EvalReport:
    """Sample mean of realized utility; trial i draws phi and the policy's coins from the i-th child of `seed`."""
    if trials < 1:
        raise ConfigurationError(f"trials must be at least 1, got {trials}")
    engine = engine or MarginalEngine.for_instance(instance)
    utilities: List[float] = []
    batches: List[int] = []
    for child in np.random.SeedSequence(seed).spawn(trials):
        rng = np.random.default_rng(child)
        phi = sample_realization(instance.prior, PartialRealization.empty(), rng)
        trace = simulate(policy, instance, phi, rng, engine)
        utilities.append(trace.utility)
        batches.append(trace.batch_count)
        if observer is not None:
            observer(1.0 / trials, trace)

    values = np.asarray(utilities)
    stderr = float(values.std(ddof=1) / math.sqrt(trials)) if trials > 1 else 0.0
    _LOGGER.info(f"{policy.name} on {instance.name}: {trials} trials, mean {values.mean():.6g} +/- {stderr:.3g}")
    return EvalReport(
        expected_utility=float(values.mean()),
        stderr=stderr,
        trials=trials,
        mean_batches=float(np.mean(batches)),
        max_batches=int(max(batches)),
        method=EvaluationMethod.MONTE_CARLO,
    )
