"""
Domain Services - alpha sweeps, theorem-bound checks and batch-complexity reports

The experiment service evaluates a policy for every alpha of a grid against
one instance, compares each value with the optimal adaptive value, and
hands the rows to a result sink. It depends only on the ports, never on
concrete file formats.
"""
import concurrent.futures
import dataclasses
import math
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

from pasm.domain.ports import InstanceSourcePort, ResultSinkPort
from pasm.impl.generators import generate_instance
from pasm.impl.inputs import validate_alpha, validate_max_batches, validate_trials
from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.oracle.checkers import check_adaptive_monotonicity
from pasm.oracle.dynamic_programming import optimal_adaptive_value
from pasm.oracle.evaluation import exact_expected_utility, mc_expected_utility
from pasm.policies import (
    CARDINALITY_POLICIES,
    KNAPSACK_POLICIES,
    POLICY_NAMES,
    DensityGreedy,
    FixedSetPolicy,
    Policy,
    batch_budget_T,
    build_policy,
    effective_alpha,
    truncate_batches,
)
from pasm.types.errors import BoundViolation, ConfigurationError, EnumerationCapExceeded, OracleCapExceeded
from pasm.types.model import Instance
from pasm.types.policy_config import Cardinality, Constraint, Knapsack, PolicyConfig
from pasm.types.reports import EvalReport, EvaluationMethod, ResultRow
from pasm.types.settings import load_settings
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

EXACT_SLACK = 1e-9
MC_SLACK_STDERRS = 3.0


@dataclasses.dataclass(frozen=True)
class GeneratorSpec:
    family: str
    n: int
    states: int
    seed: int
    params: Mapping[str, Any] = dataclasses.field(default_factory=dict)


@dataclasses.dataclass(frozen=True)
class ExperimentConfig:
    """One sweep: a policy over an alpha grid on one instance (file or generated)."""

    policy: str
    alpha_grid: Tuple[float, ...]
    constraint: Constraint
    instance_path: Optional[str] = None
    generator: Optional[GeneratorSpec] = None
    trials: int = 10_000
    seed: int = 0
    method: str = "auto"
    output_path: Optional[str] = None
    oracle: bool = True
    max_batches: Optional[int] = None
    auto_T: bool = False
    deferred_coins: bool = False
    allow_trend_violations: bool = False

    def __post_init__(self):
        if self.policy not in POLICY_NAMES:
            raise ConfigurationError(f"unknown policy {self.policy!r}, expected one of {', '.join(POLICY_NAMES)}")
        if (self.instance_path is None) == (self.generator is None):
            raise ConfigurationError("an experiment needs exactly one of an instance path or a generator")
        if not self.alpha_grid:
            raise ConfigurationError("alpha grid is empty")
        for alpha in self.alpha_grid:
            validate_alpha(alpha)
        validate_trials(self.trials)
        validate_max_batches(self.max_batches)
        if self.method not in ("auto", "exact", "mc"):
            raise ConfigurationError(f"evaluation method must be auto, exact or mc, got {self.method!r}")
        if self.max_batches is not None and self.auto_T:
            raise ConfigurationError("--max-batches and --auto-T are mutually exclusive")
        if self.policy in CARDINALITY_POLICIES and not isinstance(self.constraint, Cardinality):
            raise ConfigurationError(f"{self.policy} needs a cardinality constraint (--k)")
        if self.policy in KNAPSACK_POLICIES and not isinstance(self.constraint, Knapsack):
            raise ConfigurationError(f"{self.policy} needs a knapsack constraint (--budget)")


@dataclasses.dataclass(frozen=True)
class ExperimentResult:
    rows: Tuple[ResultRow, ...]
    output_path: Optional[str] = None
    trend_violations: Tuple[str, ...] = ()

    @property
    def bounds_satisfied(self) -> bool:
        return all(row.bound_satisfied for row in self.rows)


@dataclasses.dataclass(frozen=True)
class BatchComplexityReport:
    T: int
    delta: float
    truncated_value: float
    untruncated_value: float
    oracle_value: float
    truncation_bound: float
    max_batches: int
    holds: bool


def theorem_bound(policy: str, alpha: float, monotone: bool, truncated: bool = False) -> Optional[float]:
    """Guaranteed fraction of the optimal adaptive value, or None when no guarantee applies."""
    if policy in CARDINALITY_POLICIES:
        return 1.0 - math.exp(-alpha) if monotone else alpha / math.e
    if policy == "mixed-knapsack" and alpha > 0:
        if truncated:
            bound = ((1.0 - alpha + alpha**2) / 2.0 - (1.0 - alpha) * (3.0 + 1.0 / alpha)) / (3.0 + 2.0 / alpha)
            return max(bound, 0.0)
        return 1.0 / (6.0 + 4.0 / alpha)
    return None


def bound_satisfied(report: EvalReport, bound: Optional[float], oracle: Optional[float]) -> bool:
    if bound is None or oracle is None:
        return True
    slack = MC_SLACK_STDERRS * report.stderr if report.method is EvaluationMethod.MONTE_CARLO else EXACT_SLACK
    return report.expected_utility >= bound * oracle - slack


def trend_violations(rows: Sequence[ResultRow]) -> List[str]:
    """Expected utility and mean batch count should not drop as alpha grows, within 3 standard errors."""
    violations = []
    ordered = sorted(rows, key=lambda row: row.alpha)
    for previous, current in zip(ordered, ordered[1:]):
        slack = MC_SLACK_STDERRS * (previous.stderr + current.stderr) + EXACT_SLACK
        if current.expected_utility < previous.expected_utility - slack:
            violations.append(
                f"expected utility drops from {previous.expected_utility:.6g} at alpha={previous.alpha:g} "
                f"to {current.expected_utility:.6g} at alpha={current.alpha:g}"
            )
        if current.mean_batches < previous.mean_batches - slack:
            violations.append(
                f"mean batches drop from {previous.mean_batches:.6g} at alpha={previous.alpha:g} "
                f"to {current.mean_batches:.6g} at alpha={current.alpha:g}"
            )
    return violations


def evaluate_policy(
    policy: Policy, instance: Instance, method: str = "auto", trials: int = 10_000, seed: int = 0
) -> EvalReport:
    """Exact evaluation when the prior and the policy tree are enumerable, Monte Carlo otherwise."""
    if method != "mc":
        try:
            engine = MarginalEngine(instance.utility, instance.prior, MarginalMode.exact())
            return exact_expected_utility(policy, instance, engine)
        except EnumerationCapExceeded as e:
            if method == "exact":
                raise
            _LOGGER.info(f"{policy.name}: {e.message}; falling back to {trials} Monte-Carlo trials")
    return mc_expected_utility(policy, instance, trials, seed, MarginalEngine.for_instance(instance))


def auto_batch_budget(instance: Instance, budget: float, alpha: float) -> Optional[int]:
    """T for truncating density greedy at this alpha; None when no truncation applies (alpha = 1)."""
    if alpha >= 1.0:
        _LOGGER.info("alpha=1 has no batch budget; running untruncated")
        return None
    T, _ = batch_budget_T(instance.n, budget, instance.costs.c_min, alpha)
    if T < 1:
        _LOGGER.warning(f"batch budget T={T} is degenerate at alpha={alpha:g}; truncating at 1 batch instead")
        return 1
    return T


def batch_complexity_report(
    instance: Instance, budget: float, alpha: float, engine: MarginalEngine | None = None
) -> BatchComplexityReport:
    """Compare density greedy truncated at T batches with its untruncated value and the optimum.

    The truncated value should be at least (1 - alpha + alpha^2) times the
    untruncated value minus (1 - alpha) times the optimum.
    """
    engine = engine or MarginalEngine(instance.utility, instance.prior, MarginalMode.exact())
    config = PolicyConfig(alpha, Knapsack(budget))
    T, delta = batch_budget_T(instance.n, budget, instance.costs.c_min, alpha)
    density = DensityGreedy(config)
    untruncated = exact_expected_utility(density, instance, engine)
    truncated_policy = truncate_batches(density, T) if T >= 1 else FixedSetPolicy()
    truncated = exact_expected_utility(truncated_policy, instance, engine)
    oracle = optimal_adaptive_value(instance, Knapsack(budget), engine)
    truncation_bound = (1.0 - alpha + alpha**2) * untruncated.expected_utility - (1.0 - alpha) * oracle
    holds = truncated.expected_utility >= truncation_bound - EXACT_SLACK and untruncated.max_batches <= instance.n
    return BatchComplexityReport(
        T=T,
        delta=delta,
        truncated_value=truncated.expected_utility,
        untruncated_value=untruncated.expected_utility,
        oracle_value=oracle,
        truncation_bound=truncation_bound,
        max_batches=untruncated.max_batches,
        holds=holds,
    )


class ExperimentService:
    """
    Core domain service for policy sweeps

    Coordinates the instance source and the result sink around the
    policies and the exact oracle.
    """

    def __init__(self, instance_source: InstanceSourcePort, result_sink: ResultSinkPort):
        """Initialize with required ports"""
        self.instance_source = instance_source
        self.result_sink = result_sink

    def load_instance(self, config: ExperimentConfig) -> Instance:
        if config.generator is not None:
            spec = config.generator
            return generate_instance(spec.family, spec.n, spec.states, spec.seed, spec.params)
        return self.instance_source.load_instance(config.instance_path)

    def oracle_value(self, instance: Instance, constraint: Constraint) -> float:
        try:
            return optimal_adaptive_value(instance, constraint)
        except OracleCapExceeded as e:
            _LOGGER.warning("\n" + e.warning())
            raise

    def is_monotone(self, instance: Instance) -> bool:
        try:
            return check_adaptive_monotonicity(instance).holds
        except EnumerationCapExceeded:
            _LOGGER.info(f"{instance.name}: monotonicity not checkable, using the general bound")
            return False

    def _evaluate_alpha(self, instance: Instance, config: ExperimentConfig, alpha: float) -> Tuple[Policy, EvalReport, bool]:
        policy_config = PolicyConfig(alpha, config.constraint, seed=config.seed)
        max_batches = config.max_batches
        if config.auto_T and config.policy in KNAPSACK_POLICIES:
            max_batches = auto_batch_budget(instance, policy_config.budget, alpha)
        policy = build_policy(config.policy, policy_config, max_batches, config.deferred_coins)
        report = evaluate_policy(policy, instance, config.method, config.trials, config.seed)
        return policy, report, max_batches is not None

    def run_experiment(self, config: ExperimentConfig) -> ExperimentResult:
        """
        Evaluate the policy at every alpha of the grid

        Args:
            config: The sweep to run

        Returns:
            Rows in alpha order, the CSV location if one was written, and any trend violations

        Raises:
            OracleCapExceeded: ratios were requested but the instance is too large for the oracle
            BoundViolation: the alpha trend is violated beyond its slack, unless allow_trend_violations is set
        """
        instance = self.load_instance(config)
        if config.policy in KNAPSACK_POLICIES:
            instance.require_positive_costs()
        oracle = self.oracle_value(instance, config.constraint) if config.oracle else None
        # bounds are only reported next to an oracle value
        monotone = oracle is not None and config.policy in CARDINALITY_POLICIES and self.is_monotone(instance)

        alphas = list(dict.fromkeys(effective_alpha(config.policy, alpha) for alpha in config.alpha_grid))
        outcomes: Dict[float, Tuple[Policy, EvalReport, bool]] = {}
        with concurrent.futures.ThreadPoolExecutor(max_workers=load_settings().workers) as executor:
            futures = {executor.submit(self._evaluate_alpha, instance, config, alpha): alpha for alpha in alphas}
            for future in concurrent.futures.as_completed(futures):
                outcomes[futures[future]] = future.result()

        rows = []
        for alpha in alphas:
            policy, report, truncated = outcomes[alpha]
            bound = theorem_bound(config.policy, alpha, monotone, truncated) if oracle is not None else None
            rows.append(
                ResultRow(
                    instance_id=instance.name,
                    policy=config.policy,
                    alpha=alpha,
                    constraint=str(config.constraint),
                    method=report.method.value,
                    expected_utility=report.expected_utility,
                    stderr=report.stderr,
                    mean_batches=report.mean_batches,
                    max_batches=report.max_batches,
                    oracle_value=oracle,
                    ratio=report.expected_utility / oracle if oracle else None,
                    theorem_bound=bound,
                    bound_satisfied=bound_satisfied(report, bound, oracle),
                )
            )
            if not rows[-1].bound_satisfied:
                _LOGGER.warning(f"{policy.name} on {instance.name} falls below its bound {bound:.6g}")

        violations = trend_violations(rows)
        for violation in violations:
            _LOGGER.warning(f"{instance.name}: {violation}")
        output = self.result_sink.write_rows(rows, config.output_path) if config.output_path else None
        if violations and not config.allow_trend_violations:
            raise BoundViolation(f"alpha trend violated on {instance.name}: {violations[0]}")
        return ExperimentResult(tuple(rows), output, tuple(violations))

    def batch_complexity_report(self, config: ExperimentConfig, alpha: float) -> BatchComplexityReport:
        return batch_complexity_report(self.load_instance(config), PolicyConfig(alpha, config.constraint).budget, alpha)
