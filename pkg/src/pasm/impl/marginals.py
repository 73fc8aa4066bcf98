"""
Conditional expected marginal utilities of items and policies.
"""
from __future__ import annotations

import dataclasses
import enum
from typing import TYPE_CHECKING, Callable, Dict, FrozenSet, Iterable, List, Tuple

import numpy as np

from pasm.impl.realizations import RealizationTable, realization_table, sample_realizations
from pasm.types.errors import ConfigurationError
from pasm.types.model import Instance, PartialRealization, Prior
from pasm.types.settings import load_settings
from pasm.util.logging import setup_logging

if TYPE_CHECKING:
    from pasm.impl.utility import UtilityFunction
    from pasm.policies.base import Policy

_LOGGER = setup_logging(__name__)


class MarginalKind(str, enum.Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


@dataclasses.dataclass(frozen=True)
class MarginalMode:
    kind: MarginalKind = MarginalKind.EXACT
    samples: int = 0

    def __post_init__(self):
        if self.kind is MarginalKind.MONTE_CARLO and self.samples < 1:
            raise ConfigurationError("Monte-Carlo marginals need a positive sample count")

    @classmethod
    def exact(cls) -> "MarginalMode":
        return cls(MarginalKind.EXACT)

    @classmethod
    def monte_carlo(cls, samples: int | None = None) -> "MarginalMode":
        return cls(MarginalKind.MONTE_CARLO, samples or load_settings().mc_samples)

    @property
    def is_exact(self) -> bool:
        return self.kind is MarginalKind.EXACT


@dataclasses.dataclass(frozen=True)
class MarginalQuery:
    item: int
    base: FrozenSet[int]
    information_domain: FrozenSet[int]


class MarginalEngine:
    """Computes Delta(e | S, psi) and E[f(S) | psi] for one instance.

    Exact mode enumerates the conditional prior and memoizes on
    (item, S, canonical psi). Monte-Carlo mode averages over conditioned
    draws from a stream bound with `bind_stream`; it is never memoized.
    Listeners receive every item query, which lets callers audit which
    information state a decision was made under. Item marginals within
    `tolerance` of zero are reported as exactly zero, so rounding noise
    never ranks a real item below the zero-valued dummies.
    """

    def __init__(
        self,
        utility: "UtilityFunction",
        prior: Prior,
        mode: MarginalMode | None = None,
        rng: np.random.Generator | None = None,
        cap: int | None = None,
        tolerance: float | None = None,
    ):
        self.utility = utility
        self.prior = prior
        self.mode = mode or MarginalMode.exact()
        self.tolerance = load_settings().tolerance if tolerance is None else tolerance
        self._rng = rng
        self._cap = cap
        self._table: RealizationTable | None = None
        self._conditioned: Dict[tuple, RealizationTable] = {}
        self._item_cache: Dict[tuple, float] = {}
        self._value_cache: Dict[tuple, float] = {}
        self.listeners: List[Callable[[MarginalQuery], None]] = []

    @classmethod
    def for_instance(cls, instance: Instance, mode: MarginalMode | None = None, rng: np.random.Generator | None = None) -> "MarginalEngine":
        """Exact marginals whenever the prior is enumerable, Monte Carlo otherwise."""
        if mode is None:
            settings = load_settings()
            if instance.prior.support_size() <= settings.enumeration_cap:
                mode = MarginalMode.exact()
            else:
                _LOGGER.info(f"{instance.name}: prior is not enumerable, using Monte-Carlo marginals")
                mode = MarginalMode.monte_carlo(settings.mc_samples)
        return cls(instance.utility, instance.prior, mode, rng)

    @property
    def n(self) -> int:
        return self.utility.n_items

    @property
    def table(self) -> RealizationTable:
        if self._table is None:
            self._table = realization_table(self.prior, self._cap)
        return self._table

    def bind_stream(self, rng: np.random.Generator) -> None:
        self._rng = rng

    def conditioned(self, psi: PartialRealization) -> RealizationTable:
        key = psi.key
        table = self._conditioned.get(key)
        if table is None:
            table = self.table.condition(psi)
            self._conditioned[key] = table
        return table

    def _draws(self, psi: PartialRealization) -> np.ndarray:
        if self._rng is None:
            raise ConfigurationError("Monte-Carlo marginals need a random stream")
        return sample_realizations(self.prior, psi, self._rng, self.mode.samples)

    def item(self, item: int, base: Iterable[int], psi: PartialRealization) -> float:
        """Delta(item | base, psi); 0 for dummy items and for items already in base."""
        base = frozenset(base)
        for listener in self.listeners:
            listener(MarginalQuery(item, base, psi.domain))
        if item >= self.n or item in base:
            return 0.0

        if not self.mode.is_exact:
            rows = self._draws(psi)
            gains = self.utility.evaluate_rows(base | {item}, rows) - self.utility.evaluate_rows(base, rows)
            return self._snap(float(gains.mean()))

        key = (item, self.utility.real_items(base), psi.key)
        cached = self._item_cache.get(key)
        if cached is None:
            table = self.conditioned(psi)
            gains = self.utility.evaluate_rows(base | {item}, table.rows) - self.utility.evaluate_rows(base, table.rows)
            cached = self._snap(float(gains @ table.probs))
            self._item_cache[key] = cached
        return cached

    def _snap(self, marginal: float) -> float:
        return 0.0 if abs(marginal) <= self.tolerance else marginal

    def value(self, items: Iterable[int], psi: PartialRealization) -> float:
        """E[f(items, Phi) | Phi ~ psi]."""
        items = frozenset(items)
        if not self.mode.is_exact:
            return float(self.utility.evaluate_rows(items, self._draws(psi)).mean())
        key = (self.utility.real_items(items), psi.key)
        cached = self._value_cache.get(key)
        if cached is None:
            table = self.conditioned(psi)
            cached = float(self.utility.evaluate_rows(items, table.rows) @ table.probs)
            self._value_cache[key] = cached
        return cached

    def outcome_distribution(self, items: Tuple[int, ...], psi: PartialRealization) -> List[Tuple[Tuple[int, ...], float]]:
        return self.conditioned(psi).outcome_distribution(items)


def marginal_item(
    f: "UtilityFunction",
    item: int,
    selected: Iterable[int],
    psi: PartialRealization,
    prior: Prior,
    mode: MarginalMode | None = None,
    rng: np.random.Generator | None = None,
) -> float:
    """Delta(item | selected, psi) under `prior`."""
    return MarginalEngine(f, prior, mode, rng).item(item, selected, psi)


def marginal_policy(
    policy: "Policy",
    instance: Instance,
    selected: Iterable[int],
    psi: PartialRealization,
    engine: MarginalEngine | None = None,
) -> float:
    """Delta(policy | selected, psi): exhaustive expectation over observations and the policy's coins.

    The policy starts with `psi` as its information state and `selected` as
    the base set its marginals are computed on top of.
    """
    from pasm.impl.branching import enumerate_branches
    from pasm.impl.environment import BranchingEnvironment

    engine = engine or MarginalEngine.for_instance(instance, MarginalMode.exact())
    if not engine.mode.is_exact:
        raise ConfigurationError("policy marginals are computed exactly and need exact item marginals")
    base = frozenset(selected)
    baseline = engine.value(base, psi)

    def run(chooser):
        environment = BranchingEnvironment(engine, chooser, revealed=psi)
        trace = policy.execute(instance, environment, chooser, engine, base=base, information=psi)
        return environment.value(set(trace.selected) | base)

    total = sum(probability * leaf for probability, leaf in enumerate_branches(run))
    return total - baseline
