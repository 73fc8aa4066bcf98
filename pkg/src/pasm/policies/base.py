from __future__ import annotations

from abc import ABC, abstractmethod
from typing import FrozenSet, Iterable, List, Optional, Tuple

import numpy as np

# using attrs to finely control mutability of the run state
from attrs import define, field
from attrs.setters import frozen

from pasm.impl.branching import Chooser, SampledChooser
from pasm.impl.environment import Environment, RealizationEnvironment
from pasm.impl.marginals import MarginalEngine, MarginalMode
from pasm.types.model import Instance, Observation, PartialRealization, Realization
from pasm.types.trace import BatchRecord, DecisionRecord, RunTrace, TerminationReason
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

COST_TOLERANCE = 1e-9


@define(eq=False)
class _Limit:
    reason: TerminationReason
    max_batches: Optional[int] = None
    max_selections: Optional[int] = None


class _Halt(Exception):
    def __init__(self, limit: _Limit):
        super().__init__(limit.reason.value)
        self.limit = limit


@define
class RunState:
    """Mutable record of one policy run.

    Items enter batches through `select`; `close_batch` reveals the open
    batch and extends the information state. Nothing selected inside a
    batch is observable until that batch is closed.
    """

    instance: Instance = field(on_setattr=frozen)
    environment: Environment = field(on_setattr=frozen)
    base: FrozenSet[int] = field(factory=frozenset)
    information: PartialRealization = field(factory=PartialRealization.empty)

    _batches: List[List[int]] = field(factory=list, init=False)
    _observations: List[Tuple[Observation, ...]] = field(factory=list, init=False)
    _batch_open: bool = field(default=False, init=False)
    _decisions: List[DecisionRecord] = field(factory=list, init=False)
    _limits: List[_Limit] = field(factory=list, init=False)

    @property
    def selected(self) -> Tuple[int, ...]:
        return tuple(e for batch in self._batches for e in batch)

    @property
    def chosen(self) -> FrozenSet[int]:
        """Everything marginals are computed on top of: the base set plus this run's selections."""
        return self.base | frozenset(self.selected)

    @property
    def batch_count(self) -> int:
        return len(self._batches)

    @property
    def selection_count(self) -> int:
        return len(self.selected)

    @property
    def cost(self) -> float:
        return self.instance.costs.total(self.chosen)

    def fits(self, item: int, budget: float) -> bool:
        return self.cost + self.instance.costs(item) <= budget + COST_TOLERANCE

    def push_limit(self, limit: _Limit) -> _Limit:
        self._limits.append(limit)
        return limit

    def pop_limit(self, limit: _Limit) -> None:
        self._limits.remove(limit)

    def _check_new_batch(self) -> None:
        for limit in self._limits:
            if limit.max_batches is not None and self.batch_count >= limit.max_batches:
                raise _Halt(limit)

    def select(self, item: int, score: float = 0.0, reference: float = 0.0) -> None:
        for limit in self._limits:
            if limit.max_selections is not None and self.selection_count >= limit.max_selections:
                raise _Halt(limit)
        opened = not self._batch_open
        if opened:
            self._check_new_batch()
            self._batches.append([])
            self._observations.append(())
            self._batch_open = True
        self._batches[-1].append(item)
        self._decisions.append(
            DecisionRecord(
                step=len(self._decisions) + 1,
                batch=self.batch_count,
                item=item,
                information_domain=tuple(sorted(self.information.domain)),
                score=score,
                reference=reference,
                opened_batch=opened,
            )
        )

    def close_batch(self) -> None:
        """Reveal the open batch. Closing with nothing selected since the last reveal is a no-op."""
        if not self._batch_open:
            return
        self._check_new_batch()
        observations = self.environment.reveal(tuple(self._batches[-1]))
        self._observations[-1] = observations
        self.information = self.information.extend(observations)
        self._batch_open = False
        _LOGGER.debug(f"closed batch {self.batch_count}, observed {observations}")

    def forget(self) -> None:
        """Drop the information state; the next selection starts a new batch without revealing the last one.

        The forgotten batch still records the states its items take, when the environment knows them.
        """
        if self._batch_open:
            self._observations[-1] = self.environment.final_observations(tuple(self._batches[-1]))
        self._batch_open = False
        self.information = PartialRealization.empty()

    def to_trace(self, reason: TerminationReason, policy: str) -> RunTrace:
        batches = []
        for index, items in enumerate(self._batches):
            observations = self._observations[index]
            if self._batch_open and index == len(self._batches) - 1:
                observations = self.environment.final_observations(tuple(items))
            batches.append(BatchRecord(tuple(items), observations))
        return RunTrace(
            batches=tuple(batches),
            utility=self.environment.value(self.chosen),
            termination_reason=reason,
            decisions=tuple(self._decisions),
            policy=policy,
        )


class Policy(ABC):
    name: str = "policy"

    @abstractmethod
    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        """Make selections into `state` and return why the run stopped."""

    def execute(
        self,
        instance: Instance,
        environment: Environment,
        chooser: Chooser,
        engine: MarginalEngine,
        base: Iterable[int] = (),
        information: PartialRealization | None = None,
    ) -> RunTrace:
        state = RunState(instance, environment, frozenset(base), information or PartialRealization.empty())
        try:
            reason = self.run(state, chooser, engine)
        except _Halt as halt:
            reason = halt.limit.reason
        _LOGGER.debug(f"{self.name}: {state.selection_count} items in {state.batch_count} batches, {reason.value}")
        return state.to_trace(reason, self.name)

    def __repr__(self) -> str:
        return f"{self.__class__.__name__}({self.name})"


class FixedSetPolicy(Policy):
    """Selects a fixed list of items in one batch; the empty list gives the empty policy."""

    def __init__(self, items: Iterable[int] = ()):
        self.items = tuple(items)
        self.name = "fixed-set" if self.items else "empty"

    def run(self, state: RunState, chooser: Chooser, engine: MarginalEngine) -> TerminationReason:
        for item in self.items:
            if item not in state.chosen:
                state.select(item)
        return TerminationReason.COMPLETED


def simulate(
    policy: Policy,
    instance: Instance,
    phi: Realization,
    rng: np.random.Generator,
    engine: MarginalEngine | None = None,
    mode: MarginalMode | None = None,
) -> RunTrace:
    """Run `policy` against the fixed realization `phi`; the policy's coins and any Monte-Carlo marginals share `rng`."""
    engine = engine or MarginalEngine.for_instance(instance, mode)
    if not engine.mode.is_exact:
        engine.bind_stream(rng)
    return policy.execute(instance, RealizationEnvironment(instance, phi), SampledChooser(rng), engine)
