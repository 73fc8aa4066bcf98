"""
Environments reveal item states to a running policy.

A RealizationEnvironment holds a fixed realization (simulation). A
BranchingEnvironment draws revealed states from the conditional prior
through a Chooser, so that exact evaluation can enumerate them; its
final value is the conditional expectation given everything revealed.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Iterable, Tuple

from pasm.impl.branching import Chooser
from pasm.impl.marginals import MarginalEngine
from pasm.types.model import Instance, Observation, PartialRealization, Realization


class Environment(ABC):
    @abstractmethod
    def reveal(self, items: Tuple[int, ...]) -> Tuple[Observation, ...]:
        """States of `items`, in the given order."""

    @abstractmethod
    def value(self, selected: Iterable[int]) -> float:
        """Utility credited to a run that ends with `selected`."""

    def final_observations(self, items: Tuple[int, ...]) -> Tuple[Observation, ...]:
        """States of the last batch for the trace record; empty when not known without branching."""
        return ()


class RealizationEnvironment(Environment):
    def __init__(self, instance: Instance, phi: Realization):
        instance.check_realization(phi)
        self.instance = instance
        self.phi = phi

    def reveal(self, items: Tuple[int, ...]) -> Tuple[Observation, ...]:
        return tuple((e, self.phi[e]) for e in items)

    def value(self, selected: Iterable[int]) -> float:
        return self.instance.utility.evaluate(selected, self.phi)

    def final_observations(self, items: Tuple[int, ...]) -> Tuple[Observation, ...]:
        return self.reveal(items)


class BranchingEnvironment(Environment):
    def __init__(self, engine: MarginalEngine, chooser: Chooser, revealed: PartialRealization | None = None):
        self.engine = engine
        self.chooser = chooser
        self.revealed = revealed or PartialRealization.empty()

    def reveal(self, items: Tuple[int, ...]) -> Tuple[Observation, ...]:
        known = {e: self.revealed.get(e) for e in items if e in self.revealed}
        fresh = tuple(e for e in items if e not in known and e < self.engine.n)
        if fresh:
            outcomes = self.engine.outcome_distribution(fresh, self.revealed)
            states = self.chooser.pick([o for o, _ in outcomes], [p for _, p in outcomes])
            known.update(zip(fresh, states))
            self.revealed = self.revealed.extend(zip(fresh, states))
        return tuple((e, known.get(e, 0)) for e in items)

    def value(self, selected: Iterable[int]) -> float:
        return self.engine.value(selected, self.revealed)
