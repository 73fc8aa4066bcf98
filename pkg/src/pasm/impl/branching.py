"""
Random choice points shared by simulation and exact enumeration.

Policies and environments never touch a random generator directly; they
ask a Chooser. A SampledChooser draws from a numpy stream, a
ScriptedChooser replays a fixed sequence of branch indices so that
`enumerate_branches` can visit every leaf of the joint tree of coin flips
and observations exactly once.
"""
from __future__ import annotations

from abc import ABC, abstractmethod
from typing import Callable, Iterator, List, Sequence, Tuple, TypeVar

import numpy as np

from pasm.types.errors import EnumerationCapExceeded
from pasm.types.settings import load_settings

T = TypeVar("T")
R = TypeVar("R")


def _live(options: Sequence[T], probs: Sequence[float]) -> Tuple[List[T], List[float]]:
    if len(options) != len(probs):
        raise ValueError("every option needs a probability")
    live = [(option, p) for option, p in zip(options, probs) if p > 0]
    if not live:
        raise ValueError("no option has positive probability")
    total = sum(p for _, p in live)
    return [o for o, _ in live], [p / total for _, p in live]


class Chooser(ABC):
    @abstractmethod
    def pick(self, options: Sequence[T], probs: Sequence[float]) -> T:
        """Return one option with the given (unnormalized) probabilities."""

    def uniform(self, options: Sequence[T]) -> T:
        return self.pick(options, [1.0] * len(options))

    def coin(self, p: float = 0.5) -> bool:
        return self.pick([True, False], [p, 1.0 - p])


class SampledChooser(Chooser):
    """Draws from a seeded numpy stream; single-option picks consume nothing."""

    def __init__(self, rng: np.random.Generator):
        self.rng = rng

    def pick(self, options: Sequence[T], probs: Sequence[float]) -> T:
        live, weights = _live(options, probs)
        if len(live) == 1:
            return live[0]
        return live[int(self.rng.choice(len(live), p=weights))]


class ScriptedChooser(Chooser):
    """Follows `script`, then always takes the first live option, recording each branch width."""

    def __init__(self, script: Sequence[int] = ()):
        self.script = tuple(script)
        self.widths: List[int] = []
        self.probability = 1.0

    def pick(self, options: Sequence[T], probs: Sequence[float]) -> T:
        live, weights = _live(options, probs)
        depth = len(self.widths)
        index = self.script[depth] if depth < len(self.script) else 0
        self.widths.append(len(live))
        self.probability *= weights[index]
        return live[index]


def enumerate_branches(run: Callable[[Chooser], R], cap: int | None = None) -> Iterator[Tuple[float, R]]:
    """Yield (probability, result) for every leaf of the choice tree explored by `run`.

    `run` must be deterministic given the chooser's answers.
    """
    cap = cap or load_settings().enumeration_cap
    stack: List[Tuple[int, ...]] = [()]
    leaves = 0
    while stack:
        script = stack.pop()
        chooser = ScriptedChooser(script)
        result = run(chooser)
        leaves += 1
        if leaves > cap:
            raise EnumerationCapExceeded(f"more than {cap} branches in the policy tree")
        taken = list(script) + [0] * (len(chooser.widths) - len(script))
        for depth in range(len(chooser.widths) - 1, len(script) - 1, -1):
            for alternative in range(chooser.widths[depth] - 1, 0, -1):
                stack.append(tuple(taken[:depth]) + (alternative,))
        yield chooser.probability, result
