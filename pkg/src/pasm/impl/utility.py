"""
Utility functions f(S, phi) over items and states.

Every family evaluates a whole block of realizations at once
(`evaluate_rows`), which is what the marginal engine and the oracle use;
`evaluate` is the single-realization convenience. Item ids >= n_items are
dummy items and never contribute.
"""
from __future__ import annotations

import dataclasses
from abc import ABC, abstractmethod
from typing import ClassVar, Dict, FrozenSet, Iterable, Mapping, Optional, Sequence, Tuple

import numpy as np

from pasm.types.errors import EvaluationError, ModelError
from pasm.types.model import Realization


class UtilityFunction(ABC):
    kind: ClassVar[str]

    @property
    @abstractmethod
    def n_items(self) -> int:
        """Number of real items the function is defined over."""

    @abstractmethod
    def _evaluate_rows(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        pass

    def real_items(self, selected: Iterable[int]) -> Tuple[int, ...]:
        return tuple(sorted({e for e in selected if e < self.n_items}))

    def evaluate_rows(self, selected: Iterable[int], rows: np.ndarray) -> np.ndarray:
        """f(selected, phi) for every realization row of an (R, n) matrix."""
        return self._evaluate_rows(self.real_items(selected), rows)

    def evaluate(self, selected: Iterable[int], phi: Realization) -> float:
        if len(phi) != self.n_items:
            raise ModelError(f"realization has {len(phi)} states, utility expects {self.n_items}")
        row = np.asarray([phi.states], dtype=np.int64)
        return float(self.evaluate_rows(selected, row)[0])


@dataclasses.dataclass(frozen=True)
class WeightedCoverage(UtilityFunction):
    """covers[e][s] is the set of elements item e covers in state s; f sums the weights of the union."""

    weights: Tuple[float, ...]
    covers: Tuple[Tuple[FrozenSet[int], ...], ...]
    kind: ClassVar[str] = "weighted_coverage"

    def __post_init__(self):
        if any(w < 0 for w in self.weights):
            raise ModelError("element weights must be nonnegative")
        m = len(self.weights)
        for e, per_state in enumerate(self.covers):
            for elements in per_state:
                if any(not 0 <= j < m for j in elements):
                    raise ModelError(f"item {e} covers an element outside 0..{m - 1}")
        masks = []
        for per_state in self.covers:
            mask = np.zeros((len(per_state), m), dtype=bool)
            for s, elements in enumerate(per_state):
                mask[s, list(elements)] = True
            masks.append(mask)
        object.__setattr__(self, "_masks", tuple(masks))
        object.__setattr__(self, "_weights", np.asarray(self.weights, dtype=float))

    @property
    def n_items(self) -> int:
        return len(self.covers)

    @property
    def elements(self) -> int:
        return len(self.weights)

    def _coverage(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        covered = np.zeros((rows.shape[0], self.elements), dtype=bool)
        for e in items:
            covered |= self._masks[e][rows[:, e]]
        return covered @ self._weights

    def _evaluate_rows(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        return self._coverage(items, rows)


@dataclasses.dataclass(frozen=True)
class CoverageWithPenalty(WeightedCoverage):
    """Weighted coverage minus a modular penalty; f may be negative."""

    penalties: Tuple[float, ...] = ()
    kind: ClassVar[str] = "coverage_penalty"

    def __post_init__(self):
        super().__post_init__()
        if len(self.penalties) != len(self.covers):
            raise ModelError(f"expected {len(self.covers)} penalties, got {len(self.penalties)}")
        if any(p < 0 for p in self.penalties):
            raise ModelError("penalties must be nonnegative")

    def _evaluate_rows(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        return self._coverage(items, rows) - sum(self.penalties[e] for e in items)


@dataclasses.dataclass(frozen=True)
class VersionSpaceReduction(UtilityFunction):
    """Generalized binary search: f is the mass of hypotheses ruled out by the observed answers.

    answers[h][e] is the state item e takes when hypothesis h is true.
    """

    answers: Tuple[Tuple[int, ...], ...]
    masses: Tuple[float, ...]
    kind: ClassVar[str] = "version_space"

    def __post_init__(self):
        if len(self.answers) != len(self.masses):
            raise ModelError("every hypothesis needs a mass")
        if any(q < 0 for q in self.masses):
            raise ModelError("hypothesis masses must be nonnegative")
        if len({len(a) for a in self.answers}) != 1:
            raise ModelError("hypothesis answer vectors have different lengths")
        object.__setattr__(self, "_answers", np.asarray(self.answers, dtype=np.int64))
        object.__setattr__(self, "_masses", np.asarray(self.masses, dtype=float))

    @property
    def n_items(self) -> int:
        return len(self.answers[0])

    def _evaluate_rows(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        if not items:
            return np.zeros(rows.shape[0])
        cols = list(items)
        # (R, H): does some observed answer contradict hypothesis h under row r
        eliminated = (rows[:, None, cols] != self._answers[None, :, cols]).any(axis=2)
        return eliminated @ self._masses


@dataclasses.dataclass(frozen=True)
class Tabular(UtilityFunction):
    """Explicit values. A key with phi=None matches every realization; `default` covers misses."""

    items_count: int
    values: Mapping[Tuple[FrozenSet[int], Optional[Tuple[int, ...]]], float]
    default: Optional[float] = None
    kind: ClassVar[str] = "tabular"

    @property
    def n_items(self) -> int:
        return self.items_count

    def __hash__(self) -> int:
        return hash((self.items_count, tuple(sorted((tuple(sorted(s)), phi, v) for (s, phi), v in self.values.items())), self.default))

    def lookup(self, items: FrozenSet[int], phi: Tuple[int, ...]) -> float:
        for key in ((items, phi), (items, None)):
            if key in self.values:
                return self.values[key]
        if not items:
            return 0.0 if self.default is None else self.default
        if self.default is None:
            raise EvaluationError(f"no tabular value for set {sorted(items)} under realization {list(phi)}")
        return self.default

    def _evaluate_rows(self, items: Tuple[int, ...], rows: np.ndarray) -> np.ndarray:
        key = frozenset(items)
        return np.asarray([self.lookup(key, tuple(int(s) for s in row)) for row in rows], dtype=float)

    @classmethod
    def from_entries(
        cls, n: int, entries: Sequence[Tuple[Iterable[int], Optional[Sequence[int]], float]], default: Optional[float] = None
    ) -> "Tabular":
        values: Dict[Tuple[FrozenSet[int], Optional[Tuple[int, ...]]], float] = {}
        for items, phi, value in entries:
            values[(frozenset(items), None if phi is None else tuple(phi))] = float(value)
        return cls(items_count=n, values=values, default=default)


def evaluate(f: UtilityFunction, selected: Iterable[int], phi: Realization) -> float:
    """The deterministic value f(selected, phi); dummy items are ignored."""
    return f.evaluate(selected, phi)
