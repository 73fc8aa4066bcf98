"""
Core model types: items, state spaces, realizations, priors, costs and instances.

All values are immutable after construction. Item ids are dense integers;
ids in [0, n) are real items and ids >= n are dummy items that a
cardinality-mode policy appends to the ground set.
"""
from __future__ import annotations

import dataclasses
import enum
import functools
import math
from typing import TYPE_CHECKING, Iterable, Iterator, Mapping, Sequence, Tuple

from pasm.types.errors import ConfigurationError, ModelError

if TYPE_CHECKING:
    from pasm.impl.utility import UtilityFunction

PROBABILITY_TOLERANCE = 1e-9

Observation = Tuple[int, int]


@dataclasses.dataclass(frozen=True)
class Item:
    id: int
    is_dummy: bool = False


@dataclasses.dataclass(frozen=True)
class StateSpace:
    """Per-item state labels; labels of item e are 0..len(states_per_item[e]) - 1."""

    states_per_item: Tuple[Tuple[int, ...], ...]

    def __post_init__(self):
        for e, labels in enumerate(self.states_per_item):
            if len(labels) == 0:
                raise ModelError(f"item {e} has no possible state")
            if tuple(labels) != tuple(range(len(labels))):
                raise ModelError(f"item {e} state labels must be 0..{len(labels) - 1}, got {list(labels)}")

    @classmethod
    def shared(cls, n: int, num_states: int) -> "StateSpace":
        return cls(tuple(tuple(range(num_states)) for _ in range(n)))

    @property
    def n(self) -> int:
        return len(self.states_per_item)

    def labels(self, item: int) -> Tuple[int, ...]:
        if item >= self.n:
            return (0,)
        return self.states_per_item[item]

    def is_legal(self, item: int, state: int) -> bool:
        return 0 <= state < len(self.labels(item))

    @property
    def max_states(self) -> int:
        return max((len(labels) for labels in self.states_per_item), default=1)


@dataclasses.dataclass(frozen=True)
class Realization:
    """A full assignment of a state to every real item."""

    states: Tuple[int, ...]

    def __getitem__(self, item: int) -> int:
        if item >= len(self.states):
            return 0
        return self.states[item]

    def __len__(self) -> int:
        return len(self.states)

    def restrict(self, items: Iterable[int]) -> "PartialRealization":
        return PartialRealization(tuple((e, self[e]) for e in items))


@dataclasses.dataclass(frozen=True, eq=False)
class PartialRealization:
    """Observed (item, state) pairs in observation order.

    Equality and hashing ignore the order of observation; `key` is the
    canonical sorted form used for memoization.
    """

    observations: Tuple[Observation, ...] = ()

    def __post_init__(self):
        seen = set()
        for item, _ in self.observations:
            if item in seen:
                raise ModelError(f"item {item} observed twice")
            seen.add(item)

    @classmethod
    def empty(cls) -> "PartialRealization":
        return _EMPTY

    @classmethod
    def of(cls, mapping: Mapping[int, int]) -> "PartialRealization":
        return cls(tuple(mapping.items()))

    @functools.cached_property
    def key(self) -> Tuple[Observation, ...]:
        return tuple(sorted(self.observations))

    @functools.cached_property
    def domain(self) -> frozenset[int]:
        return frozenset(item for item, _ in self.observations)

    def get(self, item: int, default: int | None = None) -> int | None:
        for observed, state in self.observations:
            if observed == item:
                return state
        return default

    def extend(self, observations: Iterable[Observation]) -> "PartialRealization":
        return PartialRealization(self.observations + tuple(observations))

    def items(self) -> Iterator[Observation]:
        return iter(self.observations)

    def __contains__(self, item: object) -> bool:
        return item in self.domain

    def __len__(self) -> int:
        return len(self.observations)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PartialRealization):
            return NotImplemented
        return self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __repr__(self) -> str:
        body = ", ".join(f"{item}:{state}" for item, state in self.observations)
        return f"PartialRealization({{{body}}})"


_EMPTY = PartialRealization(())


class PriorKind(str, enum.Enum):
    INDEPENDENT = "independent"
    EXPLICIT = "explicit"


def _check_distribution(probs: Sequence[float], where: str) -> None:
    if any(p < 0 for p in probs):
        raise ModelError(f"{where}: probabilities must be nonnegative")
    if abs(math.fsum(probs) - 1.0) > PROBABILITY_TOLERANCE:
        raise ModelError(f"{where}: probabilities sum to {math.fsum(probs)!r}, expected 1")


@dataclasses.dataclass(frozen=True)
class IndependentPrior:
    """Per-item categorical distributions; marginals[e][s] = Pr[Phi(e) = s]."""

    marginals: Tuple[Tuple[float, ...], ...]
    kind: PriorKind = dataclasses.field(default=PriorKind.INDEPENDENT, init=False)

    def __post_init__(self):
        for e, probs in enumerate(self.marginals):
            _check_distribution(probs, f"item {e}")

    @property
    def n(self) -> int:
        return len(self.marginals)

    def support_size(self) -> int:
        return math.prod(sum(1 for p in probs if p > 0) for probs in self.marginals)


@dataclasses.dataclass(frozen=True)
class ExplicitPrior:
    """A table of (realization, probability) rows, each realization listed at most once."""

    rows: Tuple[Tuple[Realization, float], ...]
    kind: PriorKind = dataclasses.field(default=PriorKind.EXPLICIT, init=False)

    def __post_init__(self):
        if not self.rows:
            raise ModelError("explicit prior has no rows")
        _check_distribution([p for _, p in self.rows], "explicit prior")
        widths = {len(phi) for phi, _ in self.rows}
        if len(widths) != 1:
            raise ModelError("explicit prior rows have different lengths")
        if len({phi for phi, _ in self.rows}) != len(self.rows):
            raise ModelError("explicit prior lists a realization more than once")

    @property
    def n(self) -> int:
        return len(self.rows[0][0])

    def support_size(self) -> int:
        return sum(1 for _, p in self.rows if p > 0)


Prior = IndependentPrior | ExplicitPrior


@dataclasses.dataclass(frozen=True)
class CostFunction:
    """Additive costs over real items; dummy items cost 0."""

    costs: Tuple[float, ...]

    def __post_init__(self):
        if any(c < 0 for c in self.costs):
            raise ModelError("costs must be nonnegative")

    def __call__(self, item: int) -> float:
        if item >= len(self.costs):
            return 0.0
        return self.costs[item]

    def total(self, items: Iterable[int]) -> float:
        return math.fsum(self(e) for e in items)

    @property
    def c_min(self) -> float:
        return min(self.costs)

    @classmethod
    def unit(cls, n: int) -> "CostFunction":
        return cls(tuple(1.0 for _ in range(n)))


@dataclasses.dataclass(frozen=True)
class Instance:
    n: int
    costs: CostFunction
    states: StateSpace
    prior: Prior
    utility: "UtilityFunction"
    name: str = "instance"

    def __post_init__(self):
        if self.n < 1:
            raise ModelError("an instance needs at least one item")
        for label, width in (("costs", len(self.costs.costs)), ("states", self.states.n), ("prior", self.prior.n)):
            if width != self.n:
                raise ModelError(f"{label} covers {width} items, instance has {self.n}")
        if self.utility.n_items != self.n:
            raise ModelError(f"utility covers {self.utility.n_items} items, instance has {self.n}")
        if isinstance(self.prior, IndependentPrior):
            for e, probs in enumerate(self.prior.marginals):
                if len(probs) != len(self.states.labels(e)):
                    raise ModelError(f"prior of item {e} has {len(probs)} states, state space has {len(self.states.labels(e))}")
        else:
            for phi, _ in self.prior.rows:
                self.check_realization(phi)

    @property
    def items(self) -> Tuple[Item, ...]:
        return tuple(Item(e) for e in range(self.n))

    def is_dummy(self, item: int) -> bool:
        return item >= self.n

    def dummy_items(self, k: int) -> Tuple[Item, ...]:
        """The 2k - 1 dummy items appended to the ground set for a cardinality-k policy."""
        return tuple(Item(self.n + i, is_dummy=True) for i in range(max(2 * k - 1, 0)))

    def check_realization(self, phi: Realization) -> None:
        if len(phi) != self.n:
            raise ModelError(f"realization has {len(phi)} states, instance has {self.n} items")
        for e, state in enumerate(phi.states):
            if not self.states.is_legal(e, state):
                raise ModelError(f"state {state} is illegal for item {e}")

    def check_partial(self, psi: PartialRealization, allow_dummies: bool = True) -> None:
        for item, state in psi.items():
            if item < 0 or (item >= self.n and not allow_dummies):
                raise ModelError(f"item {item} is not in the ground set")
            if not self.states.is_legal(item, state):
                raise ModelError(f"state {state} is illegal for item {item}")

    def require_positive_costs(self) -> None:
        if self.costs.c_min <= 0:
            raise ConfigurationError("knapsack mode requires every item to have a positive cost")
