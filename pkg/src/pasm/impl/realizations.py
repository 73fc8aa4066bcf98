"""
Operations on the stochastic ground model: consistency, conditioning,
sampling and exact enumeration of realizations.
"""
from __future__ import annotations

import dataclasses
import math
from typing import List, Sequence, Tuple

import numpy as np

from pasm.types.errors import ConditioningError, EnumerationCapExceeded, ModelError
from pasm.types.model import (
    PROBABILITY_TOLERANCE,
    ExplicitPrior,
    IndependentPrior,
    Instance,
    PartialRealization,
    Prior,
    Realization,
)
from pasm.types.settings import load_settings
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)


def is_consistent(phi: Realization, psi: PartialRealization, instance: Instance | None = None) -> bool:
    """True iff phi agrees with psi everywhere on dom(psi)."""
    if instance is not None:
        instance.check_realization(phi)
        instance.check_partial(psi)
    for item, state in psi.items():
        if item >= len(phi) and instance is None and state != 0:
            raise ModelError(f"item {item} is outside the realization and is not a dummy")
        if phi[item] != state:
            return False
    return True


def is_subrealization(psi: PartialRealization, other: PartialRealization, instance: Instance | None = None) -> bool:
    """True iff dom(psi) is contained in dom(other) and both agree on dom(psi)."""
    if instance is not None:
        instance.check_partial(psi)
        instance.check_partial(other)
    if not psi.domain <= other.domain:
        return False
    return all(other.get(item) == state for item, state in psi.items())


def probability_of(prior: Prior, psi: PartialRealization) -> float:
    """Pr[Phi ~ psi] under the prior."""
    if isinstance(prior, IndependentPrior):
        probability = 1.0
        for item, state in psi.items():
            if item >= prior.n:
                if state != 0:
                    return 0.0
                continue
            marginal = prior.marginals[item]
            if not 0 <= state < len(marginal):
                return 0.0
            probability *= marginal[state]
        return probability
    return math.fsum(p for phi, p in prior.rows if _agrees(phi, psi))


def _agrees(phi: Realization, psi: PartialRealization) -> bool:
    return all(phi[item] == state for item, state in psi.items())


def condition_prior(prior: Prior, psi: PartialRealization) -> Prior:
    """Return p(. | psi).

    Independent priors stay independent with observed items collapsed to
    point masses; explicit priors keep their consistent rows, renormalized.
    """
    if len(psi) == 0:
        return prior
    if probability_of(prior, psi) <= 0:
        raise ConditioningError(f"{psi!r} has zero probability under the prior")

    if isinstance(prior, IndependentPrior):
        marginals = list(prior.marginals)
        for item, state in psi.items():
            if item < prior.n:
                marginals[item] = tuple(1.0 if s == state else 0.0 for s in range(len(marginals[item])))
        return IndependentPrior(tuple(marginals))

    consistent = [(phi, p) for phi, p in prior.rows if _agrees(phi, psi)]
    total = math.fsum(p for _, p in consistent)
    return ExplicitPrior(tuple((phi, p / total) for phi, p in consistent))


def sample_realizations(
    prior: Prior, psi: PartialRealization, rng: np.random.Generator, size: int
) -> np.ndarray:
    """Draw `size` realizations from p(. | psi) as a (size, n) integer matrix."""
    conditioned = condition_prior(prior, psi)
    if isinstance(conditioned, IndependentPrior):
        columns = [
            rng.choice(len(marginal), size=size, p=np.asarray(marginal, dtype=float))
            for marginal in conditioned.marginals
        ]
        return np.stack(columns, axis=1).astype(np.int64)

    table = np.asarray([phi.states for phi, _ in conditioned.rows], dtype=np.int64)
    probs = np.asarray([p for _, p in conditioned.rows], dtype=float)
    picks = rng.choice(len(table), size=size, p=probs / probs.sum())
    return table[picks]


def sample_realization(prior: Prior, psi: PartialRealization, rng: np.random.Generator) -> Realization:
    """Draw one realization from p(. | psi); deterministic given the stream state."""
    row = sample_realizations(prior, psi, rng, size=1)[0]
    return Realization(tuple(int(s) for s in row))


@dataclasses.dataclass(frozen=True)
class RealizationTable:
    """All positive-probability realizations as an (R, n) matrix with their probabilities."""

    rows: np.ndarray
    probs: np.ndarray

    @property
    def n(self) -> int:
        return self.rows.shape[1]

    def __len__(self) -> int:
        return self.rows.shape[0]

    def mask(self, psi: PartialRealization) -> np.ndarray:
        mask = np.ones(len(self), dtype=bool)
        for item, state in psi.items():
            if item >= self.n:
                if state != 0:
                    mask[:] = False
                continue
            mask &= self.rows[:, item] == state
        return mask

    def probability(self, psi: PartialRealization) -> float:
        return float(self.probs[self.mask(psi)].sum())

    def condition(self, psi: PartialRealization) -> "RealizationTable":
        if len(psi) == 0:
            return self
        mask = self.mask(psi)
        total = self.probs[mask].sum()
        if total <= 0:
            raise ConditioningError(f"{psi!r} has zero probability under the prior")
        return RealizationTable(self.rows[mask], self.probs[mask] / total)

    def outcome_distribution(self, items: Sequence[int]) -> List[Tuple[Tuple[int, ...], float]]:
        """Joint distribution of the states of `items`, sorted by outcome."""
        real = [e for e in items if e < self.n]
        if not real:
            return [(tuple(0 for _ in items), 1.0)]
        outcomes, inverse = np.unique(self.rows[:, real], axis=0, return_inverse=True)
        weights = np.bincount(inverse.reshape(-1), weights=self.probs, minlength=len(outcomes))
        result = []
        for outcome, weight in zip(outcomes, weights):
            if weight <= 0:
                continue
            lookup = dict(zip(real, (int(s) for s in outcome)))
            result.append((tuple(lookup.get(e, 0) for e in items), float(weight)))
        return result

    def realizations(self) -> List[Tuple[Realization, float]]:
        return [(Realization(tuple(int(s) for s in row)), float(p)) for row, p in zip(self.rows, self.probs)]


def realization_table(prior: Prior, cap: int | None = None) -> RealizationTable:
    cap = cap or load_settings().enumeration_cap
    size = prior.support_size()
    if size > cap:
        raise EnumerationCapExceeded(f"{size} realizations exceed the enumeration cap of {cap}")

    if isinstance(prior, ExplicitPrior):
        positive = [(phi, p) for phi, p in prior.rows if p > 0]
        rows = np.asarray([phi.states for phi, _ in positive], dtype=np.int64).reshape(len(positive), prior.n)
        probs = np.asarray([p for _, p in positive], dtype=float)
        return RealizationTable(rows, probs)

    supports = [np.flatnonzero(np.asarray(marginal) > 0) for marginal in prior.marginals]
    grids = np.meshgrid(*supports, indexing="ij")
    rows = np.stack([grid.reshape(-1) for grid in grids], axis=1).astype(np.int64)
    probs = np.ones(len(rows), dtype=float)
    for item, marginal in enumerate(prior.marginals):
        probs *= np.asarray(marginal, dtype=float)[rows[:, item]]
    _LOGGER.debug(f"enumerated {len(rows)} realizations")
    return RealizationTable(rows, probs)


def enumerate_realizations(prior: Prior, cap: int | None = None) -> List[Tuple[Realization, float]]:
    """All positive-probability realizations with exact probabilities."""
    table = realization_table(prior, cap)
    total = float(table.probs.sum())
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise ModelError(f"enumerated probabilities sum to {total!r}")
    return table.realizations()
