from __future__ import annotations

import dataclasses
import enum
from typing import Tuple

from pasm.types.model import Observation


class TerminationReason(str, enum.Enum):
    BUDGET_EXHAUSTED = "BudgetExhausted"
    CARDINALITY_REACHED = "CardinalityReached"
    NO_POSITIVE_DENSITY = "NoPositiveDensity"
    GROUND_EXHAUSTED = "GroundExhausted"
    TRUNCATED_AT_T = "TruncatedAtT"
    LEVEL_TRUNCATED = "LevelTruncated"
    COMPLETED = "Completed"


@dataclasses.dataclass(frozen=True)
class BatchRecord:
    items: Tuple[int, ...]
    observations: Tuple[Observation, ...] = ()


@dataclasses.dataclass(frozen=True)
class DecisionRecord:
    """One selection and the comparison that placed it.

    For greedy selections `score` is the summed top-k marginal on top of the
    current set and `reference` the same sum on top of the observed domain.
    For density selections `score` is the chosen item's density and
    `reference` the batch-opening item's density. Both are measured under
    the information state the item was actually selected with.
    """

    step: int
    batch: int
    item: int
    information_domain: Tuple[int, ...]
    score: float = 0.0
    reference: float = 0.0
    opened_batch: bool = False


@dataclasses.dataclass(frozen=True)
class RunTrace:
    batches: Tuple[BatchRecord, ...]
    utility: float
    termination_reason: TerminationReason
    decisions: Tuple[DecisionRecord, ...] = ()
    policy: str = ""

    @property
    def selected(self) -> Tuple[int, ...]:
        return tuple(e for batch in self.batches for e in batch.items)

    @property
    def selected_set(self) -> frozenset[int]:
        return frozenset(self.selected)

    @property
    def batch_count(self) -> int:
        return len(self.batches)

    def real_items(self, n: int) -> Tuple[int, ...]:
        return tuple(e for e in self.selected if e < n)

    def __repr__(self) -> str:
        batches = " | ".join(",".join(str(e) for e in batch.items) for batch in self.batches)
        return (
            f"RunTrace(\n"
            f"    policy = {self.policy}\n"
            f"    batches = [{batches}]\n"
            f"    utility = {self.utility}\n"
            f"    termination_reason = {self.termination_reason.value}\n"
            f")"
        )
