from __future__ import annotations

import dataclasses
import enum
from typing import Any, Dict, Optional, Tuple

from pasm.types.model import PartialRealization


class EvaluationMethod(str, enum.Enum):
    EXACT = "exact"
    MONTE_CARLO = "monte_carlo"


@dataclasses.dataclass(frozen=True)
class EvalReport:
    expected_utility: float
    stderr: float
    trials: int
    mean_batches: float
    max_batches: int
    method: EvaluationMethod


@dataclasses.dataclass(frozen=True)
class Witness:
    psi: PartialRealization
    psi_prime: Optional[PartialRealization] = None
    item: Optional[int] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "psi": [list(o) for o in self.psi.observations],
            "psi_prime": None if self.psi_prime is None else [list(o) for o in self.psi_prime.observations],
            "item": self.item,
        }


@dataclasses.dataclass(frozen=True)
class CheckerReport:
    property_name: str
    holds: bool
    worst_violation: float
    witness: Optional[Witness] = None
    tolerance: float = 1e-9
    checked: int = 0

    def to_dict(self) -> Dict[str, Any]:
        return {
            "property": self.property_name,
            "holds": self.holds,
            "worst_violation": self.worst_violation,
            "tolerance": self.tolerance,
            "checked": self.checked,
            "witness": None if self.witness is None else self.witness.to_dict(),
        }


RESULT_COLUMNS: Tuple[str, ...] = (
    "instance_id",
    "policy",
    "alpha",
    "constraint",
    "method",
    "expected_utility",
    "stderr",
    "mean_batches",
    "max_batches",
    "oracle_value",
    "ratio",
    "theorem_bound",
    "bound_satisfied",
)


@dataclasses.dataclass(frozen=True)
class ResultRow:
    instance_id: str
    policy: str
    alpha: float
    constraint: str
    method: str
    expected_utility: float
    stderr: float
    mean_batches: float
    max_batches: int
    oracle_value: Optional[float]
    ratio: Optional[float]
    theorem_bound: Optional[float]
    bound_satisfied: bool

    def as_record(self) -> Dict[str, Any]:
        return {column: getattr(self, column) for column in RESULT_COLUMNS}
