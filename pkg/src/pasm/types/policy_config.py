from __future__ import annotations

import dataclasses
from typing import Union

from pasm.impl.marginals import MarginalMode
from pasm.types.errors import ConfigurationError
from pasm.types.model import Instance


@dataclasses.dataclass(frozen=True)
class Cardinality:
    k: int

    def __str__(self) -> str:
        return f"k={self.k}"


@dataclasses.dataclass(frozen=True)
class Knapsack:
    budget: float

    def __str__(self) -> str:
        return f"B={self.budget:g}"


Constraint = Union[Cardinality, Knapsack]


@dataclasses.dataclass(frozen=True)
class PolicyConfig:
    """alpha is the degree of adaptivity: 0 selects everything in one batch, 1 is fully adaptive."""

    alpha: float
    constraint: Constraint
    marginal_mode: MarginalMode | None = None
    seed: int = 0

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ConfigurationError(f"alpha must lie in [0, 1], got {self.alpha}")
        if isinstance(self.constraint, Cardinality) and self.constraint.k < 1:
            raise ConfigurationError(f"cardinality k must be at least 1, got {self.constraint.k}")
        if isinstance(self.constraint, Knapsack) and self.constraint.budget <= 0:
            raise ConfigurationError(f"budget must be positive, got {self.constraint.budget}")

    def validate_for(self, instance: Instance) -> None:
        if isinstance(self.constraint, Knapsack):
            instance.require_positive_costs()
            if self.constraint.budget < instance.costs.c_min:
                raise ConfigurationError(
                    f"budget {self.constraint.budget} is below the cheapest item cost {instance.costs.c_min}"
                )

    @property
    def cardinality(self) -> int:
        if not isinstance(self.constraint, Cardinality):
            raise ConfigurationError("this policy needs a cardinality constraint")
        return self.constraint.k

    @property
    def budget(self) -> float:
        if not isinstance(self.constraint, Knapsack):
            raise ConfigurationError("this policy needs a knapsack constraint")
        return self.constraint.budget


@dataclasses.dataclass(frozen=True)
class MixtureWeights:
    p_singleton: float
    p_density: float

    @classmethod
    def for_alpha(cls, alpha: float) -> "MixtureWeights":
        if not 0.0 < alpha <= 1.0:
            raise ConfigurationError(f"mixture weights need alpha in (0, 1], got {alpha}")
        denominator = 3.0 + 2.0 / alpha
        return cls(p_singleton=(1.0 / alpha) / denominator, p_density=(3.0 + 1.0 / alpha) / denominator)
