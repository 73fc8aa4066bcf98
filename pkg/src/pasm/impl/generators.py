"""
Seeded random instance families for experiments and tests.
"""
import dataclasses
from typing import Any, Callable, Dict, Mapping, Optional, Tuple

import numpy as np

from pasm.impl.utility import CoverageWithPenalty, VersionSpaceReduction, WeightedCoverage
from pasm.types.errors import ConfigurationError, UnknownFamilyError
from pasm.types.model import CostFunction, ExplicitPrior, IndependentPrior, Instance, Realization, StateSpace
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

MAX_WEIGHT = 9
MAX_KNAPSACK_COST = 3


def _costs(rng: np.random.Generator, n: int, params: Mapping[str, Any]) -> CostFunction:
    if params.get("knapsack"):
        return CostFunction(tuple(float(c) for c in rng.integers(1, MAX_KNAPSACK_COST + 1, size=n)))
    return CostFunction.unit(n)


def _coverage_parts(
    rng: np.random.Generator, n: int, states: int, params: Mapping[str, Any]
) -> Tuple[Tuple[float, ...], Tuple[Tuple[frozenset, ...], ...], IndependentPrior]:
    elements = int(params.get("elements", 2 * n))
    weights = tuple(float(w) for w in rng.integers(1, MAX_WEIGHT + 1, size=elements))
    covers = []
    for _ in range(n):
        per_state = []
        for _ in range(states):
            size = int(rng.integers(1, max(2, elements // 2) + 1))
            per_state.append(frozenset(int(j) for j in rng.choice(elements, size=size, replace=False)))
        covers.append(tuple(per_state))
    marginals = tuple(tuple(float(p) for p in rng.dirichlet(np.ones(states))) for _ in range(n))
    return weights, tuple(covers), IndependentPrior(marginals)


def _weighted_coverage(rng: np.random.Generator, n: int, states: int, params: Mapping[str, Any]) -> Instance:
    weights, covers, prior = _coverage_parts(rng, n, states, params)
    return Instance(
        n=n,
        costs=_costs(rng, n, params),
        states=StateSpace.shared(n, states),
        prior=prior,
        utility=WeightedCoverage(weights, covers),
    )


def _coverage_penalty(rng: np.random.Generator, n: int, states: int, params: Mapping[str, Any]) -> Instance:
    weights, covers, prior = _coverage_parts(rng, n, states, params)
    expected = [
        sum(p * sum(weights[j] for j in covers[e][s]) for s, p in enumerate(prior.marginals[e])) for e in range(n)
    ]
    penalties = [round(float(rng.uniform(0.0, 0.5)) * expected[e], 6) for e in range(n)]
    # one item costs more than it can ever be expected to cover
    witness = int(rng.integers(n))
    penalties[witness] = round(expected[witness] + 1.0, 6)
    return Instance(
        n=n,
        costs=_costs(rng, n, params),
        states=StateSpace.shared(n, states),
        prior=prior,
        utility=CoverageWithPenalty(weights, covers, tuple(penalties)),
    )


def _version_space(rng: np.random.Generator, n: int, states: int, params: Mapping[str, Any]) -> Instance:
    space = states**n
    hypotheses = min(int(params.get("hypotheses", 2 * n)), space)
    codes = rng.choice(space, size=hypotheses, replace=False)
    answers = tuple(tuple(int(code) // states**e % states for e in range(n)) for code in codes)
    masses = tuple(float(q) for q in rng.dirichlet(np.ones(hypotheses)))
    return Instance(
        n=n,
        costs=_costs(rng, n, params),
        states=StateSpace.shared(n, states),
        prior=ExplicitPrior(tuple((Realization(a), q) for a, q in zip(answers, masses))),
        utility=VersionSpaceReduction(answers, masses),
    )


FAMILIES: Dict[str, Callable[[np.random.Generator, int, int, Mapping[str, Any]], Instance]] = {
    "weighted_coverage": _weighted_coverage,
    "coverage_penalty": _coverage_penalty,
    "version_space": _version_space,
}


def generate_instance(
    family: str, n: int, states: int, seed: int, params: Optional[Mapping[str, Any]] = None
) -> Instance:
    """Same (family, n, states, seed, params) always gives the same instance.

    params: `elements` (coverage universe size), `hypotheses` (version space
    size) and `knapsack` (integer costs 1..3 instead of unit costs).
    """
    if family not in FAMILIES:
        raise UnknownFamilyError(f"unknown family {family!r}, expected one of {', '.join(FAMILIES)}")
    if n < 1 or states < 1:
        raise ConfigurationError(f"need n >= 1 and states >= 1, got n={n}, states={states}")
    rng = np.random.default_rng(seed)
    instance = FAMILIES[family](rng, n, states, params or {})
    name = f"{family}-n{n}-s{states}-seed{seed}"
    _LOGGER.debug(f"generated {name}")
    return dataclasses.replace(instance, name=name)
