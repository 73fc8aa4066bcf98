"""
Validation of user-supplied values: instance documents and experiment parameters.
"""
import math
from typing import Any, List, Mapping, Sequence

from pasm.types.errors import ConfigurationError, InstanceValidationError
from pasm.types.model import PROBABILITY_TOLERANCE
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)

MAX_ALPHA_GRID = 101


def validate_alpha(alpha: float) -> None:
    if not isinstance(alpha, (int, float)) or math.isnan(alpha) or not 0.0 <= alpha <= 1.0:
        raise ConfigurationError(f"alpha must lie in [0, 1], got {alpha!r}")


def parse_alpha_grid(text: str) -> List[float]:
    """'0,0.25,0.5' -> [0.0, 0.25, 0.5]; duplicates are dropped, order is kept."""
    grid: List[float] = []
    for part in text.split(","):
        part = part.strip()
        if not part:
            continue
        try:
            alpha = float(part)
        except ValueError as e:
            raise ConfigurationError(f"alpha grid entry {part!r} is not a number") from e
        validate_alpha(alpha)
        if alpha not in grid:
            grid.append(alpha)
    if not grid:
        raise ConfigurationError("alpha grid is empty")
    if len(grid) > MAX_ALPHA_GRID:
        raise ConfigurationError(f"alpha grid has {len(grid)} values, at most {MAX_ALPHA_GRID} are allowed")
    return grid


def validate_trials(trials: int) -> None:
    if trials < 1:
        raise ConfigurationError(f"trials must be at least 1, got {trials}")


def validate_max_batches(max_batches: int | None) -> None:
    if max_batches is not None and max_batches < 1:
        raise ConfigurationError(f"--max-batches must be at least 1, got {max_batches}")


def validate_probabilities(probs: Sequence[float], field_path: str) -> None:
    if any(p < 0 for p in probs):
        raise InstanceValidationError(field_path, "probabilities must be nonnegative")
    total = math.fsum(probs)
    if abs(total - 1.0) > PROBABILITY_TOLERANCE:
        raise InstanceValidationError(field_path, f"probabilities sum to {total:.12g}, expected 1")


def validate_costs(costs: Sequence[float], n: int, require_positive: bool = False) -> None:
    if len(costs) != n:
        raise InstanceValidationError("costs", f"expected {n} costs, got {len(costs)}")
    for e, cost in enumerate(costs):
        if cost < 0 or (require_positive and cost <= 0):
            raise InstanceValidationError(f"costs[{e}]", f"cost {cost} must be {'positive' if require_positive else 'nonnegative'}")


def validate_states(states: Any, n: int) -> List[int]:
    """Number of states per item from an integer (shared) or a per-item list."""
    if isinstance(states, int):
        return [states] * n
    if len(states) != n:
        raise InstanceValidationError("states", f"expected {n} entries, got {len(states)}")
    return list(states)


def validate_prior(prior: Mapping[str, Any], n: int, states: Sequence[int]) -> None:
    if prior["kind"] == "independent":
        probs = prior["probs"]
        if len(probs) != n:
            raise InstanceValidationError("prior.probs", f"expected {n} item distributions, got {len(probs)}")
        for e, item_probs in enumerate(probs):
            if len(item_probs) != states[e]:
                raise InstanceValidationError(f"prior.probs[{e}]", f"expected {states[e]} probabilities")
            validate_probabilities(item_probs, "prior")
        return

    rows = prior["rows"]
    for index, row in enumerate(rows):
        phi = row["phi"]
        if len(phi) != n:
            raise InstanceValidationError(f"prior.rows[{index}].phi", f"expected {n} states, got {len(phi)}")
        for e, state in enumerate(phi):
            if state >= states[e]:
                raise InstanceValidationError(f"prior.rows[{index}].phi[{e}]", f"state {state} is illegal for item {e}")
    if len({tuple(row["phi"]) for row in rows}) != len(rows):
        raise InstanceValidationError("prior.rows", "a realization is listed more than once")
    validate_probabilities([row["p"] for row in rows], "prior")


def validate_utility(utility: Mapping[str, Any], n: int, states: Sequence[int]) -> None:
    kind = utility["kind"]
    if kind in ("weighted_coverage", "coverage_penalty"):
        covers, m = utility["covers"], len(utility["weights"])
        if len(covers) != n:
            raise InstanceValidationError("utility.covers", f"expected {n} items, got {len(covers)}")
        for e, per_state in enumerate(covers):
            if len(per_state) != states[e]:
                raise InstanceValidationError(f"utility.covers[{e}]", f"expected {states[e]} states, got {len(per_state)}")
            for s, elements in enumerate(per_state):
                if any(j >= m for j in elements):
                    raise InstanceValidationError(f"utility.covers[{e}][{s}]", f"elements must lie in 0..{m - 1}")
        if kind == "coverage_penalty" and len(utility["penalties"]) != n:
            raise InstanceValidationError("utility.penalties", f"expected {n} penalties")
    elif kind == "version_space":
        for h, hypothesis in enumerate(utility["hypotheses"]):
            if len(hypothesis["answers"]) != n:
                raise InstanceValidationError(f"utility.hypotheses[{h}].answers", f"expected {n} answers")
    elif kind == "tabular":
        for index, entry in enumerate(utility["entries"]):
            if any(e >= n for e in entry["set"]):
                raise InstanceValidationError(f"utility.entries[{index}].set", f"items must lie in 0..{n - 1}")
            if entry.get("phi") is not None and len(entry["phi"]) != n:
                raise InstanceValidationError(f"utility.entries[{index}].phi", f"expected {n} states")
    _LOGGER.debug(f"validated {kind} utility over {n} items")
