"""
JSON Instance Adapter - reads and writes instance documents

Documents are validated against the Draft 7 instance schema first and then
semantically (probability sums, shapes, costs). Every failure surfaces as an
InstanceValidationError naming the offending field.
"""
import json
from pathlib import Path
from typing import Any, Dict

from pasm.domain.ports import InstanceSourcePort
from pasm.impl.inputs import validate_costs, validate_prior, validate_states, validate_utility
from pasm.impl.utility import CoverageWithPenalty, Tabular, UtilityFunction, VersionSpaceReduction, WeightedCoverage
from pasm.types.errors import InstanceValidationError, ModelError
from pasm.types.model import CostFunction, ExplicitPrior, IndependentPrior, Instance, Prior, Realization, StateSpace
from pasm.util.jsonschema import validate_instance_document
from pasm.util.logging import setup_logging

_LOGGER = setup_logging(__name__)


def _prior_from_dict(prior: Dict[str, Any]) -> Prior:
    if prior["kind"] == "independent":
        return IndependentPrior(tuple(tuple(float(p) for p in probs) for probs in prior["probs"]))
    return ExplicitPrior(tuple((Realization(tuple(row["phi"])), float(row["p"])) for row in prior["rows"]))


def _utility_from_dict(utility: Dict[str, Any], n: int) -> UtilityFunction:
    kind = utility["kind"]
    if kind in ("weighted_coverage", "coverage_penalty"):
        weights = tuple(float(w) for w in utility["weights"])
        covers = tuple(tuple(frozenset(elements) for elements in per_state) for per_state in utility["covers"])
        if kind == "coverage_penalty":
            return CoverageWithPenalty(weights, covers, tuple(float(p) for p in utility["penalties"]))
        return WeightedCoverage(weights, covers)
    if kind == "version_space":
        hypotheses = utility["hypotheses"]
        return VersionSpaceReduction(
            tuple(tuple(h["answers"]) for h in hypotheses), tuple(float(h["mass"]) for h in hypotheses)
        )
    entries = [(entry["set"], entry.get("phi"), entry["value"]) for entry in utility["entries"]]
    default = utility.get("default")
    return Tabular.from_entries(n, entries, None if default is None else float(default))


def instance_from_dict(document: Any, name: str = "instance", require_positive_costs: bool = False) -> Instance:
    validate_instance_document(document)
    n = document["n"]
    states = validate_states(document["states"], n)
    validate_costs(document["costs"], n, require_positive_costs)
    validate_prior(document["prior"], n, states)
    validate_utility(document["utility"], n, states)
    try:
        return Instance(
            n=n,
            costs=CostFunction(tuple(float(c) for c in document["costs"])),
            states=StateSpace(tuple(tuple(range(s)) for s in states)),
            prior=_prior_from_dict(document["prior"]),
            utility=_utility_from_dict(document["utility"], n),
            name=document.get("name", name),
        )
    except ModelError as e:
        raise InstanceValidationError("$", e.message) from e


def _utility_to_dict(utility: UtilityFunction) -> Dict[str, Any]:
    if isinstance(utility, WeightedCoverage):
        document: Dict[str, Any] = {
            "kind": utility.kind,
            "weights": list(utility.weights),
            "covers": [[sorted(elements) for elements in per_state] for per_state in utility.covers],
        }
        if isinstance(utility, CoverageWithPenalty):
            document["penalties"] = list(utility.penalties)
        return document
    if isinstance(utility, VersionSpaceReduction):
        return {
            "kind": utility.kind,
            "hypotheses": [{"answers": list(a), "mass": q} for a, q in zip(utility.answers, utility.masses)],
        }
    if isinstance(utility, Tabular):
        entries = [
            {"set": sorted(items), "phi": None if phi is None else list(phi), "value": value}
            for (items, phi), value in sorted(
                utility.values.items(), key=lambda kv: (sorted(kv[0][0]), kv[0][1] is not None, kv[0][1] or ())
            )
        ]
        return {"kind": utility.kind, "entries": entries, "default": utility.default}
    raise ModelError(f"cannot serialize utility {type(utility).__name__}")


def instance_to_dict(instance: Instance) -> Dict[str, Any]:
    if isinstance(instance.prior, IndependentPrior):
        prior: Dict[str, Any] = {"kind": "independent", "probs": [list(p) for p in instance.prior.marginals]}
    else:
        prior = {"kind": "explicit", "rows": [{"phi": list(phi.states), "p": p} for phi, p in instance.prior.rows]}
    return {
        "name": instance.name,
        "n": instance.n,
        "costs": list(instance.costs.costs),
        "states": [len(labels) for labels in instance.states.states_per_item],
        "prior": prior,
        "utility": _utility_to_dict(instance.utility),
    }


def parse_instance(path: str | Path, require_positive_costs: bool = False) -> Instance:
    path = Path(path)
    try:
        document = json.loads(path.read_text())
    except FileNotFoundError as e:
        raise InstanceValidationError("$", f"instance file {path} does not exist") from e
    except json.JSONDecodeError as e:
        raise InstanceValidationError("$", f"{path} is not valid JSON: {e.msg}") from e
    instance = instance_from_dict(document, name=path.stem, require_positive_costs=require_positive_costs)
    _LOGGER.debug(f"parsed {instance.name}: n={instance.n}, {instance.utility.kind}")
    return instance


def emit_instance(instance: Instance, path: str | Path) -> str:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(instance_to_dict(instance), indent=2) + "\n")
    return str(path)


class JSONInstanceAdapter(InstanceSourcePort):
    """Instance source backed by JSON files"""

    def __init__(self, require_positive_costs: bool = False):
        self.require_positive_costs = require_positive_costs

    def load_instance(self, source: str) -> Instance:
        return parse_instance(source, self.require_positive_costs)
