from typing import Any, Dict

import jsonschema

from pasm.types.errors import InstanceValidationError

_PROBABILITIES = {"type": "array", "items": {"type": "number", "minimum": 0}, "minItems": 1}
_ITEM_SET = {"type": "array", "items": {"type": "integer", "minimum": 0}, "uniqueItems": True}
_STATE_VECTOR = {"type": "array", "items": {"type": "integer", "minimum": 0}}

INSTANCE_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["n", "costs", "states", "prior", "utility"],
    "additionalProperties": False,
    "properties": {
        "name": {"type": "string"},
        "n": {"type": "integer", "minimum": 1},
        "costs": {"type": "array", "items": {"type": "number", "minimum": 0}},
        "states": {
            "oneOf": [
                {"type": "integer", "minimum": 1},
                {"type": "array", "items": {"type": "integer", "minimum": 1}},
            ]
        },
        "prior": {
            "type": "object",
            "required": ["kind"],
            "oneOf": [
                {
                    "properties": {"kind": {"const": "independent"}, "probs": {"type": "array", "items": _PROBABILITIES}},
                    "required": ["kind", "probs"],
                    "additionalProperties": False,
                },
                {
                    "properties": {
                        "kind": {"const": "explicit"},
                        "rows": {
                            "type": "array",
                            "minItems": 1,
                            "items": {
                                "type": "object",
                                "required": ["phi", "p"],
                                "additionalProperties": False,
                                "properties": {"phi": _STATE_VECTOR, "p": {"type": "number", "minimum": 0}},
                            },
                        },
                    },
                    "required": ["kind", "rows"],
                    "additionalProperties": False,
                },
            ],
        },
        "utility": {
            "type": "object",
            "required": ["kind"],
            "properties": {
                "kind": {"enum": ["weighted_coverage", "coverage_penalty", "version_space", "tabular"]},
                "weights": {"type": "array", "items": {"type": "number", "minimum": 0}},
                "covers": {"type": "array", "items": {"type": "array", "items": _ITEM_SET}},
                "penalties": {"type": "array", "items": {"type": "number", "minimum": 0}},
                "hypotheses": {
                    "type": "array",
                    "minItems": 1,
                    "items": {
                        "type": "object",
                        "required": ["answers", "mass"],
                        "additionalProperties": False,
                        "properties": {"answers": _STATE_VECTOR, "mass": {"type": "number", "minimum": 0}},
                    },
                },
                "entries": {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["set", "value"],
                        "additionalProperties": False,
                        "properties": {
                            "set": _ITEM_SET,
                            "phi": {"oneOf": [_STATE_VECTOR, {"type": "null"}]},
                            "value": {"type": "number"},
                        },
                    },
                },
                "default": {"type": ["number", "null"]},
            },
            "allOf": [
                {
                    "if": {"properties": {"kind": {"const": "weighted_coverage"}}},
                    "then": {"required": ["weights", "covers"]},
                },
                {
                    "if": {"properties": {"kind": {"const": "coverage_penalty"}}},
                    "then": {"required": ["weights", "covers", "penalties"]},
                },
                {"if": {"properties": {"kind": {"const": "version_space"}}}, "then": {"required": ["hypotheses"]}},
                {"if": {"properties": {"kind": {"const": "tabular"}}}, "then": {"required": ["entries"]}},
            ],
        },
    },
}


def validate_jsonschema_schema(schema: Dict[str, Any]):
    try:
        jsonschema.Draft7Validator.check_schema(schema)
    except jsonschema.SchemaError as e:
        raise jsonschema.SchemaError("Schema provided isn't a valid jsonschema") from e


def field_path(error: jsonschema.ValidationError) -> str:
    """`prior.probs[2]` style path of the offending field; `$` for the document itself."""
    path = ""
    for part in error.absolute_path:
        path += f"[{part}]" if isinstance(part, int) else (f".{part}" if path else str(part))
    return path or "$"


def validate_instance_document(document: Any) -> None:
    error = jsonschema.exceptions.best_match(jsonschema.Draft7Validator(INSTANCE_SCHEMA).iter_errors(document))
    if error is not None:
        raise InstanceValidationError(field_path(error), error.message)
