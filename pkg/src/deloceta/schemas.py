"""JSON schemas for the file formats, with field-path diagnostics."""

from __future__ import annotations

from dataclasses import dataclass
from typing import List

import jsonschema

RATIONAL_PATTERN = r"^-?\d+(/[1-9]\d*)?$"

GROUP_SCHEMA = {
    "$id": "group",
    "type": "object",
    "required": ["kind"],
    "properties": {"kind": {"enum": ["cyclic", "free_abelian", "heisenberg", "finite_table", "product"]}},
    "allOf": [
        {
            "if": {"properties": {"kind": {"const": "cyclic"}}},
            "then": {"required": ["kind", "k"], "properties": {"k": {"type": "integer", "minimum": 1}}},
        },
        {
            "if": {"properties": {"kind": {"const": "free_abelian"}}},
            "then": {"required": ["kind", "n"], "properties": {"n": {"type": "integer", "minimum": 1}}},
        },
        {
            "if": {"properties": {"kind": {"const": "finite_table"}}},
            "then": {
                "required": ["kind", "elements", "table"],
                "properties": {
                    "elements": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "table": {"type": "array", "items": {"type": "array", "items": {"type": "integer", "minimum": 0}}},
                },
            },
        },
        {
            "if": {"properties": {"kind": {"const": "product"}}},
            "then": {"required": ["kind", "factors"], "properties": {"factors": {"type": "array", "minItems": 1}}},
        },
    ],
}

COCHAIN_SCHEMA = {
    "$id": "cochain",
    "type": "object",
    "required": ["flavor", "degree", "group", "entries"],
    "properties": {
        "flavor": {
            "enum": ["cyclic", "cyclic-delocalized", "homogeneous-group", "relative", "relative-pre"]
        },
        "degree": {"type": "integer", "minimum": 0},
        "group": {"type": "object"},
        "class": {
            "type": "object",
            "required": ["gamma", "radius"],
            "properties": {"gamma": {"type": "string"}, "radius": {"type": "integer", "minimum": 0}},
        },
        "entries": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["tuple", "re"],
                "properties": {
                    "tuple": {"type": "array", "items": {"type": "string"}},
                    "re": {"type": "string", "pattern": RATIONAL_PATTERN},
                    "im": {"type": "string", "pattern": RATIONAL_PATTERN},
                },
            },
        },
        "witnesses": {"type": "object", "additionalProperties": {"type": "string"}},
    },
}

MODEL_SCHEMA = {
    "$id": "model",
    "type": "object",
    "required": ["group", "N", "D"],
    "properties": {
        "group": {"type": "object"},
        "N": {"type": "integer", "minimum": 1},
        "D": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["g", "matrix"],
                "properties": {
                    "g": {"type": "string"},
                    "matrix": {
                        "type": "array",
                        "items": {
                            "type": "array",
                            "items": {
                                "type": "array",
                                "items": {"type": "number"},
                                "minItems": 2,
                                "maxItems": 2,
                            },
                        },
                    },
                },
            },
        },
        "scalar": {"type": "array", "items": {"type": "number"}, "minItems": 2, "maxItems": 2},
    },
}

SPECTRUM_SCHEMA = {
    "$id": "spectrum",
    "type": "object",
    "required": ["classes", "modes"],
    "properties": {
        "classes": {"type": "array", "items": {"type": "string"}},
        "modes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["lambda", "mult"],
                "properties": {
                    "lambda": {"type": "number"},
                    "mult": {"type": "object"},
                },
            },
        },
        "metadata": {"type": "object"},
    },
}

PATH_SCHEMA = {
    "$id": "path",
    "type": "object",
    "required": ["grid", "samples"],
    "properties": {
        "grid": {"type": "array", "items": {"type": "number"}, "minItems": 2},
        "samples": {"type": "array"},
        "analytic": {"enum": ["none", "connecting", "rho"]},
    },
}

SCHEMAS = {
    "group": GROUP_SCHEMA,
    "cochain": COCHAIN_SCHEMA,
    "model": MODEL_SCHEMA,
    "spectrum": SPECTRUM_SCHEMA,
    "path": PATH_SCHEMA,
}


@dataclass
class Diagnostic:
    path: str
    message: str

    def __str__(self) -> str:
        return f"{self.path}: {self.message}"


def validate_document(doc, schema_name: str) -> List[Diagnostic]:
    """Empty list iff the document conforms; diagnostics carry field paths."""
    try:
        schema = SCHEMAS[schema_name]
    except KeyError:
        raise ValueError(f"unknown schema {schema_name!r}") from None
    validator = jsonschema.Draft202012Validator(schema)
    out = []
    for err in sorted(validator.iter_errors(doc), key=lambda e: list(e.absolute_path)):
        path = "$" + "".join(
            f"[{p}]" if isinstance(p, int) else f".{p}" for p in err.absolute_path
        )
        out.append(Diagnostic(path, err.message))
    return out
