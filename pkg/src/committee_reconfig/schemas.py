"""JSON schemas for every machine-readable CLI output."""

from __future__ import annotations

import jsonschema

FRACTION = {"type": "string", "pattern": r"^-?[0-9]+/[0-9]+$"}
INDEX = {"type": "integer", "minimum": 0}
COMMITTEE = {"type": "array", "items": INDEX}

WITNESS = {
    "type": "object",
    "required": ["axiom", "alpha", "ell", "candidates", "voters"],
    "properties": {
        "axiom": {"enum": ["jr", "ejr", "ejr+"]},
        "alpha": FRACTION,
        "ell": {"type": "integer", "minimum": 1},
        "candidates": COMMITTEE,
        "voters": {"type": "array", "items": INDEX},
    },
    "additionalProperties": False,
}

CHECK = {
    "type": "object",
    "required": ["satisfied"],
    "properties": {"satisfied": {"type": "boolean"}, "witness": WITNESS},
    "additionalProperties": False,
    "if": {"properties": {"satisfied": {"const": False}}},
    "then": {"required": ["witness"]},
}

RULE = {
    "type": "object",
    "required": ["rule", "committee", "core", "payments", "trace"],
    "properties": {
        "rule": {"enum": ["gjcr", "mes", "pav", "ccav", "seqccav", "greedyejr", "seqphragmen"]},
        "committee": COMMITTEE,
        "core": COMMITTEE,
        "payments": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "array",
                    "items": {
                        "type": "object",
                        "required": ["voter", "candidate", "amount"],
                        "properties": {"voter": INDEX, "candidate": INDEX, "amount": FRACTION},
                        "additionalProperties": False,
                    },
                },
            ]
        },
        "trace": {
            "type": "array",
            "items": {
                "type": "object",
                "anyOf": [
                    {"required": ["candidate"]},
                    {"required": ["candidates"]},
                    {"required": ["optimum"]},
                ],
            },
        },
    },
    "additionalProperties": False,
}

STEP = {
    "type": "object",
    "required": ["committee", "ok", "witness"],
    "properties": {
        "committee": COMMITTEE,
        "ok": {"type": "boolean"},
        "witness": {"oneOf": [{"type": "null"}, WITNESS]},
    },
    "additionalProperties": False,
}

PATH = {
    "type": "object",
    "required": ["method", "connected", "predicate"],
    "properties": {
        "method": {"enum": ["bfs", "two-jr", "four-ejr", "affordable", "rules", "ci", "vi"]},
        "connected": {"type": "boolean"},
        "predicate": {"type": "string"},
        "length": {"type": "integer", "minimum": 0},
        "steps": {"type": "array", "items": STEP, "minItems": 1},
    },
    "additionalProperties": False,
    "if": {"properties": {"connected": {"const": True}}},
    "then": {"required": ["length", "steps"]},
}

ISOLATION = {
    "type": "object",
    "required": ["committee", "predicate", "max_radius", "radius"],
    "properties": {
        "committee": COMMITTEE,
        "predicate": {"type": "string"},
        "max_radius": {"type": "integer", "minimum": 0},
        "radius": {"oneOf": [{"type": "integer", "minimum": 0}, {"const": "not isolated"}]},
        "neighbor": {
            "type": "object",
            "required": ["committee", "method"],
            "properties": {
                "committee": {"oneOf": [{"type": "null"}, COMMITTEE]},
                "method": {"type": "string"},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

DOMAIN = {
    "type": "object",
    "required": ["kind", "ordering"],
    "properties": {
        "kind": {"enum": ["ci", "vi"]},
        "ordering": {"oneOf": [{"const": "absent"}, {"type": "array", "items": INDEX}]},
    },
    "additionalProperties": False,
}

GEN = {
    "type": "object",
    "required": ["family", "params", "n", "m", "k", "committees"],
    "properties": {
        "family": {"enum": ["isolated", "tightness", "grid", "fixture", "random"]},
        "params": {"type": "object"},
        "n": INDEX,
        "m": INDEX,
        "k": INDEX,
        "instance": {"type": "string"},
        "sidecar": {"type": "string"},
        "committees": {
            "type": "object",
            "additionalProperties": {
                "oneOf": [COMMITTEE, {"type": "array", "items": COMMITTEE}, FRACTION]
            },
        },
        "automorphism_classes": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["removed", "added", "covers_removed", "committee"],
                "properties": {
                    "removed": INDEX,
                    "added": INDEX,
                    "covers_removed": {"type": "boolean"},
                    "committee": COMMITTEE,
                },
                "additionalProperties": False,
            },
        },
    },
    "additionalProperties": False,
}

REDUCE = {
    "type": "object",
    "required": ["n", "m", "k", "W1", "W2", "instance"],
    "properties": {
        "n": INDEX,
        "m": INDEX,
        "k": INDEX,
        "W1": COMMITTEE,
        "W2": COMMITTEE,
        "instance": {"type": "string"},
    },
    "additionalProperties": False,
}

GRAPH = {
    "type": "object",
    "required": ["predicate", "nodes", "edges"],
    "properties": {
        "predicate": {"type": "string"},
        "nodes": {"type": "array", "items": COMMITTEE},
        "edges": {"type": "array", "items": {"type": "array", "items": INDEX, "minItems": 2, "maxItems": 2}},
    },
    "additionalProperties": False,
}

ERROR = {
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": {"enum": ["usage", "budget"]}, "message": {"type": "string"}},
    "additionalProperties": False,
}

SCHEMAS = {
    "check": CHECK,
    "rule": RULE,
    "path": PATH,
    "isolation": ISOLATION,
    "domain": DOMAIN,
    "gen": GEN,
    "reduce": REDUCE,
    "graph": GRAPH,
    "error": ERROR,
}


def _floats(doc, where: str = "$"):
    if isinstance(doc, float):
        yield where
    elif isinstance(doc, dict):
        for key, val in doc.items():
            yield from _floats(val, f"{where}.{key}")
    elif isinstance(doc, list):
        for i, val in enumerate(doc):
            yield from _floats(val, f"{where}[{i}]")


def validate(kind: str, doc) -> None:
    """Raise ``jsonschema.ValidationError`` if ``doc`` breaks the ``kind``
    schema or carries a floating-point number anywhere."""
    jsonschema.validate(doc, SCHEMAS[kind])
    bad = next(_floats(doc), None)
    if bad is not None:
        raise jsonschema.ValidationError(f"float at {bad}; fractions must be 'p/q' strings")
