"""JSON schemas for the documents read and written by the command line."""

import json

import jsonschema

from .errors import SchemaError

SCHEMA_VERSION = "1.0"

RATIONAL = {"type": "string", "pattern": r"^-?[0-9]+(/[1-9][0-9]*)?$"}

QSERIES = {
    "type": "object",
    "required": ["valuation", "truncation", "coefficients"],
    "properties": {
        "valuation": {"type": "integer"},
        "truncation": {"type": "integer"},
        "coefficients": {"type": "array", "items": RATIONAL},
    },
}

ZUSERIES = {
    "type": "object",
    "required": ["valuation", "truncation", "coefficients"],
    "properties": {
        "valuation": {"type": "integer"},
        "truncation": {"type": "integer"},
        "coefficients": {
            "type": "array",
            "items": {
                "type": "array",
                "items": {
                    "type": "object",
                    "required": ["z", "u", "value"],
                    "properties": {
                        "z": {"type": "integer", "minimum": 0},
                        "u": {"type": "integer", "minimum": 0},
                        "value": RATIONAL,
                    },
                    "additionalProperties": False,
                },
            },
        },
    },
}

MONOMIALS = {
    "type": "object",
    "patternProperties": {r"^[0-9]+,[0-9]+$": RATIONAL},
    "additionalProperties": False,
}

OPERATOR = {
    "type": "object",
    "required": ["weight", "depth_bound", "coeffs"],
    "properties": {
        "weight": {"type": "integer"},
        "depth_bound": {"type": "integer", "minimum": 0},
        "coeffs": {
            "type": "array",
            "minItems": 2,
            "items": {
                "type": "object",
                "required": ["weight", "monomials"],
                "properties": {
                    "weight": {"type": "integer", "minimum": 0},
                    "monomials": MONOMIALS,
                },
                "additionalProperties": False,
            },
        },
        "normalized": {"type": "boolean"},
    },
    "additionalProperties": False,
}

QUASIFORM = {
    "type": "object",
    "required": ["weight", "depth", "polynomial"],
    "properties": {
        "weight": {"type": "integer"},
        "depth": {"type": "integer"},
        "polynomial": {
            "type": "object",
            "patternProperties": {r"^[0-9]+,[0-9]+,[0-9]+$": RATIONAL},
            "additionalProperties": False,
        },
        "components": {"type": "array", "items": QSERIES},
        "expansion": QSERIES,
    },
}

DENOMINATOR_REPORT = {
    "type": "array",
    "items": {
        "type": "object",
        "required": ["weight", "primes", "pass"],
        "properties": {
            "weight": {"type": "integer"},
            "primes": {"type": "array", "items": {"type": "integer"}},
            "pass": {"type": "boolean"},
        },
        "additionalProperties": False,
    },
}

ENVELOPE = {
    "type": "object",
    "required": ["schema_version", "command", "payload", "exactness"],
    "properties": {
        "schema_version": {"const": SCHEMA_VERSION},
        "command": {
            "type": "object",
            "required": ["name", "args"],
            "properties": {"name": {"type": "string"}, "args": {"type": "object"}},
        },
        "payload": {},
        "exactness": {
            "type": "object",
            "required": ["exact"],
            "properties": {"exact": {"type": "boolean"}, "truncation": {"type": ["integer", "null"]},
                           "note": {"type": "string"}},
        },
    },
    "additionalProperties": False,
}

ERROR = {
    "type": "object",
    "required": ["error", "message"],
    "properties": {"error": {"type": "string"}, "message": {"type": "string"}, "details": {"type": "object"}},
}

PAYLOADS = {
    "expand": {
        "type": "object",
        "required": ["series", "weight", "expansion"],
        "properties": {"series": {"type": "string"}, "weight": {"type": "integer"}, "expansion": QSERIES},
    },
    "extremal": QUASIFORM,
    "balanced": {
        "type": "object",
        "required": ["form", "report"],
        "properties": {"form": QUASIFORM, "report": {"type": "object"}},
    },
    "solve": {
        "type": "object",
        "required": ["operator", "indicial_polynomial"],
        "properties": {
            "operator": OPERATOR,
            "indicial_polynomial": {"type": "array", "items": RATIONAL},
            "exponents": {"type": "array", "items": {"type": "integer"}},
            "solution": QSERIES,
            "fundamental_system": {
                "type": "object",
                "required": ["exponents", "z_degrees", "solutions"],
                "properties": {"solutions": {"type": "array", "items": ZUSERIES}},
            },
        },
    },
    "mde-from-exponents": OPERATOR,
    "check": DENOMINATOR_REPORT,
}


def validate(document, schema, what="document"):
    """Raise SchemaError naming the offending field."""
    try:
        jsonschema.validate(document, schema)
    except jsonschema.ValidationError as exc:
        path = "/".join(str(p) for p in exc.absolute_path) or "(root)"
        raise SchemaError("%s: %s at %s" % (what, exc.message, path), field=path)


def validate_envelope(document):
    validate(document, ENVELOPE, "envelope")
    validate(document["payload"], PAYLOADS[document["command"]["name"]], "payload")


def load_operator_text(text, source="<operator>"):
    """Parse and validate an operator description; returns the decoded object.

    Accepts a bare operator or the envelope written by mde-from-exponents.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError("%s: invalid JSON at line %d, column %d: %s" % (source, exc.lineno, exc.colno, exc.msg),
                          line=exc.lineno, column=exc.colno)
    if isinstance(obj, dict) and "payload" in obj and "schema_version" in obj:
        validate_envelope(obj)
        obj = obj["payload"]
    validate(obj, OPERATOR, source)
    return obj
