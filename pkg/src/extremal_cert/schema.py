"""JSON Schemas (draft 2020-12) for the files written by the command line tool.

Every report file has the shape {"schema": <id>, "result": {...}}.  Run
metadata (timestamps, elapsed times, versions) is written separately to
``metadata.json`` so that identical configurations give byte-identical
reports.
"""

from __future__ import annotations

_INTERVAL = {
    "type": "object",
    "required": ["lo", "hi", "lo_rounding", "hi_rounding"],
    "properties": {
        "lo": {"type": "string"},
        "hi": {"type": "string"},
        "lo_rounding": {"const": "toward -inf"},
        "hi_rounding": {"const": "toward +inf"},
    },
    "additionalProperties": False,
}

_STATUS = {"enum": ["certified", "falsified", "inconclusive"]}

_CERTIFICATE = {
    "type": "object",
    "required": ["claim", "domain", "status", "subdivisions", "leaves", "max_gap", "witness", "notes", "parts"],
    "properties": {
        "claim": {"type": "string"},
        "domain": {"$ref": "#/$defs/interval"},
        "status": _STATUS,
        "subdivisions": {"type": "integer", "minimum": 0},
        "leaves": {"type": "integer", "minimum": 0},
        "max_gap": {"type": ["string", "null"]},
        "witness": {"type": ["string", "null"]},
        "notes": {"type": "array", "items": {"type": "string"}},
        "parts": {"type": "array", "items": {"$ref": "#/$defs/certificate"}},
    },
    "additionalProperties": False,
}

_BOUND = {
    "type": "object",
    "required": ["value", "argmax_box", "subdivisions", "depth", "converged"],
    "properties": {
        "value": {"$ref": "#/$defs/interval"},
        "argmax_box": {"$ref": "#/$defs/interval"},
        "subdivisions": {"type": "integer", "minimum": 0},
        "depth": {"type": "integer", "minimum": 0},
        "converged": {"type": "boolean"},
    },
    "additionalProperties": False,
}

_EXP_SCALED = {
    "type": "object",
    "required": ["coeff", "e_power", "approx"],
    "properties": {"coeff": {"type": "string"}, "e_power": {"type": "string"}, "approx": {"type": "string"}},
    "additionalProperties": False,
}

_DEFS = {
    "interval": _INTERVAL,
    "certificate": _CERTIFICATE,
    "bound": _BOUND,
    "exp_scaled": _EXP_SCALED,
}

DIMENSION_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "extremal-cert/dimension-report/1",
    "$defs": _DEFS,
    "type": "object",
    "required": ["schema", "result"],
    "properties": {
        "schema": {"const": "extremal-cert/dimension-report/1"},
        "result": {
            "type": "object",
            "required": [
                "N", "m", "route", "S_N", "I_N", "lambda_prime", "beta", "cond1", "cond2",
                "closed_form", "table_lambda", "table_beta", "margin", "verdict", "notes",
            ],
            "properties": {
                "N": {"type": "integer", "minimum": 13},
                "m": {"type": "string"},
                "route": {"enum": ["closed-form", "improved-hardy-rellich"]},
                "S_N": {"$ref": "#/$defs/bound"},
                "I_N": {"$ref": "#/$defs/bound"},
                "lambda_prime": {"$ref": "#/$defs/exp_scaled"},
                "beta": {"$ref": "#/$defs/exp_scaled"},
                "cond1": {"$ref": "#/$defs/certificate"},
                "cond2": {"$ref": "#/$defs/certificate"},
                "closed_form": {"type": ["boolean", "null"]},
                "table_lambda": {"type": ["number", "null"]},
                "table_beta": {"type": ["number", "null"]},
                "margin": {"type": "string"},
                "verdict": {"enum": ["SingularCertified", "Failed"]},
                "notes": {"type": "array", "items": {"type": "string"}},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

HR_REPORT = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "extremal-cert/hr-report/1",
    "$defs": _DEFS,
    "type": "object",
    "required": ["schema", "result"],
    "properties": {
        "schema": {"const": "extremal-cert/hr-report/1"},
        "result": {
            "type": "object",
            "required": ["N", "hr_constant_identity", "phi_identity", "bessel", "vr_over_v", "domination"],
            "properties": {
                "N": {"type": "integer", "minimum": 5},
                "hr_constant_identity": {"type": "boolean"},
                "phi_identity": {"type": "boolean"},
                "bessel": {"$ref": "#/$defs/certificate"},
                "vr_over_v": {"$ref": "#/$defs/certificate"},
                "domination": {"$ref": "#/$defs/certificate"},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

_POINT = {
    "type": "object",
    "required": ["lam", "u0", "u2_0", "sup_norm", "residual"],
    "properties": {k: {"type": "number"} for k in ("lam", "u0", "u2_0", "sup_norm", "residual")},
    "additionalProperties": False,
}

BRANCH_SUMMARY = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "$id": "extremal-cert/branch-summary/1",
    "type": "object",
    "required": ["schema", "result"],
    "properties": {
        "schema": {"const": "extremal-cert/branch-summary/1"},
        "result": {
            "type": "object",
            "required": [
                "N", "lambda_star", "lambda_max", "fold_kind", "fold_point", "converged", "n_points",
                "sup_at_center", "settings", "messages", "assumption", "bound", "bound_ok",
            ],
            "properties": {
                "N": {"type": "integer", "minimum": 1},
                "lambda_star": {"type": "number"},
                "lambda_max": {"type": "number"},
                "fold_kind": {"enum": ["turning-point", "asymptotic"]},
                "fold_point": {"oneOf": [{"type": "null"}, _POINT]},
                "converged": {"type": "boolean"},
                "n_points": {"type": "integer", "minimum": 1},
                "sup_at_center": {"type": "boolean"},
                "settings": {"type": "object"},
                "messages": {"type": "array", "items": {"type": "string"}},
                "assumption": {"type": "string"},
                "bound": {"type": ["string", "null"]},
                "bound_ok": {"type": ["boolean", "null"]},
            },
            "additionalProperties": False,
        },
    },
    "additionalProperties": False,
}

SUMMARY_COLUMNS = (
    "N", "m", "route", "table_lambda", "table_beta", "S_lo", "S_hi", "I_lo", "I_hi", "margin", "verdict",
)
