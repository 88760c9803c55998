"""Experiment configuration: JSON schema, validation, and loading.

Configs are validated before any heavy computation; failures raise
ConfigError with the JSON path of the offending field.
"""

import json
from dataclasses import dataclass, field

import jsonschema

_CURVE_SCHEMA = {
    "type": "object",
    "properties": {
        "name": {
            "enum": ["circle", "ellipse", "trefoil", "fourball", "figure8", "hairtie"]
        },
        "radius": {"type": "number", "exclusiveMinimum": 0},
        "aspect": {"type": "number", "exclusiveMinimum": 0},
        "H": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "reparameterize": {"type": "boolean"},
    },
    "required": ["name"],
    "additionalProperties": False,
}

_RESOLUTION_SCHEMA = {
    "type": "object",
    "properties": {
        "n_s": {"type": "integer", "minimum": 5},
        "n_theta": {"type": "integer", "minimum": 3},
        "qn": {"type": "integer", "minimum": 8},
    },
    "required": ["n_s", "n_theta", "qn"],
    "additionalProperties": False,
}

_FORCING_SCHEMA = {
    "type": "object",
    "properties": {
        "kind": {
            "enum": ["uniform", "inplane_cosine", "trefoil_wave", "three_point_contrast"]
        },
        "direction": {
            "type": "array",
            "items": {"type": "number"},
            "minItems": 3,
            "maxItems": 3,
        },
        "m": {"type": "integer", "minimum": 0},
        "k": {"type": "integer", "minimum": 1},
        "corrected": {"type": "boolean"},
    },
    "required": ["kind"],
    "additionalProperties": False,
}

SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "properties": {
        "experiment": {
            "enum": [
                "torus_drag",
                "quadrature_table",
                "kr_compare",
                "near_intersection",
                "condition_table",
                "rule_dump",
            ]
        },
        "curve": _CURVE_SCHEMA,
        "resolution": _RESOLUTION_SCHEMA,
        "forcing": _FORCING_SCHEMA,
        "radii": {"type": "array", "items": {"type": "number", "exclusiveMinimum": 0}},
        "inverse_radii": {
            "type": "array",
            "items": {"type": "number", "exclusiveMinimum": 0},
        },
        "qn_list": {"type": "array", "items": {"type": "integer", "minimum": 8}},
        "n_s_list": {"type": "array", "items": {"type": "integer", "minimum": 5}},
        "n_theta_list": {"type": "array", "items": {"type": "integer", "minimum": 3}},
        "H_list": {
            "type": "array",
            "items": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        },
        "radius_over_gap": {"type": "number", "exclusiveMinimum": 0, "maximum": 0.5},
        "fixed_H": {"type": "number", "minimum": 0, "exclusiveMaximum": 1},
        "profile_points": {"type": "integer", "minimum": 16},
        "source_s": {"type": "number"},
        "self_compare": {"type": "boolean"},
        "dump_profiles": {"type": "boolean"},
        "output_dir": {"type": "string"},
        "plots": {"type": "boolean"},
        "seed": {"type": "integer"},
    },
    "required": ["experiment"],
    "additionalProperties": False,
}

_REQUIRED_BY_EXPERIMENT = {
    "torus_drag": ["inverse_radii", "resolution"],
    "quadrature_table": ["radii", "qn_list"],
    "kr_compare": ["curve", "forcing", "radii", "resolution"],
    "near_intersection": ["resolution"],
    "condition_table": ["radii", "n_s_list", "n_theta_list", "resolution"],
    "rule_dump": ["curve", "radii", "resolution"],
}


class ConfigError(ValueError):
    """Invalid experiment configuration, with a field-precise message."""


@dataclass
class ExperimentConfig:
    """Validated experiment description (mirrors the JSON schema)."""

    experiment: str
    raw: dict = field(repr=False)

    def __getitem__(self, key):
        return self.raw[key]

    def get(self, key, default=None):
        return self.raw.get(key, default)


def _check_odd(raw, path_prefix="$"):
    res = raw.get("resolution")
    if res:
        for key in ("n_s", "n_theta"):
            if res[key] % 2 == 0:
                raise ConfigError(f"{path_prefix}.resolution.{key}: {res[key]} must be odd")
    for key in ("n_s_list", "n_theta_list"):
        for idx, val in enumerate(raw.get(key, [])):
            if val % 2 == 0:
                raise ConfigError(f"{path_prefix}.{key}[{idx}]: {val} must be odd")


def validate(raw):
    """Validate a config dict; returns an ExperimentConfig or raises ConfigError."""
    validator = jsonschema.Draft202012Validator(SCHEMA)
    errors = sorted(validator.iter_errors(raw), key=lambda e: e.json_path)
    if errors:
        err = errors[0]
        raise ConfigError(f"{err.json_path}: {err.message}")
    experiment = raw["experiment"]
    for key in _REQUIRED_BY_EXPERIMENT[experiment]:
        if key not in raw:
            raise ConfigError(f"$.{key}: required for experiment {experiment!r}")
    if experiment == "near_intersection":
        has_family = "H_list" in raw and "radius_over_gap" in raw
        has_fixed = "fixed_H" in raw and "radii" in raw
        if not (has_family or has_fixed):
            raise ConfigError(
                "$: near_intersection needs H_list+radius_over_gap or fixed_H+radii"
            )
    _check_odd(raw)
    return ExperimentConfig(experiment=experiment, raw=raw)


def load(path):
    """Read and validate a JSON config file."""
    with open(path) as fh:
        try:
            raw = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    try:
        return validate(raw)
    except ConfigError as exc:
        raise ConfigError(f"{path}: {exc}") from None
