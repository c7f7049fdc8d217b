"""
Run configuration validator module.
"""

from typing import Any, Dict, Iterable, Mapping, Optional

from jsonschema import Draft7Validator
from jsonschema.exceptions import ValidationError as SchemaError


class ValidationError(Exception):
    """Exception raised when a run configuration fails validation."""

    pass


_POSITIVE = {"type": "number", "exclusiveMinimum": 0}

_IC_KINDS = ["constant", "fig1", "fig2", "mode1", "custom"]

RUN_CONFIG_SCHEMA: Dict[str, Any] = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "title": "nonlocalhopf run configuration",
    "type": "object",
    "additionalProperties": False,
    "required": ["command"],
    "oneOf": [{"required": ["params"]}, {"required": ["raw_params"]}],
    "properties": {
        "command": {"enum": ["analyze", "hopf", "normalform", "simulate", "sweep"]},
        "params": {
            "type": "object",
            "additionalProperties": False,
            "required": ["d1", "d2", "beta", "b", "c", "ell"],
            "properties": {name: _POSITIVE for name in ("d1", "d2", "beta", "b", "c", "ell")},
        },
        "raw_params": {
            "type": "object",
            "additionalProperties": False,
            "required": ["a", "b", "c", "e", "k", "m", "d1", "d2", "domain_length"],
            "properties": {
                name: _POSITIVE
                for name in ("a", "b", "c", "e", "k", "m", "d1", "d2", "domain_length")
            },
        },
        "nondimensionalize": {"type": "boolean"},
        "sim": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_cells": {"type": "integer", "minimum": 32},
                "dt": _POSITIVE,
                "t_end": _POSITIVE,
                "scheme": {"enum": ["imex", "explicit"]},
                "model": {"enum": ["nonlocal", "local"]},
                "transient_fraction": {
                    "type": "number",
                    "exclusiveMinimum": 0,
                    "exclusiveMaximum": 1,
                },
                "probe_location": {"type": "integer", "minimum": 0},
                "sample_every": {"type": "integer", "minimum": 1},
                "steady_tol": _POSITIVE,
                "ic": {
                    "oneOf": [
                        {"enum": _IC_KINDS},
                        {
                            "type": "object",
                            "additionalProperties": False,
                            "required": ["kind"],
                            "properties": {
                                "kind": {"enum": _IC_KINDS},
                                "value": _POSITIVE,
                                "amplitude": {"type": "number"},
                                "u_expr": {"type": "string", "minLength": 1},
                                "v_expr": {"type": "string", "minLength": 1},
                            },
                        },
                    ]
                },
            },
        },
        "sweep": {
            "type": "object",
            "additionalProperties": False,
            "required": ["axis"],
            "properties": {
                "axis": {"enum": ["b", "ell", "beta", "c"]},
                "start": _POSITIVE,
                "stop": _POSITIVE,
                "count": {"type": "integer", "minimum": 1},
                "values": {"type": "array", "minItems": 1, "items": _POSITIVE},
            },
            "oneOf": [
                {"required": ["values"], "not": {"required": ["count"]}},
                {"required": ["start", "stop", "count"], "not": {"required": ["values"]}},
            ],
        },
        "analysis": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "n_lambda": {"type": "integer", "minimum": 2},
                "include_limits": {"type": "boolean"},
                "include_local": {"type": "boolean"},
                "verify_quadrature": {"type": "boolean"},
            },
        },
        "output": {
            "type": "object",
            "additionalProperties": False,
            "properties": {
                "dir": {"type": "string", "minLength": 1},
                "prefix": {"type": "string", "minLength": 1},
            },
        },
        "seed": {"type": "integer", "minimum": 0},
    },
}


class ConfigValidator:
    """
    A class for validating run configurations against a JSON schema.

    Attributes:
        schema: The Draft 7 schema documents are checked against.
    """

    def __init__(self, schema: Optional[Mapping[str, Any]] = None) -> None:
        """
        Initialize the ConfigValidator.

        Args:
            schema: Schema to use. Defaults to the run configuration schema.
        """
        self.schema = dict(schema if schema is not None else RUN_CONFIG_SCHEMA)
        Draft7Validator.check_schema(self.schema)
        self._validator = Draft7Validator(self.schema)

    def validate(self, document: Mapping[str, Any]) -> bool:
        """
        Validate a configuration document.

        Args:
            document: Parsed configuration.

        Returns:
            True if validation succeeds.

        Raises:
            ValidationError: If the document violates the schema; every violation is listed.
        """
        errors = sorted(
            self._validator.iter_errors(document),
            key=lambda e: [str(part) for part in e.absolute_path],
        )
        if errors:
            formatted = self._format_errors(errors)
            raise ValidationError(f"Configuration validation failed:\n{formatted}")
        return True

    def is_valid(self, document: Mapping[str, Any]) -> bool:
        """
        Check whether a configuration document is valid.

        Args:
            document: Parsed configuration.

        Returns:
            True if the document is valid, False otherwise.
        """
        return bool(self._validator.is_valid(document))

    def _format_errors(self, errors: Iterable[SchemaError]) -> str:
        """
        Format schema violations into a readable string.

        Args:
            errors: Violations reported by jsonschema.

        Returns:
            One "<key path>: <message>" line per violation.
        """
        lines = []
        for error in errors:
            path = ".".join(str(part) for part in error.absolute_path) or "<root>"
            lines.append(f"{path}: {error.message}")
        return "\n".join(lines)
