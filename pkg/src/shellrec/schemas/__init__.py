"""JSON Schemas for input files and command reports."""

from __future__ import annotations

import json
from functools import lru_cache
from pathlib import Path

import jsonschema

HERE = Path(__file__).parent

# command name -> report schema
REPORTS = {
    "validate": "surface_report",
    "matrix": "matrix",
    "maps": "maps_report",
    "extend": "extend_result",
    "classify": "classify_report",
    "reconstruct": "reconstruction",
    "catalog": "catalog_entry",
    "enumerate": "enumeration",
    "scan-theorem1": "theorem1_report",
    "scan-exceptional": "exceptional_report",
}


@lru_cache(maxsize=None)
def load_schema(name: str) -> dict:
    return json.loads((HERE / f"{name}.schema.json").read_text())


def validate_input(name: str, data) -> tuple[list, str] | None:
    """``(path, message)`` of the first schema violation, or ``None``."""
    validator = jsonschema.Draft7Validator(load_schema(name))
    errors = sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path))
    if not errors:
        return None
    err = errors[0]
    return list(err.absolute_path), err.message


def validate_report(command: str, data) -> None:
    jsonschema.validate(data, load_schema(REPORTS[command]))
