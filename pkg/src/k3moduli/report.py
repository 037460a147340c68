"""Deterministic JSON reports.

Rationals are written as strings "p/q" (or "p"), never as floats.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from .lattice import DivisorClass, IntegerLattice, MukaiVector

SCHEMA_VERSION = "1.0"


def to_jsonable(obj):
    if isinstance(obj, bool) or obj is None or isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, Fraction):
        return str(obj)
    if isinstance(obj, enum.Enum):
        return obj.value
    if isinstance(obj, MukaiVector):
        return [str(c) for c in obj]
    if isinstance(obj, DivisorClass):
        return {"x": str(obj.x), "y": str(obj.y)}
    if isinstance(obj, IntegerLattice):
        return [list(row) for row in obj.gram]
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "to_json"):
        return to_jsonable(obj.to_json())
    raise TypeError(f"cannot serialize {type(obj).__name__}")


@dataclass
class Report:
    command: str
    inputs: dict
    results: dict
    provenance: dict = field(default_factory=dict)
    citations: list = field(default_factory=list)
    status: str = "ok"

    def to_json(self) -> dict:
        return {
            "schema_version": SCHEMA_VERSION,
            "command": self.command,
            "status": self.status,
            "inputs": to_jsonable(self.inputs),
            "results": to_jsonable(self.results),
            "provenance": to_jsonable(self.provenance),
            "citations": to_jsonable(self.citations),
        }

    def dumps(self) -> str:
        return dumps(self.to_json())


def dumps(payload) -> str:
    return json.dumps(payload, sort_keys=True, ensure_ascii=False, indent=2) + "\n"


def cite(location: str, quote: str) -> dict:
    return {"location": location, "quote": quote}


def load_schema() -> dict:
    text = resources.files("k3moduli").joinpath("report.schema.json").read_text("utf-8")
    return json.loads(text)
