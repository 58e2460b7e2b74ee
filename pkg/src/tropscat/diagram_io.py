"""JSON file format for scattering diagrams.

    {"rank": 2, "params": 2, "max_order": 6,
     "walls": [{"mode": [1, 0],
                "support": {"kind": "line", "direction": [1, 0]},
                "coorientation": [0, 1],
                "log": [{"monomial": [-1, 0], "direction": [0, 1], "coeff": {"1,0": "2/1"}},
                        {"monomial": [-2, 0], "direction": [0, 1], "coeff": {"2,0": "-1/1"}}]}]}

Serialization is canonical (fixed key order, canonical term order, rationals
as ``"p/q"`` in lowest terms), so identical diagrams give identical bytes.
"""
from __future__ import annotations

import json

import jsonschema

from .lie import LieElement, LieError
from .scattering import Diagram, DiagramError, Support, Wall
from .series import SeriesError

_INT_VECTOR = {"type": "array", "items": {"type": "integer"}, "minItems": 1}

DIAGRAM_SCHEMA = {
    "type": "object",
    "required": ["rank", "params", "max_order", "walls"],
    "properties": {
        "rank": {"const": 2},
        "params": {"type": "integer", "minimum": 1},
        "max_order": {"type": "integer", "minimum": 1},
        "walls": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["mode", "support", "coorientation", "log"],
                "properties": {
                    "mode": _INT_VECTOR,
                    "support": {
                        "type": "object",
                        "required": ["kind", "direction"],
                        "properties": {"kind": {"enum": ["ray", "line"]}, "direction": _INT_VECTOR},
                    },
                    "coorientation": _INT_VECTOR,
                    "log": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["monomial", "direction", "coeff"],
                            "properties": {
                                "monomial": _INT_VECTOR,
                                "direction": _INT_VECTOR,
                                "coeff": {
                                    "type": "object",
                                    "additionalProperties": {"type": "string", "pattern": r"^\s*-?\d+(/\d+)?\s*$"},
                                },
                            },
                        },
                    },
                },
            },
        },
    },
}


class InputError(ValueError):
    """The input file is not a valid diagram."""


def diagram_to_dict(d: Diagram) -> dict:
    walls = []
    for w in d.walls:
        walls.append({
            "mode": list(w.mode),
            "support": {"kind": w.support.kind, "direction": list(w.support.direction)},
            "coorientation": list(w.coorientation),
            "log": w.log_factor.to_records(),
        })
    return {"rank": d.rank, "params": d.params, "max_order": d.max_order, "walls": walls}


def diagram_from_dict(data, max_order: int | None = None) -> Diagram:
    """Validate and build a diagram; ``max_order`` overrides the file's order."""
    try:
        jsonschema.validate(data, DIAGRAM_SCHEMA)
    except jsonschema.ValidationError as exc:
        raise InputError(f"schema violation at {list(exc.absolute_path)}: {exc.message}") from exc
    params = data["params"]
    file_order = data["max_order"]
    order = file_order if max_order is None else max_order
    if order < 1:
        raise InputError("max_order must be at least 1")
    walls = []
    try:
        for k, rec in enumerate(data["walls"]):
            for term in rec["log"]:
                for key in term["coeff"]:
                    j = [int(x) for x in key.split(",")]
                    if len(j) != params or any(x < 0 for x in j):
                        raise InputError(f"wall {k}: bad t-exponent key {key!r} for {params} parameters")
            read_order = max(order, file_order)
            f = LieElement.from_records(rec["log"], nparams=params, rank=2, order=read_order).truncate(order)
            walls.append(Wall(tuple(rec["mode"]), Support(rec["support"]["kind"], tuple(rec["support"]["direction"])),
                              f, tuple(rec["coorientation"])))
        return Diagram(tuple(walls), params, order)
    except (DiagramError, LieError, SeriesError) as exc:
        raise InputError(str(exc)) from exc


def dumps(d: Diagram) -> str:
    return json.dumps(diagram_to_dict(d), indent=2) + "\n"


def loads(text: str, max_order: int | None = None) -> Diagram:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"not valid JSON: {exc}") from exc
    return diagram_from_dict(data, max_order)


def load(path, max_order: int | None = None) -> Diagram:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    return loads(text, max_order)


def save(d: Diagram, path):
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps(d))
