"""JSON/CSV reading and byte-stable JSON writing.

Floats are written with 17 significant digits, which round-trips every
IEEE-754 double; keys are sorted so equal inputs give identical bytes.
"""

from __future__ import annotations

import csv
import io
import json
import math
import sys
from dataclasses import fields, is_dataclass
from enum import Enum
from pathlib import Path
from typing import Any

from .errors import SchemaError
from .measure import DiscreteMeasure, RVCollection, canonicalize


def format_float(x: float) -> str:
    if not math.isfinite(x):
        raise ValueError(f"cannot serialize non-finite float {x!r}")
    s = format(x, ".17g")
    if "." not in s and "e" not in s and "n" not in s:
        s += ".0"
    return s


def to_plain(obj: Any) -> Any:
    """Convert dataclasses, enums and measures into JSON-ready containers."""
    if isinstance(obj, DiscreteMeasure):
        return measure_to_dict(obj)
    if isinstance(obj, Enum):
        return obj.value
    if is_dataclass(obj) and not isinstance(obj, type):
        return {f.name: to_plain(getattr(obj, f.name)) for f in fields(obj)}
    if isinstance(obj, dict):
        return {str(k): to_plain(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_plain(v) for v in obj]
    return obj


def _encode(obj: Any, indent: int, level: int) -> str:
    pad = " " * (indent * (level + 1))
    end = " " * (indent * level)
    if obj is None or isinstance(obj, (bool, str)):
        return json.dumps(obj)
    if isinstance(obj, int):
        return str(obj)
    if isinstance(obj, float):
        return format_float(obj)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [f"{pad}{json.dumps(k)}: {_encode(obj[k], indent, level + 1)}" for k in sorted(obj)]
        return "{\n" + ",\n".join(items) + "\n" + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        items = [pad + _encode(v, indent, level + 1) for v in obj]
        return "[\n" + ",\n".join(items) + "\n" + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj: Any, indent: int = 2) -> str:
    return _encode(to_plain(obj), indent, 0) + "\n"


def measure_to_dict(m: DiscreteMeasure) -> dict:
    return {"atoms": [{"x": x, "w": w} for x, w in zip(m.xs, m.ws)]}


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise SchemaError(f"expected a number, got {value!r}", where=where)
    return float(value)


def measure_from_dict(data: Any) -> DiscreteMeasure:
    if not isinstance(data, dict) or "atoms" not in data:
        raise SchemaError('expected an object with an "atoms" list', where="$")
    atoms = data["atoms"]
    if not isinstance(atoms, list):
        raise SchemaError("expected a list", where="atoms")
    raw = []
    for i, a in enumerate(atoms):
        if not isinstance(a, dict) or "x" not in a or "w" not in a:
            raise SchemaError('expected an object with "x" and "w"', where=f"atoms[{i}]")
        x = _number(a["x"], f"atoms[{i}].x")
        w = _number(a["w"], f"atoms[{i}].w")
        if not (x > 0 and math.isfinite(x)):
            raise SchemaError(f"position must be > 0, got {x!r}", where=f"atoms[{i}].x")
        if not (w > 0 and math.isfinite(w)):
            raise SchemaError(f"weight must be > 0, got {w!r}", where=f"atoms[{i}].w")
        raw.append((x, w))
    if not raw:
        raise SchemaError("measure has no atoms", where="atoms")
    return canonicalize(raw)


def measure_from_csv(text: str) -> DiscreteMeasure:
    reader = csv.reader(io.StringIO(text))
    rows = [r for r in reader if r and any(cell.strip() for cell in r)]
    if not rows:
        raise SchemaError("empty CSV", where="line 1")
    header = [h.strip() for h in rows[0]]
    if header != ["x", "w"]:
        raise SchemaError(f"header must be x,w, got {','.join(header)}", where="line 1")
    raw = []
    for lineno, row in enumerate(rows[1:], start=2):
        if len(row) != 2:
            raise SchemaError(f"expected 2 columns, got {len(row)}", where=f"line {lineno}")
        try:
            x, w = float(row[0]), float(row[1])
        except ValueError:
            raise SchemaError(f"non-numeric value in {row!r}", where=f"line {lineno}") from None
        if not (x > 0 and math.isfinite(x)):
            raise SchemaError(f"position must be > 0, got {x!r}", where=f"line {lineno}, column x")
        if not (w > 0 and math.isfinite(w)):
            raise SchemaError(f"weight must be > 0, got {w!r}", where=f"line {lineno}, column w")
        raw.append((x, w))
    if not raw:
        raise SchemaError("measure has no atoms", where="line 2")
    return canonicalize(raw)


def read_text(path: str | Path) -> str:
    if str(path) == "-":
        return sys.stdin.read()
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise SchemaError(f"cannot read file: {exc.strerror}", where=str(path)) from None


def parse_json(text: str, where: str) -> Any:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise SchemaError(f"invalid JSON: {exc.msg}", where=f"{where}, line {exc.lineno}") from None


def load_measure(path: str | Path) -> DiscreteMeasure:
    """Read a measure from a JSON or CSV file (``-`` reads standard input)."""
    text = read_text(path)
    if str(path).lower().endswith(".csv") or not text.lstrip().startswith("{"):
        return measure_from_csv(text)
    return measure_from_dict(parse_json(text, str(path)))


def rvs_from_dict(data: Any) -> RVCollection:
    if not isinstance(data, dict) or not isinstance(data.get("variables"), list):
        raise SchemaError('expected an object with a "variables" list', where="$")
    variables = []
    for i, var in enumerate(data["variables"]):
        if not isinstance(var, dict) or not isinstance(var.get("support"), list):
            raise SchemaError('expected an object with a "support" list', where=f"variables[{i}]")
        support = []
        for j, pt in enumerate(var["support"]):
            where = f"variables[{i}].support[{j}]"
            if not isinstance(pt, dict) or "v" not in pt or "p" not in pt:
                raise SchemaError('expected an object with "v" and "p"', where=where)
            support.append((_number(pt["v"], where + ".v"), _number(pt["p"], where + ".p")))
        variables.append(tuple(support))
    return RVCollection(tuple(variables))


def load_rvs(path: str | Path) -> RVCollection:
    return rvs_from_dict(parse_json(read_text(path), str(path)))
