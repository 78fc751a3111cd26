"""Canonical JSON and CSV documents.

Floats are written in shortest round-trip form so that reading a file and
writing it back reproduces it byte for byte.  CSV files carry their
metadata as leading ``# key: <json>`` comment lines.
"""

from __future__ import annotations

import csv
import io
import json
import math
import re

from .analytics import Marker, PhaseGrid

_INT = re.compile(r"[+-]?\d+\Z")


def dumps_json(document: dict) -> str:
    return json.dumps(document, indent=2, allow_nan=False) + "\n"


def loads_json(text: str) -> dict:
    return json.loads(text)


def format_cell(value) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, Marker):
        return value.value
    if isinstance(value, float):
        if math.isinf(value):
            return "diverged" if value > 0 else "-inf"
        return repr(value)
    return str(value)


def parse_cell(text: str):
    if text == "":
        return None
    if text in ("true", "false"):
        return text == "true"
    if text in Marker._value2member_map_:
        return Marker(text)
    if _INT.match(text):
        return int(text)
    try:
        return float(text)
    except ValueError:
        return text


def dumps_csv(columns, rows, meta: dict | None = None) -> str:
    buf = io.StringIO()
    for key, value in (meta or {}).items():
        buf.write(f"# {key}: {json.dumps(value, allow_nan=False)}\n")
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    return buf.getvalue()


def loads_csv(text: str) -> tuple[dict, list, list]:
    """Return ``(meta, columns, rows)`` with cells parsed to Python values."""
    meta = {}
    lines = text.splitlines()
    body_start = 0
    for body_start, line in enumerate(lines):
        if not line.startswith("# "):
            break
        key, _, value = line[2:].partition(": ")
        meta[key] = json.loads(value)
    reader = csv.reader(lines[body_start:])
    columns = next(reader)
    rows = [[parse_cell(c) for c in row] for row in reader]
    return meta, columns, rows


def phase_grid_csv(grid: PhaseGrid, meta: dict | None = None) -> str:
    columns = ["c\\phi", *(format_cell(p) for p in grid.phi_values)]
    rows = [[c, *row] for c, row in zip(grid.c_values, grid.nbar_star)]
    return dumps_csv(columns, rows, meta)


def phase_grid_from_csv(text: str) -> tuple[dict, PhaseGrid]:
    meta, columns, rows = loads_csv(text)
    if columns[0] != "c\\phi":
        raise ValueError("not a phase-grid CSV")
    phis = tuple(float(p) for p in columns[1:])
    cs = tuple(float(r[0]) for r in rows)
    cells = tuple(tuple(v if isinstance(v, Marker) else float(v) for v in r[1:]) for r in rows)
    return meta, PhaseGrid(phis, cs, cells)
