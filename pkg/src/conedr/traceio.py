"""Trajectory dumps as CSV or JSON, and the reader used by the renderer.

Floats are written with ``repr`` so a dump re-reads bit-exactly.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from .cones import PlanarCone, project
from .operators import ConePair, OperatorParams, Trajectory, is_fixed

COLUMNS = ("iter", "x", "y", "step_norm", "dist_to_fix", "in_fix")


class TraceFormatError(ValueError):
    def __init__(self, message: str, row: int | None = None):
        super().__init__(message if row is None else f"row {row}: {message}")
        self.row = row


def trace_rows(traj: Trajectory, pair: ConePair, params: OperatorParams,
               fixed_set: PlanarCone | None, fix_tol: float) -> list[dict]:
    """One row per iterate.  ``step_norm`` is ``|x_k - x_{k-1}|`` (empty at k=0)."""
    rows = []
    for k, x in enumerate(traj.points):
        dist = None
        if fixed_set is not None:
            dist = float(np.linalg.norm(x - project(fixed_set, x)))
        rows.append({
            "iter": k,
            "x": float(x[0]),
            "y": float(x[1]),
            "step_norm": float(traj.step_distances[k - 1]) if k else None,
            "dist_to_fix": dist,
            "in_fix": is_fixed(pair, params, x, fix_tol),
        })
    return rows


def _cell(v) -> str:
    if v is None:
        return ""
    if isinstance(v, bool):
        return "true" if v else "false"
    if isinstance(v, float):
        return repr(v)
    return str(v)


def rows_to_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(COLUMNS)
    for r in rows:
        w.writerow([_cell(r[c]) for c in COLUMNS])
    return buf.getvalue()


def rows_to_json(rows: list[dict]) -> str:
    return json.dumps({"columns": list(COLUMNS), "rows": rows}, indent=1)


def _parse_float(s, row: int, col: str) -> float:
    if isinstance(s, bool) or s is None:
        raise TraceFormatError(f"column {col!r} is not a number: {s!r}", row)
    try:
        v = float(s)
    except (TypeError, ValueError):
        raise TraceFormatError(f"column {col!r} is not a number: {s!r}", row) from None
    if not math.isfinite(v):
        raise TraceFormatError(f"column {col!r} is not finite: {s!r}", row)
    return v


def _points_from_records(records) -> np.ndarray:
    pts = []
    for i, rec in enumerate(records, start=1):
        if not isinstance(rec, dict):
            raise TraceFormatError("expected a mapping with x and y", i)
        try:
            x, y = rec["x"], rec["y"]
        except KeyError as e:
            raise TraceFormatError(f"missing column {e.args[0]!r}", i) from None
        pts.append((_parse_float(x, i, "x"), _parse_float(y, i, "y")))
    return np.array(pts, dtype=float).reshape(-1, 2)


def parse_trace(text: str) -> np.ndarray:
    """Iterate coordinates from a CSV or JSON trace; rows are numbered from 1."""
    stripped = text.lstrip()
    if not stripped:
        raise TraceFormatError("trace is empty")
    if stripped[0] in "{[":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise TraceFormatError(f"invalid JSON: {e.msg}") from None
        records = data.get("rows") if isinstance(data, dict) else data
        if not isinstance(records, list):
            raise TraceFormatError("JSON trace must hold a list of rows")
        pts = _points_from_records(records)
    else:
        reader = csv.reader(io.StringIO(text))
        header = next(reader)
        if tuple(h.strip() for h in header) != COLUMNS:
            raise TraceFormatError(f"header must be {','.join(COLUMNS)}, got {','.join(header)}")
        pts_list = []
        for i, cells in enumerate(reader, start=1):
            if not cells:
                continue
            if len(cells) != len(COLUMNS):
                raise TraceFormatError(f"expected {len(COLUMNS)} fields, got {len(cells)}", i)
            pts_list.append((_parse_float(cells[1], i, "x"), _parse_float(cells[2], i, "y")))
        pts = np.array(pts_list, dtype=float).reshape(-1, 2)
    if len(pts) == 0:
        raise TraceFormatError("trace has no rows")
    return pts
