"""Deterministic text and image renderings of computed grids and reports.

Floats are written with ``repr``, the shortest string that round-trips, so
parsing an emitted file and rendering it again reproduces it byte for byte.
"""

import json
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from .. import __version__
from ..zak.schema import FlatLimitPoint
from .schema import RunConfig, VerifyReport

GRID_HEADER = ("x", "k", "re", "im", "abs")
XI_HEADER = ("xi2", "xi1", "re", "im", "abs")

Row = Tuple[float, ...]


def format_float(value: float) -> str:
    return repr(float(value))


def grid_rows(xs: np.ndarray, ks: np.ndarray, values: np.ndarray) -> List[Row]:
    """Rows (x, k, re, im, abs) for values indexed [k, x], x varying fastest."""
    rows: List[Row] = []
    for j, k in enumerate(ks):
        for i, x in enumerate(xs):
            v = complex(values[j, i])
            rows.append((float(x), float(k), v.real, v.imag, abs(v)))
    return rows


def render_csv(header: Sequence[str], rows: Sequence[Row]) -> str:
    lines = [",".join(header)]
    lines.extend(",".join(format_float(v) for v in row) for row in rows)
    return "\n".join(lines) + "\n"


def read_grid_csv(text: str) -> Tuple[Tuple[str, ...], List[Row]]:
    """Parse a rendered CSV back into its header and float rows."""
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError("empty grid file")
    header = tuple(lines[0].split(","))
    rows: List[Row] = []
    for number, line in enumerate(lines[1:], start=2):
        fields = line.split(",")
        if len(fields) != len(header):
            raise ValueError(f"line {number}: expected {len(header)} fields")
        rows.append(tuple(float(f) for f in fields))
    return header, rows


def run_metadata(config: RunConfig) -> Dict[str, Any]:
    return {
        "geometry": {"L": config.L, "P": config.P, "hbar": config.hbar},
        "probe": config.probe.model_dump(),
        "signal": config.signal.model_dump(),
        "characteristic": config.characteristic.label(),
        "tolerance": config.tol,
        "version": __version__,
    }


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(payload, indent=2, sort_keys=True) + "\n"


def render_grid_json(
    config: RunConfig, header: Sequence[str], rows: Sequence[Row]
) -> str:
    return render_json(
        {
            "metadata": {**run_metadata(config), "grid": config.grid.model_dump()},
            "columns": list(header),
            "rows": [list(row) for row in rows],
        }
    )


def render_pgm(values: np.ndarray) -> bytes:
    """Binary 16-bit PGM of |values| (indexed [row, column]), min-max normalized."""
    magnitude = np.abs(np.asarray(values))
    lo, hi = float(magnitude.min()), float(magnitude.max())
    if hi > lo:
        scaled = (magnitude - lo) / (hi - lo)
    else:
        scaled = np.zeros_like(magnitude)
    pixels = np.rint(scaled * 65535.0).astype(">u2")
    rows, cols = pixels.shape
    header = f"P5\n{cols} {rows}\n65535\n".encode("ascii")
    return header + pixels.tobytes()


def render_limit_scan(points: Sequence[FlatLimitPoint]) -> str:
    return render_csv(("scale", "fwhm"), [(p.scale, p.fwhm) for p in points])


def render_report(report: VerifyReport) -> str:
    payload = report.model_dump()
    payload["passed"] = report.passed
    return render_json(payload)


def report_summary(report: VerifyReport) -> str:
    lines = []
    for check in report.checks:
        status = "PASS" if check.passed else "FAIL"
        lines.append(
            f"{status} {check.name}: max_error={check.max_error:.3e} "
            f"threshold={check.threshold:.1e} cases={check.cases}"
        )
    verdict = "passed" if report.passed else f"failed: {', '.join(report.failed)}"
    lines.append(f"suite {report.suite} (seed {report.seed}) {verdict}")
    return "\n".join(lines)
