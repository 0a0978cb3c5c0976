import argparse
import math
import sys
from pathlib import Path
from typing import Any, Dict, Optional

import numpy as np
from loguru import logger

from ..config import settings
from ..errors import VerificationError
from ..gaussian.closed_form import matrix_element_closed_form
from ..gaussian.quadrature import matrix_element_quadrature
from ..gaussian.schema import QuadConfig
from ..storage import atomic_write_bytes, atomic_write_text, init_storage
from ..zak.logical import flat_limit_scan, ggkp_logical, torus_overlap_report
from ..zak.transform import qzt_assemble, qzt_grid, theta_tensor_grid
from .checks import ELEMENT_FLOOR, run_suite, scaled_error
from .emit import (
    GRID_HEADER,
    XI_HEADER,
    grid_rows,
    render_csv,
    render_grid_json,
    render_json,
    render_limit_scan,
    render_pgm,
    render_report,
    report_summary,
)
from .schema import RunConfig


def _emit(text: str, out: Optional[str]) -> None:
    if out:
        atomic_write_text(out, text)
        logger.info(f"wrote {out}")
    else:
        sys.stdout.write(text)


def _complex_fields(value: complex) -> Dict[str, float]:
    return {"re": value.real, "im": value.imag, "abs": abs(value)}


def cmd_grid(args: argparse.Namespace, config: RunConfig) -> int:
    """Render the transform over the configured (x, k) window, or over ξ ∈ [0, 2)²."""
    geom = config.geometry()
    dist = qzt_assemble(config.probe, config.signal, geom, config.characteristic)
    grid = config.grid
    if args.xi:
        xs = 2.0 * np.arange(grid.nx) / grid.nx
        ks = 2.0 * np.arange(grid.nk) / grid.nk
        # rows follow ξ₁ (the k direction), columns ξ₂ (the x direction)
        values = dist.prefactor * theta_tensor_grid(
            dist.Omega, dist.char, ks, xs, config.tol
        )
        header = XI_HEADER
    else:
        xs, ks = grid.xs(), grid.ks()
        values = qzt_grid(dist, grid, config.tol)
        header = GRID_HEADER
    logger.info(f"grid: {grid.nx}x{grid.nk} points, characteristic [{dist.char.label()}]")

    out = args.out
    if not out:
        init_storage()
        out = str(Path(settings.output_dir) / f"grid.{args.format}")
    if args.format == "pgm":
        atomic_write_bytes(out, render_pgm(values))
    else:
        rows = grid_rows(xs, ks, values)
        if args.format == "json":
            text = render_grid_json(config, header, rows)
        else:
            text = render_csv(header, rows)
        atomic_write_text(out, text)
    logger.info(f"wrote {out}")
    return 0


def cmd_element(args: argparse.Namespace, config: RunConfig) -> int:
    geom = config.geometry()
    closed = matrix_element_closed_form(config.probe, config.signal, geom, args.m, args.n)
    report: Dict[str, Any] = {
        "m": args.m,
        "n": args.n,
        "closed_form": _complex_fields(closed),
    }
    if args.oracle:
        overrides: Dict[str, Any] = {"refine": not args.no_refine}
        if args.nodes:
            overrides["node_count"] = args.nodes
            overrides["max_nodes"] = max(args.nodes, settings.quad_max_nodes)
        cfg = QuadConfig(**overrides)
        quad = matrix_element_quadrature(
            config.probe, config.signal, geom, args.m, args.n, cfg
        )
        report["quadrature"] = _complex_fields(quad)
        report["relative_difference"] = scaled_error(closed, quad, ELEMENT_FLOOR)
    _emit(render_json(report), args.out)
    return 0


def cmd_verify(args: argparse.Namespace, config: RunConfig) -> int:
    report = run_suite(args.suite, args.seed)
    _emit(render_report(report), args.out)
    print(report_summary(report), file=sys.stderr)
    if not report.passed:
        raise VerificationError(f"failed checks: {', '.join(report.failed)}")
    return 0


def cmd_limit_scan(args: argparse.Namespace, config: RunConfig) -> int:
    points = flat_limit_scan(
        config.logical_sigma,
        config.hbar,
        config.scales,
        base_L=config.L,
        base_P=config.P,
    )
    _emit(render_limit_scan(points), args.out)
    if len(points) >= 3:
        rising = [
            f"{a.scale:g}->{b.scale:g}"
            for a, b in zip(points, points[1:])
            if not b.fwhm < a.fwhm
        ]
        if rising:
            raise VerificationError(
                f"flat-limit width does not shrink between scales {', '.join(rising)}"
            )
    return 0


def cmd_overlap(args: argparse.Namespace, config: RunConfig) -> int:
    """Normalized ⟨0_L|1_L⟩ on the doubled cell, with half-resolution evidence."""
    geom = config.geometry()
    zero = ggkp_logical(geom, config.logical_sigma, 0)
    one = ggkp_logical(geom, config.logical_sigma, 1)
    resolution = config.resolution

    cross = torus_overlap_report(zero, one, resolution)
    norm_zero = torus_overlap_report(zero, zero, resolution)
    norm_one = torus_overlap_report(one, one, resolution)

    def normalized(value: complex, a: complex, b: complex) -> float:
        return abs(value) / math.sqrt(a.real * b.real)

    report = {
        "resolution": resolution,
        "normalized_cross_overlap": normalized(
            cross.value, norm_zero.value, norm_one.value
        ),
        "normalized_cross_overlap_half_resolution": normalized(
            cross.half_resolution_value,
            norm_zero.half_resolution_value,
            norm_one.half_resolution_value,
        ),
        "self_norm_zero": norm_zero.value.real,
        "self_norm_one": norm_one.value.real,
        "richardson_error": cross.richardson_error,
    }
    _emit(render_json(report), args.out)
    return 0
