"""Command-line entry point.

    ris-secrecy ergodic-sweep --config sweep.yaml --out results/
    ris-secrecy secrecy-map --seed 7
    ris-secrecy bound-check --trials 200000
    ris-secrecy eta-check --threads auto

Exit codes: 0 success, 2 configuration error, 3 model-assumption violation.
"""

from __future__ import annotations

import argparse
import dataclasses
import logging
import os
import sys
import time
from pathlib import Path

from . import __version__
from .bounds import eta, ergodic_lower_bound
from .config import SUBCOMMANDS, ConfigError, RunConfig, dump_effective, load_run_config
from .errors import AssumptionViolation, ValidationError
from .output import (BOUND_CHECK_SCHEMA, CONTOUR_SCHEMA, ETA_CHECK_SCHEMA, GRID_SCHEMA, SWEEP_SCHEMA,
                     emit_csv, write_manifest)
from .secrecy_map import compute_map, extract_contour
from .simulation import ergodic_secrecy_rate_mc, expected_gain_sq_mc, sweep

log = logging.getLogger("ris_secrecy")

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_ASSUMPTION = 3


def _run_sweep(cfg: RunConfig, out: Path) -> tuple[dict, list[str]]:
    spec = cfg.section("sweep")
    points = sweep(cfg.system, spec["parameter"], spec["values"], cfg.geometry, cfg.monte_carlo)
    rows = [(p.value,
             p.estimate.mean_rate_bps_hz if p.estimate else None,
             p.estimate.std_error if p.estimate else None,
             p.lower_bound) for p in points]
    path = emit_csv(rows, SWEEP_SCHEMA, out / "sweep.csv")
    summary = {
        "parameter": spec["parameter"],
        "points": len(points),
        "errors": {str(p.value): p.error for p in points if p.error},
    }
    return summary, [path.name]


def _run_map(cfg: RunConfig, out: Path) -> tuple[dict, list[str]]:
    grid = compute_map(cfg.system, cfg.geometry, cfg.map,
                       cfg.monte_carlo if cfg.map_monte_carlo else None)
    files = [emit_csv(grid.long_rows(), GRID_SCHEMA, out / "grid.csv").name]
    contours = {}
    for r0 in cfg.map.thresholds_bps_hz:
        contour = extract_contour(grid, r0)
        files.append(emit_csv(contour.points, CONTOUR_SCHEMA, out / f"contour_R{r0:g}.csv").name)
        contours[f"{r0:g}"] = {"points": len(contour.points), "region_cells": grid.region_cells(r0),
                               "full_area": contour.full_area, "zero_area": contour.zero_area}
    summary = {"cells": int(grid.rates.size), "max_rate_bps_hz": float(grid.rates.max()),
               "mode": grid.metadata["mode"], "contours": contours}
    return summary, files


def _run_bound_check(cfg: RunConfig, out: Path) -> tuple[dict, list[str]]:
    g, s = cfg.geometry, cfg.system
    l_a, l_b, l_e = (s.path_loss(g.dist_alice_ris_m), s.path_loss(g.dist_ris_bob_m),
                     s.path_loss(g.dist_ris_eve_m))
    rows = []
    for n in cfg.section("bound_check")["n_values"]:
        system = dataclasses.replace(s, n_ris_elements=n)
        bound = ergodic_lower_bound(system, l_a, l_b, l_e)
        est = ergodic_secrecy_rate_mc(system, g, cfg.monte_carlo)
        rows.append((n, est.mean_rate_bps_hz, est.std_error, bound, est.mean_rate_bps_hz - bound))
    path = emit_csv(rows, BOUND_CHECK_SCHEMA, out / "bound_check.csv")
    violations = [r[0] for r in rows if r[4] < -3 * r[2]]
    return {"points": len(rows), "min_margin_bps_hz": min(r[4] for r in rows),
            "violations_3se": violations}, [path.name]


def _run_eta_check(cfg: RunConfig, out: Path) -> tuple[dict, list[str]]:
    rows = []
    for n in cfg.section("eta_check")["n_values"]:
        est = expected_gain_sq_mc(n, cfg.monte_carlo, cfg.system.element_spacing_ratio)
        formula = eta(n)
        rows.append((n, est.mean_rate_bps_hz, formula, abs(est.mean_rate_bps_hz - formula) / formula))
    path = emit_csv(rows, ETA_CHECK_SCHEMA, out / "eta_check.csv")
    return {"points": len(rows), "max_relative_error": max(r[3] for r in rows)}, [path.name]


HANDLERS = {
    "ergodic-sweep": _run_sweep,
    "secrecy-map": _run_map,
    "bound-check": _run_bound_check,
    "eta-check": _run_eta_check,
}


def _parse_threads(value: str) -> int:
    if value == "auto":
        return os.cpu_count() or 1
    try:
        n = int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected a positive integer or 'auto', got {value!r}")
    if n < 1:
        raise argparse.ArgumentTypeError("thread count must be positive")
    return n


def _parse_seed(value: str) -> int:
    n = int(value, 0)
    if not 0 <= n < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return n


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ris-secrecy",
                                     description="RIS-assisted mm-Wave secrecy-rate simulator")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("subcommand", choices=SUBCOMMANDS)
    parser.add_argument("--config", type=Path, help="YAML run configuration")
    parser.add_argument("--seed", type=_parse_seed, help="override monte_carlo.seed")
    parser.add_argument("--trials", type=int, help="override monte_carlo.trials")
    parser.add_argument("--out", help="output directory (overrides output_path)")
    parser.add_argument("--threads", type=_parse_threads, default=1, help="worker threads, or 'auto'")
    parser.add_argument("-v", "--verbose", action="store_true")
    return parser


def run(subcommand: str, config: RunConfig, threads: int = 1) -> tuple[int, dict]:
    """Execute one subcommand; always writes ``manifest.json`` into the output directory."""
    out = Path(config.output_path)
    config.monte_carlo = dataclasses.replace(config.monte_carlo, workers=threads)
    out.mkdir(parents=True, exist_ok=True)
    (out / "effective_config.yaml").write_text(dump_effective(config), encoding="utf-8")
    started = time.perf_counter()
    status, summary, files = EXIT_OK, {}, []
    try:
        summary, files = HANDLERS[subcommand](config, out)
    except AssumptionViolation as exc:
        status, summary = EXIT_ASSUMPTION, {"error": str(exc)}
    except ValidationError as exc:
        status, summary = EXIT_CONFIG, {"error": str(exc)}
    manifest = {
        "tool": "ris-secrecy",
        "version": __version__,
        "subcommand": subcommand,
        "config_hash": config.config_hash,
        "seed": config.monte_carlo.seed,
        "trials": config.monte_carlo.trials,
        "threads": threads,
        "wall_clock_seconds": round(time.perf_counter() - started, 6),
        "exit_status": status,
        "outputs": files,
        "summary": summary,
    }
    write_manifest(out / "manifest.json", manifest)
    return status, manifest


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        config = load_run_config(args.subcommand, args.config, seed=args.seed,
                                 trials=args.trials, out=args.out)
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    status, manifest = run(args.subcommand, config, args.threads)
    if status == EXIT_CONFIG:
        print(f"config error: {manifest['summary']['error']}", file=sys.stderr)
    elif status == EXIT_ASSUMPTION:
        print(f"model assumption violated: {manifest['summary']['error']}", file=sys.stderr)
    else:
        log.info("wrote %s to %s", ", ".join(manifest["outputs"]), config.output_path)
    return status


if __name__ == "__main__":
    sys.exit(main())
