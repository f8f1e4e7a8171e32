"""Command-line interface.

Subcommands
-----------
propagate    single-array transport series -> series.csv, distributions.csv, transitions.json
ensemble     seeded disorder ensemble -> ensemble.csv, meta.json
regime-map   superballistic presence over a disorder grid -> regime_map.csv
kappa-sweep  sigma versus disorder strength at fixed distances -> kappa_sweep.csv
border-scan  gamma versus distance for every pump position -> border_scan.csv
validate     independent oracle checks -> pass/fail report on stdout

Exit codes: 0 success, 2 configuration or usage error, 3 numerical
failure, 4 I/O failure, 5 validation-suite failure.  The ANWSIM_OUT_DIR
environment variable supplies the default --out-dir; --threads trades
wall time only and never changes any output byte.

CSV files use '.' decimals, 17-significant-digit floats, a header row and
trailing newline; identical inputs and seeds give byte-identical files.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from pathlib import Path

import numpy as np

from anwsim import __version__
from anwsim.model import ConfigError, DisorderSpec
from anwsim.spectral import SpectralError
from anwsim.evolution import (
    BasisMismatchError,
    DistributionError,
    SeriesError,
    ZeroAmplitudeError,
    border_onset,
    detect_regime_transition,
    gamma_extrema,
    propagate_series,
    pump_position_scan,
)
from anwsim.disorder import (
    DisorderType,
    EnsembleError,
    regime_map,
    run_ensemble,
    sigma_vs_kappa,
)
from anwsim import configfile

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3
EXIT_IO = 4
EXIT_VALIDATION = 5

_NUMERIC_ERRORS = (
    SpectralError,
    ZeroAmplitudeError,
    DistributionError,
    SeriesError,
    BasisMismatchError,
    EnsembleError,
    FloatingPointError,
)


def _fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "1" if value else "0"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, str):
        return value
    return format(float(value), ".17g")


def _write_csv(path: Path, header, rows, comments=()) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        for line in comments:
            fh.write(f"# {line}\n")
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(v) for v in row) + "\n")


def _write_json(path: Path, payload) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _out_dir(args) -> Path:
    out = Path(args.out_dir or os.environ.get("ANWSIM_OUT_DIR", "."))
    out.mkdir(parents=True, exist_ok=True)
    return out


def _grid_meta(z: np.ndarray) -> dict:
    return {"z_min": float(z[0]), "z_max": float(z[-1]), "points": int(z.size)}


def _snapshot_indices(z: np.ndarray, options) -> np.ndarray:
    wanted = options["distribution_z"]
    if wanted:
        idx = np.unique([int(np.argmin(np.abs(z - v))) for v in wanted])
        return idx
    stride = max(1, z.size // options["max_distribution_rows"])
    return np.arange(0, z.size, stride)


def cmd_propagate(args) -> int:
    doc = configfile.load_document(args.config)
    config = configfile.array_config_from_document(doc)
    z = configfile.z_grid_from_document(doc)
    options = configfile.output_options_from_document(doc)
    idx = _snapshot_indices(z, options)
    series = propagate_series(
        config, z, border_threshold=options["border_threshold"], distribution_indices=idx
    )
    out = _out_dir(args)

    rows = zip(series.z_grid, series.sigma, series.gamma, series.n_first, series.n_last, series.border_flags)
    _write_csv(out / "series.csv", ["z", "sigma", "gamma", "n_first", "n_last", "border_flag"], rows)

    n = config.n_guides
    dist_header = ["z"] + [f"n_{k}" for k in range(1, n + 1)]
    dist_rows = [
        [series.z_grid[i], *series.distributions[row]]
        for row, i in enumerate(series.distribution_indices)
    ] if series.distributions is not None else []
    _write_csv(out / "distributions.csv", dist_header, dist_rows)

    onset = border_onset(series, options["border_threshold"])
    payload = {
        "crossings": [{"z": c.z, "direction": c.direction} for c in detect_regime_transition(series)],
        "extrema": [{"z": e.z, "gamma": e.gamma, "kind": e.kind} for e in gamma_extrema(series)],
        "border_onset": onset,
        "border_threshold": options["border_threshold"],
        "z_range": [float(z[0]), float(z[-1])],
    }
    _write_json(out / "transitions.json", payload)
    return EXIT_OK


def cmd_ensemble(args) -> int:
    doc = configfile.load_document(args.config)
    config = configfile.array_config_from_document(doc)
    z = configfile.z_grid_from_document(doc)
    options = configfile.output_options_from_document(doc)
    spec, averaging = configfile.disorder_from_document(
        doc, seed_override=args.seed, realizations_override=args.realizations
    )
    if args.averaging:
        averaging = args.averaging
    result = run_ensemble(
        config, spec, z,
        threads=args.threads,
        averaging=averaging,
        border_threshold=options["border_threshold"],
    )
    out = _out_dir(args)
    rows = zip(result.z_grid, result.sigma_mean, result.sigma_stderr, result.gamma_of_mean, result.dsigma_dz)
    _write_csv(out / "ensemble.csv", ["z", "sigma_mean", "sigma_stderr", "gamma_of_mean", "dsigma_dz"], rows)
    meta = {
        "command": "ensemble",
        "version": __version__,
        "n_guides": config.n_guides,
        "pump_guides": [int(j) + 1 for j in config.pump.pumped_guides()],
        "pump_strength": config.pump.strength,
        "kappa_c": spec.kappa_c,
        "kappa_beta": spec.kappa_beta,
        "delta_c": spec.delta_c,
        "delta_beta": spec.delta_beta,
        "beta_0": spec.beta_0,
        "realizations": result.realizations_used,
        "master_seed": result.master_seed,
        "averaging": result.averaging,
        "threads": args.threads,
        "grid": _grid_meta(result.z_grid),
    }
    _write_json(out / "meta.json", meta)
    return EXIT_OK


def cmd_regime_map(args) -> int:
    doc = configfile.load_document(args.config)
    config = configfile.array_config_from_document(doc)
    spec, _ = configfile.disorder_from_document(
        doc, seed_override=args.seed, realizations_override=args.realizations
    )
    sec = doc.get("regime_map", {})
    if "kappa_points" in sec:
        kc = np.linspace(0.0, 1.0, int(sec["kappa_points"]))
        kb = kc.copy()
    else:
        try:
            kc = np.asarray(sec["kappa_c_grid"], dtype=float)
            kb = np.asarray(sec["kappa_beta_grid"], dtype=float)
        except KeyError as exc:
            raise ConfigError("[regime_map] requires kappa grids or kappa_points") from exc
    window = sec.get("z_window")
    ppd = int(sec.get("points_per_decade", 100))
    result = regime_map(
        config, kc, kb, spec,
        z_window=tuple(float(v) for v in window) if window else None,
        points_per_decade=ppd,
        threads=args.threads,
    )
    out = _out_dir(args)
    comments = [
        f"master_seed = {result.master_seed}",
        f"realizations = {result.realizations}",
        f"z_window = [{_fmt(result.z_window[0])}, {_fmt(result.z_window[1])}]",
        f"points_per_decade = {ppd}",
        f"kappa_c_grid = [{', '.join(_fmt(v) for v in result.kappa_c_grid)}]",
        f"kappa_beta_grid = [{', '.join(_fmt(v) for v in result.kappa_beta_grid)}]",
    ]
    rows = [
        (kc_v, kb_v, bool(result.present[ic, ib]))
        for ic, kc_v in enumerate(result.kappa_c_grid)
        for ib, kb_v in enumerate(result.kappa_beta_grid)
    ]
    _write_csv(out / "regime_map.csv", ["kappa_c", "kappa_beta", "present"], rows, comments)
    return EXIT_OK


def cmd_kappa_sweep(args) -> int:
    doc = configfile.load_document(args.config)
    config = configfile.array_config_from_document(doc)
    spec, _ = configfile.disorder_from_document(
        doc, seed_override=args.seed, realizations_override=args.realizations
    )
    sec = doc.get("kappa_sweep")
    if not sec:
        raise ConfigError("missing [kappa_sweep] section")
    try:
        kappa_grid = [float(v) for v in sec["kappa_grid"]]
        z_values = [float(v) for v in sec["z_values"]]
    except KeyError as exc:
        raise ConfigError("[kappa_sweep] requires kappa_grid and z_values") from exc
    requested = sec.get("disorder_type", "both")
    if requested == "both":
        types = [DisorderType.OFF_DIAGONAL, DisorderType.DIAGONAL]
    else:
        types = [DisorderType(requested)]
    rows = []
    for dtype in types:
        sweep = sigma_vs_kappa(config, kappa_grid, dtype, z_values, spec, threads=args.threads)
        for ik, kappa in enumerate(sweep.kappa_grid):
            for iz, z_val in enumerate(sweep.z_values):
                rows.append((kappa, z_val, sweep.sigma_mean[ik, iz], sweep.sigma_stderr[ik, iz], dtype.value))
    out = _out_dir(args)
    _write_csv(
        out / "kappa_sweep.csv",
        ["kappa", "z", "sigma_mean", "sigma_stderr", "disorder_type"],
        rows,
        [f"master_seed = {spec.master_seed}", f"realizations = {spec.realizations}"],
    )
    return EXIT_OK


def cmd_border_scan(args) -> int:
    doc = configfile.load_document(args.config)
    config = configfile.array_config_from_document(doc, require_pump=False)
    z = configfile.z_grid_from_document(doc)
    options = configfile.output_options_from_document(doc)
    scan = pump_position_scan(config, z, border_threshold=options["border_threshold"])
    rows = [
        (p + 1, scan.z_grid[i], scan.gamma[p, i])
        for p in range(config.n_guides)
        for i in range(scan.z_grid.size)
    ]
    out = _out_dir(args)
    _write_csv(out / "border_scan.csv", ["pump_index", "z", "gamma"], rows)
    return EXIT_OK


def cmd_validate(args) -> int:
    from anwsim.validation import run_validation_suite

    results = run_validation_suite(quick=args.quick, seed=args.seed if args.seed is not None else 20260809)
    failed = 0
    for check in results:
        status = "PASS" if check.passed else "FAIL"
        print(f"[{status}] {check.name}: {check.detail}")
        failed += 0 if check.passed else 1
    print(f"{len(results) - failed}/{len(results)} checks passed")
    return EXIT_OK if failed == 0 else EXIT_VALIDATION


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="anwsim",
        description="Biphoton quantum-walk transport in nonlinear waveguide arrays",
    )
    parser.add_argument("--version", action="version", version=f"anwsim {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, seed=False, realizations=False):
        p.add_argument("config", help="TOML experiment file")
        p.add_argument("--out-dir", default=None, help="output directory (default: $ANWSIM_OUT_DIR or '.')")
        p.add_argument("--threads", type=int, default=1, help="worker threads (never changes results)")
        if seed:
            p.add_argument("--seed", type=int, default=None, help="override the master seed")
        if realizations:
            p.add_argument("--realizations", type=int, default=None, help="override the realization count")

    p = sub.add_parser("propagate", help="transport series for one array")
    add_common(p)
    p.set_defaults(func=cmd_propagate)

    p = sub.add_parser("ensemble", help="seeded disorder ensemble")
    add_common(p, seed=True, realizations=True)
    p.add_argument("--averaging", choices=["sigma", "distribution"], default=None)
    p.set_defaults(func=cmd_ensemble)

    p = sub.add_parser("regime-map", help="superballistic presence map")
    add_common(p, seed=True, realizations=True)
    p.set_defaults(func=cmd_regime_map)

    p = sub.add_parser("kappa-sweep", help="sigma versus disorder strength")
    add_common(p, seed=True, realizations=True)
    p.set_defaults(func=cmd_kappa_sweep)

    p = sub.add_parser("border-scan", help="gamma for every pump position")
    add_common(p)
    p.set_defaults(func=cmd_border_scan)

    p = sub.add_parser("validate", help="run the independent oracle checks")
    p.add_argument("--quick", action="store_true", help="reduced check set")
    p.add_argument("--seed", type=int, default=None, help="seed for the randomized checks")
    p.set_defaults(func=cmd_validate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except _NUMERIC_ERRORS as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except OSError as exc:
        print(f"I/O failure: {exc}", file=sys.stderr)
        return EXIT_IO


if __name__ == "__main__":
    sys.exit(main())
