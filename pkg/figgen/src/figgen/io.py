"""Readers for the anwsim output files.

figgen never computes physics: every plotted number comes out of these
files.  The schemas are the simulator's documented CSV/JSON formats:

series.csv        z, sigma, gamma, n_first, n_last, border_flag
distributions.csv z, n_1 .. n_N
transitions.json  crossings [{z, direction}], extrema [{z, gamma, kind}],
                  border_onset, border_threshold, z_range
regime_map.csv    kappa_c, kappa_beta, present (plus '#' metadata lines)
kappa_sweep.csv   kappa, z, sigma_mean, sigma_stderr, disorder_type
ensemble.csv      z, sigma_mean, sigma_stderr, gamma_of_mean, dsigma_dz
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path
from typing import Optional

import numpy as np


class InputError(ValueError):
    """An input file is missing or does not match its schema."""


def _table(path, required):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            lines = [line for line in fh if line.strip() and not line.startswith("#")]
        data = np.genfromtxt(lines, delimiter=",", names=True, dtype=None, encoding="utf-8")
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except ValueError as exc:
        raise InputError(f"{path} is not a valid CSV table: {exc}") from exc
    data = np.atleast_1d(data)
    names = set(data.dtype.names or ())
    missing = set(required) - names
    if missing:
        raise InputError(f"{path} lacks columns {sorted(missing)}")
    return data


def read_series(path):
    return _table(path, ["z", "sigma", "gamma", "n_first", "n_last", "border_flag"])


def read_ensemble(path):
    return _table(path, ["z", "sigma_mean", "sigma_stderr", "gamma_of_mean", "dsigma_dz"])


def read_distributions(path):
    """Snapshot matrix: (z values, rows of n_k)."""
    data = _table(path, ["z"])
    names = [n for n in data.dtype.names if n != "z"]
    if not names:
        raise InputError(f"{path} holds no distribution columns")
    z = np.asarray(data["z"], dtype=float)
    rows = np.column_stack([np.asarray(data[n], dtype=float) for n in names])
    return z, rows


def read_transitions(path):
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path} is not valid JSON: {exc}") from exc
    for key in ("crossings", "extrema"):
        if key not in doc:
            raise InputError(f"{path} lacks '{key}'")
    return doc


def read_regime_map(path):
    """Unique sorted kappa grids and the presence matrix (kappa_c rows)."""
    data = _table(path, ["kappa_c", "kappa_beta", "present"])
    kc = np.unique(np.asarray(data["kappa_c"], dtype=float))
    kb = np.unique(np.asarray(data["kappa_beta"], dtype=float))
    present = np.zeros((kc.size, kb.size), dtype=bool)
    for row in data:
        i = int(np.searchsorted(kc, float(row["kappa_c"])))
        j = int(np.searchsorted(kb, float(row["kappa_beta"])))
        present[i, j] = bool(int(row["present"]))
    return kc, kb, present


def read_kappa_sweep(path):
    return _table(path, ["kappa", "z", "sigma_mean", "sigma_stderr", "disorder_type"])


def checksum_of(paths) -> str:
    """'name=sha256;...' digest string for embedding into image metadata."""
    parts = []
    for path in paths:
        p = Path(path)
        digest = hashlib.sha256(p.read_bytes()).hexdigest()
        parts.append(f"{p.name}={digest}")
    return ";".join(parts)


@dataclass(frozen=True)
class RunData:
    """One simulator run directory: series plus optional companions."""

    series: np.ndarray
    distributions: Optional[tuple]
    transitions: Optional[dict]
    checksum: str
    label: str


def load_run(run_dir) -> RunData:
    run_dir = Path(run_dir)
    series_path = run_dir / "series.csv"
    series = read_series(series_path)
    paths = [series_path]
    dist = None
    dist_path = run_dir / "distributions.csv"
    if dist_path.exists() and len(dist_path.read_text(encoding="utf-8").splitlines()) > 1:
        dist = read_distributions(dist_path)
        paths.append(dist_path)
    transitions = None
    trans_path = run_dir / "transitions.json"
    if trans_path.exists():
        transitions = read_transitions(trans_path)
        paths.append(trans_path)
    return RunData(
        series=series,
        distributions=dist,
        transitions=transitions,
        checksum=checksum_of(paths),
        label=run_dir.name,
    )
