"""Experiment configuration files: TOML schema, loading, round-trip dumping.

Sections and keys (all physics values in C0 units):

[array]
  n_guides     int
  beta_s       float (constant profile) or list of N floats
  couplings    float (constant profile) or list of N-1 floats
[pump]
  guide        int, 1-based pumped guide (with optional ``phase``), or
  amplitudes   list of [re, im] pairs, length N, unit norm
  strength     positive float, default 1.0
  beta_tilde   list of N floats, optional; omitted = quasi-phase matched
[grid]
  z_values     explicit strictly increasing list, or
  z_min, z_max, points_per_decade   geometric grid
[output]
  distribution_z     list of z values to snapshot full distributions at
  max_distribution_rows  int, cap for the default snapshot set (default 120)
  border_threshold   float, default 1e-3
[disorder]
  kappa_c, kappa_beta, delta_c, delta_beta, beta_0,
  realizations, master_seed, averaging ("sigma" | "distribution")
[regime_map]
  kappa_c_grid, kappa_beta_grid   explicit lists, or kappa_points for a
  uniform [0, 1] grid on both axes; z_window [lo, hi] optional;
  points_per_decade optional
[kappa_sweep]
  kappa_grid   list;  disorder_type "off_diagonal" | "diagonal" | "both"
  z_values     list of distances
[border_scan]
  (no keys; uses [array], [grid] and the pump strength)
"""

from __future__ import annotations

import math
from typing import Any, Mapping, Optional

import numpy as np

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from anwsim.model import ArrayConfig, ConfigError, DisorderSpec, PumpSpec

__all__ = [
    "load_document",
    "geometric_grid",
    "array_config_from_document",
    "z_grid_from_document",
    "disorder_from_document",
    "output_options_from_document",
    "dump_array_config",
]


def load_document(path) -> dict:
    """Parse a TOML experiment file into a plain mapping."""
    with open(path, "rb") as fh:
        try:
            return tomllib.load(fh)
        except tomllib.TOMLDecodeError as exc:
            raise ConfigError(f"invalid TOML in {path}: {exc}") from exc


def geometric_grid(z_min: float, z_max: float, points_per_decade: float) -> np.ndarray:
    """Log-uniform grid with the requested density (at least two points)."""
    z_min = float(z_min)
    z_max = float(z_max)
    if not (0.0 < z_min < z_max):
        raise ConfigError("grid needs 0 < z_min < z_max")
    if not points_per_decade > 0:
        raise ConfigError("points_per_decade must be positive")
    count = max(2, int(round(points_per_decade * math.log10(z_max / z_min))) + 1)
    return np.geomspace(z_min, z_max, count)


def _section(doc: Mapping, name: str, required: bool = True) -> Mapping:
    sec = doc.get(name)
    if sec is None:
        if required:
            raise ConfigError(f"missing [{name}] section")
        return {}
    if not isinstance(sec, Mapping):
        raise ConfigError(f"[{name}] must be a table")
    return sec


def _profile(value: Any, length: int, what: str) -> np.ndarray:
    if isinstance(value, (int, float)) and not isinstance(value, bool):
        return np.full(length, float(value))
    if isinstance(value, list):
        arr = np.asarray(value, dtype=float)
        if arr.shape != (length,):
            raise ConfigError(f"{what} must have length {length}, got {arr.size}")
        return arr
    raise ConfigError(f"{what} must be a number or a list of numbers")


def _pump_from_section(sec: Mapping, n_guides: int) -> PumpSpec:
    has_guide = "guide" in sec
    has_amps = "amplitudes" in sec
    if has_guide == has_amps:
        raise ConfigError("[pump] needs exactly one of 'guide' or 'amplitudes'")
    strength = float(sec.get("strength", 1.0))
    beta_tilde = sec.get("beta_tilde")
    if beta_tilde is not None:
        beta_tilde = np.asarray(beta_tilde, dtype=float)
    if has_guide:
        return PumpSpec.single(
            n_guides, int(sec["guide"]), strength=strength, phase=float(sec.get("phase", 0.0))
        ) if beta_tilde is None else PumpSpec(
            amplitudes=PumpSpec.single(n_guides, int(sec["guide"]), phase=float(sec.get("phase", 0.0))).amplitudes,
            strength=strength,
            beta_tilde=beta_tilde,
        )
    pairs = sec["amplitudes"]
    if not isinstance(pairs, list):
        raise ConfigError("pump amplitudes must be a list of [re, im] pairs")
    amps = np.empty(len(pairs), dtype=complex)
    for i, pair in enumerate(pairs):
        if not (isinstance(pair, list) and len(pair) == 2):
            raise ConfigError("pump amplitudes must be [re, im] pairs")
        amps[i] = complex(float(pair[0]), float(pair[1]))
    if amps.size != n_guides:
        raise ConfigError(f"pump amplitudes must have length {n_guides}")
    return PumpSpec(amplitudes=amps, strength=strength, beta_tilde=beta_tilde)


def array_config_from_document(doc: Mapping, *, require_pump: bool = True) -> ArrayConfig:
    """Build the ArrayConfig from the [array] and [pump] sections."""
    arr = _section(doc, "array")
    try:
        n = int(arr["n_guides"])
    except KeyError as exc:
        raise ConfigError("[array] requires n_guides") from exc
    beta = _profile(arr.get("beta_s", 0.0), n, "beta_s")
    couplings = _profile(arr.get("couplings", 1.0), max(n - 1, 0), "couplings")
    if "pump" in doc:
        pump = _pump_from_section(_section(doc, "pump"), n)
    elif require_pump:
        raise ConfigError("missing [pump] section")
    else:
        pump = PumpSpec.single(n, 1)
    return ArrayConfig(n_guides=n, beta_s=beta, couplings=couplings, pump=pump)


def z_grid_from_document(doc: Mapping) -> np.ndarray:
    """Build the propagation grid from the [grid] section."""
    sec = _section(doc, "grid")
    if "z_values" in sec:
        z = np.asarray(sec["z_values"], dtype=float)
        if z.ndim != 1 or z.size == 0:
            raise ConfigError("[grid] z_values must be a nonempty list")
        if not (np.all(np.isfinite(z)) and z[0] > 0.0 and np.all(np.diff(z) > 0.0)):
            raise ConfigError("[grid] z_values must be strictly increasing and positive")
        return z
    try:
        return geometric_grid(sec["z_min"], sec["z_max"], sec.get("points_per_decade", 400))
    except KeyError as exc:
        raise ConfigError("[grid] requires z_values or z_min/z_max") from exc


def disorder_from_document(
    doc: Mapping,
    *,
    seed_override: Optional[int] = None,
    realizations_override: Optional[int] = None,
) -> tuple[DisorderSpec, str]:
    """DisorderSpec plus the averaging mode from the [disorder] section."""
    sec = _section(doc, "disorder")
    averaging = str(sec.get("averaging", "sigma"))
    spec = DisorderSpec(
        kappa_c=float(sec.get("kappa_c", 0.0)),
        kappa_beta=float(sec.get("kappa_beta", 0.0)),
        delta_c=float(sec.get("delta_c", 0.9)),
        delta_beta=float(sec.get("delta_beta", 3.0)),
        beta_0=float(sec.get("beta_0", 0.0)),
        realizations=int(realizations_override if realizations_override is not None else sec.get("realizations", 200)),
        master_seed=int(seed_override if seed_override is not None else sec.get("master_seed", 0)),
    )
    return spec, averaging


def output_options_from_document(doc: Mapping) -> dict:
    sec = _section(doc, "output", required=False)
    return {
        "distribution_z": [float(v) for v in sec.get("distribution_z", [])],
        "max_distribution_rows": int(sec.get("max_distribution_rows", 120)),
        "border_threshold": float(sec.get("border_threshold", 1e-3)),
    }


def _fmt_value(value: Any) -> str:
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return repr(float(value))
    if isinstance(value, str):
        return '"' + value.replace("\\", "\\\\").replace('"', '\\"') + '"'
    if isinstance(value, (list, tuple, np.ndarray)):
        return "[" + ", ".join(_fmt_value(v) for v in value) + "]"
    raise ConfigError(f"cannot serialize {type(value).__name__} to TOML")


def dump_array_config(config: ArrayConfig) -> str:
    """TOML text whose parse reproduces ``config`` exactly, field for field."""
    lines = [
        "[array]",
        f"n_guides = {config.n_guides}",
        f"beta_s = {_fmt_value(list(config.beta_s))}",
        f"couplings = {_fmt_value(list(config.couplings))}",
        "",
        "[pump]",
        f"amplitudes = {_fmt_value([[a.real, a.imag] for a in config.pump.amplitudes])}",
        f"strength = {_fmt_value(config.pump.strength)}",
    ]
    if config.pump.beta_tilde is not None:
        lines.append(f"beta_tilde = {_fmt_value(list(config.pump.beta_tilde))}")
    return "\n".join(lines) + "\n"
