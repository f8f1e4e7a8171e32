"""Configuration and result containers shared by the simulation pipeline.

Unit conventions: every rate is expressed in units of the mean coupling
constant C0 and every propagation distance as the dimensionless product
C0*z, so a homogeneous array has ``couplings == 1`` everywhere and the
physical coupling strength drops out of all normalized observables.
Waveguide indices are 1-based in user-facing inputs and outputs; internal
arrays are 0-based.

All types here are immutable after construction (arrays are frozen
read-only) and safe to share across parallel workers.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

__all__ = [
    "ConfigError",
    "PumpSpec",
    "ArrayConfig",
    "DisorderSpec",
    "TransportSeries",
    "homogeneous_array",
    "validate",
]


class ConfigError(ValueError):
    """A configuration value violates one of the type invariants."""


def _require(cond: bool, msg: str) -> None:
    if not cond:
        raise ConfigError(msg)


def _frozen_array(values, dtype) -> np.ndarray:
    arr = np.array(values, dtype=dtype, copy=True)
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True, eq=False)
class PumpSpec:
    """Pump field: relative amplitudes, global strength, phase matching.

    ``amplitudes`` is the unit-norm profile eta_j of the classical pump
    over the guides (all zeros for a dark pump); the physical field in
    guide j is ``strength * eta_j`` with ``strength`` carrying the product
    of the nonlinear constant and the total pump amplitude.  ``strength``
    scales the biphoton amplitude globally and cancels from every
    normalized observable.  A global phase of ``amplitudes`` is equally
    irrelevant and is kept only for completeness.

    ``beta_tilde`` optionally pins the effective pump propagation
    constants; ``None`` means quasi-phase matched, i.e. the value
    2*beta_j(signal) is derived from whatever array the pump is applied
    to, and therefore re-derived per disorder realization.
    """

    amplitudes: np.ndarray
    strength: float = 1.0
    beta_tilde: Optional[np.ndarray] = None

    def __post_init__(self) -> None:
        amps = np.array(self.amplitudes, dtype=complex, copy=True)
        _require(amps.ndim == 1 and amps.size >= 1, "pump amplitudes must be a nonempty vector")
        _require(bool(np.all(np.isfinite(amps))), "pump amplitudes must be finite")
        norm = float(np.linalg.norm(amps))
        if norm != 0.0:
            _require(
                abs(norm - 1.0) <= 1e-12,
                f"pump amplitudes must be unit-normalized (norm {norm!r}); use strength for the overall scale",
            )
        strength = float(self.strength)
        _require(np.isfinite(strength) and strength > 0.0, "pump strength must be a positive real")
        bt = self.beta_tilde
        if bt is not None:
            bt = np.array(bt, dtype=float, copy=True)
            _require(bt.shape == amps.shape, "beta_tilde must match amplitudes in length")
            _require(bool(np.all(np.isfinite(bt))), "beta_tilde must be finite")
            bt.setflags(write=False)
        amps.setflags(write=False)
        object.__setattr__(self, "amplitudes", amps)
        object.__setattr__(self, "strength", strength)
        object.__setattr__(self, "beta_tilde", bt)

    @property
    def n_guides(self) -> int:
        return int(self.amplitudes.size)

    @classmethod
    def single(cls, n_guides: int, guide: int, strength: float = 1.0, phase: float = 0.0) -> "PumpSpec":
        """Pump exactly one guide (1-based index) with an optional carrier phase."""
        _require(1 <= int(guide) <= int(n_guides), f"pump guide {guide} outside 1..{n_guides}")
        amps = np.zeros(int(n_guides), dtype=complex)
        amps[int(guide) - 1] = cmath.exp(1j * float(phase))
        return cls(amplitudes=amps, strength=strength)

    def resolve_beta_tilde(self, beta_s: np.ndarray) -> np.ndarray:
        """Effective pump constants: the override if set, else 2*beta_s (QPM)."""
        if self.beta_tilde is not None:
            return self.beta_tilde
        out = 2.0 * np.asarray(beta_s, dtype=float)
        out.setflags(write=False)
        return out

    def pumped_guides(self) -> np.ndarray:
        """0-based indices of guides with nonzero pump amplitude."""
        return np.flatnonzero(self.amplitudes)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, PumpSpec):
            return NotImplemented
        if self.strength != other.strength:
            return False
        if not np.array_equal(self.amplitudes, other.amplitudes):
            return False
        if (self.beta_tilde is None) != (other.beta_tilde is None):
            return False
        return self.beta_tilde is None or np.array_equal(self.beta_tilde, other.beta_tilde)


@dataclass(frozen=True, eq=False)
class ArrayConfig:
    """Physical array: signal propagation constants, couplings, and pump.

    ``beta_s[j]`` is the effective propagation constant of the signal mode
    in guide j+1 and ``couplings[j]`` the nearest-neighbor coupling between
    guides j+1 and j+2, both in C0 units.
    """

    n_guides: int
    beta_s: np.ndarray
    couplings: np.ndarray
    pump: PumpSpec

    def __post_init__(self) -> None:
        n = int(self.n_guides)
        _require(n >= 1, "array needs at least one waveguide")
        beta = _frozen_array(self.beta_s, float)
        coup = _frozen_array(self.couplings, float)
        _require(beta.shape == (n,), f"beta_s must have length {n}, got shape {beta.shape}")
        _require(coup.shape == (n - 1,), f"couplings must have length {n - 1}, got shape {coup.shape}")
        _require(bool(np.all(np.isfinite(beta))), "beta_s must be finite")
        _require(bool(np.all(np.isfinite(coup))), "couplings must be finite")
        _require(coup.size == 0 or float(coup.min()) > 0.0, "couplings must be strictly positive")
        _require(isinstance(self.pump, PumpSpec), "pump must be a PumpSpec")
        _require(self.pump.n_guides == n, "pump amplitudes length must equal n_guides")
        object.__setattr__(self, "n_guides", n)
        object.__setattr__(self, "beta_s", beta)
        object.__setattr__(self, "couplings", coup)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ArrayConfig):
            return NotImplemented
        return (
            self.n_guides == other.n_guides
            and np.array_equal(self.beta_s, other.beta_s)
            and np.array_equal(self.couplings, other.couplings)
            and self.pump == other.pump
        )


def validate(config: ArrayConfig) -> ArrayConfig:
    """Re-check every ArrayConfig invariant and hand the config back."""
    _require(isinstance(config, ArrayConfig), "expected an ArrayConfig")
    ArrayConfig(config.n_guides, config.beta_s, config.couplings, config.pump)
    return config


def homogeneous_array(
    n_guides: int,
    pump_guide: int,
    *,
    beta_0: float = 0.0,
    coupling: float = 1.0,
    strength: float = 1.0,
    pump_phase: float = 0.0,
) -> ArrayConfig:
    """Ordered array with constant profiles and a single pumped guide."""
    n = int(n_guides)
    return ArrayConfig(
        n_guides=n,
        beta_s=np.full(n, float(beta_0)),
        couplings=np.full(max(n - 1, 0), float(coupling)),
        pump=PumpSpec.single(n, pump_guide, strength=strength, phase=pump_phase),
    )


@dataclass(frozen=True)
class DisorderSpec:
    """Disorder strengths and the ensemble protocol.

    ``kappa_c`` and ``kappa_beta`` scale the half-widths ``delta_c`` and
    ``delta_beta`` of the uniform coupling / propagation-constant
    distributions (both half-widths in C0 units, sampled around C0 and
    ``beta_0`` respectively).  Both kappas zero reproduces the ordered
    array bit-exactly.
    """

    kappa_c: float = 0.0
    kappa_beta: float = 0.0
    delta_c: float = 0.9
    delta_beta: float = 3.0
    beta_0: float = 0.0
    realizations: int = 200
    master_seed: int = 0

    def __post_init__(self) -> None:
        for name in ("kappa_c", "kappa_beta", "delta_c", "delta_beta", "beta_0"):
            object.__setattr__(self, name, float(getattr(self, name)))
        object.__setattr__(self, "realizations", int(self.realizations))
        object.__setattr__(self, "master_seed", int(self.master_seed))
        _require(0.0 <= self.kappa_c <= 1.0, "kappa_c must lie in [0, 1]")
        _require(0.0 <= self.kappa_beta <= 1.0, "kappa_beta must lie in [0, 1]")
        _require(self.delta_c > 0.0 and np.isfinite(self.delta_c), "delta_c must be positive")
        _require(self.delta_beta > 0.0 and np.isfinite(self.delta_beta), "delta_beta must be positive")
        _require(np.isfinite(self.beta_0), "beta_0 must be finite")
        if self.kappa_c > 0.0:
            _require(
                self.kappa_c * self.delta_c < 1.0,
                "kappa_c * delta_c must stay below 1 so sampled couplings remain positive",
            )
        _require(self.realizations >= 1, "realizations must be a positive integer")
        _require(0 <= self.master_seed < 2**64, "master_seed must fit in 64 unsigned bits")


@dataclass(frozen=True, eq=False)
class TransportSeries:
    """Transport statistics along a propagation grid.

    ``n_first``/``n_last`` track the corner populations used for border
    diagnostics; ``corner_monitored`` records which of the two corners is
    actually monitored (a pumped corner is excluded, since it is populated
    from z=0+ and carries no border information).  ``distributions`` holds
    full photon-number rows at ``distribution_indices`` of the grid.
    """

    z_grid: np.ndarray
    sigma: np.ndarray
    gamma: np.ndarray
    n_first: np.ndarray
    n_last: np.ndarray
    border_flags: np.ndarray
    distributions: Optional[np.ndarray] = None
    distribution_indices: Optional[np.ndarray] = None
    corner_monitored: tuple = (True, True)

    def __post_init__(self) -> None:
        z = _frozen_array(self.z_grid, float)
        _require(z.ndim == 1 and z.size >= 1, "z_grid must be a nonempty vector")
        _require(float(z[0]) > 0.0, "z grid entries must be positive")
        _require(z.size == 1 or float(np.diff(z).min()) > 0.0, "z grid must be strictly increasing")
        vectors = {}
        for name in ("sigma", "gamma", "n_first", "n_last"):
            arr = _frozen_array(getattr(self, name), float)
            _require(arr.shape == z.shape, f"{name} must match z_grid in length")
            vectors[name] = arr
        _require(float(vectors["sigma"].min()) >= 0.0, "sigma entries must be nonnegative")
        flags = _frozen_array(self.border_flags, bool)
        _require(flags.shape == z.shape, "border_flags must match z_grid in length")
        object.__setattr__(self, "z_grid", z)
        for name, arr in vectors.items():
            object.__setattr__(self, name, arr)
        object.__setattr__(self, "border_flags", flags)
        if self.distributions is not None:
            dist = _frozen_array(self.distributions, float)
            idx = _frozen_array(self.distribution_indices, int)
            _require(dist.ndim == 2, "distributions must be a matrix of rows")
            _require(idx.ndim == 1 and idx.size == dist.shape[0], "one grid index per stored distribution row")
            _require(idx.size == 0 or (idx.min() >= 0 and idx.max() < z.size), "distribution indices out of range")
            object.__setattr__(self, "distributions", dist)
            object.__setattr__(self, "distribution_indices", idx)
        else:
            object.__setattr__(self, "distribution_indices", None)
        mf, ml = self.corner_monitored
        object.__setattr__(self, "corner_monitored", (bool(mf), bool(ml)))
