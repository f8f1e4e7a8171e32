"""Seeded disorder ensembles and their transport observables.

Each realization draws its own array from uniform distributions centered
on the ordered values: beta_j on [beta_0 - k_b*delta_beta, beta_0 +
k_b*delta_beta] and C_j on [1 - k_c*delta_c, 1 + k_c*delta_c] (C0 units).
The per-realization random stream is derived from the 64-bit master seed
and the realization index alone, so results are bit-identical for any
worker count and any execution order; ensemble reductions always run in
realization-index order.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, replace
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from anwsim.model import ArrayConfig, ConfigError, DisorderSpec, TransportSeries
from anwsim.evolution import (
    DEFAULT_BORDER_THRESHOLD,
    _resolve_distribution_indices,
    _sigma_rows,
    border_onset,
    gamma_series,
    propagate_series,
)

__all__ = [
    "DisorderType",
    "EnsembleError",
    "EnsembleResult",
    "RegimeMap",
    "KappaSweep",
    "realization_rng",
    "derive_seed",
    "sample_array",
    "run_ensemble",
    "regime_map",
    "sigma_vs_kappa",
]

AVERAGING_MODES = ("sigma", "distribution")


class EnsembleError(RuntimeError):
    """A realization failed inside an ensemble run."""


class DisorderType(str, Enum):
    OFF_DIAGONAL = "off_diagonal"
    DIAGONAL = "diagonal"


@dataclass(frozen=True, eq=False)
class EnsembleResult:
    """Ensemble-averaged transport statistics.

    ``sigma_mean`` is the arithmetic mean of per-realization sigma(z) in
    the default ``sigma`` averaging mode, or the sigma of the ensemble-mean
    photon distribution in ``distribution`` mode; ``sigma_stderr`` is
    always the standard error of per-realization sigma.  ``gamma_of_mean``
    differentiates ``sigma_mean`` (log-log), ``dsigma_dz`` differentiates
    it in plain z as the localization diagnostic.
    """

    z_grid: np.ndarray
    sigma_mean: np.ndarray
    sigma_stderr: np.ndarray
    gamma_of_mean: np.ndarray
    dsigma_dz: np.ndarray
    mean_distribution: Optional[np.ndarray]
    distribution_indices: Optional[np.ndarray]
    realizations_used: int
    master_seed: int
    averaging: str


def realization_rng(master_seed: int, realization_index: int) -> np.random.Generator:
    """Deterministic per-realization stream.

    PCG64 seeded by SeedSequence(master_seed) split with
    spawn_key=(realization_index,); independent of scheduling and free of
    stream overlap.
    """
    ss = np.random.SeedSequence(entropy=int(master_seed), spawn_key=(int(realization_index),))
    return np.random.Generator(np.random.PCG64(ss))


def derive_seed(master_seed: int, *key: int) -> int:
    """Stable 64-bit sub-seed for a labelled sub-experiment (map cell, sweep point)."""
    ss = np.random.SeedSequence(entropy=[int(master_seed), *[int(k) for k in key]])
    return int(ss.generate_state(1, np.uint64)[0])


def sample_array(base: ArrayConfig, spec: DisorderSpec, realization_index: int) -> ArrayConfig:
    """One disorder realization of ``base``.

    beta_s is drawn first, couplings second, both from the realization's
    own stream; a channel with zero kappa keeps the base profile untouched,
    so kappa_c == kappa_beta == 0 returns ``base`` itself.  The pump is
    carried over unchanged: with no beta_tilde override it stays
    quasi-phase matched against the sampled constants.
    """
    if spec.kappa_beta == 0.0 and spec.kappa_c == 0.0:
        return base
    rng = realization_rng(spec.master_seed, realization_index)
    if spec.kappa_beta > 0.0:
        half = spec.kappa_beta * spec.delta_beta
        beta = rng.uniform(spec.beta_0 - half, spec.beta_0 + half, base.n_guides)
    else:
        beta = base.beta_s
    if spec.kappa_c > 0.0:
        half = spec.kappa_c * spec.delta_c
        couplings = rng.uniform(1.0 - half, 1.0 + half, base.n_guides - 1)
    else:
        couplings = base.couplings
    return ArrayConfig(base.n_guides, beta, couplings, base.pump)


def _dsigma_dz(z: np.ndarray, s: np.ndarray) -> np.ndarray:
    if z.size < 2:
        return np.full(z.size, np.nan)
    out = np.empty_like(s)
    out[1:-1] = (s[2:] - s[:-2]) / (z[2:] - z[:-2])
    out[0] = (s[1] - s[0]) / (z[1] - z[0])
    out[-1] = (s[-1] - s[-2]) / (z[-1] - z[-2])
    return out


def _safe_gamma(z: np.ndarray, s: np.ndarray) -> np.ndarray:
    if z.size < 2:
        return np.full(z.size, np.nan)
    return gamma_series(z, s)


def run_ensemble(
    base: ArrayConfig,
    spec: DisorderSpec,
    z_grid: np.ndarray,
    *,
    threads: int = 1,
    averaging: str = "sigma",
    distribution_indices: Union[Sequence[int], str, None] = None,
    border_threshold: float = DEFAULT_BORDER_THRESHOLD,
) -> EnsembleResult:
    """Seeded ensemble of independent realizations over a common z grid."""
    if averaging not in AVERAGING_MODES:
        raise ConfigError(f"averaging must be one of {AVERAGING_MODES}, got {averaging!r}")
    z = np.array(z_grid, dtype=float)
    want = _resolve_distribution_indices(distribution_indices, z.size)

    if spec.kappa_beta == 0.0 and spec.kappa_c == 0.0:
        # every realization is the ordered array; the mean is that array exactly
        series = propagate_series(
            base, z, border_threshold=border_threshold,
            distribution_indices=want if want.size else None,
        )
        return EnsembleResult(
            z_grid=series.z_grid,
            sigma_mean=series.sigma,
            sigma_stderr=np.zeros(z.size),
            gamma_of_mean=series.gamma,
            dsigma_dz=_dsigma_dz(series.z_grid, series.sigma),
            mean_distribution=series.distributions,
            distribution_indices=series.distribution_indices,
            realizations_used=spec.realizations,
            master_seed=spec.master_seed,
            averaging=averaging,
        )

    keep_full = averaging == "distribution"
    request = "all" if keep_full else (want if want.size else None)

    def worker(i: int) -> TransportSeries:
        try:
            cfg = sample_array(base, spec, i)
            return propagate_series(cfg, z, border_threshold=border_threshold, distribution_indices=request)
        except Exception as exc:
            raise EnsembleError(f"realization {i} failed: {exc}") from exc

    count = spec.realizations
    if threads and int(threads) > 1:
        with ThreadPoolExecutor(max_workers=int(threads)) as pool:
            results = list(pool.map(worker, range(count)))
    else:
        results = [worker(i) for i in range(count)]

    sig = np.stack([r.sigma for r in results])  # (R, Z), realization-index order
    stderr = sig.std(axis=0, ddof=1) / np.sqrt(count) if count >= 2 else np.zeros(z.size)

    mean_distribution = None
    dist_idx = want if want.size else None
    if keep_full:
        nbar = np.stack([r.distributions for r in results]).mean(axis=0)  # (Z, N)
        sigma_mean = _sigma_rows(nbar)
        if want.size:
            mean_distribution = nbar[want]
    else:
        sigma_mean = sig.mean(axis=0)
        if want.size:
            mean_distribution = np.stack([r.distributions for r in results]).mean(axis=0)

    return EnsembleResult(
        z_grid=z,
        sigma_mean=sigma_mean,
        sigma_stderr=stderr,
        gamma_of_mean=_safe_gamma(z, sigma_mean),
        dsigma_dz=_dsigma_dz(z, sigma_mean),
        mean_distribution=mean_distribution,
        distribution_indices=dist_idx,
        realizations_used=count,
        master_seed=spec.master_seed,
        averaging=averaging,
    )


@dataclass(frozen=True, eq=False)
class RegimeMap:
    """Superballistic presence over a (kappa_c, kappa_beta) grid."""

    kappa_c_grid: np.ndarray
    kappa_beta_grid: np.ndarray
    present: np.ndarray  # (len(kappa_c_grid), len(kappa_beta_grid)) booleans
    z_window: tuple
    realizations: int
    master_seed: int


def default_presence_window(
    base: ArrayConfig,
    *,
    z_cap: float = 8.0,
    z_min: float = 0.05,
    points_per_decade: int = 100,
    border_threshold: float = DEFAULT_BORDER_THRESHOLD,
) -> tuple[float, float]:
    """Window [z_min, min(ordered border onset, z_cap)] for presence tests."""
    from anwsim.configfile import geometric_grid

    probe = propagate_series(base, geometric_grid(z_min, z_cap, points_per_decade), border_threshold=border_threshold)
    onset = border_onset(probe, border_threshold)
    hi = min(onset, z_cap) if onset is not None else z_cap
    return (z_min, float(hi))


def regime_map(
    base: ArrayConfig,
    kappa_c_grid: Sequence[float],
    kappa_beta_grid: Sequence[float],
    spec: DisorderSpec,
    *,
    z_window: Optional[tuple] = None,
    points_per_decade: int = 100,
    threads: int = 1,
) -> RegimeMap:
    """Presence of gamma > 1 (on the ensemble-mean sigma) per disorder cell.

    Cell seeds derive from the master seed and the cell's grid indices, so
    the full map is reproducible from the spec alone.
    """
    from anwsim.configfile import geometric_grid

    kc = np.asarray(kappa_c_grid, dtype=float)
    kb = np.asarray(kappa_beta_grid, dtype=float)
    if kc.size == 0 or kb.size == 0:
        raise ConfigError("kappa grids must be nonempty")
    if z_window is None:
        z_window = default_presence_window(base, points_per_decade=points_per_decade)
    lo, hi = (float(z_window[0]), float(z_window[1]))
    if not 0.0 < lo < hi:
        raise ConfigError("z_window must satisfy 0 < lo < hi")
    z = geometric_grid(lo, hi, points_per_decade)
    present = np.zeros((kc.size, kb.size), dtype=bool)
    for ic, kappa_c in enumerate(kc):
        for ib, kappa_beta in enumerate(kb):
            cell = replace(
                spec,
                kappa_c=float(kappa_c),
                kappa_beta=float(kappa_beta),
                master_seed=derive_seed(spec.master_seed, ic, ib),
            )
            res = run_ensemble(base, cell, z, threads=threads)
            present[ic, ib] = bool(np.any(res.gamma_of_mean > 1.0))
    return RegimeMap(
        kappa_c_grid=kc,
        kappa_beta_grid=kb,
        present=present,
        z_window=(lo, hi),
        realizations=spec.realizations,
        master_seed=spec.master_seed,
    )


@dataclass(frozen=True, eq=False)
class KappaSweep:
    """sigma versus disorder strength at fixed distances, one row per kappa."""

    disorder_type: DisorderType
    kappa_grid: np.ndarray
    z_values: np.ndarray
    sigma_mean: np.ndarray  # (len(kappa_grid), len(z_values))
    sigma_stderr: np.ndarray
    master_seed: int


def sigma_vs_kappa(
    base: ArrayConfig,
    kappa_grid: Sequence[float],
    disorder_type: Union[DisorderType, str],
    z_values: Sequence[float],
    spec: DisorderSpec,
    *,
    threads: int = 1,
) -> KappaSweep:
    """Ensemble sigma at the given distances for each disorder strength."""
    dtype = DisorderType(disorder_type)
    kappas = np.asarray(kappa_grid, dtype=float)
    z = np.array(sorted(float(v) for v in z_values))
    if kappas.size == 0 or z.size == 0:
        raise ConfigError("kappa grid and z values must be nonempty")
    mean = np.empty((kappas.size, z.size))
    err = np.empty((kappas.size, z.size))
    tag = 0 if dtype is DisorderType.OFF_DIAGONAL else 1
    for ik, kappa in enumerate(kappas):
        point = replace(
            spec,
            kappa_c=float(kappa) if dtype is DisorderType.OFF_DIAGONAL else 0.0,
            kappa_beta=float(kappa) if dtype is DisorderType.DIAGONAL else 0.0,
            master_seed=derive_seed(spec.master_seed, tag, ik),
        )
        res = run_ensemble(base, point, z, threads=threads)
        mean[ik] = res.sigma_mean
        err[ik] = res.sigma_stderr
    return KappaSweep(
        disorder_type=dtype,
        kappa_grid=kappas,
        z_values=z,
        sigma_mean=mean,
        sigma_stderr=err,
        master_seed=spec.master_seed,
    )
