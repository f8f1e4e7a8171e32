"""Closed-form biphoton-state evolution and transport statistics.

For a supermode decomposition ``(lam, S)``, pump profile ``eta`` with
global strength G and effective pump constants ``bt``, the two-photon
amplitude in the supermode basis is

    Qt[n, m](z) = i z G sum_j eta_j S[n, j] S[m, j]
                  * exp(i (lam_n + lam_m + bt_j) z / 2)
                  * sinc((lam_n + lam_m - bt_j) z / 2),

with sinc(x) = sin(x)/x.  The individual-guide amplitude follows from the
orthogonal basis change Q = S^T Qt S.  The normalized photon number of
guide k is the normalized column energy

    n_k = sum_j |Q[j, k]|^2 / sum_{j,k} |Q[j, k]|^2,

which for a symmetric Q equals <N_k> / sum_j <N_j> of the two-photon
component: writing the state over Fock kets, guide pairs (j, k), j != k,
carry weight 4|Q[j,k]|^2 and double occupations 2|Q[k,k]|^2, so
<N_k> = 4 sum_j |Q[j,k]|^2 / (2 sum |Q|^2) and the total photon number is
2; the common factors cancel in the ratio.

The transport statistics are the standard deviation of n_k over the
1-based guide index and its log-log slope gamma; gamma > 1 marks
superballistic spreading, gamma = 1 ballistic, 1/2 diffusive.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Sequence, Union

import numpy as np

from anwsim.model import ArrayConfig, ConfigError, PumpSpec, TransportSeries, homogeneous_array, validate
from anwsim.spectral import SupermodeDecomposition, decompose

__all__ = [
    "Basis",
    "BiphotonAmplitude",
    "BasisMismatchError",
    "ZeroAmplitudeError",
    "DistributionError",
    "SeriesError",
    "RegimeCrossing",
    "GammaExtremum",
    "PumpPositionScan",
    "sinc",
    "qtilde",
    "to_individual",
    "photon_distribution",
    "sigma",
    "gamma_series",
    "propagate_series",
    "detect_regime_transition",
    "gamma_extrema",
    "border_onset",
    "pump_position_scan",
]

DEFAULT_BORDER_THRESHOLD = 1e-3
_SINC_SERIES_CUTOFF = 1e-4


class BasisMismatchError(ValueError):
    """Operation applied to an amplitude in the wrong basis."""


class ZeroAmplitudeError(ValueError):
    """Photon distribution requested for an all-zero amplitude."""


class DistributionError(ValueError):
    """A photon-number distribution violates its invariants."""


class SeriesError(ValueError):
    """A z/sigma series violates the preconditions of a transport statistic."""


class Basis(str, Enum):
    SUPERMODE = "supermode"
    INDIVIDUAL = "individual"


@dataclass(frozen=True, eq=False)
class BiphotonAmplitude:
    """Complex symmetric two-photon amplitude matrix at one distance."""

    basis: Basis
    matrix: np.ndarray
    z: float

    def __post_init__(self) -> None:
        m = np.array(self.matrix, dtype=complex, copy=True)
        if m.ndim != 2 or m.shape[0] != m.shape[1]:
            raise ConfigError("amplitude matrix must be square")
        if not np.array_equal(m, m.T):
            raise ConfigError("amplitude matrix must be exactly symmetric")
        z = float(self.z)
        if not (np.isfinite(z) and z >= 0.0):
            raise ConfigError("z must be a nonnegative real")
        if z == 0.0 and np.any(m != 0.0):
            raise ConfigError("amplitude at z = 0 must vanish identically")
        m.setflags(write=False)
        object.__setattr__(self, "basis", Basis(self.basis))
        object.__setattr__(self, "matrix", m)
        object.__setattr__(self, "z", z)

    @property
    def n_guides(self) -> int:
        return int(self.matrix.shape[0])


def sinc(x):
    """sin(x)/x, evaluated by series below |x| = 1e-4 (so sinc(0) = 1)."""
    arr = np.asarray(x, dtype=float)
    small = np.abs(arr) < _SINC_SERIES_CUTOFF
    x2 = arr * arr
    series = 1.0 - x2 / 6.0 + (x2 * x2) / 120.0
    safe = np.where(small, 1.0, arr)
    out = np.where(small, series, np.sin(safe) / safe)
    return out if out.ndim else float(out)


def _resolve_beta_tilde(dec: SupermodeDecomposition, pump: PumpSpec, beta_tilde) -> np.ndarray:
    if pump.n_guides != dec.n_guides:
        raise ConfigError("pump and decomposition dimensions disagree")
    if beta_tilde is None:
        if pump.beta_tilde is None:
            raise ConfigError(
                "quasi-phase matching needs the signal constants: pass "
                "beta_tilde=pump.resolve_beta_tilde(config.beta_s) or set pump.beta_tilde"
            )
        return pump.beta_tilde
    bt = np.asarray(beta_tilde, dtype=float)
    if bt.shape != (dec.n_guides,):
        raise ConfigError("beta_tilde must have one entry per guide")
    return bt


def _qtilde_block(
    lam: np.ndarray,
    s: np.ndarray,
    eta: np.ndarray,
    beta_tilde: np.ndarray,
    strength: float,
    z_block: np.ndarray,
) -> np.ndarray:
    """Supermode amplitudes for a batch of distances, shape (len(z), N, N)."""
    n = lam.size
    sum_lam = lam[:, None] + lam[None, :]
    zc = z_block[:, None, None]
    out = np.zeros((z_block.size, n, n), dtype=complex)
    for j in np.flatnonzero(eta):
        pj = eta[j] * np.outer(s[:, j], s[:, j])
        half_plus = 0.5 * (sum_lam + beta_tilde[j]) * zc
        half_minus = 0.5 * (sum_lam - beta_tilde[j]) * zc
        out += pj[None, :, :] * np.exp(1j * half_plus) * sinc(half_minus)
    out *= 1j * strength * zc
    return out


def qtilde(
    dec: SupermodeDecomposition,
    pump: PumpSpec,
    z: float,
    *,
    beta_tilde: Optional[np.ndarray] = None,
) -> BiphotonAmplitude:
    """Supermode-basis biphoton amplitude at distance z (closed form)."""
    zf = float(z)
    if not (np.isfinite(zf) and zf >= 0.0):
        raise ConfigError("z must be a nonnegative real")
    bt = _resolve_beta_tilde(dec, pump, beta_tilde)
    block = _qtilde_block(dec.eigenvalues, dec.transform, pump.amplitudes, bt, pump.strength, np.array([zf]))
    return BiphotonAmplitude(Basis.SUPERMODE, block[0], zf)


def to_individual(amp: BiphotonAmplitude, dec: SupermodeDecomposition) -> BiphotonAmplitude:
    """Basis change Q = S^T Qt S; symmetry and Frobenius norm are preserved."""
    if amp.basis is not Basis.SUPERMODE:
        raise BasisMismatchError("to_individual expects a supermode-basis amplitude")
    if amp.n_guides != dec.n_guides:
        raise ConfigError("amplitude and decomposition dimensions disagree")
    s = dec.transform
    q = s.T @ amp.matrix @ s
    q = 0.5 * (q + q.T)  # restore exact symmetry lost to rounding
    return BiphotonAmplitude(Basis.INDIVIDUAL, q, amp.z)


def photon_distribution(amp: BiphotonAmplitude) -> np.ndarray:
    """Normalized photon numbers n_k from the column energies of Q."""
    if amp.basis is not Basis.INDIVIDUAL:
        raise BasisMismatchError("photon_distribution expects an individual-basis amplitude")
    m = amp.matrix
    w = (m.real * m.real + m.imag * m.imag).sum(axis=0)
    total = float(w.sum())
    if total == 0.0:
        raise ZeroAmplitudeError("photon distribution is undefined for an all-zero amplitude")
    return w / total


def _sigma_rows(rows: np.ndarray) -> np.ndarray:
    """Standard deviation over the 1-based guide index, one value per row."""
    k = np.arange(1, rows.shape[1] + 1, dtype=float)
    mean = rows @ k
    var = ((k[None, :] - mean[:, None]) ** 2 * rows).sum(axis=1)
    bad = var < 0.0
    if np.any(bad):
        if float(var[bad].min()) <= -1e-14:
            raise DistributionError("negative variance beyond rounding tolerance")
        var = np.where(bad, 0.0, var)
    return np.sqrt(var)


def sigma(n: np.ndarray) -> float:
    """Standard deviation of a photon-number distribution on guides 1..N."""
    arr = np.asarray(n, dtype=float)
    if arr.ndim != 1 or arr.size == 0:
        raise DistributionError("distribution must be a nonempty vector")
    if not np.all(np.isfinite(arr)):
        raise DistributionError("distribution must be finite")
    if float(arr.min()) < 0.0:
        raise DistributionError("distribution entries must be nonnegative")
    if abs(float(arr.sum()) - 1.0) > 1e-9:
        raise DistributionError(f"distribution must sum to 1 (got {float(arr.sum())!r})")
    return float(_sigma_rows(arr[None, :])[0])


def gamma_series(z_grid: np.ndarray, sigma_series: np.ndarray) -> np.ndarray:
    """Log-log slope d(log sigma)/d(log z): central differences, one-sided ends."""
    z = np.asarray(z_grid, dtype=float)
    s = np.asarray(sigma_series, dtype=float)
    if z.ndim != 1 or z.shape != s.shape or z.size < 2:
        raise SeriesError("need matching z and sigma vectors with at least two points")
    if not (z[0] > 0.0 and np.all(np.diff(z) > 0.0)):
        raise SeriesError("z grid must be strictly increasing and positive")
    if not np.all(s > 0.0):
        raise SeriesError("sigma must be strictly positive on the whole grid")
    logz = np.log(z)
    logs = np.log(s)
    out = np.empty_like(logs)
    out[1:-1] = (logs[2:] - logs[:-2]) / (logz[2:] - logz[:-2])
    out[0] = (logs[1] - logs[0]) / (logz[1] - logz[0])
    out[-1] = (logs[-1] - logs[-2]) / (logz[-1] - logz[-2])
    return out


def _resolve_distribution_indices(request, n_points: int) -> np.ndarray:
    if request is None:
        return np.empty(0, dtype=int)
    if isinstance(request, str):
        if request == "all":
            return np.arange(n_points)
        raise ConfigError(f"unknown distribution index request {request!r}")
    idx = np.unique(np.asarray(request, dtype=int))
    if idx.size and (idx.min() < 0 or idx.max() >= n_points):
        raise ConfigError("distribution indices out of grid range")
    return idx


def propagate_series(
    config: ArrayConfig,
    z_grid: np.ndarray,
    *,
    border_threshold: float = DEFAULT_BORDER_THRESHOLD,
    distribution_indices: Union[Sequence[int], str, None] = None,
    z_chunk: Optional[int] = None,
) -> TransportSeries:
    """Transport statistics along a strictly increasing grid of distances.

    Equivalent to decompose -> qtilde -> to_individual ->
    photon_distribution -> sigma at every grid point, evaluated through one
    matrix product per distance: with B = Qt S the column energies of
    Q = S^T Qt S equal those of B because S is orthogonal.  gamma is the
    central log-log slope (NaN for a single-point grid, where no slope
    exists).
    """
    config = validate(config)
    z = np.array(z_grid, dtype=float)
    if z.ndim != 1 or z.size == 0:
        raise ConfigError("z_grid must be a nonempty vector")
    if not (np.all(np.isfinite(z)) and z[0] > 0.0 and np.all(np.diff(z) > 0.0)):
        raise ConfigError("z_grid must be strictly increasing with positive entries")
    n = config.n_guides
    dec = decompose(config)
    bt = config.pump.resolve_beta_tilde(config.beta_s)
    eta = config.pump.amplitudes
    want = _resolve_distribution_indices(distribution_indices, z.size)
    want_mask = np.zeros(z.size, dtype=bool)
    want_mask[want] = True

    chunk = int(z_chunk) if z_chunk else max(1, 2_000_000 // (n * n))
    sig = np.empty(z.size)
    n_first = np.empty(z.size)
    n_last = np.empty(z.size)
    kept_rows = np.empty((want.size, n)) if want.size else None
    kept_at = 0
    s_mat = dec.transform
    for start in range(0, z.size, chunk):
        stop = min(start + chunk, z.size)
        block = _qtilde_block(dec.eigenvalues, s_mat, eta, bt, config.pump.strength, z[start:stop])
        b = (block.reshape(-1, n) @ s_mat).reshape(stop - start, n, n)
        w = (b.real * b.real + b.imag * b.imag).sum(axis=1)
        total = w.sum(axis=1)
        if np.any(total == 0.0):
            z_bad = z[start:stop][total == 0.0][0]
            raise ZeroAmplitudeError(f"zero biphoton amplitude at z = {z_bad!r} (dark pump?)")
        rows = w / total[:, None]
        sig[start:stop] = _sigma_rows(rows)
        n_first[start:stop] = rows[:, 0]
        n_last[start:stop] = rows[:, -1]
        local = np.flatnonzero(want_mask[start:stop])
        if local.size:
            kept_rows[kept_at : kept_at + local.size] = rows[local]
            kept_at += local.size

    gamma = gamma_series(z, sig) if z.size >= 2 else np.full(1, np.nan)
    pumped = set(config.pump.pumped_guides().tolist())
    monitor_first = 0 not in pumped
    monitor_last = (n - 1) not in pumped
    flags = np.zeros(z.size, dtype=bool)
    if monitor_first:
        flags |= n_first > border_threshold
    if monitor_last:
        flags |= n_last > border_threshold
    return TransportSeries(
        z_grid=z,
        sigma=sig,
        gamma=gamma,
        n_first=n_first,
        n_last=n_last,
        border_flags=flags,
        distributions=kept_rows,
        distribution_indices=want if want.size else None,
        corner_monitored=(monitor_first, monitor_last),
    )


@dataclass(frozen=True)
class RegimeCrossing:
    """A gamma = 1 crossing: falling leaves the superballistic regime, rising enters it."""

    z: float
    direction: str


@dataclass(frozen=True)
class GammaExtremum:
    z: float
    gamma: float
    kind: str


def _border_free_length(series: TransportSeries) -> int:
    flagged = np.flatnonzero(series.border_flags)
    return int(flagged[0]) if flagged.size else series.z_grid.size


def detect_regime_transition(series: TransportSeries) -> list[RegimeCrossing]:
    """All gamma = 1 crossings before border effects set in.

    Crossings are located by linear interpolation of gamma - 1 in log z
    between the bracketing grid points; grid points with gamma exactly 1
    never create a crossing on their own (a constant gamma = 1 series has
    none).
    """
    m = _border_free_length(series)
    x = np.log(series.z_grid[:m])
    d = series.gamma[:m] - 1.0
    idx = np.flatnonzero((d != 0.0) & np.isfinite(d))
    out: list[RegimeCrossing] = []
    for a, b in zip(idx[:-1], idx[1:]):
        da, db = d[a], d[b]
        if (da > 0.0) == (db > 0.0):
            continue
        t = da / (da - db)
        zc = float(np.exp(x[a] + t * (x[b] - x[a])))
        out.append(RegimeCrossing(z=zc, direction="falling" if da > 0.0 else "rising"))
    return out


def _parabolic_vertex(xs: np.ndarray, ys: np.ndarray) -> tuple[float, float]:
    x0, x1, x2 = (float(v) for v in xs)
    y0, y1, y2 = (float(v) for v in ys)
    d0 = (y1 - y0) / (x1 - x0)
    d1 = (y2 - y1) / (x2 - x1)
    a = (d1 - d0) / (x2 - x0)
    if a == 0.0:
        return x1, y1
    xv = 0.5 * (x0 + x1 - d0 / a)
    yv = y0 + d0 * (xv - x0) + a * (xv - x0) * (xv - x1)
    return xv, yv


def gamma_extrema(series: TransportSeries) -> list[GammaExtremum]:
    """Interior extrema of gamma before border effects, refined parabolically in log z."""
    m = _border_free_length(series)
    x = np.log(series.z_grid[:m])
    g = series.gamma[:m]
    out: list[GammaExtremum] = []
    for i in range(1, m - 1):
        if g[i] > g[i - 1] and g[i] > g[i + 1]:
            kind = "max"
        elif g[i] < g[i - 1] and g[i] < g[i + 1]:
            kind = "min"
        else:
            continue
        xv, gv = _parabolic_vertex(x[i - 1 : i + 2], g[i - 1 : i + 2])
        out.append(GammaExtremum(z=float(np.exp(xv)), gamma=gv, kind=kind))
    return out


def border_onset(series: TransportSeries, threshold: float = DEFAULT_BORDER_THRESHOLD) -> Optional[float]:
    """Smallest grid z where a monitored corner population exceeds the threshold."""
    monitor_first, monitor_last = series.corner_monitored
    exceeded = np.zeros(series.z_grid.size, dtype=bool)
    if monitor_first:
        exceeded |= series.n_first > threshold
    if monitor_last:
        exceeded |= series.n_last > threshold
    hits = np.flatnonzero(exceeded)
    return float(series.z_grid[hits[0]]) if hits.size else None


@dataclass(frozen=True, eq=False)
class PumpPositionScan:
    """gamma and corner populations for every pump position of a homogeneous array."""

    z_grid: np.ndarray
    gamma: np.ndarray
    n_first: np.ndarray
    n_last: np.ndarray

    def onset_loci(self, threshold: float = DEFAULT_BORDER_THRESHOLD) -> tuple[np.ndarray, np.ndarray]:
        """Per-pump onset of the left and right border (NaN where never reached).

        The pumped corner itself is excluded, matching the monitoring rule of
        :func:`propagate_series`.
        """
        n = self.gamma.shape[0]
        left = np.full(n, np.nan)
        right = np.full(n, np.nan)
        for p in range(n):
            if p != 0:
                hits = np.flatnonzero(self.n_first[p] > threshold)
                if hits.size:
                    left[p] = self.z_grid[hits[0]]
            if p != n - 1:
                hits = np.flatnonzero(self.n_last[p] > threshold)
                if hits.size:
                    right[p] = self.z_grid[hits[0]]
        return left, right


def pump_position_scan(
    config: ArrayConfig,
    z_grid: np.ndarray,
    *,
    border_threshold: float = DEFAULT_BORDER_THRESHOLD,
) -> PumpPositionScan:
    """Sweep the pumped guide across a homogeneous ordered array.

    Mirror symmetry of the homogeneous array is exploited: positions past
    the center are reflections of computed ones, so rows p and N+1-p are
    exactly equal (gamma) or exactly mirrored (corner populations).
    """
    config = validate(config)
    n = config.n_guides
    beta = config.beta_s
    coup = config.couplings
    homogeneous = bool(np.all(beta == beta[0])) and (coup.size == 0 or bool(np.all(coup == coup[0])))
    if not homogeneous:
        raise ConfigError("pump_position_scan requires a homogeneous ordered array")
    z = np.asarray(z_grid, dtype=float)
    gam = np.empty((n, z.size))
    nf = np.empty((n, z.size))
    nl = np.empty((n, z.size))
    for p in range(1, (n + 1) // 2 + 1):
        cfg = homogeneous_array(
            n,
            p,
            beta_0=float(beta[0]),
            coupling=float(coup[0]) if coup.size else 1.0,
            strength=config.pump.strength,
        )
        series = propagate_series(cfg, z, border_threshold=border_threshold)
        gam[p - 1] = series.gamma
        nf[p - 1] = series.n_first
        nl[p - 1] = series.n_last
        q = n + 1 - p
        if q != p:
            gam[q - 1] = series.gamma
            nf[q - 1] = series.n_last
            nl[q - 1] = series.n_first
    return PumpPositionScan(z_grid=z, gamma=gam, n_first=nf, n_last=nl)
