"""Brute-force verification paths for the closed-form evolution.

The phase integral behind the closed form is redone numerically here: the
interaction-picture amplitude obeys

    dR[n, m]/dz = i G sum_j eta_j S[n, j] S[m, j] exp(i (bt_j - lam_n - lam_m) z),

and the supermode amplitude follows by the pair-phase map
Qt[n, m] = R[n, m] * exp(i (lam_n + lam_m) z).  A fixed-step classical RK4
integrates the system; for a z-only integrand its stages collapse to
Simpson weights, keeping the O(h^4) error while staying fully independent
of the sinc evaluation it is meant to check.

``naive_transform`` re-does the basis change as an explicit loop sum so the
matrix-product path has an order-of-evaluation-independent reference.
"""

from __future__ import annotations

import numpy as np

from anwsim.model import ConfigError, PumpSpec
from anwsim.spectral import SupermodeDecomposition
from anwsim.evolution import Basis, BiphotonAmplitude, _resolve_beta_tilde

__all__ = ["OracleResolutionError", "integrate_qtilde", "naive_transform", "required_steps"]

_STEPS_PER_PERIOD = 20


class OracleResolutionError(ValueError):
    """The requested step count cannot resolve the fastest phase."""


def _max_phase_rate(dec: SupermodeDecomposition, pump: PumpSpec, bt: np.ndarray) -> float:
    lam = dec.eigenvalues
    active = np.flatnonzero(pump.amplitudes)
    if active.size == 0:
        return 0.0
    pair_min = 2.0 * lam[-1]
    pair_max = 2.0 * lam[0]
    rates = np.maximum(np.abs(pair_max - bt[active]), np.abs(pair_min - bt[active]))
    return float(rates.max())


def required_steps(dec: SupermodeDecomposition, pump: PumpSpec, z_max: float, *, beta_tilde=None) -> int:
    """Smallest step count meeting the 20-steps-per-period resolution rule."""
    bt = _resolve_beta_tilde(dec, pump, beta_tilde)
    rate = _max_phase_rate(dec, pump, bt)
    periods = rate * float(z_max) / (2.0 * np.pi)
    return max(1, int(np.ceil(_STEPS_PER_PERIOD * periods)))


def integrate_qtilde(
    dec: SupermodeDecomposition,
    pump: PumpSpec,
    z_max: float,
    step_count: int,
    *,
    beta_tilde=None,
) -> BiphotonAmplitude:
    """Supermode amplitude at z_max by RK4 integration of the phase integral."""
    z_end = float(z_max)
    if not (np.isfinite(z_end) and z_end >= 0.0):
        raise ConfigError("z_max must be a nonnegative real")
    steps = int(step_count)
    if steps < 1:
        raise ConfigError("step_count must be a positive integer")
    bt = _resolve_beta_tilde(dec, pump, beta_tilde)
    n = dec.n_guides
    if z_end == 0.0:
        return BiphotonAmplitude(Basis.SUPERMODE, np.zeros((n, n), dtype=complex), 0.0)

    rate = _max_phase_rate(dec, pump, bt)
    if rate > 0.0:
        periods = rate * z_end / (2.0 * np.pi)
        if steps / periods < _STEPS_PER_PERIOD:
            raise OracleResolutionError(
                f"{steps} steps resolve the fastest phase with only "
                f"{steps / periods:.1f} steps per period; need at least {_STEPS_PER_PERIOD} "
                f"({int(np.ceil(_STEPS_PER_PERIOD * periods))} steps)"
            )

    lam = dec.eigenvalues
    s = dec.transform
    eta = pump.amplitudes
    sum_lam = lam[:, None] + lam[None, :]
    active = np.flatnonzero(eta)
    profiles = [eta[j] * np.outer(s[:, j], s[:, j]) for j in active]
    rates = [1j * (bt[j] - sum_lam) for j in active]

    def integrand(zp: float) -> np.ndarray:
        acc = np.zeros((n, n), dtype=complex)
        for pj, wj in zip(profiles, rates):
            acc += pj * np.exp(wj * zp)
        return 1j * pump.strength * acc

    h = z_end / steps
    r = np.zeros((n, n), dtype=complex)
    for k in range(steps):
        z0 = k * h
        k1 = integrand(z0)
        k2 = integrand(z0 + 0.5 * h)  # equals the k3 stage for a z-only integrand
        k4 = integrand(z0 + h)
        r += (h / 6.0) * (k1 + 4.0 * k2 + k4)
    qt = r * np.exp(1j * sum_lam * z_end)
    qt = 0.5 * (qt + qt.T)
    return BiphotonAmplitude(Basis.SUPERMODE, qt, z_end)


def naive_transform(qtilde_matrix: np.ndarray, s: np.ndarray) -> np.ndarray:
    """Explicit double sum Q[j, k] = sum_{n,m} S[n, j] Qt[n, m] S[m, k].

    Deliberately written as plain loops; use only for small N.
    """
    qt = np.asarray(qtilde_matrix)
    s = np.asarray(s)
    n = qt.shape[0]
    if qt.shape != (n, n) or s.shape != (n, n):
        raise ConfigError("matrix dimensions disagree")
    out = np.zeros((n, n), dtype=complex)
    for j in range(n):
        for k in range(n):
            acc = 0.0 + 0.0j
            for a in range(n):
                for b in range(n):
                    acc += s[a, j] * qt[a, b] * s[b, k]
            out[j, k] = acc
    return out
