"""Self-contained check suite behind the ``validate`` CLI subcommand.

Every check pits an implementation path against an independent reference:
the tridiagonal eigensolver against the homogeneous closed form, the sinc
closed form against RK4 integration (ordered and disordered draws), the
matrix-product basis change against the explicit loop sum, plus the
normalization / symmetry / scale-invariance invariants on random arrays.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from anwsim.model import ArrayConfig, PumpSpec, homogeneous_array
from anwsim.spectral import decompose, decomposition_residuals, homogeneous_reference
from anwsim.evolution import photon_distribution, qtilde, to_individual
from anwsim.oracle import integrate_qtilde, naive_transform, required_steps

__all__ = ["CheckResult", "run_validation_suite", "random_disordered_config"]


@dataclass
class CheckResult:
    name: str
    passed: bool
    detail: str


def random_disordered_config(rng: np.random.Generator, *, max_guides: int = 10) -> ArrayConfig:
    """Random array with full-strength disorder ranges and a random pump."""
    n = int(rng.integers(1, max_guides + 1))
    beta = rng.uniform(-3.0, 3.0, n)
    couplings = rng.uniform(0.1, 1.9, max(n - 1, 0))
    guide = int(rng.integers(1, n + 1))
    phase = float(rng.uniform(0.0, 2.0 * np.pi))
    pump = PumpSpec.single(n, guide, strength=float(rng.uniform(0.5, 2.0)), phase=phase)
    return ArrayConfig(n, beta, couplings, pump)


def _check_spectral_cross_oracle(sizes, rng) -> CheckResult:
    worst_lam = 0.0
    worst_vec = 0.0
    for n in sizes:
        beta_0 = float(rng.uniform(-2.0, 2.0))
        c_0 = float(rng.uniform(0.5, 2.0))
        cfg = homogeneous_array(n, max(1, n // 2), beta_0=beta_0, coupling=c_0)
        num = decompose(cfg)
        ref = homogeneous_reference(n, beta_0, c_0)
        scale = abs(beta_0) + 2.0 * c_0
        worst_lam = max(worst_lam, float(np.abs(num.eigenvalues - ref.eigenvalues).max()) / scale)
        worst_vec = max(worst_vec, float(np.abs(np.abs(num.transform) - np.abs(ref.transform)).max()))
    passed = worst_lam <= 1e-10 and worst_vec <= 1e-8
    return CheckResult(
        "spectral cross-oracle",
        passed,
        f"N up to {max(sizes)}: eigenvalue error {worst_lam:.2e} (tol 1e-10), "
        f"eigenvector error {worst_vec:.2e} (tol 1e-8)",
    )


def _check_rk4_agreement(count, rng) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        cfg = random_disordered_config(rng)
        dec = decompose(cfg)
        bt = cfg.pump.resolve_beta_tilde(cfg.beta_s)
        z_max = float(rng.uniform(0.5, 10.0))
        steps = max(4000, 2 * required_steps(dec, cfg.pump, z_max, beta_tilde=bt))
        closed = qtilde(dec, cfg.pump, z_max, beta_tilde=bt)
        integrated = integrate_qtilde(dec, cfg.pump, z_max, steps, beta_tilde=bt)
        worst = max(worst, float(np.abs(closed.matrix - integrated.matrix).max()))
    passed = worst <= 1e-8
    return CheckResult(
        "closed form vs RK4",
        passed,
        f"{count} random disordered configs, max entry error {worst:.2e} (tol 1e-8)",
    )


def _check_invariants(count, rng) -> CheckResult:
    worst = {"ortho": 0.0, "resid": 0.0, "norm": 0.0, "scale": 0.0, "shift": 0.0, "symm": 0.0}
    for _ in range(count):
        cfg = random_disordered_config(rng)
        if cfg.n_guides < 2:
            continue
        dec = decompose(cfg)
        ortho, resid = decomposition_residuals(cfg, dec)
        worst["ortho"] = max(worst["ortho"], ortho)
        worst["resid"] = max(worst["resid"], resid)
        z = float(rng.uniform(0.2, 8.0))
        bt = cfg.pump.resolve_beta_tilde(cfg.beta_s)
        amp = to_individual(qtilde(dec, cfg.pump, z, beta_tilde=bt), dec)
        worst["symm"] = max(worst["symm"], float(np.abs(amp.matrix - amp.matrix.T).max()))
        n_k = photon_distribution(amp)
        worst["norm"] = max(worst["norm"], abs(float(n_k.sum()) - 1.0))
        scaled_pump = PumpSpec(cfg.pump.amplitudes, cfg.pump.strength * 7.25, cfg.pump.beta_tilde)
        n_scaled = photon_distribution(to_individual(qtilde(dec, scaled_pump, z, beta_tilde=bt), dec))
        worst["scale"] = max(worst["scale"], float(np.abs(n_scaled - n_k).max()))
        shift = float(rng.uniform(-2.0, 2.0))
        shifted = ArrayConfig(cfg.n_guides, cfg.beta_s + shift, cfg.couplings, cfg.pump)
        dec_s = decompose(shifted)
        bt_s = shifted.pump.resolve_beta_tilde(shifted.beta_s)
        n_shift = photon_distribution(to_individual(qtilde(dec_s, shifted.pump, z, beta_tilde=bt_s), dec_s))
        worst["shift"] = max(worst["shift"], float(np.abs(n_shift - n_k).max()))
    passed = (
        worst["ortho"] <= 1e-10
        and worst["resid"] <= 1e-10
        and worst["symm"] == 0.0
        and worst["norm"] <= 1e-12
        and worst["scale"] <= 1e-13
        and worst["shift"] <= 1e-12
    )
    detail = (
        f"orthonormality {worst['ortho']:.2e}, residual {worst['resid']:.2e}, "
        f"asymmetry {worst['symm']:.1e}, normalization {worst['norm']:.2e}, "
        f"strength-scale drift {worst['scale']:.2e}, beta-shift drift {worst['shift']:.2e}"
    )
    return CheckResult("evolution invariants", passed, detail)


def _check_naive_transform(count, rng) -> CheckResult:
    worst = 0.0
    for _ in range(count):
        cfg = random_disordered_config(rng, max_guides=5)
        dec = decompose(cfg)
        bt = cfg.pump.resolve_beta_tilde(cfg.beta_s)
        z = float(rng.uniform(0.2, 3.0))
        amp = qtilde(dec, cfg.pump, z, beta_tilde=bt)
        fast = to_individual(amp, dec).matrix
        slow = naive_transform(amp.matrix, dec.transform)
        worst = max(worst, float(np.abs(fast - slow).max()))
    passed = worst <= 1e-12
    return CheckResult(
        "basis change vs loop sum",
        passed,
        f"{count} configs, max entry difference {worst:.2e} (tol 1e-12)",
    )


def run_validation_suite(*, quick: bool = False, seed: int = 20260809) -> list[CheckResult]:
    rng = np.random.default_rng(seed)
    sizes = [2, 3, 5, 8, 13, 21] if quick else [2, 3, 5, 8, 13, 21, 34, 55, 89, 144, 200]
    return [
        _check_spectral_cross_oracle(sizes, rng),
        _check_rk4_agreement(10 if quick else 50, rng),
        _check_invariants(5 if quick else 20, rng),
        _check_naive_transform(3 if quick else 10, rng),
    ]
