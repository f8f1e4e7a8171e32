"""Acceptance suite: one test per primary criterion, at its stated tolerance.

Each test prints a single line

    [ACCEPTANCE] <criterion>: PASS|FAIL -- <measured values>

(visible with ``pytest tests/test_acceptance.py -s`` or on failure).  All
randomized criteria are seeded and therefore deterministic.
"""

import time
from dataclasses import replace

import numpy as np
import pytest

from anwsim.model import DisorderSpec, homogeneous_array
from anwsim.configfile import geometric_grid
from anwsim.evolution import (
    border_onset,
    detect_regime_transition,
    gamma_extrema,
    propagate_series,
)
from anwsim.disorder import _dsigma_dz, run_ensemble, sigma_vs_kappa
from anwsim.validation import run_validation_suite

SEED = 20260809


def _report(name, ok, detail):
    print(f"[ACCEPTANCE] {name}: {'PASS' if ok else 'FAIL'} -- {detail}")
    assert ok, f"{name}: {detail}"


@pytest.fixture(scope="module")
def ordered_71():
    z = geometric_grid(0.05, 30.0, 400)
    out = {}
    for name, pump in (("center", 36), ("corner", 1)):
        t0 = time.perf_counter()
        series = propagate_series(homogeneous_array(71, pump), z)
        out[name] = (series, time.perf_counter() - t0)
    return out


@pytest.fixture(scope="module")
def size_scan():
    z = geometric_grid(0.05, 30.0, 400)
    return {n: propagate_series(homogeneous_array(n, (n + 1) // 2), z) for n in (25, 50, 75)}


def test_ordered_center_features(ordered_71):
    series, elapsed = ordered_71["center"]
    peaks = [e for e in gamma_extrema(series) if e.kind == "max"]
    top = max(peaks, key=lambda e: e.gamma)
    falling = [c for c in detect_regime_transition(series) if c.direction == "falling"]
    ok = (
        abs(top.gamma - 1.114) <= 0.005
        and abs(top.z - 1.203) <= 0.02
        and len(falling) >= 1
        and abs(falling[0].z - 2.005) <= 0.02
    )
    _report(
        "ordered center-pump features (N=71)",
        ok,
        f"gamma_max={top.gamma:.4f}@z={top.z:.4f} (want 1.114+-0.005 @ 1.203+-0.02), "
        f"falling crossing z={falling[0].z:.4f} (want 2.005+-0.02), runtime {elapsed:.2f}s (target < 5 s)",
    )


def test_ordered_corner_features(ordered_71):
    series, elapsed = ordered_71["corner"]
    extrema = gamma_extrema(series)
    dips = [e for e in extrema if e.kind == "min"]
    peaks = [e for e in extrema if e.kind == "max"]
    dip = min(dips, key=lambda e: e.gamma)
    top = max(peaks, key=lambda e: e.gamma)
    rising = [c for c in detect_regime_transition(series) if c.direction == "rising"]
    ok = (
        abs(dip.gamma - 0.943) <= 0.005
        and abs(dip.z - 1.630) <= 0.02
        and len(rising) >= 1
        and abs(rising[0].z - 2.404) <= 0.02
        and abs(top.gamma - 1.063) <= 0.005
        and abs(top.z - 4.619) <= 0.05
    )
    _report(
        "ordered corner-pump features (N=71)",
        ok,
        f"gamma_min={dip.gamma:.4f}@z={dip.z:.4f} (want 0.943+-0.005 @ 1.630+-0.02), "
        f"rising crossing z={rising[0].z:.4f} (want 2.404+-0.02), "
        f"gamma_max={top.gamma:.4f}@z={top.z:.4f} (want 1.063+-0.005 @ 4.619+-0.05), "
        f"runtime {elapsed:.2f}s (target < 5 s)",
    )


@pytest.mark.slow
def test_large_array_asymptotics():
    t0 = time.perf_counter()

    def local_gamma(n_guides, pump, z0):
        z = z0 * 10.0 ** (np.arange(-2, 3) / 400.0)  # 5-point local log grid
        series = propagate_series(homogeneous_array(n_guides, pump), z)
        return float(series.gamma[2])

    g_center = local_gamma(1000, 500, 200.0)
    g_corner = local_gamma(1000, 1, 400.0)
    elapsed = time.perf_counter() - t0
    ok = abs(g_center - 0.936) <= 0.005 and abs(g_corner - 1.001) <= 0.005
    _report(
        "large-array asymptotics (N=1000)",
        ok,
        f"center gamma(200)={g_center:.4f} (want 0.936+-0.005), "
        f"corner gamma(400)={g_corner:.4f} (want 1.001+-0.005), runtime {elapsed:.1f}s (target < 10 min)",
    )


def test_border_onset(ordered_71, size_scan):
    onset_71 = border_onset(ordered_71["center"][0])
    onsets = {n: border_onset(size_scan[n]) for n in (25, 50, 75)}
    ok = (
        onset_71 is not None
        and 12.0 <= onset_71 <= 20.0
        and onsets[25] < onsets[50] < onsets[75]
    )
    _report(
        "border onset (default threshold)",
        ok,
        f"N=71 onset={onset_71:.2f} (want within [12, 20]); "
        f"N=25/50/75 onsets {onsets[25]:.2f} < {onsets[50]:.2f} < {onsets[75]:.2f}",
    )


def test_gamma_size_independence(size_scan):
    # The comparison window ends where any corner population reaches 1e-7,
    # commensurate with the 1e-6 gamma tolerance; at the 1e-3 display
    # threshold the curves already differ at the 1e-3 level.
    onset_min = min(border_onset(size_scan[n], threshold=1e-7) for n in (25, 50, 75))
    z = size_scan[25].z_grid
    mask = z < onset_min
    g = np.stack([size_scan[n].gamma for n in (25, 50, 75)])
    spread = (g.max(axis=0) - g.min(axis=0))[mask].max()
    ok = spread <= 1e-6
    _report(
        "gamma size-independence (N=25/50/75)",
        ok,
        f"max gamma spread {spread:.2e} for z < {onset_min:.2f} (want <= 1e-6)",
    )


@pytest.mark.slow
def test_disorder_ensemble_properties():
    t0 = time.perf_counter()
    center = homogeneous_array(51, 26)
    corner = homogeneous_array(51, 1)
    spec = DisorderSpec(realizations=200, master_seed=SEED)

    # (a) sigma at C0 z = 10 non-increasing in kappa_C within 2 stderr
    sweep_a = sigma_vs_kappa(center, [0.0, 0.25, 0.5, 0.75, 1.0], "off_diagonal", [10.0], spec)
    mean_a = sweep_a.sigma_mean[:, 0]
    err_a = sweep_a.sigma_stderr[:, 0]
    ok_a = all(
        mean_a[i + 1] <= mean_a[i] + 2.0 * np.hypot(err_a[i], err_a[i + 1])
        for i in range(mean_a.size - 1)
    )

    # (b) superballistic presence at (0,0), absence at (1,1)
    z_window = geometric_grid(0.05, 8.0, 100)
    ordered = run_ensemble(center, spec, z_window)
    full = run_ensemble(center, replace(spec, kappa_c=1.0, kappa_beta=1.0), z_window)
    ok_b = bool(np.any(ordered.gamma_of_mean > 1.0)) and not np.any(full.gamma_of_mean > 1.0)

    # (c) diagonal disorder, center pump: significant initial rise of sigma
    sweep_c = sigma_vs_kappa(center, [0.0, 0.1], "diagonal", [5.0, 10.0], spec)
    rises = sweep_c.sigma_mean[1] - sweep_c.sigma_mean[0]
    ok_c = bool(np.all(rises > 2.0 * sweep_c.sigma_stderr[1]))

    # (d) corner pump: monotone non-increasing for either type (z doubled)
    ok_d = True
    for dtype in ("off_diagonal", "diagonal"):
        sweep_d = sigma_vs_kappa(corner, [0.0, 0.25, 0.5, 0.75, 1.0], dtype, [10.0, 20.0], spec)
        for iz in range(2):
            m = sweep_d.sigma_mean[:, iz]
            e = sweep_d.sigma_stderr[:, iz]
            ok_d = ok_d and all(
                m[i + 1] <= m[i] + 2.0 * np.hypot(e[i], e[i + 1]) for i in range(m.size - 1)
            )

    elapsed = time.perf_counter() - t0
    ok = ok_a and ok_b and ok_c and ok_d
    _report(
        "disorder ensemble properties (N=51, 200 realizations)",
        ok,
        f"(a) non-increasing in kappa_C: {ok_a} {np.round(mean_a, 3).tolist()}; "
        f"(b) present at (0,0): {bool(np.any(ordered.gamma_of_mean > 1.0))}, "
        f"absent at (1,1): {not np.any(full.gamma_of_mean > 1.0)} "
        f"(max gamma {full.gamma_of_mean.max():.4f}); "
        f"(c) initial diagonal rise {np.round(rises, 4).tolist()} > 2se "
        f"{np.round(2 * sweep_c.sigma_stderr[1], 4).tolist()}: {ok_c}; "
        f"(d) corner monotone: {ok_d}; runtime {elapsed:.0f}s (target < 15 min)",
    )


@pytest.mark.slow
def test_localization():
    t0 = time.perf_counter()
    base = homogeneous_array(401, 201)
    z = geometric_grid(0.05, 80.0, 16)
    spec = DisorderSpec(kappa_beta=1.0, realizations=200, master_seed=SEED)
    res = run_ensemble(base, spec, z)
    ordered = propagate_series(base, z)
    ordered_slope = _dsigma_dz(z, ordered.sigma)

    tail = z >= z[-1] / 10.0
    tail_sigma = res.sigma_mean[tail]
    rel_change = float((tail_sigma.max() - tail_sigma.min()) / tail_sigma[-1])
    slope_ratio = abs(float(res.dsigma_dz[-1] / ordered_slope[-1]))
    ordered_growth = float(
        (ordered.sigma[tail][-1] - ordered.sigma[tail][0]) / ordered.sigma[tail][0]
    )
    elapsed = time.perf_counter() - t0

    ok_flat = rel_change < 0.02
    ok_slope = slope_ratio < 0.05
    _report(
        "localization (N=401, kappa_beta=1)",
        ok_flat and ok_slope,
        f"tail-decade sigma_mean change {rel_change * 100:.1f}% (want < 2%); "
        f"endpoint |dsigma/dz| = {slope_ratio * 100:.2f}% of ordered (want < 5%); "
        f"ordered sigma grew {ordered_growth * 100:.0f}% over the same decade; "
        f"runtime {elapsed:.0f}s (target < 20 min)",
    )


@pytest.mark.slow
def test_oracle_suite():
    t0 = time.perf_counter()
    results = run_validation_suite(quick=False, seed=SEED)
    elapsed = time.perf_counter() - t0
    ok = all(r.passed for r in results)
    detail = "; ".join(f"{r.name}: {'ok' if r.passed else 'FAIL(' + r.detail + ')'}" for r in results)
    _report("oracle suite", ok, f"{detail}; runtime {elapsed:.0f}s (target < 1 min)")
