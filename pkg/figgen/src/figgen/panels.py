"""Figure builders for simulator outputs.

Layout and styling aim for legibility, not pixel fidelity: what must be
faithful are the plotted numbers and the detected feature positions, which
are read verbatim from the input files (dashed transition lines sit at the
interpolated crossings from transitions.json).
"""

from __future__ import annotations

import matplotlib
import matplotlib.pyplot as plt
import numpy as np

from figgen.io import RunData, checksum_of, read_kappa_sweep, read_regime_map

TRANSITION_STYLE = {"color": "gray", "linestyle": "--", "linewidth": 1.0}
GUIDE_STYLE = {"color": "black", "linewidth": 0.8, "alpha": 0.5}
BORDER_SHADE = {"color": "red", "alpha": 0.15}


def save_figure(fig, path, checksum: str) -> None:
    """Write the figure with the input checksum embedded in the metadata."""
    fig.savefig(path, metadata={"anwsim-inputs-sha256": checksum}, dpi=150)
    plt.close(fig)


def _gamma_panel(ax, run: RunData, z_lo, z_hi, inset: bool):
    s = run.series
    mask = (s["z"] >= z_lo) & (s["z"] <= z_hi)
    ax.plot(s["z"][mask], s["gamma"][mask], color="tab:blue", linewidth=1.2)
    ax.axhline(1.0, **GUIDE_STYLE)
    ax.set_xscale("log")
    ax.set_xlabel(r"$C_0 z$")
    ax.set_ylabel(r"$\gamma$")
    if run.transitions:
        for crossing in run.transitions["crossings"]:
            if z_lo <= crossing["z"] <= z_hi:
                ax.axvline(crossing["z"], **TRANSITION_STYLE)
        onset = run.transitions.get("border_onset")
        if onset is not None and onset < z_hi:
            ax.axvspan(max(onset, z_lo), z_hi, **BORDER_SHADE)
    if inset and run.distributions is not None:
        z_snap, rows = run.distributions
        sub = ax.inset_axes([0.06, 0.52, 0.42, 0.42])
        sub.imshow(
            rows.T,
            aspect="auto",
            origin="lower",
            cmap="magma",
            extent=[0, z_snap.size - 1, 1, rows.shape[1]],
        )
        sub.set_xticks([])
        sub.set_yticks([])
        sub.set_ylabel("guide", fontsize=6)
        sub.set_xlabel("propagation", fontsize=6)


def fig_gamma_panels(runs, z_split: float = 8.0):
    """Transport-exponent panels: one row per run, small/full distance columns."""
    if not runs:
        raise ValueError("need at least one run")
    fig, axes = plt.subplots(len(runs), 2, figsize=(9, 3.2 * len(runs)), squeeze=False)
    for row, run in enumerate(runs):
        z = run.series["z"]
        _gamma_panel(axes[row, 0], run, z[0], min(z_split, z[-1]), inset=False)
        _gamma_panel(axes[row, 1], run, z[0], z[-1], inset=True)
        axes[row, 0].set_title(f"{run.label} (short range)", fontsize=9)
        axes[row, 1].set_title(f"{run.label} (full range)", fontsize=9)
    fig.tight_layout()
    return fig


def _cell_edges(values: np.ndarray) -> np.ndarray:
    if values.size == 1:
        half = 0.025 if values[0] in (0.0, 1.0) else abs(values[0]) * 0.05 + 0.025
        return np.array([values[0] - half, values[0] + half])
    mids = 0.5 * (values[1:] + values[:-1])
    first = values[0] - (mids[0] - values[0])
    last = values[-1] + (values[-1] - mids[-1])
    return np.concatenate([[first], mids, [last]])


def fig_regime_map(map_path):
    """Black/white presence map over the disorder-strength plane."""
    kc, kb, present = read_regime_map(map_path)
    fig, ax = plt.subplots(figsize=(4.2, 3.8))
    mesh_x = _cell_edges(kc)
    mesh_y = _cell_edges(kb)
    ax.pcolormesh(mesh_x, mesh_y, present.T.astype(float), cmap="gray", vmin=0.0, vmax=1.0)
    ax.set_xlabel(r"$\kappa_C$")
    ax.set_ylabel(r"$\kappa_\beta$")
    ax.set_title("superballistic regime present (white) / absent (black)", fontsize=9)
    fig.tight_layout()
    return fig, checksum_of([map_path])


def fig_sigma_kappa(sweep_path):
    """sigma versus disorder strength: one line per (type, distance), stderr bands."""
    data = read_kappa_sweep(sweep_path)
    fig, ax = plt.subplots(figsize=(5.2, 3.8))
    types = sorted(set(str(t) for t in data["disorder_type"]))
    z_values = np.unique(np.asarray(data["z"], dtype=float))
    colors = matplotlib.colormaps["viridis"](np.linspace(0.1, 0.85, z_values.size))
    styles = {t: ls for t, ls in zip(types, ("-", "--", ":"))}
    for dtype in types:
        for color, z_val in zip(colors, z_values):
            rows = [
                r for r in data
                if str(r["disorder_type"]) == dtype and float(r["z"]) == z_val
            ]
            if not rows:
                continue
            kappa = np.array([float(r["kappa"]) for r in rows])
            order = np.argsort(kappa)
            kappa = kappa[order]
            mean = np.array([float(r["sigma_mean"]) for r in rows])[order]
            err = np.array([float(r["sigma_stderr"]) for r in rows])[order]
            ax.plot(kappa, mean, styles[dtype], color=color, label=f"{dtype}, $C_0z$={z_val:g}")
            ax.fill_between(kappa, mean - err, mean + err, color=color, alpha=0.25)
    ax.set_xlabel(r"$\kappa$")
    ax.set_ylabel(r"$\sigma$")
    ax.legend(fontsize=7)
    fig.tight_layout()
    return fig, checksum_of([sweep_path])
