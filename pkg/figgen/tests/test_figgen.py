import json

import numpy as np
import pytest
from matplotlib.collections import PolyCollection
from PIL import Image

from figgen.io import InputError, checksum_of, load_run, read_regime_map
from figgen.panels import fig_gamma_panels, fig_regime_map, fig_sigma_kappa, save_figure
from figgen.cli import main


def _vline_positions(ax):
    out = []
    for line in ax.get_lines():
        x = line.get_xdata()
        if len(x) == 2 and x[0] == x[1] and line.get_linestyle() == "--":
            out.append(float(x[0]))
    return out


def test_gamma_panels_layout_and_transition_lines(run_dir):
    run = load_run(run_dir)
    fig = fig_gamma_panels([run])
    main_axes = [ax for ax in fig.axes if ax.get_ylabel() == r"$\gamma$"]
    assert len(main_axes) == 2  # short-range and full-range columns
    expected = json.loads((run_dir / "transitions.json").read_text())["crossings"][0]["z"]
    full_range = main_axes[1]
    assert expected in _vline_positions(full_range)  # exact placement, read from file
    # shaded border region present on the full-range panel
    assert any(isinstance(p, PolyCollection) or p.get_alpha() for p in full_range.patches)
    # inset heatmap present (insets are child axes of their panel)
    every_ax = list(fig.axes) + [c for ax in fig.axes for c in ax.child_axes]
    assert any(ax.images for ax in every_ax)


def test_gamma_panels_two_runs(run_dir):
    run = load_run(run_dir)
    fig = fig_gamma_panels([run, run])
    main_axes = [ax for ax in fig.axes if ax.get_ylabel() == r"$\gamma$"]
    assert len(main_axes) == 4  # 2x2 layout


def test_no_transitions_means_no_dashed_lines(run_dir):
    path = run_dir / "transitions.json"
    doc = json.loads(path.read_text())
    doc["crossings"] = []
    doc["border_onset"] = None
    path.write_text(json.dumps(doc))
    fig = fig_gamma_panels([load_run(run_dir)])
    for ax in fig.axes:
        assert _vline_positions(ax) == []


def test_checksum_embedded_in_png(run_dir, tmp_path):
    run = load_run(run_dir)
    out = tmp_path / "panels.png"
    fig = fig_gamma_panels([run])
    save_figure(fig, out, run.checksum)
    meta = Image.open(out).text
    assert meta["anwsim-inputs-sha256"] == run.checksum
    assert "series.csv=" in run.checksum


def test_regime_map_rendering(regime_map_csv, tmp_path):
    kc, kb, present = read_regime_map(regime_map_csv)
    assert present.tolist() == [[True, True], [False, False]]
    fig, checksum = fig_regime_map(regime_map_csv)
    out = tmp_path / "map.png"
    save_figure(fig, out, checksum)
    assert out.exists()


def test_regime_map_single_cell(tmp_path):
    path = tmp_path / "one.csv"
    path.write_text("kappa_c,kappa_beta,present\n0,0,1\n", encoding="utf-8")
    fig, checksum = fig_regime_map(path)
    save_figure(fig, tmp_path / "one.png", checksum)
    assert (tmp_path / "one.png").exists()


def test_sigma_kappa_rendering(kappa_sweep_csv, tmp_path):
    fig, checksum = fig_sigma_kappa(kappa_sweep_csv)
    ax = fig.axes[0]
    assert len(ax.get_lines()) == 4  # two types x two distances
    assert any(isinstance(c, PolyCollection) for c in ax.collections)  # stderr bands
    save_figure(fig, tmp_path / "sweep.png", checksum)
    assert (tmp_path / "sweep.png").exists()


def test_single_kappa_sweep_degenerate(tmp_path):
    path = tmp_path / "single.csv"
    path.write_text(
        "kappa,z,sigma_mean,sigma_stderr,disorder_type\n0,5,3.5,0,off_diagonal\n",
        encoding="utf-8",
    )
    fig, checksum = fig_sigma_kappa(path)
    save_figure(fig, tmp_path / "single.png", checksum)
    assert (tmp_path / "single.png").exists()


def test_missing_input_errors(tmp_path):
    with pytest.raises(InputError):
        load_run(tmp_path)  # no series.csv
    assert main(["regime-map", str(tmp_path / "absent.csv"), "-o", str(tmp_path / "x.png")]) == 1


def test_cli_round_trip(run_dir, tmp_path, capsys):
    out = tmp_path / "cli.png"
    assert main(["gamma-panels", "--run", str(run_dir), "-o", str(out)]) == 0
    assert out.exists()
    meta = Image.open(out).text
    assert "anwsim-inputs-sha256" in meta


def test_checksum_changes_with_content(tmp_path):
    a = tmp_path / "a.csv"
    a.write_text("x\n1\n")
    before = checksum_of([a])
    a.write_text("x\n2\n")
    assert checksum_of([a]) != before
