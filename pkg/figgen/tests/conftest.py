import json

import matplotlib
import numpy as np
import pytest

matplotlib.use("Agg")


@pytest.fixture()
def run_dir(tmp_path):
    """A synthetic simulator output directory matching the documented schemas."""
    z = np.geomspace(0.05, 20.0, 40)
    gamma = 1.0 + 0.12 * np.exp(-0.5 * (np.log(z / 1.2) / 0.5) ** 2) - 0.02 * np.log(z)
    sigma = z ** 1.05
    onset = 14.0
    lines = ["z,sigma,gamma,n_first,n_last,border_flag"]
    for i in range(z.size):
        flag = 1 if z[i] >= onset else 0
        lines.append(f"{z[i]:.17g},{sigma[i]:.17g},{gamma[i]:.17g},{1e-6:.17g},{1e-6:.17g},{flag}")
    (tmp_path / "series.csv").write_text("\n".join(lines) + "\n", encoding="utf-8")

    n_guides = 11
    header = "z," + ",".join(f"n_{k}" for k in range(1, n_guides + 1))
    rows = [header]
    for zi in z[::8]:
        dist = np.exp(-0.5 * ((np.arange(n_guides) - 5) / (0.5 + zi / 4)) ** 2)
        dist /= dist.sum()
        rows.append(",".join([f"{zi:.17g}"] + [f"{v:.17g}" for v in dist]))
    (tmp_path / "distributions.csv").write_text("\n".join(rows) + "\n", encoding="utf-8")

    transitions = {
        "crossings": [{"z": 2.31, "direction": "falling"}],
        "extrema": [{"z": 1.2, "gamma": 1.12, "kind": "max"}],
        "border_onset": onset,
        "border_threshold": 1e-3,
        "z_range": [float(z[0]), float(z[-1])],
    }
    (tmp_path / "transitions.json").write_text(json.dumps(transitions, indent=2) + "\n", encoding="utf-8")
    return tmp_path


@pytest.fixture()
def regime_map_csv(tmp_path):
    path = tmp_path / "regime_map.csv"
    path.write_text(
        "# master_seed = 1\n# z_window = [0.05, 8]\n"
        "kappa_c,kappa_beta,present\n"
        "0,0,1\n0,1,1\n1,0,0\n1,1,0\n",
        encoding="utf-8",
    )
    return path


@pytest.fixture()
def kappa_sweep_csv(tmp_path):
    path = tmp_path / "kappa_sweep.csv"
    rows = ["kappa,z,sigma_mean,sigma_stderr,disorder_type"]
    for dtype in ("off_diagonal", "diagonal"):
        for kappa in (0.0, 0.5, 1.0):
            for z in (5.0, 10.0):
                sigma = (1.0 - 0.6 * kappa) * z ** 0.9
                rows.append(f"{kappa},{z},{sigma:.17g},{0.05:.17g},{dtype}")
    path.write_text("\n".join(rows) + "\n", encoding="utf-8")
    return path
