"""End-to-end: drive the simulator CLI, then render its real outputs.

Consumes the simulator strictly through its command line and file formats;
skipped when the anwsim CLI is not installed in this environment.
"""

import json
import subprocess
import sys

import pytest
from PIL import Image

from figgen.cli import main

CONFIG = """
[array]
n_guides = 21
beta_s = 0.0
couplings = 1.0

[pump]
guide = 11

[grid]
z_min = 0.05
z_max = 8.0
points_per_decade = 120

[output]
distribution_z = [0.5, 2.0, 6.0]
"""


def _have_anwsim() -> bool:
    probe = subprocess.run(
        [sys.executable, "-m", "anwsim.cli", "--version"],
        capture_output=True,
        text=True,
    )
    return probe.returncode == 0


@pytest.mark.skipif(not _have_anwsim(), reason="anwsim CLI not installed")
def test_render_from_real_simulator_output(tmp_path):
    config = tmp_path / "run.toml"
    config.write_text(CONFIG, encoding="utf-8")
    out_dir = tmp_path / "sim"
    run = subprocess.run(
        [sys.executable, "-m", "anwsim.cli", "propagate", str(config), "--out-dir", str(out_dir)],
        capture_output=True,
        text=True,
    )
    assert run.returncode == 0, run.stderr

    image = tmp_path / "panels.png"
    assert main(["gamma-panels", "--run", str(out_dir), "-o", str(image)]) == 0
    assert image.exists()
    assert "anwsim-inputs-sha256" in Image.open(image).text

    transitions = json.loads((out_dir / "transitions.json").read_text())
    assert transitions["crossings"], "ordered center pump must show a regime transition"
