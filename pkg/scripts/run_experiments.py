#!/usr/bin/env python3
"""Run the full set of transport experiments through the CLI.

Each experiment writes its CSV/JSON artifacts into out/<name>/; pass
--quick to cut realization counts for a fast smoke run, --figures to
render figures afterwards (requires the figgen package).

    python scripts/run_experiments.py --quick --figures
"""

import argparse
import shutil
import subprocess
import sys
from pathlib import Path

ROOT = Path(__file__).resolve().parent.parent
CONFIGS = ROOT / "configs"

EXPERIMENTS = [
    ("propagate", "ordered_center_71.toml", "ordered_center_71"),
    ("propagate", "ordered_corner_71.toml", "ordered_corner_71"),
    ("ensemble", "disorder_center_51.toml", "disorder_center_51"),
    ("regime-map", "regime_map_51_center.toml", "regime_map_51_center"),
    ("regime-map", "regime_map_51_corner.toml", "regime_map_51_corner"),
    ("kappa-sweep", "kappa_sweep_center_51.toml", "kappa_sweep_center_51"),
    ("kappa-sweep", "kappa_sweep_corner_51.toml", "kappa_sweep_corner_51"),
    ("border-scan", "border_scan_151.toml", "border_scan_151"),
    ("ensemble", "localization_center_401.toml", "localization_center_401"),
]


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out", default=str(ROOT / "out"), help="output root directory")
    parser.add_argument("--quick", action="store_true", help="few realizations, coarse maps")
    parser.add_argument("--threads", type=int, default=1)
    parser.add_argument("--figures", action="store_true", help="render figures with figgen")
    parser.add_argument("--only", default=None, help="run a single experiment by name")
    args = parser.parse_args()

    out_root = Path(args.out)
    for command, config, name in EXPERIMENTS:
        if args.only and args.only != name:
            continue
        out_dir = out_root / name
        cmd = [
            sys.executable, "-m", "anwsim.cli", command, str(CONFIGS / config),
            "--out-dir", str(out_dir), "--threads", str(args.threads),
        ]
        if args.quick and command in ("ensemble", "regime-map", "kappa-sweep"):
            cmd += ["--realizations", "10"]
        print("+", " ".join(cmd))
        subprocess.run(cmd, check=True)

    print(f"results under {out_root}")
    if not args.figures:
        return 0

    if shutil.which("figgen") is None:
        print("figgen not installed; skipping figures", file=sys.stderr)
        return 1
    fig_dir = out_root / "figures"
    fig_dir.mkdir(parents=True, exist_ok=True)
    runs = [
        ["figgen", "gamma-panels",
         "--run", str(out_root / "ordered_center_71"),
         "--run", str(out_root / "ordered_corner_71"),
         "-o", str(fig_dir / "transport_regimes.png")],
        ["figgen", "regime-map", str(out_root / "regime_map_51_center" / "regime_map.csv"),
         "-o", str(fig_dir / "presence_center.png")],
        ["figgen", "regime-map", str(out_root / "regime_map_51_corner" / "regime_map.csv"),
         "-o", str(fig_dir / "presence_corner.png")],
        ["figgen", "sigma-kappa", str(out_root / "kappa_sweep_center_51" / "kappa_sweep.csv"),
         "-o", str(fig_dir / "sigma_vs_kappa_center.png")],
        ["figgen", "sigma-kappa", str(out_root / "kappa_sweep_corner_51" / "kappa_sweep.csv"),
         "-o", str(fig_dir / "sigma_vs_kappa_corner.png")],
    ]
    for cmd in runs:
        print("+", " ".join(cmd))
        subprocess.run(cmd, check=True)
    print(f"figures under {fig_dir}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
