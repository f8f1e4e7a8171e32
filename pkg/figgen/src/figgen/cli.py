"""figgen command line: render simulator outputs into image files.

    figgen gamma-panels --run OUTDIR [--run OUTDIR2] -o panels.png
    figgen regime-map regime_map.csv -o map.png
    figgen sigma-kappa kappa_sweep.csv -o sweep.png

Exit codes: 0 success, 1 missing or ill-formed inputs, 2 usage error.
"""

from __future__ import annotations

import argparse
import sys

import matplotlib


def cmd_gamma_panels(args) -> int:
    from figgen.io import load_run
    from figgen.panels import fig_gamma_panels, save_figure

    runs = [load_run(d) for d in args.run]
    fig = fig_gamma_panels(runs, z_split=args.z_split)
    save_figure(fig, args.output, ";".join(r.checksum for r in runs))
    print(args.output)
    return 0


def cmd_regime_map(args) -> int:
    from figgen.panels import fig_regime_map, save_figure

    fig, checksum = fig_regime_map(args.csv)
    save_figure(fig, args.output, checksum)
    print(args.output)
    return 0


def cmd_sigma_kappa(args) -> int:
    from figgen.panels import fig_sigma_kappa, save_figure

    fig, checksum = fig_sigma_kappa(args.csv)
    save_figure(fig, args.output, checksum)
    print(args.output)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="figgen", description="Render anwsim outputs as figures")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gamma-panels", help="transport-exponent panels with insets")
    p.add_argument("--run", action="append", required=True, help="simulator output directory (repeatable)")
    p.add_argument("-o", "--output", required=True)
    p.add_argument("--z-split", type=float, default=8.0, help="upper range of the short-distance column")
    p.set_defaults(func=cmd_gamma_panels)

    p = sub.add_parser("regime-map", help="presence map from regime_map.csv")
    p.add_argument("csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_regime_map)

    p = sub.add_parser("sigma-kappa", help="sigma vs disorder strength from kappa_sweep.csv")
    p.add_argument("csv")
    p.add_argument("-o", "--output", required=True)
    p.set_defaults(func=cmd_sigma_kappa)
    return parser


def main(argv=None) -> int:
    matplotlib.use("Agg")
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except Exception as exc:  # missing/ill-formed inputs
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
