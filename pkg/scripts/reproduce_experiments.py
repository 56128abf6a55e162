"""Write every experiment table (and chart) for the default parameters.

    python3 scripts/reproduce_experiments.py [--out results] [--paths 5000]
"""

import argparse
from pathlib import Path

from reinsim.cli import SWEEP_TITLES, write_value_svgs
from reinsim.config import SWEEP_PARAMETERS, load_config
from reinsim.experiments import run_dynamic_strategies, run_sweep, run_value_surface
from reinsim.svg import emit_svg


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--out", type=Path, default=Path("results"))
    parser.add_argument("--paths", type=int, default=5000)
    args = parser.parse_args()
    args.out.mkdir(parents=True, exist_ok=True)
    cfg = load_config(None, [f"M={args.paths}"])

    table = run_dynamic_strategies(cfg)
    table.write(args.out / "dynamic_strategies.csv")
    emit_svg(table, "t", list(table.columns[1:]), args.out / "dynamic_strategies.svg", "optimal retention over time")

    for param in SWEEP_PARAMETERS:
        table = run_sweep(cfg, param)
        table.write(args.out / f"sweep_{param}.csv")
        emit_svg(table, "value", ["alpha0_evp", "alpha0_vp_at_y0"], args.out / f"sweep_{param}.svg",
                 f"effect of the {SWEEP_TITLES[param]}")

    table = run_value_surface(cfg)
    table.write(args.out / "value_surface.csv")
    write_value_svgs(table, args.out)
    for path in sorted(args.out.iterdir()):
        print(path)


if __name__ == "__main__":
    main()
