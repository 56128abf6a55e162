"""Command-line driver: ``reinsim <subcommand> --config FILE --set k=v --out DIR``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure.
"""

import argparse
import logging
from pathlib import Path
import sys
import warnings

import numpy as np

from .config import SWEEP_PARAMETERS, load_config
from .errors import ConfigError, NumericalError
from .experiments import CsvTable, run_dynamic_strategies, run_simulation, run_sweep, run_value_surface
from .svg import emit_svg

log = logging.getLogger("reinsim")

SWEEP_TITLES = {
    "eta": "risk aversion",
    "theta": "reinsurer safety loading",
    "r": "risk-free rate",
    "T": "time horizon",
}


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="reinsim", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, help_text in (
        ("simulate", "simulate scenarios and terminal wealth under each principle"),
        ("optimal", "optimal strategy dynamics (EVP curve, VP path statistics)"),
        ("sweep", "sensitivity of the initial optimal retention"),
        ("value", "Feynman-Kac value function surface v(0, x, y)"),
        ("validate", "resolve and check the configuration only"),
    ):
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--config", type=Path, help="key = value configuration file")
        p.add_argument("--set", dest="overrides", action="append", default=[], metavar="KEY=VALUE")
        p.add_argument("--out", type=Path, default=Path("results"), help="output directory")
        p.add_argument("--svg", action="store_true", help="also write SVG charts")
        p.add_argument("--seed", type=int, help="override mc.seed")
        if name == "sweep":
            p.add_argument("--param", choices=SWEEP_PARAMETERS, help="sweep one parameter (default: all)")
    return parser


def _write(table, out: Path, stem: str, svg: bool, x_col: str, y_cols, title: str):
    out.mkdir(parents=True, exist_ok=True)
    path = table.write(out / f"{stem}.csv")
    print(path)
    if svg:
        print(emit_svg(table, x_col, y_cols, out / f"{stem}.svg", title))


def run(argv=None) -> int:
    args = _parser().parse_args(argv)
    overrides = list(args.overrides)
    if args.seed is not None:
        overrides.append(f"mc.seed={args.seed}")
    try:
        if args.config is not None and not args.config.is_file():
            raise ConfigError("--config", f"file not found: {args.config}")
        cfg = load_config(args.config, overrides)
        for message in cfg.warnings:
            log.warning(message)
        if args.command == "validate":
            print(cfg.describe())
            return 0
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", RuntimeWarning)
            return _dispatch(args, cfg)
    except ConfigError as exc:
        log.error("configuration error: %s", exc)
        return 1
    except NumericalError as exc:
        log.error("numerical failure: %s", exc)
        return 2


def _dispatch(args, cfg) -> int:
    if args.command == "simulate":
        table = run_simulation(cfg)
        y_cols = [c for c in table.columns if c.startswith("x_T_")]
        _write(table, args.out, "simulate", args.svg and len(y_cols) > 0, "path", y_cols, "terminal wealth")
    elif args.command == "optimal":
        table = run_dynamic_strategies(cfg)
        _write(
            table, args.out, "dynamic_strategies", args.svg, "t",
            ["alpha_evp", "alpha_vp_mean", "alpha_vp_q05", "alpha_vp_q95"], "optimal retention over time",
        )
    elif args.command == "sweep":
        params = [args.param] if args.param else (
            [cfg.sweep_parameter] if cfg.sweep_parameter else list(SWEEP_PARAMETERS)
        )
        for param in params:
            table = run_sweep(cfg, param)
            _write(
                table, args.out, f"sweep_{param}", args.svg, "value",
                ["alpha0_evp", "alpha0_vp_at_y0"], f"effect of the {SWEEP_TITLES[param]}",
            )
    elif args.command == "value":
        table = run_value_surface(cfg)
        args.out.mkdir(parents=True, exist_ok=True)
        print(table.write(args.out / "value_surface.csv"))
        if args.svg:
            write_value_svgs(table, args.out)
        if table.flags:
            for flag in table.flags:
                log.error("numerical failure: %s", flag)
            return 2
    return 0


def write_value_svgs(table, out: Path):
    # one series per y: v(0, x, y) against x
    xs = np.unique(table.column("x"))
    ys = np.unique(table.column("y"))
    grid = table.column("v_estimate").reshape(len(ys), len(xs))
    wide = CsvTable(("x", *[f"y={format(y, 'g')}" for y in ys]), np.column_stack([xs, grid.T]), table.comment)
    print(emit_svg(wide, "x", list(wide.columns[1:]), out / "value_surface.svg", "value function v(0,x,y)"))


def main(argv=None):
    logging.basicConfig(level=logging.INFO, format="%(levelname)s %(name)s: %(message)s")
    sys.exit(run(argv))


if __name__ == "__main__":
    main()
