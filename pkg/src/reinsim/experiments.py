"""Reproductions of the numerical experiments as CSV tables."""

from dataclasses import dataclass, replace
import csv
import io
import math
from pathlib import Path

import numpy as np

from .claims import simulate_claims_paths
from .config import DEFAULT_SWEEPS, SWEEP_PARAMETERS, ExperimentConfig
from .errors import ConfigError
from .factor import simulate_factor_paths
from .strategy import optimal_retention, optimal_retention_values
from .valuation import value_feynman_kac
from .wealth import terminal_wealth


@dataclass(frozen=True)
class CsvTable:
    columns: tuple
    rows: np.ndarray
    comment: str = ""
    flags: tuple = ()

    def __post_init__(self):
        rows = np.atleast_2d(np.asarray(self.rows, dtype=float))
        if rows.size == 0:
            rows = rows.reshape(0, len(self.columns))
        if rows.shape[1] != len(self.columns):
            raise ValueError("row width does not match the header")
        object.__setattr__(self, "rows", rows)
        object.__setattr__(self, "columns", tuple(self.columns))

    def column(self, name: str) -> np.ndarray:
        if name not in self.columns:
            raise KeyError(f"no column named {name!r}; have {', '.join(self.columns)}")
        return self.rows[:, self.columns.index(name)]

    def to_text(self) -> str:
        buf = io.StringIO()
        if self.comment:
            buf.write(f"# {self.comment}\n")
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(self.columns)
        for row in self.rows:
            writer.writerow([format(float(v), ".12g") for v in row])
        return buf.getvalue()

    def write(self, path) -> Path:
        path = Path(path)
        path.write_text(self.to_text(), encoding="utf-8")
        return path

    @classmethod
    def read(cls, path) -> "CsvTable":
        lines = Path(path).read_text(encoding="utf-8").splitlines()
        comment = ""
        if lines and lines[0].startswith("#"):
            comment = lines.pop(0)[1:].strip()
        reader = csv.reader(lines)
        header = next(reader)
        rows = [[float(v) for v in row] for row in reader]
        return cls(tuple(header), np.array(rows, dtype=float).reshape(len(rows), len(header)), comment)


def _comment(cfg: ExperimentConfig, experiment: str) -> str:
    return f"reinsim {experiment}; seed={cfg.seed}; {cfg.describe()}"


def _require(cfg, *names):
    missing = [n for n in names if n not in cfg.principles()]
    if missing:
        raise ConfigError("principle." + missing[0], "must be enabled for this experiment")


def run_dynamic_strategies(cfg: ExperimentConfig) -> CsvTable:
    """EVP curve and VP pathwise quantiles of the optimal retention over time."""
    _require(cfg, "evp", "vp")
    principles = cfg.principles()
    grid = cfg.grid()
    times = grid.times
    paths = simulate_factor_paths(cfg.factor(), grid, cfg.seed, cfg.M)
    alpha_evp = optimal_retention_values(cfg.context(principles["evp"]), times, cfg.y0)
    alpha_vp = optimal_retention_values(cfg.context(principles["vp"]), times, paths.values)
    rows = np.column_stack(
        [
            times,
            alpha_evp,
            alpha_vp.mean(axis=0),
            np.quantile(alpha_vp, 0.05, axis=0),
            np.quantile(alpha_vp, 0.95, axis=0),
        ]
    )
    return CsvTable(
        ("t", "alpha_evp", "alpha_vp_mean", "alpha_vp_q05", "alpha_vp_q95"), rows, _comment(cfg, "dynamic")
    )


def _with_parameter(cfg: ExperimentConfig, parameter: str, value: float) -> ExperimentConfig:
    if parameter == "theta":
        return replace(cfg, theta_evp=value, theta_vp=value)
    return replace(cfg, **{parameter: value})


def run_sweep(cfg: ExperimentConfig, parameter: str = None, values=None) -> CsvTable:
    """Initial optimal retention under each principle across a parameter sweep.

    The VP column is evaluated at the initial factor value ``y0``.
    """
    _require(cfg, "evp", "vp")
    parameter = parameter or cfg.sweep_parameter
    if parameter not in SWEEP_PARAMETERS:
        raise ConfigError("sweep.parameter", f"must be one of {', '.join(SWEEP_PARAMETERS)}, got {parameter!r}")
    if values is None:
        values = cfg.sweep_values if cfg.sweep_values and parameter == cfg.sweep_parameter else DEFAULT_SWEEPS[parameter]
    rows = []
    for value in values:
        value = float(value)
        if not math.isfinite(value):
            raise ConfigError("sweep.values", f"non-finite value {value!r}")
        if parameter in ("eta", "T") and value <= 0 or parameter == "theta" and value < 0:
            raise ConfigError("sweep.values", f"{parameter}={value} is outside the admissible range")
        swept = _with_parameter(cfg, parameter, value)
        principles = swept.principles()
        a_evp = optimal_retention(swept.context(principles["evp"]), 0.0, swept.y0).alpha_star
        a_vp = optimal_retention(swept.context(principles["vp"]), 0.0, swept.y0).alpha_star
        rows.append((value, a_evp, a_vp))
    return CsvTable(("value", "alpha0_evp", "alpha0_vp_at_y0"), rows, _comment(cfg, f"sweep {parameter}"))


def run_value_surface(cfg: ExperimentConfig, x_values=None, y_values=None) -> CsvTable:
    """Feynman-Kac value function ``v(0, x, y)`` under VP on an (x, y) grid.

    One Monte Carlo run per ``y``; the ``x`` dependence is the exact prefactor.
    """
    _require(cfg, "vp")
    ctx = cfg.context(cfg.principles()["vp"])
    x_values = cfg.x_values if x_values is None else x_values
    y_values = cfg.y_values if y_values is None else y_values
    grid = cfg.grid()
    shift = math.exp(cfg.r * cfg.T) * cfg.eta
    rows = []
    flags = []
    for y in y_values:
        base = value_feynman_kac(ctx, cfg.factor(), 0.0, 0.0, float(y), cfg.M, grid, cfg.seed)
        flags.extend(base.flags)
        for x in x_values:
            scale = math.exp(-shift * float(x))
            rows.append((float(x), float(y), base.mean * scale, base.std_error * scale))
    return CsvTable(("x", "y", "v_estimate", "std_error"), rows, _comment(cfg, "value"), tuple(dict.fromkeys(flags)))


def run_simulation(cfg: ExperimentConfig) -> CsvTable:
    """Per-scenario summary: factor, claims and terminal wealth under each principle."""
    grid = cfg.grid()
    paths = simulate_factor_paths(cfg.factor(), grid, cfg.seed, cfg.M)
    claims_model = cfg.claims()
    claims = simulate_claims_paths(claims_model, paths, cfg.seed)
    columns = ["path", "y_T", "n_claims", "total_claims"]
    data = [np.arange(cfg.M), paths.values[:, -1], claims.counts(cfg.M), claims.totals(cfg.M)]
    for name, principle in cfg.principles().items():
        ctx = cfg.context(principle)
        alpha = optimal_retention_values(ctx, grid.times, paths.values)
        columns.append(f"x_T_{name}")
        data.append(terminal_wealth(ctx, paths, claims, alpha, cfg.R0))
    return CsvTable(tuple(columns), np.column_stack(data), _comment(cfg, "simulate"))
