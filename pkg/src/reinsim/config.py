"""Experiment configuration: flat ``key = value`` text with dotted keys.

Unspecified keys take the reference simulation parameters (c=1, T=5,
eta=0.5, theta=0.1, r=5%, N=500, M=5000).
"""

from configparser import ConfigParser
from dataclasses import asdict, dataclass, fields, replace
from pathlib import Path
from typing import Optional

import numpy as np

from .claims import ClaimsModel, exponential_moment_warnings, baseline_claims
from .errors import ConfigError
from .factor import FactorModel, TimeGrid, constant, baseline_factor
from .premium import MarketParams, PremiumPrinciple, evp, premium_warnings, vp
from .strategy import PsiContext

SWEEP_PARAMETERS = ("eta", "theta", "r", "T")

DEFAULT_SWEEPS = {
    "eta": tuple(np.round(np.arange(1, 21) * 0.1, 10)),
    "theta": tuple(np.round(np.arange(0, 21) * 0.05, 10)),
    "r": tuple(np.round(np.arange(-5, 11) * 0.01, 10)),
    "T": tuple(np.round(np.arange(2, 21) * 0.5, 10)),
}


@dataclass(frozen=True)
class ExperimentConfig:
    r: float = 0.05
    eta: float = 0.5
    T: float = 5.0
    c: float = 1.0
    R0: float = 1.0
    factor_drift: float = 0.3
    factor_diffusion: float = 0.3
    y0: float = 1.0
    lambda0: float = 0.1
    lambda_exponent: float = 0.5
    zeta_scale: float = 1.0
    zeta_shift: float = 1.0
    evp: bool = True
    vp: bool = True
    theta_evp: float = 0.1
    theta_vp: float = 0.1
    N: int = 500
    M: int = 5000
    seed: int = 2019
    sweep_parameter: Optional[str] = None
    sweep_values: tuple = ()
    x_values: tuple = tuple(np.round(np.arange(0, 11) * 0.5, 10))
    y_values: tuple = tuple(np.round(np.arange(-2, 7) * 0.5, 10))
    warnings: tuple = ()

    def market(self) -> MarketParams:
        return MarketParams(self.r, self.eta, self.T, constant(self.c), self.R0)

    def factor(self) -> FactorModel:
        return baseline_factor(self.factor_drift, self.factor_diffusion, self.y0)

    def claims(self) -> ClaimsModel:
        return baseline_claims(self.lambda0, self.lambda_exponent, self.zeta_scale, self.zeta_shift)

    def principles(self) -> dict:
        out = {}
        if self.evp:
            out["evp"] = evp(self.theta_evp)
        if self.vp:
            out["vp"] = vp(self.theta_vp)
        return out

    def context(self, principle: PremiumPrinciple) -> PsiContext:
        return PsiContext(principle, self.claims(), self.market())

    def grid(self) -> TimeGrid:
        return TimeGrid(0.0, self.T, self.N)

    def describe(self) -> str:
        """One-line record of every resolved key (warnings excluded)."""
        items = []
        for key, attr in sorted(KEYS.items(), key=lambda kv: kv[0]):
            if "." not in key:
                continue
            value = getattr(self, attr)
            if isinstance(value, tuple):
                value = " ".join(format(v, "g") for v in value)
            items.append(f"{key}={value}")
        return "; ".join(items)


# dotted key -> field; bare aliases for the headline parameters
KEYS = {
    "market.r": "r",
    "market.eta": "eta",
    "market.T": "T",
    "market.c": "c",
    "market.R0": "R0",
    "factor.drift": "factor_drift",
    "factor.diffusion": "factor_diffusion",
    "factor.y0": "y0",
    "claims.lambda0": "lambda0",
    "claims.lambda_exponent": "lambda_exponent",
    "claims.zeta_scale": "zeta_scale",
    "claims.zeta_shift": "zeta_shift",
    "principle.evp": "evp",
    "principle.vp": "vp",
    "principle.theta_evp": "theta_evp",
    "principle.theta_vp": "theta_vp",
    "grid.N": "N",
    "mc.M": "M",
    "mc.seed": "seed",
    "sweep.parameter": "sweep_parameter",
    "sweep.values": "sweep_values",
    "value.x": "x_values",
    "value.y": "y_values",
}
ALIASES = {
    "r": "r",
    "eta": "eta",
    "T": "T",
    "c": "c",
    "R0": "R0",
    "y0": "y0",
    "N": "N",
    "M": "M",
    "seed": "seed",
}


def _field_types():
    return {f.name: f.type for f in fields(ExperimentConfig)}


def _parse(key: str, attr: str, text: str):
    kind = _field_types()[attr]
    text = text.strip()
    try:
        if kind in (bool, "bool"):
            lowered = text.lower()
            if lowered not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(text)
            return lowered in ("true", "1", "yes")
        if kind in (int, "int"):
            value = float(text)
            if value != int(value):
                raise ValueError(text)
            return int(value)
        if kind in (float, "float"):
            value = float(text)
            if not np.isfinite(value):
                raise ValueError(text)
            return value
        if attr == "sweep_parameter":
            if text not in SWEEP_PARAMETERS:
                raise ConfigError(key, f"must be one of {', '.join(SWEEP_PARAMETERS)}, got {text!r}")
            return text
        values = tuple(float(v) for v in text.replace(",", " ").split())
        if not all(np.isfinite(values)):
            raise ValueError(text)
        return values
    except ValueError:
        raise ConfigError(key, f"cannot parse {text!r} as {getattr(kind, '__name__', kind)}") from None


def _resolve_key(key: str) -> str:
    key = key.strip()
    if key in KEYS:
        return KEYS[key]
    if key in ALIASES:
        return ALIASES[key]
    raise ConfigError(key, "unknown configuration key")


def _read_pairs(path) -> list:
    text = Path(path).read_text(encoding="utf-8")
    parser = ConfigParser(delimiters=("=",), comment_prefixes=("#", ";"), interpolation=None)
    parser.optionxform = str
    parser.read_string("[config]\n" + text)
    return list(parser.items("config"))


def load_config(path=None, overrides=()) -> ExperimentConfig:
    """Resolve a config file plus ``key=value`` overrides against the defaults.

    Raises:
        ConfigError: unknown key, unparsable value, ``N < 1`` or ``M < 1``.
    """
    pairs = _read_pairs(path) if path is not None else []
    for item in overrides:
        if "=" not in item:
            raise ConfigError(item, "override must look like key=value")
        key, value = item.split("=", 1)
        pairs.append((key.strip(), value))
    updates = {}
    for key, value in pairs:
        attr = _resolve_key(key)
        updates[attr] = _parse(key, attr, value)
    cfg = replace(ExperimentConfig(), **updates)
    return validate(cfg)


def validate(cfg: ExperimentConfig) -> ExperimentConfig:
    checks = (
        ("grid.N", cfg.N >= 1, "must be >= 1"),
        ("mc.M", cfg.M >= 1, "must be >= 1"),
        ("market.eta", cfg.eta > 0, "must be positive"),
        ("market.T", cfg.T > 0, "must be positive"),
        ("market.R0", cfg.R0 > 0, "must be positive"),
        ("market.c", cfg.c >= 0, "must be non-negative"),
        ("claims.lambda0", cfg.lambda0 > 0, "must be positive"),
        ("principle.theta_evp", cfg.theta_evp >= 0, "must be non-negative"),
        ("principle.theta_vp", cfg.theta_vp >= 0, "must be non-negative"),
        ("factor.diffusion", cfg.factor_diffusion >= 0, "must be non-negative"),
        ("mc.seed", cfg.seed >= 0, "must be non-negative"),
    )
    for key, ok, message in checks:
        if not ok:
            raise ConfigError(key, message)
    if cfg.sweep_parameter is not None and cfg.sweep_values:
        vals = np.asarray(cfg.sweep_values)
        if cfg.sweep_parameter in ("eta", "T") and np.any(vals <= 0):
            raise ConfigError("sweep.values", f"{cfg.sweep_parameter} values must be positive")
        if cfg.sweep_parameter == "theta" and np.any(vals < 0):
            raise ConfigError("sweep.values", "theta values must be non-negative")
    return replace(cfg, warnings=tuple(config_warnings(cfg)))


def config_warnings(cfg: ExperimentConfig) -> list:
    """Model-consistency warnings at a sample of (t, y) points."""
    ts = np.linspace(0.0, cfg.T, 6)
    ys = cfg.y0 + np.linspace(-3.0, 3.0, 13) * max(cfg.factor_diffusion, 0.1) * np.sqrt(cfg.T)
    claims, market = cfg.claims(), cfg.market()
    messages = exponential_moment_warnings(claims.size_family, ys)
    for principle in cfg.principles().values():
        messages += premium_warnings(principle, claims, market, ts, ys)
    return messages


def as_dict(cfg: ExperimentConfig) -> dict:
    return {k: v for k, v in asdict(cfg).items() if k != "warnings"}
