"""Monte Carlo estimators of the value function ``v(t, x, y)``.

Two independent routes:

* Feynman-Kac: ``v = exp(-eta x e^{r(T-t)}) E[exp(int_t^T eta e^{r(T-s)}
  (inf Psi - c)(s, Y_s) ds)]`` which only needs factor paths;
* direct: ``E[exp(-eta X_T)]`` from simulated factor, claims and wealth.

Both draw path ``i`` from the same per-path stream, so estimates at different
``x`` or under different policies are paired.
"""

from dataclasses import dataclass, field
from enum import Enum
from typing import Callable, Optional
import math
import warnings

import numpy as np

from .claims import simulate_claims_paths
from .factor import FactorModel, TimeGrid, simulate_factor_paths
from .strategy import PsiContext, minimal_psi, optimal_retention_values
from .wealth import MAX_EXPONENT, terminal_wealth

CHUNK = 1000
DEFAULT_STEPS = 500
Z95 = 1.959963984540054


class ExponentOverflowWarning(RuntimeWarning):
    """A Monte Carlo exponent exceeded the overflow guard."""


class Method(str, Enum):
    FEYNMAN_KAC = "FeynmanKac"
    DIRECT = "DirectUtility"


@dataclass
class RunningStats:
    """Mergeable (count, mean, M2) accumulator."""

    count: int = 0
    mean: float = 0.0
    m2: float = 0.0

    def push(self, samples) -> "RunningStats":
        samples = np.asarray(samples, dtype=float).ravel()
        if samples.size:
            with np.errstate(over="ignore"):  # saturated samples give an infinite M2
                batch = RunningStats(samples.size, float(samples.mean()), float(((samples - samples.mean()) ** 2).sum()))
            self.merge(batch)
        return self

    def merge(self, other: "RunningStats") -> "RunningStats":
        n = self.count + other.count
        if n == 0:
            return self
        delta = other.mean - self.mean
        self.m2 += other.m2 + delta * delta * self.count * other.count / n
        self.mean += delta * other.count / n
        self.count = n
        return self

    @property
    def variance(self) -> float:
        return self.m2 / (self.count - 1) if self.count > 1 else 0.0

    @property
    def std_error(self) -> float:
        return math.sqrt(self.variance / self.count) if self.count else math.inf


@dataclass(frozen=True)
class ValueEstimate:
    mean: float
    std_error: float
    n_paths: int
    method: Method
    flags: tuple = field(default=())

    @property
    def ci95(self) -> tuple:
        half = Z95 * self.std_error
        return self.mean - half, self.mean + half

    def overlaps(self, other: "ValueEstimate") -> bool:
        lo, hi = self.ci95
        olo, ohi = other.ci95
        return lo <= ohi and olo <= hi


def _check_grid(t, grid: Optional[TimeGrid], T) -> TimeGrid:
    if grid is None:
        return TimeGrid(t, T, DEFAULT_STEPS)
    if not (math.isclose(grid.t0, t) and math.isclose(grid.T, T)):
        raise ValueError(f"grid must span [t, T] = [{t}, {T}], got [{grid.t0}, {grid.T}]")
    return grid


def value_feynman_kac(
    ctx: PsiContext,
    factor: FactorModel,
    t: float,
    x: float,
    y: float,
    n_paths: int,
    grid: Optional[TimeGrid],
    seed: int,
) -> ValueEstimate:
    m = ctx.market
    prefactor = math.exp(-m.eta * x * math.exp(m.r * (m.T - t)))
    if t >= m.T:
        return ValueEstimate(math.exp(-m.eta * x), 0.0, n_paths, Method.FEYNMAN_KAC)
    grid = _check_grid(t, grid, m.T)
    model = factor.at(y)
    times = grid.times
    stats = RunningStats()
    flags = []
    for start in range(0, n_paths, CHUNK):
        size = min(CHUNK, n_paths - start)
        paths = simulate_factor_paths(model, grid, seed, size, first_path=start)
        ys = paths.values
        integrand = ctx.risk_weight(times) * (minimal_psi(ctx, times, ys) - m.c(times, ys))
        exponent = np.trapezoid(integrand, times, axis=-1)
        if np.any(np.abs(exponent) > MAX_EXPONENT) and not flags:
            flags.append(f"Feynman-Kac exponent magnitude exceeds {MAX_EXPONENT:g}")
            warnings.warn(flags[-1], ExponentOverflowWarning, stacklevel=2)
        stats.push(np.exp(np.minimum(exponent, MAX_EXPONENT)))
    return ValueEstimate(prefactor * stats.mean, prefactor * stats.std_error, n_paths, Method.FEYNMAN_KAC, tuple(flags))


def value_direct(
    ctx: PsiContext,
    factor: FactorModel,
    t: float,
    x: float,
    y: float,
    retention_policy: Optional[Callable],
    n_paths: int,
    grid: Optional[TimeGrid],
    seed: int,
) -> ValueEstimate:
    """Average of ``exp(-eta X_T)`` under ``retention_policy(t, y)`` (optimal if None)."""
    m = ctx.market
    if t >= m.T:
        return ValueEstimate(math.exp(-m.eta * x), 0.0, n_paths, Method.DIRECT)
    grid = _check_grid(t, grid, m.T)
    model = factor.at(y)
    times = grid.times
    stats = RunningStats()
    flags = []
    for start in range(0, n_paths, CHUNK):
        size = min(CHUNK, n_paths - start)
        paths = simulate_factor_paths(model, grid, seed, size, first_path=start)
        claims = simulate_claims_paths(ctx.claims, paths, seed, first_path=start)
        if retention_policy is None:
            alpha = optimal_retention_values(ctx, times, paths.values)
        else:
            alpha = np.broadcast_to(retention_policy(times, paths.values), paths.values.shape)
        exponent = -m.eta * terminal_wealth(ctx, paths, claims, alpha, x)
        if np.any(exponent > MAX_EXPONENT) and not flags:
            flags.append(f"terminal-utility exponent exceeds {MAX_EXPONENT:g}")
            warnings.warn(flags[-1], ExponentOverflowWarning, stacklevel=2)
        stats.push(np.exp(np.minimum(exponent, MAX_EXPONENT)))
    return ValueEstimate(stats.mean, stats.std_error, n_paths, Method.DIRECT, tuple(flags))
