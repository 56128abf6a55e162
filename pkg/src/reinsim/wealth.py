"""Insurer wealth under an excess-of-loss retention strategy.

The closed form discounts every retained claim at its exact arrival time and
integrates the net premium flow ``c - q`` with the trapezoid rule on the grid.
The forward-Euler integrator exists as an independent check on it.

Retentions are read at the left endpoint of the cell containing a claim, so
the strategy applied to a claim is predictable.
"""

from dataclasses import dataclass
import warnings

import numpy as np

from .claims import ClaimSet
from .factor import FactorPath, TimeGrid
from .premium import premium_rate
from .strategy import PsiContext


class UtilityOverflowWarning(RuntimeWarning):
    """Terminal utility saturated because ``exp(-eta x)`` would overflow."""


MAX_EXPONENT = 700.0


@dataclass(frozen=True)
class WealthPath:
    grid: TimeGrid
    values: np.ndarray
    strategy_applied: np.ndarray
    claims_hit: list

    @property
    def terminal(self) -> float:
        return float(self.values[-1])


def net_premium_flow(ctx: PsiContext, factor_path: FactorPath, retentions) -> np.ndarray:
    """``c(t, Y_t) - q(t, Y_t, alpha_t)`` at the grid nodes."""
    t, y = factor_path.times, factor_path.values
    c = ctx.market.c(t, y)
    q = premium_rate(ctx.principle, ctx.claims, t, y, np.asarray(retentions, dtype=float))
    return np.broadcast_to(c - q, np.shape(factor_path.values))


def retained_amounts(claims: ClaimSet, retentions) -> np.ndarray:
    """``Z ^ alpha`` with ``alpha`` read at each claim's cell (and path)."""
    retentions = np.asarray(retentions, dtype=float)
    if retentions.ndim == 1:
        alpha = retentions[claims.cells]
    else:
        alpha = retentions[claims.path, claims.cells]
    return np.minimum(claims.sizes, alpha)


def _discounted_premium_integral(ctx, factor_path, retentions):
    # cumulative trapezoid of exp(-r (s - t0)) (c - q)(s)
    times = factor_path.times
    flow = net_premium_flow(ctx, factor_path, retentions) * np.exp(-ctx.market.r * (times - times[0]))
    increments = 0.5 * (flow[..., 1:] + flow[..., :-1]) * factor_path.grid.dt
    out = np.zeros(flow.shape)
    np.cumsum(increments, axis=-1, out=out[..., 1:])
    return out


def wealth_closed_form(
    ctx: PsiContext, factor_path: FactorPath, claims: ClaimSet, retentions, x0: float = None
) -> WealthPath:
    """Wealth at every grid node from the explicit solution of the wealth equation."""
    r = ctx.market.r
    x0 = ctx.market.R0 if x0 is None else x0
    times = factor_path.times
    t0 = times[0]
    retentions = np.broadcast_to(np.asarray(retentions, dtype=float), times.shape)
    discounted = x0 + _discounted_premium_integral(ctx, factor_path, retentions)
    retained = retained_amounts(claims, retentions)
    jumps = retained * np.exp(-r * (claims.times - t0))
    # claim in (t_k, t_{k+1}] affects nodes k+1 onwards
    per_node = np.bincount(claims.cells + 1, weights=jumps, minlength=len(times))
    discounted = discounted - np.cumsum(per_node)
    values = np.exp(r * (times - t0)) * discounted
    hits = list(zip(claims.cells.tolist(), retained.tolist()))
    return WealthPath(factor_path.grid, values, retentions.copy(), hits)


def wealth_euler(
    ctx: PsiContext, factor_path: FactorPath, claims: ClaimSet, retentions, x0: float = None
) -> WealthPath:
    """Forward Euler on ``dX = (r X + c - q) dt`` with jumps applied at cell ends."""
    r = ctx.market.r
    x0 = ctx.market.R0 if x0 is None else x0
    grid = factor_path.grid
    retentions = np.broadcast_to(np.asarray(retentions, dtype=float), grid.times.shape)
    flow = net_premium_flow(ctx, factor_path, retentions)
    retained = retained_amounts(claims, retentions)
    jumps = np.bincount(claims.cells, weights=retained, minlength=grid.n_steps)
    values = np.empty(grid.n_steps + 1)
    values[0] = x0
    dt = grid.dt
    for k in range(grid.n_steps):
        values[k + 1] = values[k] + (r * values[k] + flow[k]) * dt - jumps[k]
    hits = list(zip(claims.cells.tolist(), retained.tolist()))
    return WealthPath(grid, values, retentions.copy(), hits)


def terminal_wealth(ctx: PsiContext, factor_paths: FactorPath, claims: ClaimSet, retentions, x0: float) -> np.ndarray:
    """Terminal wealth of every path in an ensemble (closed form)."""
    r = ctx.market.r
    times = factor_paths.times
    t0, T = times[0], times[-1]
    retentions = np.broadcast_to(np.asarray(retentions, dtype=float), np.shape(factor_paths.values))
    premium = _discounted_premium_integral(ctx, factor_paths, retentions)[..., -1]
    jumps = retained_amounts(claims, retentions) * np.exp(-r * (claims.times - t0))
    lost = np.bincount(claims.path, weights=jumps, minlength=factor_paths.n_paths)
    return np.exp(r * (T - t0)) * (x0 + premium - lost)


def terminal_utility(x_T, eta: float):
    """Exponential utility ``1 - exp(-eta x_T)``, saturating for very negative wealth."""
    if not eta > 0:
        raise ValueError(f"eta must be positive, got {eta}")
    exponent = -eta * np.asarray(x_T, dtype=float)
    if np.any(exponent > MAX_EXPONENT):
        warnings.warn("utility saturated: exp(-eta x) overflows", UtilityOverflowWarning, stacklevel=2)
        exponent = np.minimum(exponent, MAX_EXPONENT)
    return (-np.expm1(exponent))[()]
