"""Pointwise optimal retention: minimise Psi over the retention level.

``Psi(alpha; t, y) = q(t, y, alpha) + lambda(t, y) int_0^alpha exp(k z) S(z, y) dz``
with ``k = eta exp(r (T - t))`` and ``S`` the conditional survival function.
"""

from dataclasses import dataclass
from enum import Enum
import math
import warnings

import numpy as np

from .claims import ClaimsModel, ExponentialFamily, ExponentialWeight, survival_integral
from .errors import NoInteriorRoot
from .factor import FactorPath
from .premium import (
    MarketParams,
    PremiumPrinciple,
    PrincipleKind,
    premium_derivative,
    premium_rate,
    premium_second_derivative,
)

ROOT_TOL = 1e-10
BRACKET_MAX = 1e6


class UniquenessWarning(UserWarning):
    """The second-order condition failed at the returned first-order root."""


class Regime(str, Enum):
    FULL_REINSURANCE = "FullReinsurance"
    INTERIOR_ROOT = "InteriorRoot"
    CLOSED_FORM_EVP = "ClosedFormEVP"
    CLOSED_FORM_VP_EXP = "ClosedFormVPExp"


@dataclass(frozen=True)
class PsiContext:
    principle: object  # PremiumPrinciple or CustomPrinciple
    claims: ClaimsModel
    market: MarketParams

    def __post_init__(self):
        if getattr(self.claims.size_family, "bounded_support", False):
            raise ValueError("claim-size families with bounded support are not supported")

    def risk_weight(self, t):
        """``eta exp(r (T - t))``."""
        return self.market.eta * self.market.growth(t)

    @property
    def closed_form(self):
        p = self.principle
        if not isinstance(p, PremiumPrinciple):
            return None
        if p.kind is PrincipleKind.EVP:
            return Regime.CLOSED_FORM_EVP
        if isinstance(self.claims.size_family, ExponentialFamily):
            return Regime.CLOSED_FORM_VP_EXP
        return None


@dataclass(frozen=True)
class RetentionDecision:
    alpha_star: float
    regime: Regime
    residual: float
    convex: bool


@dataclass(frozen=True)
class FirstOrderRoot:
    alpha: float
    residual: float
    iterations: int


def evp_retention(theta, eta, r, T, t=0.0):
    """Closed-form EVP optimum ``exp(-r (T - t)) log(1 + theta) / eta``."""
    return np.exp(-r * (T - np.asarray(t, dtype=float))) * np.log1p(theta) / eta


def vp_exponential_retention(theta, zeta, eta, r, T, t=0.0):
    """Closed-form VP optimum for exponential sizes with rate ``zeta``."""
    return np.exp(-r * (T - np.asarray(t, dtype=float))) * np.log1p(2.0 * theta / zeta) / eta


def psi(ctx: PsiContext, t, y, alpha):
    family = ctx.claims.size_family
    k = ctx.risk_weight(t)
    integral = family.exp_weighted_survival_integral(ExponentialWeight(1.0, k), alpha, y)
    if integral is None:
        integral = np.vectorize(
            lambda kk, a, yy: survival_integral(family, ExponentialWeight(1.0, kk), a, yy), otypes=[float]
        )(k, alpha, y)[()]
    return premium_rate(ctx.principle, ctx.claims, t, y, alpha) + ctx.claims.intensity(t, y) * integral


def _exp_weighted_survival(ctx, t, y, alpha):
    """``exp(k alpha) S(alpha, y)`` evaluated in log space."""
    alpha = np.asarray(alpha, dtype=float)
    log_tail = ctx.claims.size_family.log_survival(alpha, y)
    with np.errstate(invalid="ignore", over="ignore"):
        value = np.exp(ctx.risk_weight(t) * alpha + log_tail)
    return np.where(np.isneginf(log_tail), 0.0, value)[()]


def psi_derivative(ctx: PsiContext, t, y, alpha):
    """Right derivative of Psi in ``alpha``."""
    dq = premium_derivative(ctx.principle, ctx.claims, t, y, alpha)
    return dq + ctx.claims.intensity(t, y) * _exp_weighted_survival(ctx, t, y, alpha)


def psi_second_derivative(ctx: PsiContext, t, y, alpha):
    family = ctx.claims.size_family
    k = ctx.risk_weight(t)
    d2q = premium_second_derivative(ctx.principle, ctx.claims, t, y, alpha)
    weighted = _exp_weighted_survival(ctx, t, y, alpha)
    # exp(k a) dS/dz = -exp(k a) S * hazard
    hazard = family.density(alpha, y) / family.survival(alpha, y)
    return d2q + ctx.claims.intensity(t, y) * weighted * (k - hazard)


def in_A0(ctx: PsiContext, t, y):
    """True where full reinsurance is optimal: ``-dq/dalpha(0) <= lambda``."""
    return -premium_derivative(ctx.principle, ctx.claims, t, y, 0.0) <= ctx.claims.intensity(t, y)


def _initial_bracket(ctx: PsiContext) -> float:
    theta = getattr(ctx.principle, "theta", 0.0)
    m = ctx.market
    return math.log1p(theta) / m.eta * math.exp(abs(m.r) * m.T) + 1.0


def solve_first_order(ctx: PsiContext, t: float, y: float, bracket_max: float = BRACKET_MAX) -> FirstOrderRoot:
    """Root of ``dPsi/dalpha`` in ``(0, bracket_max]`` by doubling then bisection.

    Raises:
        ValueError: if ``(t, y)`` lies in the full-reinsurance region.
        NoInteriorRoot: if no sign change is found up to ``bracket_max``.
    """
    f = lambda a: float(psi_derivative(ctx, t, y, a))  # noqa: E731
    if not f(0.0) < 0:
        raise ValueError(f"(t={t}, y={y}) is in the full-reinsurance region; no interior root")
    lo, hi = 0.0, min(_initial_bracket(ctx), bracket_max)
    while not f(hi) > 0:
        if hi >= bracket_max:
            raise NoInteriorRoot(
                f"first-order condition has no sign change on (0, {bracket_max:g}] at t={t}, y={y}"
            )
        lo, hi = hi, min(2.0 * hi, bracket_max)
    iterations = 0
    while hi - lo > ROOT_TOL and iterations < 200:
        mid = 0.5 * (lo + hi)
        if f(mid) > 0:
            hi = mid
        else:
            lo = mid
        iterations += 1
    alpha = 0.5 * (lo + hi)
    return FirstOrderRoot(alpha, f(alpha), iterations)


def convexity_certificate(ctx: PsiContext, t: float, y: float, alpha_hat: float) -> bool:
    """Strict second-order condition ``d2Psi/dalpha2 > 0`` at ``alpha_hat``."""
    return bool(psi_second_derivative(ctx, t, y, alpha_hat) > 0)


def optimal_retention(ctx: PsiContext, t: float, y: float) -> RetentionDecision:
    if not 0 <= t <= ctx.market.T:
        raise ValueError(f"t must lie in [0, T], got {t}")
    if in_A0(ctx, t, y):
        return RetentionDecision(0.0, Regime.FULL_REINSURANCE, float(psi_derivative(ctx, t, y, 0.0)), True)
    regime = ctx.closed_form
    m = ctx.market
    if regime is Regime.CLOSED_FORM_EVP:
        alpha = float(evp_retention(ctx.principle.theta, m.eta, m.r, m.T, t))
    elif regime is Regime.CLOSED_FORM_VP_EXP:
        zeta = float(ctx.claims.size_family.zeta(y))
        alpha = float(vp_exponential_retention(ctx.principle.theta, zeta, m.eta, m.r, m.T, t))
    else:
        regime = Regime.INTERIOR_ROOT
        alpha = solve_first_order(ctx, t, y).alpha
    convex = convexity_certificate(ctx, t, y, alpha)
    if not convex:
        warnings.warn(
            f"second-order condition fails at alpha={alpha:.6g} (t={t}, y={y}); minimiser not certified unique",
            UniquenessWarning,
            stacklevel=2,
        )
    return RetentionDecision(alpha, regime, float(psi_derivative(ctx, t, y, alpha)), convex)


def optimal_retention_values(ctx: PsiContext, t, y) -> np.ndarray:
    """Optimal retention on broadcast arrays of ``(t, y)``.

    Closed-form regimes are evaluated vectorised; otherwise every point goes
    through :func:`optimal_retention`.
    """
    t, y = np.broadcast_arrays(np.asarray(t, dtype=float), np.asarray(y, dtype=float))
    regime = ctx.closed_form
    m = ctx.market
    if regime is None:
        out = np.empty(t.shape)
        for idx in np.ndindex(t.shape):
            out[idx] = optimal_retention(ctx, float(t[idx]), float(y[idx])).alpha_star
        return out
    if regime is Regime.CLOSED_FORM_EVP:
        alpha = evp_retention(ctx.principle.theta, m.eta, m.r, m.T, t)
    else:
        alpha = vp_exponential_retention(ctx.principle.theta, ctx.claims.size_family.zeta(y), m.eta, m.r, m.T, t)
    return np.where(in_A0(ctx, t, y), 0.0, alpha)


def retention_path(ctx: PsiContext, factor_path: FactorPath) -> np.ndarray:
    """Optimal retention at every node of a factor path (or ensemble)."""
    return optimal_retention_values(ctx, factor_path.times, factor_path.values)


def minimal_psi(ctx: PsiContext, t, y) -> np.ndarray:
    """``inf_alpha Psi`` at broadcast ``(t, y)``."""
    alpha = optimal_retention_values(ctx, t, y)
    return psi(ctx, t, y, alpha)
