"""Reinsurance premium rates under the expected-value and variance principles."""

from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional
import warnings

import numpy as np

from .claims import ClaimsModel
from .factor import Coefficient


class PrincipleKind(str, Enum):
    EVP = "EVP"
    VP = "VP"


@dataclass(frozen=True)
class PremiumPrinciple:
    """Expected-value (EVP) or variance (VP) principle with safety loading ``theta``.

    ``theta = 0`` is admitted as the no-loading limit used by sensitivity sweeps.
    """

    kind: PrincipleKind
    theta: float

    def __post_init__(self):
        object.__setattr__(self, "kind", PrincipleKind(self.kind))
        if not self.theta >= 0:
            raise ValueError(f"safety loading must be non-negative, got {self.theta}")


def evp(theta: float) -> PremiumPrinciple:
    return PremiumPrinciple(PrincipleKind.EVP, theta)


def vp(theta: float) -> PremiumPrinciple:
    return PremiumPrinciple(PrincipleKind.VP, theta)


@dataclass(frozen=True)
class CustomPrinciple:
    """User premium ``q(t, y, alpha)`` with optional analytic derivatives.

    Missing derivatives are taken by central differences (one-sided at 0).
    """

    rate: Callable
    derivative: Optional[Callable] = None
    second_derivative: Optional[Callable] = None
    step: float = 1e-6


@dataclass(frozen=True)
class MarketParams:
    r: float
    eta: float
    T: float
    c: Coefficient
    R0: float

    def __post_init__(self):
        if not self.eta > 0:
            raise ValueError(f"risk aversion eta must be positive, got {self.eta}")
        if not self.T > 0:
            raise ValueError(f"horizon T must be positive, got {self.T}")
        if not self.R0 > 0:
            raise ValueError(f"initial wealth R0 must be positive, got {self.R0}")

    def growth(self, t):
        """``exp(r (T - t))``: value at ``T`` of one unit held at ``t``."""
        return np.exp(self.r * (self.T - np.asarray(t, dtype=float)))[()]


def _difference(f, alpha, h):
    """Central difference, second-order forward difference within ``h`` of 0."""
    alpha = np.asarray(alpha, dtype=float)
    central = (f(alpha + h) - f(np.maximum(alpha - h, 0.0))) / (2 * h)
    forward = (-3 * f(alpha) + 4 * f(alpha + h) - f(alpha + 2 * h)) / (2 * h)
    return np.where(alpha >= h, central, forward)[()]


def premium_rate(principle, claims: ClaimsModel, t, y, alpha):
    if isinstance(principle, CustomPrinciple):
        return principle.rate(t, y, alpha)
    lam = claims.intensity(t, y)
    family = claims.size_family
    ceded = family.excess_moment(alpha, y, 1)
    if principle.kind is PrincipleKind.EVP:
        return (1.0 + principle.theta) * lam * ceded
    return lam * (ceded + principle.theta * family.excess_moment(alpha, y, 2))


def premium_derivative(principle, claims: ClaimsModel, t, y, alpha):
    """Right derivative of the premium rate in ``alpha``."""
    if isinstance(principle, CustomPrinciple):
        if principle.derivative is not None:
            return principle.derivative(t, y, alpha)
        return _difference(lambda a: principle.rate(t, y, a), alpha, principle.step)
    lam = claims.intensity(t, y)
    family = claims.size_family
    tail = family.survival(alpha, y)
    if principle.kind is PrincipleKind.EVP:
        return -(1.0 + principle.theta) * lam * tail
    theta = principle.theta
    alpha_f = np.where(np.isfinite(alpha), alpha, 0.0)
    return lam * tail * (2.0 * theta * alpha_f - 1.0) - 2.0 * theta * lam * family.tail_mean(alpha, y)


def premium_second_derivative(principle, claims: ClaimsModel, t, y, alpha):
    if isinstance(principle, CustomPrinciple):
        if principle.second_derivative is not None:
            return principle.second_derivative(t, y, alpha)
        return _difference(lambda a: premium_derivative(principle, claims, t, y, a), alpha, 1e-4)
    lam = claims.intensity(t, y)
    family = claims.size_family
    density = family.density(alpha, y)
    if principle.kind is PrincipleKind.EVP:
        return (1.0 + principle.theta) * lam * density
    return lam * (density + 2.0 * principle.theta * family.survival(alpha, y))


def premium_warnings(principle, claims: ClaimsModel, market: MarketParams, ts, ys) -> list[str]:
    """Report sampled (t, y) where full reinsurance is cheaper than the insurance premium.

    The no-riskless-profit requirement ``q(t, y, 0) > c(t, y)`` is reported, not
    enforced: the reference experiment parameters violate it.
    """
    t, y = np.meshgrid(np.asarray(ts, dtype=float), np.asarray(ys, dtype=float), indexing="ij")
    q0 = np.broadcast_to(premium_rate(principle, claims, t, y, 0.0), t.shape)
    c = np.broadcast_to(market.c(t, y), t.shape)
    bad = q0 <= c
    if not np.any(bad):
        return []
    i = np.flatnonzero(bad)[0]
    name = getattr(principle, "kind", "custom")
    name = getattr(name, "value", name)
    return [
        f"{name} premium q(t,y,0)={q0.flat[i]:.4g} <= c(t,y)={c.flat[i]:.4g} at "
        f"t={t.flat[i]:.4g}, y={y.flat[i]:.4g} ({int(bad.sum())}/{bad.size} sampled points): "
        "full reinsurance earns a riskless profit"
    ]


def warn_all(messages, category=UserWarning):
    for message in messages:
        warnings.warn(message, category, stacklevel=2)
