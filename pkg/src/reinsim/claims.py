"""Factor-modulated claim arrivals and conditional claim-size families.

Arrivals are generated cell by cell on the factor grid: inside the cell
``(t_k, t_{k+1}]`` the factor is frozen at its left-endpoint value ``Y_k``,
candidates are drawn from a Poisson process with rate
``majorant * lambda(t_k, Y_k)`` and thinned with probability
``lambda(s, Y_k) / (majorant * lambda(t_k, Y_k))``. With the default
``majorant=1`` and a time-homogeneous intensity this is the exact
piecewise-constant-intensity scheme.
"""

from dataclasses import dataclass, replace
from typing import Callable, Iterator, NamedTuple

import numpy as np

from .errors import ModelError
from .factor import FactorPath, Stream, TimeGrid, path_stream
from .quadrature import adaptive_simpson, integrate_to_infinity


class ExponentialWeight(NamedTuple):
    """Weight ``z -> scale * exp(rate * z)``, recognised by closed-form families."""

    scale: float
    rate: float

    def __call__(self, z):
        return self.scale * np.exp(self.rate * z)


class ConditionalSizeFamily:
    """Claim-size law ``F(z, y)`` conditional on the factor value ``y``.

    Subclasses must provide :meth:`survival`, :meth:`density` and
    :meth:`sample`. The moment methods fall back to quadrature and can be
    overridden with closed forms.
    """

    bounded_support = False

    def survival(self, z, y):
        raise NotImplementedError

    def density(self, z, y):
        """``-d survival / dz``."""
        raise NotImplementedError

    def sample(self, y, u):
        """Inverse-CDF draw of a size given uniforms ``u`` in ``[0, 1)``."""
        raise NotImplementedError

    def cdf(self, z, y):
        return 1.0 - self.survival(z, y)

    def log_survival(self, z, y):
        with np.errstate(divide="ignore"):
            return np.log(self.survival(z, y))

    def survival_derivative(self, z, y):
        return -self.density(z, y)

    def excess_moment(self, alpha, y, power):
        """``E[(Z - Z ^ alpha)^power]`` for ``power`` in ``{1, 2}``."""
        if power == 1:
            return integrate_to_infinity(lambda z: float(self.survival(z, y)), alpha)
        if power == 2:
            return 2.0 * integrate_to_infinity(
                lambda z: (z - alpha) * float(self.survival(z, y)), alpha
            )
        raise ValueError(f"power must be 1 or 2, got {power}")

    def tail_mean(self, alpha, y):
        """``int_alpha^inf z dF(z, y)``."""
        return alpha * float(self.survival(alpha, y)) + self.excess_moment(alpha, y, 1)

    def exp_weighted_survival_integral(self, weight: ExponentialWeight, alpha, y):
        """Closed form of ``int_0^alpha weight(z) survival(z, y) dz``, or None."""
        return None


@dataclass(frozen=True)
class ExponentialFamily(ConditionalSizeFamily):
    """``F(z, y) = 1 - exp(-zeta(y) z)``."""

    zeta: Callable

    def survival(self, z, y):
        return np.exp(-self.zeta(y) * np.asarray(z, dtype=float))[()]

    def log_survival(self, z, y):
        return (-self.zeta(y) * np.asarray(z, dtype=float))[()]

    def density(self, z, y):
        zeta = self.zeta(y)
        return zeta * np.exp(-zeta * np.asarray(z, dtype=float))[()]

    def sample(self, y, u):
        return -np.log1p(-np.asarray(u, dtype=float)) / self.zeta(y)

    def excess_moment(self, alpha, y, power):
        zeta = self.zeta(y)
        tail = np.exp(-zeta * np.asarray(alpha, dtype=float))
        if power == 1:
            return (tail / zeta)[()]
        if power == 2:
            return (2.0 * tail / zeta**2)[()]
        raise ValueError(f"power must be 1 or 2, got {power}")

    def tail_mean(self, alpha, y):
        zeta = self.zeta(y)
        alpha = np.asarray(alpha, dtype=float)
        tail = np.exp(-zeta * alpha)
        finite_alpha = np.where(np.isfinite(alpha), alpha, 0.0)
        return np.where(tail > 0, tail * (finite_alpha + 1.0 / zeta), 0.0)[()]

    def exp_weighted_survival_integral(self, weight, alpha, y):
        # scale * int_0^alpha exp((rate - zeta) z) dz, stable near rate == zeta
        alpha = np.asarray(alpha, dtype=float)
        x = (weight.rate - self.zeta(y)) * alpha
        safe = np.where(x == 0, 1.0, x)
        ratio = np.where(x == 0, 1.0, np.expm1(safe) / safe)
        return (weight.scale * alpha * ratio)[()]


@dataclass(frozen=True)
class ParetoFamily(ConditionalSizeFamily):
    """Lomax law ``survival = (1 + z / scale(y))^(-shape)``; heavy-tailed."""

    shape: float
    scale: Callable

    def __post_init__(self):
        if not self.shape > 0:
            raise ValueError("Pareto shape must be positive")

    def survival(self, z, y):
        return ((1.0 + np.asarray(z, dtype=float) / self.scale(y)) ** (-self.shape))[()]

    def log_survival(self, z, y):
        return (-self.shape * np.log1p(np.asarray(z, dtype=float) / self.scale(y)))[()]

    def density(self, z, y):
        s = self.scale(y)
        return (self.shape / s * (1.0 + np.asarray(z, dtype=float) / s) ** (-self.shape - 1.0))[()]

    def sample(self, y, u):
        return self.scale(y) * np.expm1(-np.log1p(-np.asarray(u, dtype=float)) / self.shape)

    def excess_moment(self, alpha, y, power):
        a, s = self.shape, self.scale(y)
        alpha = np.asarray(alpha, dtype=float)
        if power == 1:
            if a <= 1:
                return np.inf
            return ((s + alpha) / (a - 1.0) * self.survival(alpha, y))[()]
        if power == 2:
            if a <= 2:
                return np.inf
            return (2.0 * (s + alpha) ** 2 / ((a - 1.0) * (a - 2.0)) * self.survival(alpha, y))[()]
        raise ValueError(f"power must be 1 or 2, got {power}")

    def tail_mean(self, alpha, y):
        return (alpha * self.survival(alpha, y) + self.excess_moment(alpha, y, 1))[()]


def exponential_preset(scale: float = 1.0, shift: float = 1.0) -> ExponentialFamily:
    """Exponential sizes with rate ``zeta(y) = scale * exp(y) + shift``."""
    return ExponentialFamily(lambda y: scale * np.exp(y) + shift)


@dataclass(frozen=True)
class ClaimsModel:
    intensity: Callable
    size_family: ConditionalSizeFamily
    majorant: float = 1.0


def baseline_claims(
    lambda0: float = 0.1, exponent: float = 0.5, zeta_scale: float = 1.0, zeta_shift: float = 1.0
) -> ClaimsModel:
    """``lambda(t, y) = lambda0 exp(exponent * y)`` with the exponential preset."""
    return ClaimsModel(
        lambda t, y: lambda0 * np.exp(exponent * np.asarray(y, dtype=float)) + 0.0 * np.asarray(t),
        exponential_preset(zeta_scale, zeta_shift),
    )


class ClaimRecord(NamedTuple):
    arrival_time: float
    size: float
    factor_at_arrival: float


@dataclass(frozen=True)
class ClaimSet:
    """Claims of one scenario or of a batch of scenarios (``path`` labels)."""

    times: np.ndarray
    sizes: np.ndarray
    factor_values: np.ndarray
    cells: np.ndarray
    path: np.ndarray

    def __len__(self):
        return len(self.times)

    def __iter__(self) -> Iterator[ClaimRecord]:
        for t, z, y in zip(self.times, self.sizes, self.factor_values):
            yield ClaimRecord(float(t), float(z), float(y))

    def for_path(self, i: int) -> "ClaimSet":
        mask = self.path == i
        return ClaimSet(*(getattr(self, f)[mask] for f in _CLAIM_FIELDS))

    def counts(self, n_paths: int) -> np.ndarray:
        return np.bincount(self.path, minlength=n_paths)

    def totals(self, n_paths: int, amounts=None) -> np.ndarray:
        """Per-path sum of ``amounts`` (the sizes by default)."""
        amounts = self.sizes if amounts is None else amounts
        return np.bincount(self.path, weights=amounts, minlength=n_paths)

    def on_grid(self, grid: TimeGrid) -> "ClaimSet":
        """Same claims with cell indices recomputed for another grid."""
        return replace(self, cells=grid.cell_of(self.times))

    @classmethod
    def empty(cls) -> "ClaimSet":
        return cls(np.empty(0), np.empty(0), np.empty(0), np.empty(0, int), np.empty(0, int))

    @classmethod
    def concat(cls, parts) -> "ClaimSet":
        parts = list(parts)
        if not parts:
            return cls.empty()
        return cls(*(np.concatenate([getattr(p, f) for p in parts]) for f in _CLAIM_FIELDS))


_CLAIM_FIELDS = ("times", "sizes", "factor_values", "cells", "path")


def _checked_intensity(model: ClaimsModel, t, y):
    lam = np.asarray(model.intensity(t, y), dtype=float)
    bad = ~(np.isfinite(lam) & (lam > 0))
    if np.any(bad):
        i = np.flatnonzero(np.broadcast_to(bad, np.broadcast(t, y).shape).ravel())[0]
        tb = np.broadcast_to(t, bad.shape).ravel()[i]
        yb = np.broadcast_to(y, bad.shape).ravel()[i]
        raise ModelError(
            f"intensity must be finite and positive, got {float(lam.ravel()[i])!r} at t={float(tb)!r}, y={float(yb)!r}"
        )
    return lam


def simulate_claims(
    model: ClaimsModel, factor_path: FactorPath, rng: np.random.Generator, path: int = 0
) -> ClaimSet:
    """Marked arrivals on one factor path, sorted by time."""
    grid = factor_path.grid
    times = grid.times
    dt = grid.dt
    y_left = np.asarray(factor_path.values, dtype=float)[:-1]
    rate = model.majorant * _checked_intensity(model, times[:-1], y_left)
    counts = rng.poisson(rate * dt)
    cells = np.repeat(np.arange(grid.n_steps), counts)
    arrival = times[cells] + dt * (1.0 - rng.random(len(cells)))  # in (t_k, t_{k+1}]
    y_cell = y_left[cells]
    accept_u = rng.random(len(cells))
    size_u = rng.random(len(cells))
    if len(cells):
        ratio = _checked_intensity(model, arrival, y_cell) / rate[cells]
        keep = accept_u < ratio
    else:
        keep = np.zeros(0, dtype=bool)
    arrival, cells, y_cell, size_u = arrival[keep], cells[keep], y_cell[keep], size_u[keep]
    order = np.argsort(arrival, kind="stable")
    arrival, cells, y_cell, size_u = arrival[order], cells[order], y_cell[order], size_u[order]
    sizes = np.asarray(model.size_family.sample(y_cell, size_u), dtype=float)
    return ClaimSet(arrival, sizes, y_cell, cells, np.full(len(arrival), path, dtype=int))


def simulate_claims_paths(
    model: ClaimsModel, factor_paths: FactorPath, seed: int, first_path: int = 0
) -> ClaimSet:
    """Claims for every path of an ensemble, each from its own claims stream."""
    parts = []
    for i in range(factor_paths.n_paths):
        label = first_path + i
        rng = path_stream(seed, label, Stream.CLAIMS)
        parts.append(simulate_claims(model, factor_paths.path(i), rng, path=i))
    return ClaimSet.concat(parts)


def conditional_cdf(family: ConditionalSizeFamily, z, y):
    if np.any(np.asarray(z) < 0):
        raise ValueError(f"claim size must be non-negative, got {z!r}")
    return family.cdf(z, y)


def survival_integral(family: ConditionalSizeFamily, weight_derivative, alpha, y) -> float:
    """``int_0^alpha g'(z) survival(z, y) dz``.

    Equals ``int g(z ^ alpha) dF(z, y)`` whenever ``g(0) = 0``. Uses the
    family's closed form for :class:`ExponentialWeight` weights when available.
    """
    if np.any(np.asarray(alpha) < 0):
        raise ValueError(f"retention must be non-negative, got {alpha!r}")
    if isinstance(weight_derivative, ExponentialWeight):
        closed = family.exp_weighted_survival_integral(weight_derivative, alpha, y)
        if closed is not None:
            return closed
    if np.ndim(alpha) or np.ndim(y):
        return np.vectorize(lambda a, b: survival_integral(family, weight_derivative, a, b))(alpha, y)
    if alpha == 0:
        return 0.0
    return adaptive_simpson(lambda z: float(weight_derivative(z)) * float(family.survival(z, y)), 0.0, float(alpha))


def integrated_intensity(model: ClaimsModel, factor_path: FactorPath) -> np.ndarray:
    """Trapezoid estimate of ``int lambda(t, Y_t) dt`` per path."""
    lam = _checked_intensity(model, factor_path.times, factor_path.values)
    return np.trapezoid(lam, factor_path.times, axis=-1)


def exponential_moment_warnings(family: ConditionalSizeFamily, ys) -> list[str]:
    """Flag factor values where the ``E[e^Z]`` integrability condition fails."""
    if not isinstance(family, ExponentialFamily):
        return []
    zeta = np.atleast_1d(family.zeta(np.asarray(ys, dtype=float)))
    bad = np.asarray(ys, dtype=float).ravel()[zeta.ravel() <= 1.0]
    if bad.size:
        return [f"claim-size rate zeta(y) <= 1 at y={bad[0]:.4g}: E[exp(Z)] is infinite"]
    return []

