"""Environmental factor diffusion and its Euler discretization.

The factor ``Y`` solves ``dY = b(t, Y) dt + gamma(t, Y) dW`` on a uniform grid.
Coefficient callables must accept numpy arrays and broadcast; the integrability
conditions on ``b`` and ``gamma`` are a user obligation and are not checked.

Every Monte Carlo path owns a counter-seeded random stream (see
:func:`path_stream`), so a path's noise depends only on ``(seed, path index)``
and never on how many paths are drawn or in which order.
"""

from dataclasses import dataclass, replace
from enum import IntEnum
from typing import Callable

import numpy as np

from .errors import NumericalBlowUp

Coefficient = Callable[[np.ndarray, np.ndarray], np.ndarray]


class Stream(IntEnum):
    """Role tag mixed into a path's seed so each role draws independent noise."""

    FACTOR = 0
    CLAIMS = 1


def path_stream(seed: int, path: int, role: Stream = Stream.FACTOR) -> np.random.Generator:
    """Random generator dedicated to one (path, role) pair."""
    return np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(int(path), int(role))))


def constant(value: float) -> Coefficient:
    """Coefficient ``(t, y) -> value`` that broadcasts over its inputs."""

    def coefficient(t, y):
        return np.full(np.broadcast(t, y).shape, float(value))[()]

    coefficient.value = float(value)
    return coefficient


@dataclass(frozen=True)
class FactorModel:
    drift: Coefficient
    diffusion: Coefficient
    y0: float

    def at(self, y0: float) -> "FactorModel":
        return replace(self, y0=float(y0))


def baseline_factor(drift: float = 0.3, diffusion: float = 0.3, y0: float = 1.0) -> FactorModel:
    """Arithmetic Brownian motion preset used in the numerical experiments."""
    return FactorModel(constant(drift), constant(diffusion), y0)


@dataclass(frozen=True)
class TimeGrid:
    t0: float
    T: float
    n_steps: int

    def __post_init__(self):
        if not self.n_steps >= 1:
            raise ValueError(f"n_steps must be >= 1, got {self.n_steps}")
        if not self.t0 < self.T:
            raise ValueError(f"grid needs t0 < T, got t0={self.t0}, T={self.T}")

    @property
    def dt(self) -> float:
        return (self.T - self.t0) / self.n_steps

    @property
    def times(self) -> np.ndarray:
        return np.linspace(self.t0, self.T, self.n_steps + 1)

    def refined(self, factor: int = 2) -> "TimeGrid":
        return TimeGrid(self.t0, self.T, self.n_steps * factor)

    def cell_of(self, t) -> np.ndarray:
        """Index ``k`` of the cell ``(t_k, t_{k+1}]`` containing ``t``."""
        k = np.ceil((np.asarray(t, dtype=float) - self.t0) / self.dt).astype(int) - 1
        return np.clip(k, 0, self.n_steps - 1)


@dataclass(frozen=True)
class FactorPath:
    grid: TimeGrid
    values: np.ndarray

    def __post_init__(self):
        if self.values.shape[-1] != self.grid.n_steps + 1:
            raise ValueError("factor values do not match the grid")

    @property
    def times(self) -> np.ndarray:
        return self.grid.times

    @property
    def n_paths(self) -> int:
        return 1 if self.values.ndim == 1 else self.values.shape[0]

    def path(self, i: int) -> "FactorPath":
        """Single path ``i`` of an ensemble."""
        return FactorPath(self.grid, self.values[i])


def euler_step(model: FactorModel, t: float, y, dt: float, noise):
    """One Euler-Maruyama update ``y + b dt + gamma sqrt(dt) noise``."""
    if not dt > 0:
        raise ValueError(f"dt must be positive, got {dt}")
    y_next = y + model.drift(t, y) * dt + model.diffusion(t, y) * np.sqrt(dt) * noise
    finite = np.isfinite(y_next)
    if not np.all(finite):
        bad = np.flatnonzero(~np.atleast_1d(finite))[0]
        raise NumericalBlowUp(float(t), float(np.atleast_1d(y)[bad]))
    return y_next


def euler_path(model: FactorModel, grid: TimeGrid, noise: np.ndarray) -> FactorPath:
    """Iterate :func:`euler_step` over ``grid`` with given standard normals.

    ``noise`` has shape ``(n_steps,)`` for one path or ``(n_paths, n_steps)``.
    """
    noise = np.asarray(noise, dtype=float)
    if noise.shape[-1] != grid.n_steps:
        raise ValueError("noise length must equal the number of grid steps")
    values = np.empty(noise.shape[:-1] + (grid.n_steps + 1,))
    values[..., 0] = model.y0
    times = grid.times
    dt = grid.dt
    y = values[..., 0]
    for k in range(grid.n_steps):
        y = euler_step(model, times[k], y, dt, noise[..., k])
        values[..., k + 1] = y
    return FactorPath(grid, values)


def simulate_factor(model: FactorModel, grid: TimeGrid, rng: np.random.Generator) -> FactorPath:
    return euler_path(model, grid, rng.standard_normal(grid.n_steps))


def simulate_factor_paths(
    model: FactorModel, grid: TimeGrid, seed: int, n_paths: int, first_path: int = 0
) -> FactorPath:
    """Ensemble of ``n_paths`` factor paths, path ``i`` driven by its own stream."""
    noise = np.stack(
        [
            path_stream(seed, i, Stream.FACTOR).standard_normal(grid.n_steps)
            for i in range(first_path, first_path + n_paths)
        ]
    )
    return euler_path(model, grid, noise)
