"""Fixed-point solver for the Bernoulli-convolution distance function.

For ``theta > 1`` the function ``f`` equals ``2|x|`` for ``|x| >= 1/2`` and
on ``[-1/2, 1/2]`` satisfies

    f(x) = (f(theta*x - (theta-1)/2) + f(theta*x + (theta-1)/2)) / (2*theta)

The right-hand side is a ``1/theta`` contraction in the sup norm, so plain
iteration converges.  The distance between the two start states of the
Bernoulli gadget is ``1/2 + f(x)/2``.

Values are stored on the nonnegative half of a uniform grid and mirrored,
which makes the solution exactly symmetric.  Linear interpolation between
grid points is not a rigorous error bound for singular ``theta`` (e.g.
Pisot numbers); the chain-based brackets are the cross-check there.
"""
from __future__ import annotations

import csv
import math
from dataclasses import dataclass, field

import numpy as np

from . import _backend


@dataclass(frozen=True)
class GridFunction:
    theta: float
    half: np.ndarray  # values at x_j = j*h, j = 0..K, with h = 1/(2K)
    changes: tuple[float, ...] = field(default=(), compare=False)

    @property
    def K(self) -> int:
        return self.half.shape[0] - 1

    @property
    def h(self) -> float:
        return 0.5 / self.K

    @property
    def grid(self) -> np.ndarray:
        """Full symmetric grid over [-1/2, 1/2] (odd point count)."""
        pos = np.arange(self.K + 1, dtype=np.float64) * self.h
        return np.concatenate([-pos[:0:-1], pos])

    @property
    def values(self) -> np.ndarray:
        return np.concatenate([self.half[:0:-1], self.half])

    def __call__(self, x: float) -> float:
        y = abs(float(x))
        if y >= 0.5:
            return 2.0 * y
        t = y / self.h
        i = min(int(t), self.K - 1)
        frac = t - i
        return (1.0 - frac) * float(self.half[i]) + frac * float(self.half[i + 1])

    def contraction_factors(self, floor: float = 0.0) -> list[float]:
        """Ratios of successive sup-changes, skipping steps whose previous change is below ``floor``."""
        c = self.changes
        return [c[k + 1] / c[k] for k in range(len(c) - 1) if c[k] > floor]


def initial_guess(theta: float, grid_points: int) -> GridFunction:
    if grid_points < 3 or grid_points % 2 == 0:
        raise ValueError("grid_points must be odd and at least 3")
    K = (grid_points - 1) // 2
    half = 2.0 * (np.arange(K + 1, dtype=np.float64) * (0.5 / K))
    half[K] = 1.0
    return GridFunction(float(theta), half)


def apply_operator(g: GridFunction, backend=None) -> GridFunction:
    kernels = backend or _backend.kernels
    return GridFunction(g.theta, kernels.bernoulli_operator(g.half, g.theta, g.h))


def iteration_cap(theta: float, tol: float) -> int:
    return max(1, math.ceil(math.log(2.0 / tol) / math.log(theta)))


def solve_f(theta: float, grid_points: int = 4097, tol: float = 1e-9, backend=None) -> GridFunction:
    """Iterate the fixed-point map from ``f(x) = 2|x|`` until the sup-change is at most ``tol``."""
    theta = float(theta)
    if not theta > 1:
        raise ValueError("theta must exceed 1")
    if not tol > 0:
        raise ValueError("tol must be positive")
    kernels = backend or _backend.kernels
    g = initial_guess(theta, grid_points)
    h = g.h
    half = g.half
    changes = []
    for _ in range(iteration_cap(theta, tol)):
        nxt = kernels.bernoulli_operator(half, theta, h)
        change = float(np.max(np.abs(nxt - half)))
        changes.append(change)
        half = nxt
        if change <= tol:
            break
    return GridFunction(theta, half, tuple(changes))


def d_theta(theta: float, x: float, grid_points: int = 4097, tol: float = 1e-9,
            solution: GridFunction | None = None) -> float:
    """Distance between the two start states of the Bernoulli gadget."""
    x = float(x)
    if not -0.5 <= x <= 0.5:
        raise ValueError("x must lie in [-1/2, 1/2]")
    f = solution if solution is not None else solve_f(theta, grid_points, tol)
    return 0.5 + 0.5 * f(x)


def write_csv(f: GridFunction, path) -> None:
    """Write ``x,f,d`` rows over the full grid."""
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["x", "f", "d"])
        for x, v in zip(f.grid, f.values):
            w.writerow([repr(float(x)), repr(float(v)), repr(0.5 + 0.5 * float(v))])
