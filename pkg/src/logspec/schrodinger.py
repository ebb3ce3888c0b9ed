"""Finite-difference bound states of -(hbar^2/2m) d^2/dx^2 + V(x).

The operator is discretized with the second-order central difference on a
uniform interior grid with Dirichlet (hard-wall) end points, giving a
symmetric tridiagonal matrix whose lowest eigenvalues are isolated by
Sturm-sequence sign-count bisection (LAPACK stebz).  ``auto_grid`` sizes
the box from the asymptotic level estimate so that the highest requested
level is not contaminated by the walls.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import eigh_tridiagonal

from .asymptotics import level_estimate
from .potentials import (
    FULL_LINE,
    LOGARITHMIC,
    POWER_LAW,
    TABULATED,
    PotentialSpec,
    describe,
    eval_potential,
    support,
)
from .spectrum import Spectrum

#: default bisection tolerance per eigenvalue, in units of hbar^2/(m h^2)
EIGEN_TOL_SCALE = 1e-10

#: discretization error target of auto-sized grids, relative to the top level
DEFAULT_GRID_RTOL = 1e-4

_MAX_AUTO_POINTS = 3_000_000


class BoxContaminationWarning(UserWarning):
    """The highest requested eigenvalue exceeds V at the outer wall."""


@dataclass(frozen=True)
class GridConfig:
    """Uniform grid of interior nodes; x_min and x_max are hard walls."""

    x_min: float
    x_max: float
    points: int

    def __post_init__(self):
        if not (self.x_min < self.x_max):
            raise ValueError("field x_min must be below x_max")
        if self.points < 2:
            raise ValueError("field points must be >= 2")

    @property
    def step(self) -> float:
        return (self.x_max - self.x_min) / (self.points + 1)

    def nodes(self) -> np.ndarray:
        return self.x_min + self.step * np.arange(1, self.points + 1)


@dataclass(frozen=True)
class TridiagonalOperator:
    """Symmetric tridiagonal matrix (single off-diagonal stored) with its grid step."""

    diagonal: np.ndarray
    off_diagonal: np.ndarray
    step: float

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.off_diagonal, dtype=float)
        if d.ndim != 1 or d.size < 1:
            raise ValueError("diagonal must be a non-empty 1D array")
        if e.shape != (d.size - 1,):
            raise ValueError("off_diagonal must have length len(diagonal) - 1")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise ValueError("matrix entries must be finite")
        if not (self.step > 0):
            raise ValueError("step must be positive")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "off_diagonal", e)

    @property
    def dimension(self) -> int:
        return int(self.diagonal.size)


def discretize(p: PotentialSpec, grid: GridConfig) -> TridiagonalOperator:
    """Central-difference matrix: diag = hbar^2/(m h^2) + V(x_i), off = -hbar^2/(2 m h^2)."""
    lo, hi = support(p)
    if grid.x_min < lo - 1e-12 * max(1.0, abs(lo)) or grid.x_max > hi:
        raise ValueError(
            f"grid [{grid.x_min:g}, {grid.x_max:g}] extends outside the potential's "
            f"domain [{lo:g}, {hi:g}]"
        )
    h = grid.step
    v = eval_potential(p, grid.nodes())
    if not np.all(np.isfinite(v)):
        raise ValueError("potential is not finite on every grid node")
    t = p.hbar ** 2 / (p.mass * h ** 2)
    diag = t + v
    off = np.full(grid.points - 1, -0.5 * t)
    return TridiagonalOperator(diag, off, h)


def sturm_count(op: TridiagonalOperator, energy: float) -> int:
    """Number of eigenvalues strictly below ``energy`` (Sturm sign count)."""
    d = op.diagonal
    e = op.off_diagonal
    tiny = 1e-300
    q = d[0] - energy
    count = 1 if q < 0 else 0
    for i in range(1, d.size):
        denom = q if q != 0.0 else -tiny
        q = d[i] - energy - e[i - 1] * e[i - 1] / denom
        if q < 0:
            count += 1
    return count


def eigen_solve(op: TridiagonalOperator, count: int, tol: float | None = None) -> np.ndarray:
    """The ``count`` smallest eigenvalues, ascending, via bisection on Sturm sign counts.

    Each eigenvalue is isolated to the absolute tolerance ``tol``
    (default EIGEN_TOL_SCALE * hbar^2/(m h^2)).  The bisection is
    deterministic: repeated calls on the same operator are bit-identical.
    """
    n = op.dimension
    if count < 1 or count > n:
        raise ValueError(f"count must be between 1 and the dimension {n}")
    if n == 1:
        return op.diagonal.copy()
    scale = 2.0 * abs(op.off_diagonal[0])  # equals hbar^2/(m h^2) for discretized operators
    if tol is None:
        tol = EIGEN_TOL_SCALE * (scale if scale > 0 else 1.0)
    return eigh_tridiagonal(
        op.diagonal, op.off_diagonal, eigvals_only=True,
        select="i", select_range=(0, count - 1), tol=tol, lapack_driver="stebz",
    )


def solve_spectrum(p: PotentialSpec, grid: GridConfig, count: int) -> Spectrum:
    """Lowest ``count`` levels of the discretized problem as a Spectrum.

    1D bound states are non-degenerate, so each level carries degeneracy 1
    (the merge tolerance only guards against numerically split levels).
    Warns with :class:`BoxContaminationWarning` when the highest requested
    eigenvalue exceeds V(x_max), i.e. when the hard wall shapes that level.
    """
    op = discretize(p, grid)
    values = eigen_solve(op, count)
    if p.kind != TABULATED:  # tabulated walls are physical, not an artifact
        v_wall = eval_potential(p, grid.x_max)
        if values[-1] > v_wall:
            warnings.warn(
                f"level {count} at E={values[-1]:.6g} exceeds V(x_max)={v_wall:.6g}; "
                "enlarge the box", BoxContaminationWarning, stacklevel=2)
    label = f"{describe(p)} on grid[{grid.x_min:.12g}, {grid.x_max:.12g}] x {grid.points}"
    return Spectrum.from_energies(values, label=label)


def auto_grid(p: PotentialSpec, count: int, rel_tol: float = DEFAULT_GRID_RTOL) -> GridConfig:
    """Grid sized so the ``count`` lowest levels are resolved to ~``rel_tol``.

    The box is placed from the asymptotic estimate of the top level: for
    power laws the wall sits where V reaches twice that estimate (plus a
    floor of a few natural energy units); for the logarithmic potential the
    wall sits one epsilon0 above the estimate, i.e. a factor e beyond the
    classical turning point, which the slow log growth makes more than
    enough suppression.  The step resolves the shortest local wavelength:
    (k_max*h)^2/12 ~ rel_tol.
    """
    if count < 1:
        raise ValueError("count must be >= 1")
    if not (0 < rel_tol < 1):
        raise ValueError("rel_tol must lie in (0, 1)")
    top = level_estimate(p, count) - p.offset
    if p.kind == POWER_LAW:
        # natural energy unit (hbar^2/m)^(r/(r+2)) * g^(2/(r+2)) floors the box
        unit = (p.hbar ** 2 / p.mass) ** (p.r / (p.r + 2.0)) * p.g ** (2.0 / (p.r + 2.0))
        e_wall = 2.0 * top + 8.0 * unit
        x_max = (e_wall / p.g) ** (1.0 / p.r)
        x_min = -x_max if p.domain == FULL_LINE else 0.0
        v_min = 0.0
    elif p.kind == LOGARITHMIC:
        e_wall = max(top, p.epsilon0 * math.log(p.x0)) + p.epsilon0
        x_max = math.exp(e_wall / p.epsilon0)
        x_min = p.x0
        v_min = p.epsilon0 * math.log(p.x0)
    else:
        x_min, x_max = support(p)
        v_min = min(p.v_table)
        e_wall = 2.0 * max(top - v_min, 0.0) + v_min
    k_max = math.sqrt(2.0 * p.mass * max(e_wall - v_min, 1e-12)) / p.hbar
    h = math.sqrt(12.0 * rel_tol) / k_max
    points = max(64, int(math.ceil((x_max - x_min) / h)) - 1)
    if points > _MAX_AUTO_POINTS:
        raise ValueError(
            f"auto grid needs {points} points (> {_MAX_AUTO_POINTS}); "
            "raise rel_tol or pass an explicit grid")
    return GridConfig(x_min, x_max, points)
