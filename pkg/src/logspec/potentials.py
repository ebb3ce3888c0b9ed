"""Declarative one-dimensional potentials.

A :class:`PotentialSpec` describes V(x) plus the physical constants of the
kinetic term (hbar, mass).  Three kinds are supported:

``power_law``
    V(x) = g * x**r with g, r > 0, on the half line x > 0 or, for even
    integer r, on the full line.
``logarithmic``
    V(x) = epsilon0 * ln(x) on the half line, regularized by a hard wall
    at the infrared cutoff x0 > 0.
``tabulated``
    linear interpolation of (x_table, v_table) samples on their finite
    support.

Any kind may carry an additive ``offset``, which shifts V rigidly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

POWER_LAW = "power_law"
LOGARITHMIC = "logarithmic"
TABULATED = "tabulated"
KINDS = (POWER_LAW, LOGARITHMIC, TABULATED)

HALF_LINE = "half_line"
FULL_LINE = "full_line"
DOMAINS = (HALF_LINE, FULL_LINE)


@dataclass(frozen=True)
class PotentialSpec:
    """Potential description with validation at construction time."""

    kind: str
    g: float | None = None
    r: float | None = None
    epsilon0: float | None = None
    x0: float | None = None
    x_table: tuple[float, ...] | None = None
    v_table: tuple[float, ...] | None = None
    hbar: float = 1.0
    mass: float = 1.0
    domain: str = HALF_LINE
    offset: float = 0.0

    def __post_init__(self):
        if self.kind not in KINDS:
            raise ValueError(f"unknown potential kind {self.kind!r}; expected one of {KINDS}")
        if self.domain not in DOMAINS:
            raise ValueError(f"unknown domain {self.domain!r}; expected one of {DOMAINS}")
        if not (self.hbar > 0):
            raise ValueError("field hbar must be positive")
        if not (self.mass > 0):
            raise ValueError("field mass must be positive")
        if not math.isfinite(self.offset):
            raise ValueError("field offset must be finite")

        if self.kind == POWER_LAW:
            if self.g is None or not (self.g > 0):
                raise ValueError("field g must be positive for a power_law potential")
            if self.r is None or not (self.r > 0):
                raise ValueError("field r must be positive for a power_law potential")
            if self.domain == FULL_LINE:
                # x**r must be real-valued and confining for x < 0.
                if abs(self.r - round(self.r)) > 1e-12 or round(self.r) % 2 != 0:
                    raise ValueError(
                        "field r must be an even integer for a full_line power_law "
                        "potential; use domain='half_line' otherwise"
                    )
        elif self.kind == LOGARITHMIC:
            if self.epsilon0 is None or not (self.epsilon0 > 0):
                raise ValueError("field epsilon0 must be positive for a logarithmic potential")
            if self.x0 is None or not (self.x0 > 0):
                raise ValueError("field x0 must be positive for a logarithmic potential")
            if self.domain != HALF_LINE:
                raise ValueError("logarithmic potentials are defined on the half line only")
        else:  # TABULATED
            if self.x_table is None or self.v_table is None:
                raise ValueError("fields x_table and v_table are required for a tabulated potential")
            object.__setattr__(self, "x_table", tuple(float(x) for x in self.x_table))
            object.__setattr__(self, "v_table", tuple(float(v) for v in self.v_table))
            if len(self.x_table) != len(self.v_table):
                raise ValueError("x_table and v_table must have equal length")
            if len(self.x_table) < 2:
                raise ValueError("tabulated potential needs at least two samples")
            if any(b <= a for a, b in zip(self.x_table, self.x_table[1:])):
                raise ValueError("x_table must be strictly ascending")
            if not all(math.isfinite(v) for v in self.v_table):
                raise ValueError("v_table entries must be finite")


def support(p: PotentialSpec) -> tuple[float, float]:
    """Interval on which the potential is defined (may be half-infinite)."""
    if p.kind == TABULATED:
        return p.x_table[0], p.x_table[-1]
    if p.kind == LOGARITHMIC:
        return p.x0, math.inf
    if p.domain == HALF_LINE:
        return 0.0, math.inf
    return -math.inf, math.inf


def eval_potential(p: PotentialSpec, x):
    """Evaluate V at x (scalar or array).

    Raises ValueError when x lies outside the potential's domain: x <= 0 on
    the half line, or outside the table for tabulated potentials.  The
    logarithmic kind is clamped to its wall value epsilon0*ln(x0) for
    0 < x < x0; the solver never evaluates there because the wall sits at x0.
    """
    arr = np.asarray(x, dtype=float)
    if p.kind == TABULATED:
        lo, hi = p.x_table[0], p.x_table[-1]
        if np.any(arr < lo) or np.any(arr > hi):
            raise ValueError(f"x outside tabulated range [{lo:g}, {hi:g}]")
        v = np.interp(arr, p.x_table, p.v_table)
    elif p.kind == LOGARITHMIC:
        if np.any(arr <= 0):
            raise ValueError("x must be positive on the half line")
        v = p.epsilon0 * np.log(np.maximum(arr, p.x0))
    else:  # POWER_LAW
        if p.domain == HALF_LINE and np.any(arr <= 0):
            raise ValueError("x must be positive on the half line")
        # |x|**r == x**r wherever both are defined (full line implies even r);
        # overflow to inf is tolerated here and rejected by the consumers.
        with np.errstate(over="ignore"):
            v = p.g * np.abs(arr) ** p.r
    v = v + p.offset
    if np.ndim(x) == 0:
        return float(v)
    return v


def describe(p: PotentialSpec) -> str:
    """Short deterministic description used in spectrum labels and CSV comments."""
    if p.kind == POWER_LAW:
        core = f"power_law(g={p.g:.6g}, r={p.r:.6g}, {p.domain})"
    elif p.kind == LOGARITHMIC:
        core = f"logarithmic(epsilon0={p.epsilon0:.6g}, x0={p.x0:.6g})"
    else:
        core = f"tabulated({len(p.x_table)} pts on [{p.x_table[0]:.6g}, {p.x_table[-1]:.6g}])"
    if p.offset != 0.0:
        core += f" + {p.offset:.6g}"
    if p.hbar != 1.0 or p.mass != 1.0:
        core += f" [hbar={p.hbar:.6g}, m={p.mass:.6g}]"
    return core
