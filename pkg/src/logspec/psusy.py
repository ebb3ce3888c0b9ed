"""Pairing detection between spectra.

Two spectra form a k-thinned pair when every level of the smaller sector
is degenerate with a level of the larger one and exactly every k-th level
of the larger sector has a partner, in the arithmetic pattern
E_B(n) = E_A(k*n).  ``detect_pairing`` searches for that pattern,
``partition_ratio`` measures the 1/k signature of the partition sums near
a divergence point, and ``verify_shift_identity`` tests the additive form
E(k*n) = E(n) + epsilon0*ln(k) on a single spectrum.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .spectrum import Spectrum

DEFAULT_K_MAX = 10
#: default tolerance for exact synthetic spectra
EXACT_TOL = 1e-9
#: default tolerance for solver-derived asymptotic claims
ASYMPTOTIC_TOL = 0.05
#: a candidate thinning is detected only above this matched fraction
DETECTION_FRACTION = 0.5


@dataclass(frozen=True)
class PairingReport:
    """Best k-thinned match of spectrum B against spectrum A.

    ``matches`` holds 1-based (index in A, index in B) pairs; the pairing is
    monotone in both by construction.  ``residuals`` are the relative
    deviations |E_B(n) - E_A(k*n)| / max(|E_A|, |E_B|) of the matched pairs.
    In asymptotic mode (``asymptotic`` True) scoring is restricted to the
    tail window and detection additionally requires the residual magnitudes
    to be non-increasing across it.
    """

    k: int
    matches: tuple[tuple[int, int], ...]
    matched_fraction: float
    residuals: np.ndarray
    asymptotic: bool
    detected: bool


@dataclass(frozen=True)
class ShiftIdentityReport:
    """Residuals E(k*n) - E(n) - epsilon0*ln(k) over a window."""

    k: int
    shift: float
    window: tuple[int, int]
    residuals: np.ndarray
    median: float
    trend_decreasing: bool
    holds: bool


def _relative_deviation(a: float, b: float) -> float:
    scale = max(abs(a), abs(b))
    if scale == 0.0:
        return 0.0
    return abs(a - b) / scale


def _magnitudes_non_increasing(residuals: np.ndarray) -> bool:
    """Median magnitude over the window's second half must not exceed the first half's."""
    mags = np.abs(np.asarray(residuals, dtype=float))
    if mags.size < 4:
        return True
    half = mags.size // 2
    return bool(np.median(mags[half:]) <= np.median(mags[:half]))


def detect_pairing(a: Spectrum, b: Spectrum, tol: float = EXACT_TOL,
                   tail_window: tuple[int, int] | None = None,
                   k_max: int = DEFAULT_K_MAX) -> PairingReport:
    """Search k = 1..k_max for the thinning that best matches B(n) to A(k*n).

    Returns the k with the highest matched fraction of B's levels (scored
    over the tail window when one is given), ties broken toward smaller k.
    A best fraction below 0.5 means no thinned pairing was detected; the
    report still carries the best candidate, flagged ``detected=False``.
    """
    if not (tol > 0):
        raise ValueError("tol must be positive")
    if k_max < 1:
        raise ValueError("k_max must be >= 1")
    ea = a.expanded()
    eb = b.expanded()
    if tail_window is None:
        indices = np.arange(1, eb.size + 1)
    else:
        lo, hi = int(tail_window[0]), int(tail_window[1])
        if lo < 1 or hi > eb.size or lo > hi:
            raise ValueError(f"tail window [{lo}, {hi}] outside spectrum with {eb.size} states")
        indices = np.arange(lo, hi + 1)

    best = None
    for k in range(1, k_max + 1):
        matches = []
        residuals = []
        for n in indices:
            m = k * n
            if m > ea.size:
                continue
            dev = _relative_deviation(eb[n - 1], ea[m - 1])
            if dev <= tol:
                matches.append((int(m), int(n)))
                residuals.append(dev)
        fraction = len(matches) / indices.size
        if best is None or fraction > best[0]:
            best = (fraction, k, matches, residuals)
    fraction, k, matches, residuals = best
    residuals = np.array(residuals, dtype=float)
    asymptotic = tail_window is not None
    detected = fraction >= DETECTION_FRACTION
    if asymptotic:
        detected = detected and _magnitudes_non_increasing(residuals)
    return PairingReport(k=k, matches=tuple(matches), matched_fraction=fraction,
                         residuals=residuals, asymptotic=asymptotic, detected=detected)


def partition_ratio(a: Spectrum, b: Spectrum, beta: float) -> float:
    """Ratio of the truncated partition sums, sum_B / sum_A, at inverse temperature beta.

    The spectra should be comparable truncations (same generation cap,
    recorded in their labels).  For a k-thinned pair the ratio approaches
    1/k as beta approaches the divergence point from above.
    """
    return b.partition_sum(beta) / a.partition_sum(beta)


def verify_shift_identity(s: Spectrum, epsilon0: float, k: int,
                          tail_window: tuple[int, int],
                          rel_tol: float = ASYMPTOTIC_TOL) -> ShiftIdentityReport:
    """Residuals of E(k*n) = E(n) + epsilon0*ln(k) over a 1-based index window.

    The identity is declared to hold when the median residual is within
    ``rel_tol`` of zero relative to the shift epsilon0*ln(k) and the
    residual magnitudes do not grow across the window.
    """
    if k < 2:
        raise ValueError("k must be >= 2")
    if not (epsilon0 > 0):
        raise ValueError("epsilon0 must be positive")
    energies = s.expanded()
    lo, hi = int(tail_window[0]), int(tail_window[1])
    if lo < 1 or lo > hi:
        raise ValueError(f"bad window [{lo}, {hi}]")
    if k * hi > energies.size:
        raise ValueError(
            f"window [{lo}, {hi}] with k={k} needs {k * hi} levels, spectrum has {energies.size}")
    n = np.arange(lo, hi + 1)
    shift = epsilon0 * math.log(k)
    residuals = energies[k * n - 1] - energies[n - 1] - shift
    median = float(np.median(residuals))
    trend = _magnitudes_non_increasing(residuals)
    holds = trend and abs(median) <= rel_tol * shift
    return ShiftIdentityReport(k=k, shift=shift, window=(lo, hi), residuals=residuals,
                               median=median, trend_decreasing=trend, holds=holds)
