"""Classical partition functions, divergence temperatures, and level-spacing laws.

The route to an asymptotic law goes: compute the classical partition
function Z(beta) = (1/hbar) * sqrt(2*pi*m/beta) * integral of exp(-beta*V);
locate the inverse temperature beta_h where Z diverges; find the parameter
change that halves Z there (g -> k**r * g for power laws, V -> V +
epsilon0*ln(k) for the logarithmic potential); and read off the level-
spacing exponent from dimensional analysis.  ``fit_exponent`` closes the
loop against numerically solved spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np
from scipy import integrate, special

from .potentials import (
    FULL_LINE,
    LOGARITHMIC,
    POWER_LAW,
    PotentialSpec,
    eval_potential,
    support,
)
from .spectrum import Spectrum

FINITE_TEMPERATURE = "finite_temperature"
INFINITE_TEMPERATURE = "infinite_temperature"

MULTIPLICATIVE = "multiplicative"
ADDITIVE = "additive"

POWER_FORM = "power"
LOGARITHMIC_FORM = "logarithmic"

#: adaptive-quadrature relative target on finite segments
QUAD_REL_TOL = 1e-10
#: exponent cutoff for the power-law integrand: integrate to beta*g*x**r == this
_TAIL_EXPONENT = 36.0


class QuadratureError(RuntimeError):
    """Adaptive quadrature did not converge (distinct from a divergent integral)."""


@dataclass(frozen=True)
class HagedornResult:
    """Inverse temperature at which the partition function diverges."""

    beta_h: float
    kind: str

    def __post_init__(self):
        if self.kind == INFINITE_TEMPERATURE and self.beta_h != 0.0:
            raise ValueError("infinite_temperature requires beta_h = 0")
        if self.kind == FINITE_TEMPERATURE and not (self.beta_h > 0):
            raise ValueError("finite_temperature requires beta_h > 0")


@dataclass(frozen=True)
class HalvingTransform:
    """Parameter change that divides the partition function by ``thinning`` at beta_h."""

    kind: str
    factor: float | None
    shift: float | None
    thinning: int

    def apply(self, p: PotentialSpec) -> PotentialSpec:
        if self.kind == MULTIPLICATIVE:
            return replace(p, g=p.g * self.factor)
        return replace(p, offset=p.offset + self.shift)


@dataclass(frozen=True)
class AsymptoticLaw:
    """Leading large-n form of E_n.

    power form:        E_n ~ (hbar**2/m)**hbar_m_exponent * g**g_exponent * n**n_exponent
    logarithmic form:  E_n ~ epsilon0 * ln(n) + offset  (offset fitted separately)
    """

    form: str
    hbar_m_exponent: float | None = None
    g_exponent: float | None = None
    n_exponent: float | None = None
    epsilon0: float | None = None
    offset: float | None = None

    def __post_init__(self):
        if self.form == POWER_FORM:
            if abs(self.hbar_m_exponent + self.g_exponent - 1.0) > 1e-12:
                raise ValueError("power-form exponents must satisfy a + b = 1")
            if abs(self.n_exponent - 2.0 * self.hbar_m_exponent) > 1e-9:
                raise ValueError("power-form n exponent must equal twice the hbar^2/m exponent")


@dataclass(frozen=True)
class ClassicalPartition:
    value: float
    divergent: bool
    beta: float


@dataclass(frozen=True)
class FitResult:
    form: str
    window: tuple[int, int]
    exponent: float | None = None
    prefactor: float | None = None
    epsilon0: float | None = None
    offset: float | None = None
    residual_rms: float = 0.0


def _quad(f, a, b, points=None):
    val, err, *rest = integrate.quad(f, a, b, epsabs=0.0, epsrel=QUAD_REL_TOL,
                                     limit=400, points=points, full_output=1)
    if len(rest) > 1:  # (info, message) -> the integrator gave up
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] failed: {rest[1]}")
    if err > 1e-8 * max(abs(val), 1e-300):
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] converged only to {err:g}")
    return val


def classical_partition_function(p: PotentialSpec, beta: float) -> ClassicalPartition:
    """Z(beta) = (1/hbar)*sqrt(2*pi*m/beta) * integral over x of exp(-beta*V(x)).

    The momentum Gaussian is analytic; the position integral runs adaptive
    quadrature on a finite segment plus an analytic tail.  Returns a result
    flagged divergent when the position integral has no convergent tail
    (logarithmic kind with beta*epsilon0 <= 1).
    """
    if not (beta > 0):
        raise ValueError("beta must be positive")
    momentum = math.sqrt(2.0 * math.pi * p.mass / beta) / p.hbar
    damp = math.exp(-beta * p.offset)

    def boltzmann(x):
        return math.exp(-beta * eval_potential(p, x))

    if p.kind == POWER_LAW:
        cut = (_TAIL_EXPONENT / (beta * p.g)) ** (1.0 / p.r)
        finite = _quad(boltzmann, 0.0, cut)
        # exact remainder: int_X^inf exp(-beta*g*x**r) dx in terms of the upper
        # incomplete gamma function of 1/r
        tail = damp * special.gamma(1.0 / p.r) * special.gammaincc(1.0 / p.r, _TAIL_EXPONENT) \
            / (p.r * (beta * p.g) ** (1.0 / p.r))
        position = finite + tail
        if p.domain == FULL_LINE:
            position *= 2.0
        return ClassicalPartition(momentum * position, False, beta)

    if p.kind == LOGARITHMIC:
        a = beta * p.epsilon0
        if a <= 1.0:
            # int_x0^inf x**(-a) dx has no finite tail
            return ClassicalPartition(math.inf, True, beta)
        cut = 100.0 * p.x0
        finite = _quad(boltzmann, p.x0, cut)
        tail = damp * cut ** (1.0 - a) / (a - 1.0)
        return ClassicalPartition(momentum * (finite + tail), False, beta)

    lo, hi = support(p)  # tabulated: finite support, no tail
    finite = _quad(boltzmann, lo, hi, points=list(p.x_table))
    return ClassicalPartition(momentum * finite, False, beta)


def find_hagedorn(p: PotentialSpec) -> HagedornResult:
    """Divergence point of Z from the convergence criterion of the position integral.

    Power-law potentials confine at every beta > 0, so Z diverges only as
    beta -> 0 (infinite temperature).  The logarithmic potential's integral
    of x**(-beta*epsilon0) converges iff beta*epsilon0 > 1, so Z diverges at
    the finite inverse temperature 1/epsilon0.
    """
    if p.kind == POWER_LAW:
        return HagedornResult(0.0, INFINITE_TEMPERATURE)
    if p.kind == LOGARITHMIC:
        return HagedornResult(1.0 / p.epsilon0, FINITE_TEMPERATURE)
    raise ValueError("tabulated potentials have no analytic tail criterion")


def halving_transform(p: PotentialSpec, k: int, probe_beta: float | None = None) -> HalvingTransform:
    """Parameter change making Z'/Z = 1/k at the divergence point.

    power_law:    g -> k**r * g, which rescales x and gives Z'/Z = 1/k at every beta.
    logarithmic:  V -> V + epsilon0*ln(k), which gives Z'/Z = k**(-beta*epsilon0),
                  hence 1/k at beta_h = 1/epsilon0.

    The returned transform is verified by evaluating the partition function
    at a probe beta.
    """
    if int(k) != k or k < 2:
        raise ValueError("k must be an integer >= 2")
    k = int(k)
    if p.kind == POWER_LAW:
        t = HalvingTransform(MULTIPLICATIVE, factor=float(k) ** p.r, shift=None, thinning=k)
        beta = probe_beta if probe_beta is not None else 1.0 / _energy_scale(p)
        expected = 1.0 / k
    elif p.kind == LOGARITHMIC:
        t = HalvingTransform(ADDITIVE, factor=None, shift=p.epsilon0 * math.log(k), thinning=k)
        beta = probe_beta if probe_beta is not None else 2.0 / p.epsilon0
        expected = float(k) ** (-beta * p.epsilon0)
    else:
        raise ValueError("halving transform needs a power_law or logarithmic potential")
    ratio = classical_partition_function(t.apply(p), beta).value \
        / classical_partition_function(p, beta).value
    if not math.isclose(ratio, expected, rel_tol=1e-6):
        raise RuntimeError(
            f"halving transform self-check failed: Z'/Z = {ratio:.12g}, expected {expected:.12g}"
        )
    return t


def _energy_scale(p: PotentialSpec) -> float:
    """Natural energy unit of a power-law potential: (hbar^2/m)^(r/(r+2)) * g^(2/(r+2))."""
    a = p.r / (p.r + 2.0)
    return (p.hbar ** 2 / p.mass) ** a * p.g ** (1.0 - a)


def scaling_exponent(r: float) -> float:
    """Level-spacing exponent alpha with E_n ~ n**alpha for V = g*x**r.

    Derived executably rather than quoted: dimensional analysis fixes
    E = (hbar^2/m)**a * g**b * f(n) by the linear system a + b = 1 (energy
    balance) and 2a - r*b = 0 (length balance); thinning the spectrum by 2
    maps g -> 2**r * g, so f(2n) = lam * f(n) with lam = (2**r)**b, and the
    power solving that functional equation is alpha = log2(lam) = r*b.
    """
    if not (r > 0):
        raise ValueError("r must be positive")
    a, b = np.linalg.solve([[1.0, 1.0], [2.0, -float(r)]], [1.0, 0.0])
    return float(r * b)


def asymptotic_law(p: PotentialSpec) -> AsymptoticLaw:
    """Leading large-n level-spacing law for the potential (no prefactor claimed)."""
    if p.kind == POWER_LAW:
        a, b = np.linalg.solve([[1.0, 1.0], [2.0, -p.r]], [1.0, 0.0])
        return AsymptoticLaw(POWER_FORM, hbar_m_exponent=float(a), g_exponent=float(b),
                             n_exponent=scaling_exponent(p.r))
    if p.kind == LOGARITHMIC:
        return AsymptoticLaw(LOGARITHMIC_FORM, epsilon0=p.epsilon0, offset=None)
    raise ValueError("no asymptotic law for tabulated potentials")


def level_estimate(p: PotentialSpec, n: int) -> float:
    """Phase-integral estimate of the n-th level (1-based), used for grid sizing.

    Inverts the leading-order counting function N(E) = (1/(pi*hbar)) * integral
    of sqrt(2*m*(E - V)) over the classically allowed region.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if p.kind == POWER_LAW:
        sigma = 2.0 if p.domain == FULL_LINE else 1.0
        c = math.pi * p.hbar * p.r * p.g ** (1.0 / p.r) \
            / (sigma * math.sqrt(2.0 * p.mass) * special.beta(1.0 / p.r, 1.5))
        return (c * n) ** (2.0 * p.r / (p.r + 2.0)) + p.offset
    if p.kind == LOGARITHMIC:
        return p.epsilon0 * math.log(
            n * p.hbar * math.sqrt(2.0 * math.pi / (p.mass * p.epsilon0))) + p.offset
    # tabulated: particle-in-a-box estimate over the table's span
    lo, hi = support(p)
    vmin = min(p.v_table)
    return (p.hbar * math.pi * n / (hi - lo)) ** 2 / (2.0 * p.mass) + vmin


def fit_exponent(s: Spectrum, window: tuple[int, int], form: str = POWER_FORM) -> FitResult:
    """Least-squares fit of the level-spacing law over a 1-based index window.

    power form fits ln(E_n) = exponent*ln(n) + ln(prefactor); logarithmic form
    fits E_n = epsilon0*ln(n) + offset.  The window must span at least five
    levels, counted with degeneracy.
    """
    lo, hi = int(window[0]), int(window[1])
    total = s.n_states
    if lo < 1 or hi > total or lo > hi:
        raise ValueError(f"window [{lo}, {hi}] outside spectrum with {total} states")
    if hi - lo + 1 < 5:
        raise ValueError("window must span at least 5 levels")
    energies = s.expanded()[lo - 1:hi]
    n = np.arange(lo, hi + 1, dtype=float)
    if form == POWER_FORM:
        if np.any(energies <= 0):
            raise ValueError("power-form fit requires positive energies in the window")
        slope, intercept = np.polyfit(np.log(n), np.log(energies), 1)
        resid = np.log(energies) - (slope * np.log(n) + intercept)
        return FitResult(POWER_FORM, (lo, hi), exponent=float(slope),
                         prefactor=float(math.exp(intercept)),
                         residual_rms=float(np.sqrt(np.mean(resid ** 2))))
    if form == LOGARITHMIC_FORM:
        slope, intercept = np.polyfit(np.log(n), energies, 1)
        resid = energies - (slope * np.log(n) + intercept)
        return FitResult(LOGARITHMIC_FORM, (lo, hi), epsilon0=float(slope),
                         offset=float(intercept),
                         residual_rms=float(np.sqrt(np.mean(resid ** 2))))
    raise ValueError(f"unknown fit form {form!r}")
