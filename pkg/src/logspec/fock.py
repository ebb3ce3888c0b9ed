"""Bosonic oscillators with one mode per prime.

A mode of quantum epsilon0*ln(p) per prime p makes the occupation state
with exponents {p: e_p} carry energy epsilon0 * sum e_p*ln(p) =
epsilon0*ln(prod p**e_p), so states are in bijection with the positive
integers and the spectrum is epsilon0*ln(n) with every degeneracy 1.
``enumerate_spectrum`` establishes this by exhaustive search over
occupation vectors rather than by assuming unique factorization;
``combined_spectrum`` adds a two-level fermionic mode of energy
epsilon0*ln(j), which thins the pairing to every j-th level.
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

import numpy as np

from .spectrum import Spectrum


def sieve_primes(limit: int) -> list[int]:
    """Primes <= limit, ascending, by the sieve of Eratosthenes."""
    if limit < 0:
        raise ValueError("limit must be >= 0")
    if limit < 2:
        return []
    flags = np.ones(limit + 1, dtype=bool)
    flags[:2] = False
    for p in range(2, math.isqrt(limit) + 1):
        if flags[p]:
            flags[p * p:: p] = False
    return [int(p) for p in np.flatnonzero(flags)]


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    for f in range(3, math.isqrt(n) + 1, 2):
        if n % f == 0:
            return False
    return True


@dataclass(frozen=True)
class FockState:
    """Occupation numbers per prime mode; the empty map is the vacuum."""

    occupations: dict[int, int]

    def __post_init__(self):
        occ = {int(p): int(k) for p, k in self.occupations.items()}
        for p, k in occ.items():
            if not _is_prime(p):
                raise ValueError(f"mode {p} is not prime")
            if k < 1:
                raise ValueError(f"occupation of mode {p} must be >= 1")
        object.__setattr__(self, "occupations", occ)

    @property
    def is_vacuum(self) -> bool:
        return not self.occupations

    @property
    def integer(self) -> int:
        """The integer this state factorizes: prod p**k (1 for the vacuum)."""
        out = 1
        for p, k in self.occupations.items():
            out *= p ** k
        return out


def occupation_of_integer(n: int) -> FockState:
    """Prime factorization of n >= 1 as an occupation map (vacuum for n = 1)."""
    if n < 1:
        raise ValueError("n must be >= 1")
    occ: dict[int, int] = {}
    rest = int(n)
    for p in (2, 3):
        while rest % p == 0:
            occ[p] = occ.get(p, 0) + 1
            rest //= p
    f = 5
    while f * f <= rest:
        for p in (f, f + 2):
            while rest % p == 0:
                occ[p] = occ.get(p, 0) + 1
                rest //= p
        f += 6
    if rest > 1:
        occ[rest] = occ.get(rest, 0) + 1
    return FockState(occ)


@dataclass(frozen=True)
class PrimeOscillatorModel:
    """Energy scale and enumeration cutoff: levels epsilon0*ln(n) for n <= n_max."""

    epsilon0: float
    n_max: int

    def __post_init__(self):
        if not (self.epsilon0 > 0):
            raise ValueError("field epsilon0 must be positive")
        if self.n_max < 1:
            raise ValueError("field n_max must be >= 1")


@dataclass(frozen=True)
class CombinedModel:
    """Prime-oscillator model plus one fermionic mode of energy epsilon0*ln(shift_integer)."""

    base: PrimeOscillatorModel
    shift_integer: int
    fermion_occupied: bool = False

    def __post_init__(self):
        if self.shift_integer < 2:
            raise ValueError("field shift_integer must be >= 2")


def state_energy(model: PrimeOscillatorModel, state: FockState) -> float:
    """epsilon0 * sum over modes of occupation * ln(prime)."""
    return model.epsilon0 * math.fsum(k * math.log(p) for p, k in state.occupations.items())


def _enumerate_products(cap: int, modes: list[int]) -> Counter:
    """Count occupation vectors over ``modes`` by the integer they multiply to.

    Depth-first search in ascending mode order, pruning once the running
    product (equivalently the accumulated energy) exceeds the cap.  Exact
    integer arithmetic throughout, so equal energies collide exactly.
    """
    counts: Counter = Counter()

    def walk(start: int, product: int):
        counts[product] += 1
        for i in range(start, len(modes)):
            m = modes[i]
            q = product * m
            while q <= cap:
                walk(i + 1, q)
                q *= m

    walk(0, 1)
    return counts


def enumerate_spectrum(model: PrimeOscillatorModel, extra_modes: tuple[int, ...] = ()) -> Spectrum:
    """All levels with energy <= epsilon0*ln(n_max), found by exhaustive search.

    ``extra_modes`` adds oscillators at non-prime integers (quantum
    epsilon0*ln(c)); with primes only, the search returns the n_max levels
    epsilon0*ln(n) with degeneracy 1 each.
    """
    for c in extra_modes:
        if c < 2:
            raise ValueError("extra modes must be integers >= 2")
    modes = sorted(set(sieve_primes(model.n_max)) | set(int(c) for c in extra_modes))
    counts = _enumerate_products(model.n_max, modes)
    integers = sorted(counts)
    energies = model.epsilon0 * np.log(np.array(integers, dtype=float))
    degeneracies = np.array([counts[i] for i in integers])
    label = f"prime-oscillator(epsilon0={model.epsilon0:.6g}, n_max={model.n_max})"
    if extra_modes:
        label += f" + modes {sorted(int(c) for c in extra_modes)}"
    return Spectrum(energies, degeneracies, label=label)


@dataclass(frozen=True)
class FockPartition:
    """Truncated partition sum with its convergence verdict.

    ``tail_bound`` is the integral bound n_max**(1 - beta*epsilon0) /
    (beta*epsilon0 - 1) on the dropped remainder, reported only when the
    full series converges (beta*epsilon0 > 1).
    """

    value: float
    convergent: bool
    tail_bound: float | None
    beta: float
    n_max: int


def fock_partition_function(model: PrimeOscillatorModel, beta: float) -> FockPartition:
    """Sum of n**(-beta*epsilon0) for n = 1..n_max, flagged by series convergence."""
    if not (beta > 0):
        raise ValueError("beta must be positive")
    a = beta * model.epsilon0
    n = np.arange(1, model.n_max + 1, dtype=float)
    value = float(np.sum(n ** (-a)))
    convergent = a > 1.0
    tail = float(model.n_max) ** (1.0 - a) / (a - 1.0) if convergent else None
    return FockPartition(value, convergent, tail, beta, model.n_max)


def combined_spectrum(model: CombinedModel) -> tuple[Spectrum, Spectrum]:
    """Spectra of the two fermion-number sectors.

    Sector 0 is the plain prime-oscillator spectrum, enumerated out to
    shift_integer * n_max so that every shifted level finds its partner.
    Sector 1 carries the fermionic quantum: energies epsilon0*ln(j*n) for
    n = 1..n_max.  Exactly the sector-0 levels at indices divisible by j
    are matched, which is the k-thinned pairing pattern.
    """
    import dataclasses

    j = model.shift_integer
    eps0 = model.base.epsilon0
    n_max = model.base.n_max
    sector0 = enumerate_spectrum(PrimeOscillatorModel(eps0, j * n_max))
    sector0 = dataclasses.replace(sector0, label=sector0.label + " [sector 0]")
    counts = _enumerate_products(n_max, sieve_primes(n_max))
    integers = sorted(counts)
    sector1 = Spectrum(
        eps0 * np.log(np.array([j * i for i in integers], dtype=float)),
        np.array([counts[i] for i in integers]),
        label=f"prime-oscillator(epsilon0={eps0:.6g}, n_max={n_max})"
              f" [sector 1, shift ln({j})]",
    )
    return sector0, sector1
