"""logspec: logarithmic spectra, prime-mode oscillators, and level-spacing asymptotics.

Submodules
----------
potentials    declarative V(x) descriptions (power-law, logarithmic, tabulated)
spectrum      the Spectrum container shared by everything else
schrodinger   finite-difference bound-state solver (Sturm bisection eigenvalues)
fock          prime-oscillator states, spectra, and zeta-like partition sums
asymptotics   classical partition functions, divergence temperatures, spacing laws
psusy         k-thinned pairing detection between spectra
cli           command-line front end (INI configs -> CSV spectra / text reports)
"""

from .asymptotics import (
    AsymptoticLaw,
    ClassicalPartition,
    FitResult,
    HagedornResult,
    HalvingTransform,
    QuadratureError,
    asymptotic_law,
    classical_partition_function,
    find_hagedorn,
    fit_exponent,
    halving_transform,
    level_estimate,
    scaling_exponent,
)
from .fock import (
    CombinedModel,
    FockPartition,
    FockState,
    PrimeOscillatorModel,
    combined_spectrum,
    enumerate_spectrum,
    fock_partition_function,
    occupation_of_integer,
    sieve_primes,
    state_energy,
)
from .potentials import PotentialSpec, describe, eval_potential, support
from .psusy import (
    PairingReport,
    ShiftIdentityReport,
    detect_pairing,
    partition_ratio,
    verify_shift_identity,
)
from .schrodinger import (
    BoxContaminationWarning,
    GridConfig,
    TridiagonalOperator,
    auto_grid,
    discretize,
    eigen_solve,
    solve_spectrum,
    sturm_count,
)
from .spectrum import Spectrum

__version__ = "0.1.0"
