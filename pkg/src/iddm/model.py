"""Model parameters of the impurity-doped Dicke Hamiltonian.

The Hamiltonian couples a single cavity mode to N two-level atoms and to one
impurity qubit.  After the impurity is frozen to a fixed population
delta = <sigma_z> in [-1, 1], the whole delta dependence enters through two
effective frequencies,

    f1 = omega + xi1 * delta          (photon branch)
    f2 = omega0 + kappa * (1 + delta) (atomic branch)

and the dimensionless combination nu = f1 * f2 / (4 lambda^2), which equals 1
on the phase boundary.  This module holds the parameter containers, the
effective-frequency helper, and the reductions from microscopic cavity-BEC and
impurity-drive parameters to the model coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InvalidParameterError, NonPositiveF1Error, ZeroDetuningError

__all__ = [
    "ModelParams",
    "EffectiveFrequencies",
    "CavityMicroParams",
    "ImpurityMicroParams",
    "effective_frequencies",
    "derive_cavity_params",
    "derive_impurity_couplings",
]


@dataclass(frozen=True)
class ModelParams:
    """Coefficients of the single-mode Hamiltonian.

    All energies are quoted in units of the atomic transition frequency, so
    omega0 = 1 in typical use.  lam is the collective atom-photon coupling
    (written lambda in the math; `lambda` is reserved in Python).
    """

    omega: float            # cavity frequency, > 0
    lam: float              # collective coupling, >= 0
    kappa: float = 0.0      # impurity-condensate coupling, any sign
    omega0: float = 1.0     # atomic transition frequency, > 0
    chi: float = 0.0        # atomic nonlinearity; mean-field routines need 0
    xi1: float = 0.0        # dispersive impurity shift of the cavity
    xi2: float = 0.0        # impurity-induced cavity displacement
    omega_q_prime: float = 0.0  # shifted impurity splitting (constant offset)
    n_atoms: int = 100      # default atom number for finite-size runs

    def __post_init__(self):
        if not self.omega > 0:
            raise InvalidParameterError(f"omega must be > 0, got {self.omega}")
        if not self.omega0 > 0:
            raise InvalidParameterError(f"omega0 must be > 0, got {self.omega0}")
        if self.lam < 0:
            raise InvalidParameterError(f"lambda must be >= 0, got {self.lam}")
        if self.n_atoms < 1:
            raise InvalidParameterError(f"n_atoms must be >= 1, got {self.n_atoms}")


@dataclass(frozen=True)
class EffectiveFrequencies:
    """Effective branch frequencies at a fixed impurity population.

    nu is None when lam = 0; the ratio f1*f2/(4 lam^2) is undefined there and
    the phase is decided directly from the sign of f2.
    """

    f1: float
    f2: float
    nu: float | None


def check_population(delta: float) -> float:
    """Validate an impurity population delta = <sigma_z> in [-1, 1]."""
    if not -1.0 <= delta <= 1.0:
        raise InvalidParameterError(f"impurity population must lie in [-1, 1], got {delta}")
    return float(delta)


def effective_frequencies(params: ModelParams, delta: float) -> EffectiveFrequencies:
    """Return (f1, f2, nu) at impurity population delta.

    Raises NonPositiveF1Error when omega + xi1*delta <= 0; every ground-state
    statement downstream assumes a confining photon branch.
    """
    delta = check_population(delta)
    f1 = params.omega + params.xi1 * delta
    if f1 <= 0:
        raise NonPositiveF1Error(f"f1 = omega + xi1*delta = {f1} must be > 0")
    f2 = params.omega0 + params.kappa * (1.0 + delta)
    if params.lam > 0:
        nu = f1 * f2 / (4.0 * params.lam**2)
    else:
        nu = None
    return EffectiveFrequencies(f1=f1, f2=f2, nu=nu)


@dataclass(frozen=True)
class CavityMicroParams:
    """Microscopic cavity-BEC parameters behind (omega, omega0, lam, chi).

    delta_c is the pump-cavity detuning, u0 the per-atom dispersive shift,
    omega_r the recoil frequency, (s0, s1, s01) the intra- and inter-mode
    collision strengths, g0 the single-photon coupling, omega_p the pump Rabi
    frequency and delta_a the pump-atom detuning.
    """

    delta_c: float
    u0: float
    omega_r: float
    s0: float
    s1: float
    s01: float
    g0: float
    omega_p: float
    delta_a: float

    def __post_init__(self):
        if self.delta_a == 0:
            raise ZeroDetuningError("pump-atom detuning delta_a must be nonzero")


def derive_cavity_params(micro: CavityMicroParams, n_atoms: int) -> tuple[float, float, float, float]:
    """Reduce microscopic cavity-BEC parameters to (omega, omega0, lam, chi).

    omega  = -delta_c + N u0 / 2
    omega0 = 2 omega_r + (N - 1)(s1 - s0) / 2
    lam    = sqrt(N) g0 omega_p / (2 delta_a)
    chi    = N [ (s0 + s1)/2 - s01 ]
    """
    if n_atoms < 1:
        raise InvalidParameterError(f"n_atoms must be >= 1, got {n_atoms}")
    omega = -micro.delta_c + n_atoms * micro.u0 / 2.0
    omega0 = 2.0 * micro.omega_r + (n_atoms - 1) * (micro.s1 - micro.s0) / 2.0
    lam = math.sqrt(n_atoms) * micro.g0 * micro.omega_p / (2.0 * micro.delta_a)
    chi = n_atoms * ((micro.s0 + micro.s1) / 2.0 - micro.s01)
    return omega, omega0, lam, chi


@dataclass(frozen=True)
class ImpurityMicroParams:
    """Microscopic impurity-drive parameters behind (xi1, xi2).

    g_q is the impurity-cavity coupling, omega_q the classical drive Rabi
    frequency and delta_q the drive detuning from the impurity transition.
    """

    g_q: float
    omega_q: float
    delta_q: float

    def __post_init__(self):
        if self.delta_q == 0:
            raise ZeroDetuningError("impurity drive detuning delta_q must be nonzero")


def derive_impurity_couplings(micro: ImpurityMicroParams) -> tuple[float, float]:
    """Reduce impurity-drive parameters to (xi1, xi2) = (g_q^2, g_q omega_q)/delta_q."""
    xi1 = micro.g_q**2 / micro.delta_q
    xi2 = micro.g_q * micro.omega_q / micro.delta_q
    return xi1, xi2
