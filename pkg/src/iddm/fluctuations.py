"""Collective excitation spectrum from quadratic fluctuations about the equilibrium.

The scaled energy is written in four real quadratures q = (x1, p1, x2, p2),
two per mode, with alpha = (x1 + i p1)/sqrt(2) and beta = (x2 + i p2)/sqrt(2):

    E_cl(q) = f1 (x1^2 + p1^2)/2 + f2 (x2^2 + p2^2)/2 - 2 lam K x1 x2,
    K = sqrt(1 - (x2^2 + p2^2)/2).

The two normal-mode energies eps_- <= eps_+ are the symplectic eigenvalues of
the Hessian M of E_cl at the mean-field equilibrium, i.e. the positive
imaginary parts of the spectrum of J M with J the symplectic form.  Working
from the Hessian keeps one quadratic expansion for both phases and lets the
analytic entries be cross-checked against finite differences of E_cl.

The lower branch closes at the phase boundary (the soft mode of the
transition) and reopens on both sides; in the normal phase the spectrum also
has the closed form

    eps_pm^2 = [f1^2 + f2^2 +- sqrt((f1^2 - f2^2)^2 + 16 lam^2 f1 f2)]/2,

exposed separately as an independent check.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DomainError, InvalidParameterError, UnstableEquilibriumError
from .meanfield import equilibrium_closed_form, _frequencies
from .model import ModelParams

__all__ = [
    "SpectrumResult",
    "SYMPLECTIC_FORM",
    "classical_energy",
    "energy_hessian",
    "excitation_spectrum",
    "normal_phase_spectrum",
]

# Block-diagonal symplectic form for the ordering (x1, p1, x2, p2).
SYMPLECTIC_FORM = np.array(
    [
        [0.0, 1.0, 0.0, 0.0],
        [-1.0, 0.0, 0.0, 0.0],
        [0.0, 0.0, 0.0, 1.0],
        [0.0, 0.0, -1.0, 0.0],
    ]
)


@dataclass(frozen=True)
class SpectrumResult:
    eps_minus: float
    eps_plus: float
    stable: bool


def _quadratures(q) -> np.ndarray:
    q = np.asarray(q, dtype=float)
    if q.shape != (4,):
        raise InvalidParameterError(f"quadratures must have shape (4,), got {q.shape}")
    return q


def classical_energy(params: ModelParams, delta: float, quadratures) -> float:
    """Scaled energy as a function of the four quadratures."""
    x1, p1, x2, p2 = _quadratures(quadratures)
    f1, f2 = _frequencies(params, delta)
    s = x2 * x2 + p2 * p2
    if s > 2.0:
        raise DomainError(f"x2^2 + p2^2 must be <= 2, got {s}")
    k = np.sqrt(max(0.0, 1.0 - s / 2.0))
    return 0.5 * f1 * (x1 * x1 + p1 * p1) + 0.5 * f2 * s - 2.0 * params.lam * k * x1 * x2


def energy_hessian(params: ModelParams, delta: float, quadratures) -> np.ndarray:
    """Analytic 4x4 Hessian of classical_energy at an arbitrary interior point.

    Needs x2^2 + p2^2 < 2 strictly; K appears in denominators.
    """
    x1, p1, x2, p2 = _quadratures(quadratures)
    f1, f2 = _frequencies(params, delta)
    lam = params.lam
    s = x2 * x2 + p2 * p2
    if s >= 2.0:
        raise DomainError(f"Hessian needs x2^2 + p2^2 < 2, got {s}")
    k = np.sqrt(1.0 - s / 2.0)

    m = np.zeros((4, 4))
    m[0, 0] = f1
    m[1, 1] = f1
    m[0, 2] = m[2, 0] = -2.0 * lam * (k - x2 * x2 / (2.0 * k))
    m[0, 3] = m[3, 0] = lam * x2 * p2 / k
    m[2, 2] = f2 + lam * x1 * (3.0 * x2 / k + x2**3 / (2.0 * k**3))
    m[2, 3] = m[3, 2] = lam * x1 * p2 * (1.0 / k + x2 * x2 / (2.0 * k**3))
    m[3, 3] = f2 + lam * x1 * x2 * (1.0 / k + p2 * p2 / (2.0 * k**3))
    return m


def excitation_spectrum(
    params: ModelParams, delta: float, *, stability_tol: float = 1e-9
) -> SpectrumResult:
    """Normal-mode energies (eps_minus, eps_plus) at the mean-field equilibrium.

    The equilibrium comes from equilibrium_closed_form; the Hessian there must
    be positive semidefinite (up to stability_tol times its scale) or
    UnstableEquilibriumError is raised.
    """
    sol = equilibrium_closed_form(params, delta)
    q = np.array([np.sqrt(2.0) * sol.alpha, 0.0, np.sqrt(2.0) * sol.beta, 0.0])
    m = energy_hessian(params, delta, q)
    scale = max(1.0, float(np.max(np.abs(m))))
    stable = bool(np.min(np.linalg.eigvalsh(m)) >= -stability_tol * scale)
    if not stable:
        raise UnstableEquilibriumError("fluctuation Hessian is not positive semidefinite")
    freqs = np.sort(np.abs(np.linalg.eigvals(SYMPLECTIC_FORM @ m).imag))
    # eigenvalues come in +-i eps pairs: [e-, e-, e+, e+] after sorting
    return SpectrumResult(eps_minus=float(freqs[1]), eps_plus=float(freqs[3]), stable=stable)


def normal_phase_spectrum(params: ModelParams, delta: float) -> tuple[float, float]:
    """Closed-form normal-phase mode energies, valid while f1 f2 >= 4 lam^2.

    Serves as an independent check on the Hessian route; the two must agree
    everywhere in the normal phase.
    """
    f1, f2 = _frequencies(params, delta)
    lam = params.lam
    if f1 * f2 < 4.0 * lam * lam:
        raise InvalidParameterError("closed normal-phase spectrum needs nu >= 1")
    a = f1 * f1 + f2 * f2
    r = np.sqrt((f1 * f1 - f2 * f2) ** 2 + 16.0 * lam * lam * f1 * f2)
    eps_minus = np.sqrt(max(0.0, (a - r) / 2.0))
    eps_plus = np.sqrt((a + r) / 2.0)
    return float(eps_minus), float(eps_plus)
