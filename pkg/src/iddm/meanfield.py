"""Mean-field ground states and phase structure at fixed impurity population.

In the thermodynamic limit the scaled ground-state energy per atom reduces to
a function of two real amplitudes, the photon displacement alpha and the
atomic inversion amplitude beta,

    E0(alpha, beta) = f1 alpha^2 + f2 beta^2 - 4 lam K alpha beta,
    K = sqrt(1 - beta^2),

with f1, f2 the effective frequencies at population delta.  For nu =
f1 f2 / (4 lam^2) >= 1 the minimum sits at the origin (normal phase); for
-1 < nu < 1 it sits at

    beta^2 = (1 - nu)/2,   alpha = 2 lam K beta / f1,

with E0 = -(lam^2/f1)(1 - nu)^2 (superradiant phase).  For nu <= -1 the
energy has no interior minimum and the routines refuse the input.

Both the closed-form branch and an independent numerical minimizer are
provided; the numerical route exists so the closed forms can be checked
against something that never saw them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np
from scipy.optimize import minimize

from .errors import (
    ChiUnsupportedError,
    ConvergenceFailureError,
    DomainError,
    IDDMError,
    InvalidParameterError,
    UnboundedPhaseError,
    ZeroKappaError,
)
from .model import ModelParams, check_population, effective_frequencies

__all__ = [
    "Phase",
    "MeanFieldSolution",
    "DerivativeScan",
    "CRITICAL_NU_TOL",
    "scaled_energy",
    "energy_gradient",
    "equilibrium_closed_form",
    "equilibrium_numeric",
    "critical_delta",
    "critical_lambda",
    "observables",
    "derivative_scan",
]

# |nu - 1| at or below this tags the point Critical; the order parameters are
# exactly zero there so the normal-phase values are reported.
CRITICAL_NU_TOL = 1e-12


class Phase(Enum):
    NORMAL = "normal"
    SUPERRADIANT = "superradiant"
    CRITICAL = "critical"


@dataclass(frozen=True)
class MeanFieldSolution:
    """Equilibrium amplitudes at one (params, delta) point.

    alpha and beta are canonicalized to the nonnegative pair; the energy is
    invariant under the simultaneous sign flip.  nu is None when lam = 0.
    """

    alpha: float
    beta: float
    e0: float
    nu: float | None
    phase: Phase

    @property
    def alpha2(self) -> float:
        return self.alpha**2

    @property
    def beta2(self) -> float:
        return self.beta**2


def _frequencies(params: ModelParams, delta: float) -> tuple[float, float]:
    if params.chi != 0:
        raise ChiUnsupportedError("mean-field routines require chi = 0")
    ef = effective_frequencies(params, delta)
    return ef.f1, ef.f2


def scaled_energy(params: ModelParams, delta: float, alpha: float, beta: float) -> float:
    """Scaled energy per atom E0(alpha, beta) at population delta."""
    f1, f2 = _frequencies(params, delta)
    if abs(beta) > 1.0:
        raise DomainError(f"|beta| must be <= 1, got {beta}")
    k = math.sqrt(max(0.0, 1.0 - beta * beta))
    return f1 * alpha * alpha + f2 * beta * beta - 4.0 * params.lam * k * alpha * beta


def energy_gradient(params: ModelParams, delta: float, alpha: float, beta: float) -> tuple[float, float]:
    """Gradient of the scaled energy; needs |beta| < 1 (K appears in a denominator)."""
    f1, f2 = _frequencies(params, delta)
    if abs(beta) >= 1.0:
        raise DomainError(f"gradient needs |beta| < 1, got {beta}")
    k = math.sqrt(1.0 - beta * beta)
    g_alpha = 2.0 * (f1 * alpha - 2.0 * params.lam * k * beta)
    g_beta = 2.0 * (f2 * beta - 2.0 * params.lam * alpha * (k - beta * beta / k))
    return g_alpha, g_beta


def _classify(nu: float, critical_tol: float) -> Phase:
    if abs(nu - 1.0) <= critical_tol:
        return Phase.CRITICAL
    return Phase.NORMAL if nu > 1.0 else Phase.SUPERRADIANT


def equilibrium_closed_form(
    params: ModelParams, delta: float, *, critical_tol: float = CRITICAL_NU_TOL
) -> MeanFieldSolution:
    """Global minimum of the scaled energy from the closed-form branch rules.

    The reported e0 is the energy function evaluated at the amplitudes, not
    the superradiant identity -(lam^2/f1)(1-nu)^2; the identity is a
    consequence and is asserted in the tests.
    """
    f1, f2 = _frequencies(params, delta)
    lam = params.lam
    if lam == 0:
        if f2 < 0:
            raise UnboundedPhaseError("lam = 0 with f2 < 0: minimum sits on the |beta| = 1 boundary")
        return MeanFieldSolution(0.0, 0.0, 0.0, None, Phase.NORMAL)
    nu = f1 * f2 / (4.0 * lam * lam)
    if nu <= -1.0:
        raise UnboundedPhaseError(f"nu = {nu} <= -1: no interior minimum")
    phase = _classify(nu, critical_tol)
    if phase is not Phase.SUPERRADIANT:
        return MeanFieldSolution(0.0, 0.0, 0.0, nu, phase)
    beta = math.sqrt((1.0 - nu) / 2.0)
    k = math.sqrt((1.0 + nu) / 2.0)
    alpha = 2.0 * lam * k * beta / f1
    e0 = scaled_energy(params, delta, alpha, beta)
    return MeanFieldSolution(alpha, beta, e0, nu, Phase.SUPERRADIANT)


# Keep the numeric minimizer's beta strictly inside the sphere; the gradient
# is singular at |beta| = 1.
_BETA_CAP = 1.0 - 1e-9
_SEED = 20240817


def _value_and_grad(z, f1, f2, lam):
    alpha, beta = z
    # beta stays inside (-1, 1) via the optimizer bounds; the floor only
    # protects against a pathological evaluation exactly on the rim.
    k = math.sqrt(max(1.0 - beta * beta, 1e-24))
    e = f1 * alpha * alpha + f2 * beta * beta - 4.0 * lam * k * alpha * beta
    g_a = 2.0 * (f1 * alpha - 2.0 * lam * k * beta)
    g_b = 2.0 * (f2 * beta - 2.0 * lam * alpha * (k - beta * beta / k))
    return e, np.array([g_a, g_b])


def _hess2(z, f1, f2, lam):
    alpha, beta = z
    k = math.sqrt(1.0 - beta * beta)
    h_aa = 2.0 * f1
    h_ab = -4.0 * lam * (k - beta * beta / k)
    h_bb = 2.0 * f2 + 4.0 * lam * alpha * (3.0 * beta / k + beta**3 / k**3)
    return np.array([[h_aa, h_ab], [h_ab, h_bb]])


def _polish(z, f1, f2, lam, budget):
    """Newton steps on the 2x2 system until the gradient hits the noise floor."""
    e, g = _value_and_grad(z, f1, f2, lam)
    for _ in range(budget):
        gnorm = np.max(np.abs(g))
        if gnorm <= 1e-13 * max(1.0, abs(e)):
            break
        try:
            step = np.linalg.solve(_hess2(z, f1, f2, lam), -g)
        except np.linalg.LinAlgError:
            break
        if not np.all(np.isfinite(step)):
            break
        trial = z + step
        accepted = False
        for _ in range(8):
            trial[1] = np.clip(trial[1], -_BETA_CAP, _BETA_CAP)
            e_t, g_t = _value_and_grad(trial, f1, f2, lam)
            if np.max(np.abs(g_t)) < gnorm or e_t < e:
                z, e, g = trial, e_t, g_t
                accepted = True
                break
            step *= 0.5
            trial = z + step
        if not accepted:
            break
    return z, e, g


def equilibrium_numeric(
    params: ModelParams,
    delta: float,
    seed_count: int = 8,
    *,
    grad_tol: float = 1e-10,
    max_iterations: int = 500,
    critical_tol: float = CRITICAL_NU_TOL,
) -> MeanFieldSolution:
    """Locate the energy minimum by multistart descent, independent of the closed forms.

    Each start runs bounded quasi-Newton descent followed by a Newton polish.
    The origin is always one of the starts (it is a stationary point, and the
    exact answer in the normal phase).  ConvergenceFailureError is raised when
    the lowest-energy candidate never reached the gradient tolerance, so an
    exhausted budget cannot silently return a saddle.
    """
    f1, f2 = _frequencies(params, delta)
    lam = params.lam
    if lam == 0 and f2 < 0:
        raise UnboundedPhaseError("lam = 0 with f2 < 0: minimum sits on the |beta| = 1 boundary")
    if lam > 0:
        nu = f1 * f2 / (4.0 * lam * lam)
        if nu <= -1.0:
            raise UnboundedPhaseError(f"nu = {nu} <= -1: no interior minimum")
    else:
        nu = None
    if seed_count < 1:
        raise InvalidParameterError("seed_count must be >= 1")

    alpha_scale = 2.0 * lam / f1 if lam > 0 else 1.0 / f1
    rng = np.random.default_rng(_SEED)
    starts = [np.zeros(2)]
    for _ in range(seed_count - 1):
        starts.append(
            np.array([alpha_scale * rng.uniform(-1.0, 1.0), 0.98 * rng.uniform(-1.0, 1.0)])
        )

    best = None  # (e, gnorm_scaled, alpha, beta)
    for z0 in starts:
        res = minimize(
            _value_and_grad,
            z0,
            args=(f1, f2, lam),
            jac=True,
            method="L-BFGS-B",
            bounds=[(None, None), (-_BETA_CAP, _BETA_CAP)],
            options={"maxiter": max_iterations, "ftol": 1e-16, "gtol": 1e-12},
        )
        z, e, g = _polish(res.x, f1, f2, lam, budget=min(50, max_iterations))
        gnorm = float(np.max(np.abs(g)))
        if best is None or e < best[0]:
            best = (e, gnorm, float(z[0]), float(z[1]))

    e, gnorm, alpha, beta = best
    if gnorm > grad_tol:
        raise ConvergenceFailureError(
            f"lowest candidate has gradient norm {gnorm:.3e} above tolerance {grad_tol:.3e}"
        )
    # Canonical sign: the energy is even under (alpha, beta) -> (-alpha, -beta),
    # and for beta >= 0 it never increases under alpha -> |alpha|.
    if beta < 0:
        alpha, beta = -alpha, -beta
    alpha = abs(alpha)
    e0 = scaled_energy(params, delta, alpha, beta)
    phase = Phase.NORMAL if nu is None else _classify(nu, critical_tol)
    return MeanFieldSolution(alpha, beta, e0, nu, phase)


def critical_delta(params: ModelParams) -> float | None:
    """Impurity population at which nu = 1, or None when no root lies in [-1, 1].

    For xi1 = 0 this is the closed form (4 lam^2 - omega omega0)/(omega kappa) - 1;
    otherwise the quadratic f1(d) f2(d) = 4 lam^2 is solved and the smallest
    admissible root (f1 > 0) in [-1, 1] is returned.
    """
    if params.kappa == 0:
        raise ZeroKappaError("critical_delta needs kappa != 0")
    if params.xi1 == 0:
        dc = (4.0 * params.lam**2 - params.omega * params.omega0) / (params.omega * params.kappa) - 1.0
        return dc if -1.0 <= dc <= 1.0 else None
    # (omega + xi1 d)(omega0 + kappa(1 + d)) = 4 lam^2, quadratic in d
    a = params.kappa * params.xi1
    b = params.xi1 * (params.omega0 + params.kappa) + params.omega * params.kappa
    c = params.omega * (params.omega0 + params.kappa) - 4.0 * params.lam**2
    disc = b * b - 4.0 * a * c
    if disc < 0:
        return None
    q = -(b + math.copysign(math.sqrt(disc), b if b != 0 else 1.0)) / 2.0
    roots = []
    if q != 0:
        roots = [q / a, c / q]
    else:
        roots = [0.0]
    slack = 1e-12
    admissible = sorted(
        min(1.0, max(-1.0, r))
        for r in roots
        if -1.0 - slack <= r <= 1.0 + slack and params.omega + params.xi1 * r > 0
    )
    return admissible[0] if admissible else None


def critical_lambda(params: ModelParams, delta: float) -> float | None:
    """Coupling at which nu = 1 for fixed delta: lam_c = sqrt(f1 f2)/2.

    Returns None when f2 <= 0, where the system is superradiant at every
    lam > 0 and no finite threshold exists.
    """
    ef = effective_frequencies(params, delta)
    product = ef.f1 * ef.f2
    if product <= 0:
        return None
    return 0.5 * math.sqrt(product)


def observables(solution: MeanFieldSolution) -> tuple[float, float]:
    """Scaled inversion and photon number (Jz/N, <a+a>/N) = (beta^2 - 1/2, alpha^2)."""
    return solution.beta2 - 0.5, solution.alpha2


@dataclass(frozen=True)
class DerivativeScan:
    """Ground-state energy on a uniform grid with central first and second differences.

    d1_values and d2_values live on grid[1:-1] (both stencils need both
    neighbours).  jump_index points into d2_values at the left element of the
    largest consecutive step; jump_location is the midpoint of the two grid
    points carrying that step.
    """

    parameter_name: str
    grid: np.ndarray
    e0_values: np.ndarray
    d1_values: np.ndarray
    d2_values: np.ndarray
    step: float
    jump_index: int
    jump_location: float
    jump_size: float


def derivative_scan(
    params: ModelParams,
    parameter_name: str,
    start: float,
    stop: float,
    step: float,
    *,
    delta: float | None = None,
) -> DerivativeScan:
    """Scan E0 along delta or lambda and difference it on the grid.

    A kink in E0 shows up as a step in the second difference; the scan
    reports where the largest step sits.  Equilibrium failures at a grid
    point are re-raised with the offending point named.
    """
    if parameter_name not in ("delta", "lambda"):
        raise InvalidParameterError(f"parameter_name must be 'delta' or 'lambda', got {parameter_name!r}")
    if parameter_name == "lambda":
        if delta is None:
            raise InvalidParameterError("lambda scans need the fixed impurity population delta")
        delta = check_population(delta)
    elif delta is not None:
        raise InvalidParameterError("delta scans take no separate delta argument")
    if not step > 0:
        raise InvalidParameterError(f"step must be > 0, got {step}")
    if not stop > start:
        raise InvalidParameterError("stop must exceed start")
    count = int(round((stop - start) / step)) + 1
    if count < 3:
        raise InvalidParameterError("grid must contain at least 3 points")
    h = (stop - start) / (count - 1)
    if abs(h - step) > 1e-9 * step:
        raise InvalidParameterError("(stop - start) must be an integer multiple of step")

    grid = np.linspace(start, stop, count)
    e0 = np.empty(count)
    for i, v in enumerate(grid):
        try:
            if parameter_name == "delta":
                sol = equilibrium_closed_form(params, float(v))
            else:
                sol = equilibrium_closed_form(replace(params, lam=float(v)), delta)
        except IDDMError as exc:
            raise type(exc)(f"{parameter_name} = {v} (grid index {i}): {exc}") from exc
        e0[i] = sol.e0

    d1 = (e0[2:] - e0[:-2]) / (2.0 * h)
    d2 = (e0[2:] - 2.0 * e0[1:-1] + e0[:-2]) / (h * h)
    steps = np.abs(np.diff(d2))
    j = int(np.argmax(steps)) if steps.size else 0
    interior = grid[1:-1]
    location = 0.5 * (interior[j] + interior[j + 1]) if steps.size else float(interior[0])
    size = float(steps[j]) if steps.size else 0.0
    return DerivativeScan(
        parameter_name=parameter_name,
        grid=grid,
        e0_values=e0,
        d1_values=d1,
        d2_values=d2,
        step=h,
        jump_index=j,
        jump_location=float(location),
        jump_size=size,
    )
