"""Mean-field equilibria, critical points and energy-derivative scans.

Checked here:
  * frozen equilibrium values at the reference parameter set (delta = 0,
    0.5, 0.75, 1) including the superradiant order parameters and energy
  * the gradient vanishes at closed-form equilibria and matches central
    finite differences of the energy at random interior points
  * closed form vs the independent multistart minimizer on random draws
  * the superradiant energy identity E0 = -(lam^2/f1)(1 - nu)^2
  * critical_delta / critical_lambda closed forms, boundary cases, the
    general xi1 != 0 root, and the standard-Dicke reduction
  * branch continuity across the phase boundary
  * for kappa < 0 (xi1 = 0) raising delta never restores the normal phase
  * second-difference scans: flat for kappa = 0, kink at the transition
  * refusal behavior: nu <= -1, chi != 0, |beta| out of range, zero budget
"""

import math

import numpy as np
import pytest

from iddm import (
    ChiUnsupportedError,
    ConvergenceFailureError,
    DomainError,
    ModelParams,
    Phase,
    UnboundedPhaseError,
    ZeroKappaError,
    critical_delta,
    critical_lambda,
    derivative_scan,
    energy_gradient,
    equilibrium_closed_form,
    equilibrium_numeric,
    observables,
    scaled_energy,
)
from dataclasses import replace

FIG2 = ModelParams(omega=400.0, lam=5.0, kappa=-0.5)


# --- scaled energy and gradient -------------------------------------------

def test_energy_zero_at_origin():
    assert scaled_energy(FIG2, 0.3, 0.0, 0.0) == 0.0


def test_energy_reference_value():
    e = scaled_energy(FIG2, 1.0, 0.0125, math.sqrt(0.5))
    assert math.isclose(e, -0.0625, rel_tol=0, abs_tol=1e-12)


def test_energy_decoupled_is_quadratic():
    params = ModelParams(omega=2.0, lam=0.0, kappa=-0.5)
    e = scaled_energy(params, 0.5, 0.7, -0.4)
    f2 = 1.0 - 0.5 * 1.5
    assert math.isclose(e, 2.0 * 0.49 + f2 * 0.16, rel_tol=0, abs_tol=1e-14)


def test_energy_rejects_beta_outside_sphere():
    with pytest.raises(DomainError):
        scaled_energy(FIG2, 0.5, 0.1, 1.01)
    with pytest.raises(DomainError):
        energy_gradient(FIG2, 0.5, 0.1, 1.0)


def test_chi_rejected():
    params = ModelParams(omega=400.0, lam=5.0, kappa=-0.5, chi=0.1)
    with pytest.raises(ChiUnsupportedError):
        scaled_energy(params, 0.5, 0.0, 0.0)
    with pytest.raises(ChiUnsupportedError):
        equilibrium_closed_form(params, 0.5)


def test_gradient_zero_at_origin():
    assert energy_gradient(FIG2, 0.2, 0.0, 0.0) == (0.0, 0.0)


def test_gradient_zero_at_superradiant_equilibrium():
    for delta in (0.6, 0.75, 0.9, 1.0):
        sol = equilibrium_closed_form(FIG2, delta)
        ga, gb = energy_gradient(FIG2, delta, sol.alpha, sol.beta)
        assert abs(ga) <= 1e-10 and abs(gb) <= 1e-10


def test_gradient_matches_finite_differences():
    rng = np.random.default_rng(7)
    h = 1e-6
    for _ in range(100):
        params = ModelParams(
            omega=rng.uniform(1.0, 100.0),
            lam=rng.uniform(0.0, 10.0),
            kappa=rng.uniform(-2.0, 2.0),
        )
        delta = rng.uniform(-1.0, 1.0)
        alpha = rng.uniform(-2.0, 2.0)
        beta = rng.uniform(-0.9, 0.9)
        ga, gb = energy_gradient(params, delta, alpha, beta)
        fa = (scaled_energy(params, delta, alpha + h, beta)
              - scaled_energy(params, delta, alpha - h, beta)) / (2 * h)
        fb = (scaled_energy(params, delta, alpha, beta + h)
              - scaled_energy(params, delta, alpha, beta - h)) / (2 * h)
        scale = max(1.0, abs(ga), abs(gb))
        assert abs(ga - fa) <= 1e-5 * scale
        assert abs(gb - fb) <= 1e-5 * scale


# --- closed-form equilibria ------------------------------------------------

def test_normal_phase_point():
    sol = equilibrium_closed_form(FIG2, 0.0)
    assert sol.phase is Phase.NORMAL
    assert sol.alpha == 0.0 and sol.beta == 0.0 and sol.e0 == 0.0
    assert sol.nu == 2.0


def test_critical_point_tagged():
    sol = equilibrium_closed_form(FIG2, 0.5)
    assert sol.phase is Phase.CRITICAL
    assert sol.alpha == 0.0 and sol.beta == 0.0 and sol.e0 == 0.0


def test_superradiant_point_halfway():
    sol = equilibrium_closed_form(FIG2, 0.75)
    assert sol.phase is Phase.SUPERRADIANT
    assert math.isclose(sol.nu, 0.5, rel_tol=0, abs_tol=1e-15)
    assert math.isclose(sol.alpha2, 1.171875e-4, rel_tol=0, abs_tol=1e-15)
    assert math.isclose(sol.beta2, 0.25, rel_tol=0, abs_tol=1e-14)
    assert math.isclose(sol.e0, -0.015625, rel_tol=0, abs_tol=1e-14)


def test_superradiant_point_full_population():
    sol = equilibrium_closed_form(FIG2, 1.0)
    assert math.isclose(sol.alpha2, 1.5625e-4, rel_tol=0, abs_tol=1e-15)
    assert math.isclose(sol.beta2, 0.5, rel_tol=0, abs_tol=1e-14)
    assert math.isclose(sol.e0, -0.0625, rel_tol=0, abs_tol=1e-14)


def test_superradiant_energy_identity():
    rng = np.random.default_rng(23)
    found = 0
    while found < 200:
        params = ModelParams(
            omega=rng.uniform(1.0, 500.0),
            lam=rng.uniform(0.5, 30.0),
            kappa=rng.uniform(-2.0, 2.0),
        )
        delta = rng.uniform(-1.0, 1.0)
        try:
            sol = equilibrium_closed_form(params, delta)
        except UnboundedPhaseError:
            continue
        if sol.phase is not Phase.SUPERRADIANT:
            continue
        found += 1
        f1 = params.omega
        expect = -(params.lam**2 / f1) * (1.0 - sol.nu) ** 2
        assert math.isclose(sol.e0, expect, rel_tol=1e-10, abs_tol=1e-10)
        # order-parameter identities from the same stationarity conditions
        assert math.isclose(sol.alpha2, (params.lam**2 / f1**2) * (1.0 - sol.nu**2),
                            rel_tol=1e-10, abs_tol=1e-12)
        assert math.isclose(sol.beta2, (1.0 - sol.nu) / 2.0, rel_tol=1e-10, abs_tol=1e-12)


def test_unbounded_phase_rejected():
    with pytest.raises(UnboundedPhaseError):
        equilibrium_closed_form(ModelParams(omega=400.0, lam=5.0, kappa=-2.0), 1.0)
    with pytest.raises(UnboundedPhaseError):
        equilibrium_closed_form(ModelParams(omega=400.0, lam=0.0, kappa=-2.0), 1.0)


def test_zero_coupling_normal_phase():
    sol = equilibrium_closed_form(ModelParams(omega=400.0, lam=0.0, kappa=-0.5), 0.5)
    assert sol.phase is Phase.NORMAL
    assert sol.nu is None


def test_branch_continuity_at_transition():
    # approach delta_c = 0.5 from both sides: nu - 1 = -+ 2h, so the order
    # parameters vanish linearly (beta^2 = h) and the energy quadratically
    for h in (1e-6, 1e-8):
        below = equilibrium_closed_form(FIG2, 0.5 - h)
        above = equilibrium_closed_form(FIG2, 0.5 + h)
        assert below.phase is Phase.NORMAL
        assert above.phase is Phase.SUPERRADIANT
        assert below.alpha2 == below.beta2 == below.e0 == 0.0
        assert math.isclose(above.beta2, h, rel_tol=1e-6)
        assert above.alpha2 <= h  # alpha^2 = (2 lam beta K / f1)^2 ~ h / 1600
        assert math.isclose(above.e0, -h * h / 4.0, rel_tol=1e-6)


def test_superradiance_monotone_in_delta_for_negative_kappa():
    rng = np.random.default_rng(31)
    for _ in range(100):
        params = ModelParams(
            omega=rng.uniform(1.0, 500.0),
            lam=rng.uniform(0.5, 20.0),
            kappa=rng.uniform(-2.0, -0.01),
        )
        d1, d2 = sorted(rng.uniform(-1.0, 1.0, size=2))
        try:
            lo = equilibrium_closed_form(params, d1)
            hi = equilibrium_closed_form(params, d2)
        except UnboundedPhaseError:
            continue
        if lo.phase is Phase.SUPERRADIANT:
            assert hi.phase is Phase.SUPERRADIANT


# --- numeric minimizer vs closed form --------------------------------------

def test_numeric_matches_closed_form_on_random_draws():
    rng = np.random.default_rng(5)
    done = 0
    while done < 150:
        params = ModelParams(
            omega=rng.uniform(1.0, 500.0),
            lam=rng.uniform(0.0, 30.0),
            kappa=rng.uniform(-2.0, 2.0),
        )
        delta = rng.uniform(-1.0, 1.0)
        try:
            closed = equilibrium_closed_form(params, delta)
        except UnboundedPhaseError:
            continue
        done += 1
        numeric = equilibrium_numeric(params, delta)
        assert abs(closed.alpha2 - numeric.alpha2) <= 1e-8
        assert abs(closed.beta2 - numeric.beta2) <= 1e-8
        assert abs(closed.e0 - numeric.e0) <= 1e-8
        assert numeric.alpha >= 0.0 and numeric.beta >= 0.0


def test_numeric_normal_phase_is_clean():
    sol = equilibrium_numeric(FIG2, 0.0)
    assert sol.phase is Phase.NORMAL
    assert abs(sol.alpha) <= 1e-8 and abs(sol.beta) <= 1e-8


def test_numeric_zero_budget_raises():
    with pytest.raises(ConvergenceFailureError):
        equilibrium_numeric(FIG2, 1.0, max_iterations=0)


# --- critical points --------------------------------------------------------

def test_critical_delta_reference():
    assert critical_delta(FIG2) == 0.5


def test_critical_delta_boundary_value():
    assert critical_delta(ModelParams(omega=400.0, lam=10.0, kappa=-0.5)) == -1.0


def test_critical_delta_out_of_range():
    # raw formula value is -7 here, outside [-1, 1]
    assert critical_delta(ModelParams(omega=400.0, lam=20.0, kappa=-0.5)) is None


def test_critical_delta_needs_kappa():
    with pytest.raises(ZeroKappaError):
        critical_delta(ModelParams(omega=400.0, lam=5.0, kappa=0.0))


def test_critical_delta_general_branch():
    # xi1 != 0 goes through the quadratic; the root must satisfy nu = 1
    params = ModelParams(omega=400.0, lam=5.0, kappa=-0.5, xi1=0.3)
    dc = critical_delta(params)
    assert dc is not None
    f1 = params.omega + params.xi1 * dc
    f2 = params.omega0 + params.kappa * (1.0 + dc)
    assert math.isclose(f1 * f2, 4.0 * params.lam**2, rel_tol=1e-12)
    # and it collapses to the closed form as xi1 -> 0
    small = replace(params, xi1=1e-9)
    assert abs(critical_delta(small) - 0.5) < 1e-6


def test_critical_lambda_reference():
    assert math.isclose(critical_lambda(FIG2, 0.0), math.sqrt(200.0) / 2.0, rel_tol=0, abs_tol=1e-14)


def test_critical_lambda_no_transition():
    assert critical_lambda(FIG2, 1.0) is None


def test_standard_dicke_reduction():
    params = ModelParams(omega=400.0, lam=1.0, kappa=0.0)
    assert abs(critical_lambda(params, 0.7) - 10.0) <= 1e-12
    # below threshold the phase is normal at every population
    sub = replace(params, lam=9.9)
    for delta in np.linspace(-1.0, 1.0, 21):
        assert equilibrium_closed_form(sub, float(delta)).phase is Phase.NORMAL


def test_critical_points_consistent():
    # lambda_c evaluated at delta_c reproduces the scan coupling
    dc = critical_delta(FIG2)
    assert math.isclose(critical_lambda(FIG2, dc), FIG2.lam, rel_tol=0, abs_tol=1e-12)


# --- observables ------------------------------------------------------------

def test_observables_values():
    assert observables(equilibrium_closed_form(FIG2, 0.0)) == (-0.5, 0.0)
    jz, photons = observables(equilibrium_closed_form(FIG2, 1.0))
    assert math.isclose(jz, 0.0, rel_tol=0, abs_tol=1e-14)
    assert math.isclose(photons, 1.5625e-4, rel_tol=0, abs_tol=1e-15)
    jz, photons = observables(equilibrium_closed_form(FIG2, 0.75))
    assert math.isclose(jz, -0.25, rel_tol=0, abs_tol=1e-14)


# --- derivative scans --------------------------------------------------------

def test_scan_flat_for_zero_kappa():
    params = ModelParams(omega=400.0, lam=5.0, kappa=0.0)
    scan = derivative_scan(params, "delta", 0.0, 1.0, 0.01)
    assert np.all(scan.e0_values == 0.0)
    assert np.all(scan.d1_values == 0.0)
    assert np.all(scan.d2_values == 0.0)


def test_scan_lambda_kink_at_threshold():
    lam_c = critical_lambda(FIG2, 0.0)
    scan = derivative_scan(FIG2, "lambda", 6.5, 7.5, 1e-3, delta=0.0)
    assert abs(scan.jump_location - lam_c) <= scan.step
    # superradiant-side curvature: d2 E0/d lam2 = -(2 + 6 nu^2)/f1 -> -0.02 at nu = 1
    assert math.isclose(scan.d2_values[-1], -(2.0 + 6.0 * (50.0 / 7.5**2) ** 2) / 400.0,
                        rel_tol=1e-3)


def test_scan_grid_validation():
    with pytest.raises(Exception):
        derivative_scan(FIG2, "delta", 0.0, 1.0, 0.3)  # not commensurate
    with pytest.raises(Exception):
        derivative_scan(FIG2, "lambda", 0.0, 1.0, 0.1)  # missing fixed delta
    with pytest.raises(Exception):
        derivative_scan(FIG2, "delta", 0.0, 1.0, 0.1, delta=0.3)


def test_scan_error_names_grid_point():
    params = ModelParams(omega=400.0, lam=5.0, kappa=-2.0)
    with pytest.raises(UnboundedPhaseError, match="grid index"):
        derivative_scan(params, "delta", 0.0, 1.0, 0.1)
