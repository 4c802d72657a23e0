import math

import numpy as np
import pytest

from igac import (InsufficientDataError, ShapeError, SingularityError,
                  chaotic_model, estimate_lambda_j, euclidean_model,
                  gaussian_model, integrable_model, integrate_geodesic,
                  integrate_jacobi, reverse_initial_conditions)

SQRT2 = math.sqrt(2.0)


def test_exponential_geodesic_closed_form():
    # On the metric dmu^2/mu^2 the solution of mu'' = mu'^2/mu with
    # mu(0)=1, mu'(0)=v is mu(tau) = exp(v tau), verified by substitution.
    traj = integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0, 0.0),
                              1.0, tol=1e-10)
    assert traj.coords[-1][0] == pytest.approx(math.e, abs=1e-6)
    assert traj.coords[-1][1] == pytest.approx(1.0, abs=1e-9)
    mid = traj.n_samples // 2
    tau_mid = traj.tau_grid[mid]
    assert traj.coords[mid][0] == pytest.approx(math.exp(tau_mid), rel=1e-8)


def test_zero_velocity_stationary():
    for mdl in (integrable_model(), chaotic_model()):
        theta0 = mdl.random_points(1, seed=1)[0]
        traj = integrate_geodesic(mdl, theta0, np.zeros(mdl.dim), 5.0)
        assert np.max(np.abs(traj.coords - theta0[None, :])) < 1e-12
        np.testing.assert_allclose(traj.speed, 0.0, atol=1e-12)


def test_speed_conservation_both_paper_manifolds():
    runs = [
        (integrable_model(), (1.0, 1.0), (1.0, 1.0)),
        (chaotic_model(), (1.0, 0.0, 1.0), (0.25, 0.1, -0.2)),
        (gaussian_model(), (0.0, 1.0), (0.0, 1.0 / SQRT2)),
    ]
    for mdl, theta0, v0 in runs:
        traj = integrate_geodesic(mdl, theta0, v0, 10.0, tol=1e-10)
        assert traj.boundary_event is None
        drift = np.max(np.abs(traj.speed - traj.speed[0]))
        assert drift < 1e-8, (mdl.name, drift)


def test_unit_speed_start_stays_unit():
    traj = integrate_geodesic(gaussian_model(), (0.0, 1.0), (0.0, 1.0 / SQRT2),
                              10.0, tol=1e-10)
    np.testing.assert_allclose(traj.speed, 1.0, atol=1e-8)


def test_time_reversal_round_trip():
    fwd = integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0, 1.0),
                             5.0, tol=1e-10)
    theta, vel = reverse_initial_conditions(fwd)
    back = integrate_geodesic(integrable_model(), theta, vel, 5.0, tol=1e-10)
    assert np.max(np.abs(back.coords[-1] - [1.0, 1.0])) < 1e-6


def test_boundary_event_truncates():
    traj = integrate_geodesic(integrable_model(), (1.0, 1.0), (-1.0, 0.0),
                              30.0, tol=1e-8)
    assert traj.boundary_event is not None
    assert traj.boundary_event.coordinate_name == "mu_A"
    # mu_A = exp(-tau) crosses the 1e-9 margin near tau = ln(1e9) ~ 20.7
    assert traj.boundary_event.tau == pytest.approx(9.0 * math.log(10.0), rel=0.05)
    assert traj.n_samples < 512
    assert traj.tau_grid[-1] <= traj.boundary_event.tau


def test_step_underflow_raises_singularity():
    with pytest.raises(SingularityError) as err:
        integrate_geodesic(gaussian_model(), (0.0, 1.0), (1.0, -0.5), 10.0,
                           tol=1e-12, min_step=1.0)
    assert err.value.last_state is not None


def test_geodesic_validation():
    from igac.errors import DomainError
    with pytest.raises(DomainError):
        integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0, 0.0), -1.0)
    with pytest.raises(DomainError):
        integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0, 0.0), 1.0, tol=0.0)
    with pytest.raises(ShapeError):
        integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0,), 1.0)


def test_flat_jacobi_linear_growth():
    em = euclidean_model(2)
    base = integrate_geodesic(em, (0.0, 0.0), (1.0, 0.0), 10.0, tol=1e-10)
    traj = integrate_jacobi(em, base, (0.0, 0.0), (0.0, 1.0), tol=1e-10)
    np.testing.assert_allclose(traj.jacobi_norm, traj.tau_grid, atol=1e-8)


def test_gaussian_jacobi_sinh_growth():
    gm = gaussian_model()
    base = integrate_geodesic(gm, (0.0, 1.0), (0.0, 1.0 / SQRT2), 5.0, tol=1e-10)
    traj = integrate_jacobi(gm, base, (0.0, 0.0), (1.0, 0.0), tol=1e-10)
    expected = SQRT2 * np.sinh(5.0 / SQRT2)
    assert traj.jacobi_norm[-1] == pytest.approx(expected, rel=1e-4)


def test_integrable_jacobi_at_most_linear():
    im = integrable_model()
    base = integrate_geodesic(im, (1.0, 1.0), (1.0, 1.0), 50.0, tol=1e-10)
    traj = integrate_jacobi(im, base, (0.0, 0.0),
                            (1.0 / SQRT2, -1.0 / SQRT2), tol=1e-10)
    mask = traj.tau_grid > 1.0
    exponent = np.polyfit(np.log(traj.tau_grid[mask]),
                          np.log(traj.jacobi_norm[mask]), 1)[0]
    assert exponent == pytest.approx(1.0, rel=0.02)


def test_jacobi_superposition():
    gm = gaussian_model()
    base = integrate_geodesic(gm, (0.0, 1.0), (0.0, 1.0 / SQRT2), 3.0, tol=1e-11)
    a = integrate_jacobi(gm, base, (0.2, 0.0), (1.0, 0.0), tol=1e-11)
    b = integrate_jacobi(gm, base, (0.0, 0.1), (0.0, 0.3), tol=1e-11)
    both = integrate_jacobi(gm, base, (0.2, 0.1), (1.0, 0.3), tol=1e-11)
    np.testing.assert_allclose(both.jacobi, a.jacobi + b.jacobi,
                               rtol=1e-7, atol=1e-9)


def test_jacobi_model_mismatch():
    base = integrate_geodesic(integrable_model(), (1.0, 1.0), (1.0, 0.0), 1.0)
    with pytest.raises(ShapeError):
        integrate_jacobi(gaussian_model(), base, (0.0, 0.0), (1.0, 0.0))


def test_lambda_j_gaussian_window():
    gm = gaussian_model()
    base = integrate_geodesic(gm, (0.0, 1.0), (0.0, 1.0 / SQRT2), 30.0,
                              tol=1e-10, samples=1024)
    traj = integrate_jacobi(gm, base, (0.0, 0.0), (1.0, 0.0), tol=1e-10)
    est = estimate_lambda_j(traj, (10.0, 30.0))
    assert est.lambda_j == pytest.approx(1.0 / SQRT2, rel=0.02)
    assert est.fit_r2 > 0.999


def test_lambda_j_flat_consistent_with_zero():
    em = euclidean_model(2)
    base = integrate_geodesic(em, (0.0, 0.0), (1.0, 0.0), 30.0, tol=1e-10,
                              samples=1024)
    # Covariantly constant deviation field: no stretching at all.
    const = integrate_jacobi(em, base, (1.0, 0.0), (0.0, 0.0), tol=1e-10)
    est = estimate_lambda_j(const, (10.0, 30.0))
    assert abs(est.lambda_j) < 0.05
    # Affine growth ||J|| = tau has a small but nonzero log-slope over a
    # finite window (about 1/tau_mid), still far from exponential rates.
    affine = integrate_jacobi(em, base, (0.0, 0.0), (0.0, 1.0), tol=1e-10)
    est2 = estimate_lambda_j(affine, (10.0, 30.0))
    assert 0.0 < est2.lambda_j < 0.06


def test_lambda_j_chaotic_positive():
    cm = chaotic_model()
    base = integrate_geodesic(cm, (1.0, 0.0, 1e4), (0.25, 0.0, -2500.0),
                              30.0, tol=1e-10, samples=1024)
    traj = integrate_jacobi(cm, base, (0.0, 0.0, 0.0), (0.0, 1e4, 0.0),
                            tol=1e-10)
    est = estimate_lambda_j(traj, (10.0, 30.0))
    assert est.lambda_j > 0.1


def test_lambda_j_window_validation():
    gm = gaussian_model()
    base = integrate_geodesic(gm, (0.0, 1.0), (0.0, 1.0 / SQRT2), 30.0,
                              samples=64)
    traj = integrate_jacobi(gm, base, (0.0, 0.0), (1.0, 0.0))
    with pytest.raises(InsufficientDataError):
        estimate_lambda_j(traj, (29.0, 30.0))  # fewer than 10 samples
    with pytest.raises(InsufficientDataError):
        estimate_lambda_j(base, (10.0, 30.0))  # no deviation field
