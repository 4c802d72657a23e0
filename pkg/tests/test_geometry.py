import numpy as np
import pytest

from igac import (chaotic_model, christoffel, curvature, euclidean_model,
                  gaussian_model, integrable_model, riemann,
                  scalar_sign_classification)
from igac.errors import DomainError


def test_christoffel_integrable_analytic():
    gam = christoffel(integrable_model(), (1.0, 1.0))
    expected = np.zeros((2, 2, 2))
    expected[0, 0, 0] = -1.0
    expected[1, 1, 1] = -1.0
    np.testing.assert_allclose(gam, expected)


def test_christoffel_fd_matches_override():
    rng = np.random.default_rng(2)
    for mdl in (integrable_model(), chaotic_model(), gaussian_model()):
        for theta in mdl.random_points(5, seed=rng.integers(1 << 30)):
            exact = christoffel(mdl, theta)
            fd = christoffel(mdl, theta, use_closed_form=False)
            np.testing.assert_allclose(fd, exact, atol=5e-7)


def test_christoffel_euclidean_zero():
    gam = christoffel(euclidean_model(3), (0.2, -0.4, 1.0), use_closed_form=False)
    np.testing.assert_allclose(gam, 0.0, atol=1e-12)


def test_christoffel_gaussian_analytic():
    gam = christoffel(gaussian_model(), (0.0, 1.0), use_closed_form=False)
    assert gam[0, 0, 1] == pytest.approx(-1.0, abs=1e-7)
    assert gam[0, 1, 0] == pytest.approx(-1.0, abs=1e-7)
    assert gam[1, 0, 0] == pytest.approx(0.5, abs=1e-7)
    assert gam[1, 1, 1] == pytest.approx(-1.0, abs=1e-7)
    mask = np.ones((2, 2, 2), dtype=bool)
    for idx in ((0, 0, 1), (0, 1, 0), (1, 0, 0), (1, 1, 1)):
        mask[idx] = False
    np.testing.assert_allclose(gam[mask], 0.0, atol=1e-7)


def test_christoffel_symmetric_in_lower_indices():
    for mdl in (chaotic_model(), gaussian_model()):
        theta = mdl.random_points(1, seed=4)[0]
        gam = christoffel(mdl, theta, use_closed_form=False)
        np.testing.assert_allclose(gam, np.swapaxes(gam, 1, 2), atol=1e-9)


def test_curvature_integrable_flat():
    for theta in integrable_model().random_points(10, seed=6):
        rep = curvature(integrable_model(), theta, use_closed_form=False)
        assert abs(rep.scalar) < 1e-6, theta


def test_curvature_chaotic_scalar_minus_one():
    rep = curvature(chaotic_model(), (1.0, 0.0, 1.0), use_closed_form=False)
    assert rep.scalar == pytest.approx(-1.0, abs=1e-4)
    # sum over ordered pairs equals the scalar
    total = 2.0 * sum(rep.sectional.values())
    assert total == pytest.approx(rep.scalar, abs=1e-6)


def test_curvature_gaussian_constant_sectional():
    mdl = gaussian_model()
    values = []
    for theta in mdl.random_points(20, seed=13):
        rep = curvature(mdl, theta, use_closed_form=False)
        values.append(rep.sectional[(0, 1)])
    values = np.array(values)
    np.testing.assert_allclose(values, -0.5, atol=1e-5)
    assert values.max() - values.min() < 1e-5


def test_curvature_closed_form_matches_fd():
    for mdl in (chaotic_model(), gaussian_model()):
        for theta in mdl.random_points(5, seed=17):
            exact = riemann(mdl, theta)
            fd = riemann(mdl, theta, use_closed_form=False)
            np.testing.assert_allclose(fd, exact, atol=1e-5)


def test_riemann_antisymmetry_last_pair():
    mdl = chaotic_model()
    theta = mdl.random_points(1, seed=19)[0]
    r = riemann(mdl, theta, use_closed_form=False)
    np.testing.assert_allclose(r, -np.swapaxes(r, 2, 3), atol=1e-7)


def test_first_bianchi_identity():
    for mdl in (chaotic_model(), gaussian_model()):
        for theta in mdl.random_points(5, seed=23):
            r = riemann(mdl, theta, use_closed_form=False)
            cyc = (r + np.einsum("mrsn->mnrs", r) + np.einsum("msnr->mnrs", r))
            rep = curvature(mdl, theta, use_closed_form=False)
            tol = 10.0 * max(rep.scalar_consistency, 1e-8)
            assert np.max(np.abs(cyc)) < tol


def test_metric_compatibility():
    from igac.geometry import _metric_partials
    for mdl in (chaotic_model(), gaussian_model(), integrable_model()):
        for theta in mdl.random_points(5, seed=29):
            theta = np.asarray(theta)
            g = mdl.metric(theta)
            gam = christoffel(mdl, theta, fd_step=1e-5, use_closed_form=False)
            dg = _metric_partials(mdl, theta, 1e-5)
            nabla = (dg - np.einsum("rlm,rn->lmn", gam, g)
                     - np.einsum("rln,mr->lmn", gam, g))
            assert np.max(np.abs(nabla)) < 1e-6


def test_fd_step_richardson_consistency():
    for mdl in (chaotic_model(), gaussian_model()):
        for theta in mdl.random_points(5, seed=31):
            rep = curvature(mdl, theta, use_closed_form=False)
            assert rep.scalar_consistency < 1e-4


def test_chaotic_ricci_product_structure():
    rep = curvature(chaotic_model(), (1.4, -0.3, 0.8), use_closed_form=False)
    ric = rep.ricci
    # Wigner-Dyson block decouples and is flat.
    np.testing.assert_allclose(ric[0, :], 0.0, atol=1e-6)
    np.testing.assert_allclose(ric[:, 0], 0.0, atol=1e-6)


def test_scalar_sign_classification():
    cm, im, em = chaotic_model(), integrable_model(), euclidean_model(2)
    assert scalar_sign_classification(
        cm, cm.random_points(50, seed=37)).classification == "negative"
    rep = scalar_sign_classification(im, im.random_points(50, seed=38))
    assert rep.classification == "non-negative"
    assert abs(rep.scalar_min) < 1e-6 and abs(rep.scalar_max) < 1e-6
    assert scalar_sign_classification(
        em, em.random_points(10, seed=39)).classification == "non-negative"


def test_fd_step_boundary_guard():
    with pytest.raises(DomainError):
        christoffel(integrable_model(), (1e-6, 1.0), fd_step=1e-2,
                    use_closed_form=False)
