import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from wavefunction.sphere import PoleError, project, unproject, unproject_jacobian

finite = st.floats(-1e6, 1e6, allow_nan=False, allow_infinity=False)


def test_south_pole_projects_to_origin():
    np.testing.assert_array_equal(project([-1.0, 0.0, 0.0, 0.0]), np.zeros(3))


def test_equator_point():
    np.testing.assert_allclose(project([0.0, 1.0, 0.0]), [1.0, 0.0])
    np.testing.assert_allclose(unproject([1.0, 0.0]), [0.0, 1.0, 0.0])


def test_projection_pole_rejected():
    with pytest.raises(PoleError):
        project([1.0, 0.0, 0.0])
    with pytest.raises(PoleError):
        project([1.0 - 1e-13, 0.0])


def test_origin_unprojects_to_minus_e0():
    np.testing.assert_array_equal(unproject(np.zeros(5)), [-1.0, 0, 0, 0, 0, 0])


def test_degree_zero_chart_is_empty():
    np.testing.assert_array_equal(unproject(np.zeros(0)), [-1.0])


def test_unproject_rejects_non_finite():
    with pytest.raises(ValueError):
        unproject([np.nan, 1.0])


def test_random_gamma_lands_on_sphere():
    rng = np.random.default_rng(11)
    for _ in range(1000):
        g = rng.uniform(-5, 5, size=rng.integers(1, 20))
        assert abs(np.linalg.norm(unproject(g)) - 1.0) < 1e-13


@given(arrays(np.float64, st.integers(1, 25), elements=finite))
def test_norm_preserved(gamma):
    assert abs(np.linalg.norm(unproject(gamma)) - 1.0) < 1e-13


def test_round_trip_gamma():
    rng = np.random.default_rng(5)
    for _ in range(2000):
        d = rng.normal(size=rng.integers(1, 16))
        g = d / np.linalg.norm(d) * 10 ** rng.uniform(-3, 3)
        np.testing.assert_allclose(project(unproject(g)), g, rtol=0, atol=1e-10)


def test_round_trip_w():
    rng = np.random.default_rng(6)
    for _ in range(2000):
        w = rng.normal(size=rng.integers(2, 16))
        w /= np.linalg.norm(w)
        if w[0] >= 1 - 1e-6:
            continue
        np.testing.assert_allclose(unproject(project(w)), w, rtol=0, atol=1e-10)


def test_huge_gamma_approaches_pole():
    w = unproject(np.array([1e8, 0.0]))
    assert w[0] == pytest.approx(1.0, abs=1e-15)
    assert 0 < w[1] < 1e-7


def test_jacobian_against_finite_differences():
    rng = np.random.default_rng(3)
    for _ in range(50):
        g = rng.normal(size=6) * 2
        jac = unproject_jacobian(g)
        h = 1e-6
        fd = np.column_stack([(unproject(g + h * e) - unproject(g - h * e)) / (2 * h) for e in np.eye(6)])
        np.testing.assert_allclose(jac, fd, atol=1e-8)
