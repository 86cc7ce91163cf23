import json
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from helpers import random_unit
from wavefunction.model import (
    DENSITY_FLOOR,
    ModelFormatError,
    NormViolationError,
    WaveModel,
    deserialize,
    load_model,
    save_model,
    serialize,
)
from wavefunction.quadrature import gauss_hermite, project_density
from wavefunction.reference import make_reference

GAUSS = WaveModel(np.eye(11)[0])


def test_amplitude_of_gaussian():
    assert GAUSS.amplitude(0.0) == pytest.approx(0.7511255444649425, rel=1e-15)
    assert GAUSS.amplitude(2.0) == pytest.approx(0.10165378830641791, rel=1e-14)


def test_amplitude_of_h1_vanishes_at_origin():
    assert WaveModel(np.eye(4)[1]).amplitude(0.0) == 0.0


def test_density_of_gaussian():
    assert GAUSS.density(0.0) == pytest.approx(1 / math.sqrt(math.pi), rel=1e-15)


def test_density_jacobian():
    m = WaveModel(np.eye(11)[0], location=3.0, scale=2.0)
    assert m.density(3.0) == pytest.approx(0.28209479177387814, rel=1e-15)
    x = np.linspace(-40, 46, 200001)
    assert np.sum(m.density(x)) * (x[1] - x[0]) == pytest.approx(1.0, abs=1e-10)


def test_sign_of_coefficients_is_invisible():
    x = np.linspace(-5, 5, 101)
    np.testing.assert_array_equal(WaveModel(-np.eye(6)[0]).density(x), GAUSS.density(x))
    w = random_unit(np.random.default_rng(1), 8)
    np.testing.assert_array_equal(WaveModel(-w).density(x), WaveModel(w).density(x))


def test_log_density_closed_form():
    assert GAUSS.log_density(0.0) == pytest.approx(-0.5723649429247001, rel=1e-15)


def test_log_density_at_amplitude_root_is_floored():
    m = WaveModel(np.eye(3)[1])
    assert m.log_density(0.0) == pytest.approx(math.log(DENSITY_FLOOR))
    assert math.isfinite(m.log_density(0.0))


def test_log_density_consistent_with_density():
    rng = np.random.default_rng(2)
    for _ in range(20):
        m = WaveModel(random_unit(rng, 11), location=rng.normal(), scale=rng.uniform(0.1, 5))
        x = rng.normal(size=200) * 3 * m.scale + m.location
        d = m.density(x)
        keep = d > 1e-300
        np.testing.assert_allclose(np.exp(m.log_density(x[keep])), d[keep], rtol=1e-12)


@given(seed=st.integers(0, 2**32 - 1), degree=st.integers(0, 20),
       location=st.floats(-1e3, 1e3), scale=st.floats(1e-3, 1e3))
def test_density_integrates_to_one(seed, degree, location, scale):
    m = WaveModel(random_unit(np.random.default_rng(seed), degree + 1), location=location, scale=scale)
    rule = gauss_hermite(degree + 1)
    # on the standardized scale the density is a degree-2K polynomial times exp(-z^2)
    z = rule.nodes
    x = m.location + m.scale * z
    total = float(rule.weights @ (m.density(x) * m.scale * np.exp(z * z)))
    assert total == pytest.approx(1.0, abs=1e-10)


def test_density_nonnegative():
    rng = np.random.default_rng(4)
    m = WaveModel(random_unit(rng, 15))
    assert np.all(m.density(np.linspace(-30, 30, 10001)) >= 0)


def test_vector_and_scalar_inputs():
    assert isinstance(GAUSS.density(0.5), float)
    assert GAUSS.density(np.array([0.5, 1.0])).shape == (2,)


@pytest.mark.parametrize("name", ["gaussian_half", "student_t4", "bimodal_mixture", "uniform01"])
def test_symmetric_references_have_no_odd_coefficients(name):
    ref = make_reference(name)
    w, _ = project_density(ref.standardized_sqrt_density, 12, breakpoints=ref.standardized_breakpoints())
    assert np.max(np.abs(w[1::2])) < 1e-8


@pytest.mark.parametrize(
    "kwargs",
    [
        dict(coeffs=[0.5, 0.5]),
        dict(coeffs=[1.0], scale=0.0),
        dict(coeffs=[1.0], scale=-1.0),
        dict(coeffs=[np.nan]),
        dict(coeffs=[]),
    ],
)
def test_invalid_models_rejected(kwargs):
    with pytest.raises(ValueError):
        WaveModel(**kwargs)


def test_coefficients_are_read_only():
    with pytest.raises(ValueError):
        GAUSS.coeffs[0] = 0.0


# documents ----------------------------------------------------------------


def test_round_trip_of_gaussian_model():
    back = deserialize(serialize(GAUSS))
    assert back.degree == GAUSS.degree
    assert back.location == GAUSS.location and back.scale == GAUSS.scale
    np.testing.assert_array_equal(back.coeffs, GAUSS.coeffs)


def test_round_trip_is_bit_identical():
    rng = np.random.default_rng(9)
    for _ in range(50):
        m = WaveModel(random_unit(rng, int(rng.integers(1, 30))), location=rng.normal() * 1e3,
                      scale=rng.uniform(1e-4, 1e4))
        back = deserialize(serialize(m))
        assert back.location == m.location and back.scale == m.scale
        assert back.coeffs.tobytes() == m.coeffs.tobytes()


def test_document_layout():
    doc = json.loads(serialize(WaveModel([0.6, 0.8], location=1.5, scale=2.0)))
    assert doc == {"format_version": 1, "degree": 1, "location": 1.5, "scale": 2.0,
                   "coefficients": [0.59999999999999998, 0.80000000000000004]}


def _doc(**changes):
    doc = {"format_version": 1, "degree": 1, "location": 0.0, "scale": 1.0, "coefficients": [0.6, 0.8]}
    doc.update(changes)
    return json.dumps({k: v for k, v in doc.items() if v is not None})


def test_norm_violation_rejected():
    with pytest.raises(NormViolationError):
        deserialize(_doc(coefficients=[math.sqrt(0.25), math.sqrt(0.25)]))


def test_small_norm_drift_is_renormalized():
    m = deserialize(_doc(coefficients=[0.6 * (1 + 1e-8), 0.8 * (1 + 1e-8)]))
    assert float(m.coeffs @ m.coeffs) == pytest.approx(1.0, abs=1e-15)


def test_missing_degree_rejected():
    with pytest.raises(ModelFormatError, match="degree"):
        deserialize(_doc(degree=None))


@pytest.mark.parametrize(
    "text",
    [
        "not json",
        "[1, 2]",
        _doc(format_version=2),
        _doc(degree=3),
        _doc(degree=-1),
        _doc(degree=1.5),
        _doc(coefficients="0.6 0.8"),
        _doc(scale=0.0),
        _doc(scale="1"),
        _doc(coefficients=[0.6, True]),
    ],
)
def test_malformed_documents_rejected(text):
    with pytest.raises(ModelFormatError):
        deserialize(text)


def test_save_and_load(tmp_path):
    path = tmp_path / "m.json"
    save_model(GAUSS, path)
    back = load_model(path)
    np.testing.assert_array_equal(back.coeffs, GAUSS.coeffs)
    assert (back.location, back.scale) == (GAUSS.location, GAUSS.scale)
