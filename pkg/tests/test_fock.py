import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phononforge import fock
from phononforge.errors import InvalidDimensionError, TruncationError
from phononforge.fock import GaussianSpec, PureState

from .conftest import states


def test_annihilation_dim2():
    np.testing.assert_array_equal(fock.annihilation_op(2), [[0, 1], [0, 0]])


def test_annihilation_sqrt_rule():
    assert fock.annihilation_op(3)[1, 2] == pytest.approx(1.41421356, abs=1e-8)


def test_annihilation_on_five():
    out, n2 = fock.apply(fock.annihilation_op(16), PureState.fock(5, 16))
    expected = math.sqrt(5) * PureState.fock(4, 16).amps
    np.testing.assert_allclose(out.amps, expected, atol=1e-15)
    assert n2 == pytest.approx(5)


def test_creation_is_adjoint():
    np.testing.assert_array_equal(fock.creation_op(7), fock.annihilation_op(7).conj().T)


def test_quadrature_zero_angle():
    b = fock.annihilation_op(8)
    np.testing.assert_allclose(fock.quadrature_op(8, 0.0), (b + b.T) / math.sqrt(2), atol=0)


@given(st.integers(2, 30), st.floats(-10, 10, allow_nan=False))
def test_quadrature_exactly_hermitian(dim, phi):
    x = fock.quadrature_op(dim, phi)
    assert np.max(np.abs(x - x.conj().T)) == 0


def test_quadrature_hermitian_example():
    x = fock.quadrature_op(12, 1.234)
    assert np.max(np.abs(x - x.conj().T)) == 0


@given(st.integers(2, 20), st.floats(-7, 7, allow_nan=False))
def test_vacuum_quadrature_variance(dim, phi):
    x = fock.quadrature_op(dim, phi)
    assert fock.expectation(x @ x, PureState.fock(0, dim)) == pytest.approx(0.5, abs=1e-15)


@given(st.integers(2, 25))
def test_commutator_truncation_law(dim):
    b, bd = fock.annihilation_op(dim), fock.creation_op(dim)
    comm = b @ bd - bd @ b
    inner = comm[: dim - 1, : dim - 1]
    # sqrt(n)^2 is n only to one ulp in floating point
    np.testing.assert_allclose(inner, np.eye(dim - 1), rtol=0, atol=4 * np.finfo(float).eps * dim)
    # the defect sits only at the corner of the top row/column
    assert comm[dim - 1, dim - 1] == pytest.approx(-(dim - 1))
    assert np.all(comm[dim - 1, : dim - 1] == 0) and np.all(comm[: dim - 1, dim - 1] == 0)


def test_coherent_mean():
    psi = fock.gaussian_state(GaussianSpec(2 + 0j), 32)
    assert fock.mean_amplitude(psi) == pytest.approx(2, abs=1e-6)
    ang = fock.mean_angle(psi)
    assert ang.angle == pytest.approx(0, abs=1e-12) and not ang.degenerate


def test_fock_mean_degenerate():
    assert fock.mean_amplitude(PureState.fock(3, 8)) == 0
    assert fock.mean_angle(PureState.fock(3, 8)).degenerate


@given(st.integers(1, 30), st.data())
def test_fock_mean_exactly_zero(dim, data):
    n = data.draw(st.integers(0, dim - 1))
    assert fock.mean_amplitude(PureState.fock(n, dim)) == 0


def test_two_level_mean():
    psi = PureState(np.array([1, 1j]) / math.sqrt(2))
    assert fock.mean_amplitude(psi) == pytest.approx(0.5j)
    assert fock.mean_angle(psi).angle == pytest.approx(math.pi / 2)


def test_gaussian_identity_case():
    np.testing.assert_allclose(fock.gaussian_state(GaussianSpec(0), 10).amps, PureState.fock(0, 10).amps,
                               atol=1e-15)


def test_coherent_closed_form():
    alpha = 1.5
    psi = fock.gaussian_state(GaussianSpec(alpha), 40)
    n = np.arange(40)
    closed = np.exp(-alpha**2 / 2) * alpha**n / np.array([math.sqrt(math.factorial(k)) for k in n])
    np.testing.assert_allclose(psi.amps, closed, atol=1e-8)


def test_squeezed_variance():
    psi = fock.gaussian_state(GaussianSpec(0, 0.5, 0.0), 40)
    x = fock.quadrature_op(40, 0.0)
    assert fock.expectation(x @ x, psi).real == pytest.approx(math.exp(-1) / 2, abs=1e-6)


def test_apply_vacuum_annihilation():
    out, n2 = fock.apply(fock.annihilation_op(4), PureState.fock(0, 4))
    assert n2 == 0 and not np.any(out.amps)


def test_overlap_basis():
    assert fock.overlap(PureState.fock(2, 5), PureState.fock(2, 5)) == 1
    assert fock.overlap(PureState.fock(1, 5), PureState.fock(2, 5)) == 0


def test_number_expectation_coherent():
    psi = fock.gaussian_state(GaussianSpec(1.2), 32)
    assert fock.expectation(fock.number_op(32), psi).real == pytest.approx(1.44, abs=1e-8)


@given(
    st.floats(0, 1.5),
    st.floats(0, 2 * math.pi),
    st.floats(0, 0.5),
    st.floats(0, 2 * math.pi),
)
def test_gaussian_normalized_and_leakage_monotone(mag, arg, sq, sq_angle):
    spec = GaussianSpec(mag * np.exp(1j * arg), sq, sq_angle)
    try:
        dim = 40
        psi = fock.gaussian_state(spec, dim)
    except TruncationError as exc:
        dim = exc.required_dim
        psi = fock.gaussian_state(spec, dim)
    assert abs(psi.norm_sq - 1) < 1e-12
    assert fock.gaussian_leakage(spec, dim + 8) <= fock.gaussian_leakage(spec, dim)


def test_gaussian_truncation_error_reports_dim():
    spec = GaussianSpec(3.0)
    with pytest.raises(TruncationError) as exc:
        fock.gaussian_state(spec, 10)
    assert exc.value.required_dim > 10
    fock.gaussian_state(spec, exc.value.required_dim)


def test_guard_band_rejects_top_occupation():
    with pytest.raises(TruncationError):
        fock.check_guard_band(PureState.fock(4, 5))
    fock.check_guard_band(PureState.fock(2, 5))


@pytest.mark.parametrize("dim", [0, -3])
def test_invalid_dim(dim):
    with pytest.raises(InvalidDimensionError):
        fock.annihilation_op(dim)


def test_state_is_immutable():
    psi = PureState.fock(1, 3)
    with pytest.raises(ValueError):
        psi.amps[0] = 1


@given(states())
def test_random_states_normalized(psi):
    assert psi.is_normalized()
    assert fock.fidelity(psi, psi) == pytest.approx(1, abs=1e-12)


def test_displacement_matches_coherent():
    d = fock.displacement_op(40, 0.7 - 0.3j)
    vac = PureState.fock(0, 40)
    out, _ = fock.apply(d, vac)
    np.testing.assert_allclose(out.amps, fock.gaussian_state(GaussianSpec(0.7 - 0.3j), 40).amps, atol=1e-12)
