import math
import warnings

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phononforge import channels, fock
from phononforge.channels import HeraldSpec, WeakDriveWarning
from phononforge.errors import HeraldingImpossibleError, InvalidParameterError, TruncationError
from phononforge.fock import GaussianSpec, PureState

from .conftest import SQRT2, rel, states

DISPLACED_SQUEEZED = GaussianSpec(1.5 * np.exp(1j * np.pi / 4), 0.5)


def test_identity_spec():
    np.testing.assert_allclose(channels.herald_op(6, HeraldSpec(mu=SQRT2)), np.eye(6), atol=1e-15)


def test_subtraction_on_one():
    out = channels.apply_herald(PureState.fock(1, 4), HeraldSpec(theta_half=0.1))
    np.testing.assert_allclose(np.abs(out.state.amps), PureState.fock(0, 4).amps, atol=1e-15)
    assert out.probability == pytest.approx(0.005, rel=1e-12)


@given(
    st.floats(0, 0.5), st.floats(0, 0.5), st.complex_numbers(max_magnitude=1),
    st.floats(-4, 4), st.floats(-4, 4),
)
def test_detection_variant_flips_mu(theta, r, mu, phi, varphi):
    h = HeraldSpec(theta, r, mu, phi, varphi, "h")
    v = channels.with_detection(h, "v")
    diff = channels.herald_op(7, h) - channels.herald_op(7, v)
    np.testing.assert_allclose(diff, SQRT2 * mu * np.eye(7), atol=1e-15)


def test_orthogonalizer_coherent():
    psi = fock.gaussian_state(GaussianSpec(1.0), 32)
    out, n2 = fock.apply(channels.orthogonalizer(psi, 0.1), psi)
    assert abs(fock.overlap(psi, out)) < 1e-10 * math.sqrt(n2)


def test_orthogonalizer_vacuum_gives_one():
    out = channels.apply_herald(PureState.fock(0, 5), channels.orthogonalizer_spec(PureState.fock(0, 5), 0.1))
    assert fock.fidelity(out.state, PureState.fock(1, 5)) == pytest.approx(1, abs=1e-15)


def test_orthogonalizer_displaced_squeezed():
    psi = fock.gaussian_state(DISPLACED_SQUEEZED, 48)
    spec = channels.orthogonalizer_spec(psi, 0.1)
    out = channels.apply_herald(psi, spec)
    assert abs(fock.overlap(psi, out.state)) < 1e-10
    x = fock.quadrature_op(48, spec.phi)
    assert rel(out.probability, 0.01 * fock.expectation(x @ x, psi).real) < 1e-12


def test_orthogonalizer_fock_two_probability():
    psi = PureState.fock(2, 6)
    out = channels.apply_herald(psi, channels.orthogonalizer_spec(psi, 0.1))
    assert out.probability == pytest.approx(0.025, rel=1e-12)


def test_addition_only_on_one():
    out = channels.apply_herald(PureState.fock(1, 5), HeraldSpec(r=0.1))
    assert out.probability == pytest.approx(0.01, rel=1e-12)


def test_identity_outcome():
    psi = fock.random_state(np.random.default_rng(3), 6)
    out = channels.apply_herald(psi, HeraldSpec(mu=SQRT2))
    np.testing.assert_allclose(out.state.amps, psi.amps, atol=1e-15)
    assert out.probability == pytest.approx(1, abs=1e-14)


def test_ladder_sub_fock_one():
    out = channels.displaced_ladder_orthogonalize(PureState.fock(1, 4), "sub")
    assert fock.fidelity(out.state, PureState.fock(0, 4)) == pytest.approx(1)
    assert abs(fock.overlap(out.state, PureState.fock(1, 4))) == 0


def test_ladder_add_superposition():
    psi = PureState(np.array([1, 1, 0, 0]) / SQRT2)
    out = channels.displaced_ladder_orthogonalize(psi, "add")
    assert abs(fock.overlap(psi, out.state)) < 1e-12


def test_ladder_sub_coherent_impossible():
    psi = fock.gaussian_state(GaussianSpec(0.8), 40)
    with pytest.raises(HeraldingImpossibleError):
        channels.displaced_ladder_orthogonalize(psi, "sub")


def test_ladder_bad_mode():
    with pytest.raises(InvalidParameterError):
        channels.displaced_ladder_orthogonalize(PureState.fock(0, 4), "both")


def test_qubit_zero_weight_is_orthogonalizer():
    psi = fock.gaussian_state(DISPLACED_SQUEEZED, 48)
    a = channels.qubit_synthesis(psi, 0, 0.1)
    b = channels.apply_herald(psi, channels.orthogonalizer_spec(psi, 0.1))
    np.testing.assert_allclose(a.state.amps, b.state.amps, atol=1e-15)


def test_qubit_overlap_formula():
    psi = fock.gaussian_state(DISPLACED_SQUEEZED, 48)
    mu = 0.1 * np.exp(-1j * np.pi / 2)
    out = channels.qubit_synthesis(psi, mu, 0.1)
    expected = np.conj(mu) / (SQRT2 * math.sqrt(out.probability))
    # overlap(out, psi) = <out|psi>; its conjugate is <psi|out> = mu/(sqrt2 sqrt p)
    assert fock.overlap(out.state, psi) == pytest.approx(expected, abs=1e-12)


def test_qubit_identity_dominated_vacuum():
    psi = PureState.fock(0, 6)
    out = channels.qubit_synthesis(psi, 10.0, 0.1)
    assert fock.fidelity(out.state, psi) > 0.9999


def test_qubit_identity_dominated_closed_form():
    # F = (|mu|^2/2) / (|mu|^2/2 + r^2 <X^2>): the 1e-4 bound needs <X^2> <= 1/2
    psi = fock.gaussian_state(DISPLACED_SQUEEZED, 48)
    spec = channels.orthogonalizer_spec(psi, 0.1, mu=10.0)
    x = fock.quadrature_op(48, spec.phi)
    var = fock.expectation(x @ x, psi).real
    out = channels.qubit_synthesis(psi, 10.0, 0.1)
    assert fock.fidelity(out.state, psi) == pytest.approx(50 / (50 + 0.01 * var), abs=1e-13)
    assert fock.fidelity(out.state, psi) > 1 - 2e-4 * var - 1e-12


def test_weak_drive_bounds():
    with pytest.warns(WeakDriveWarning):
        HeraldSpec(r=0.7)
    with pytest.raises(InvalidParameterError):
        HeraldSpec(theta_half=1.5)
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        HeraldSpec(r=0.5)


def test_creation_requires_guard_band():
    with pytest.raises(TruncationError):
        channels.apply_herald(PureState.fock(3, 4), HeraldSpec(r=0.1))
    # subtraction alone never raises excitation, so the guard does not apply
    channels.apply_herald(PureState.fock(3, 4), HeraldSpec(theta_half=0.1))


def test_unnormalized_rejected():
    with pytest.raises(InvalidParameterError):
        channels.apply_herald(PureState(np.array([1.0, 1.0, 0, 0])), HeraldSpec(mu=1))


@given(states(min_dim=3, max_dim=32, guarded=True), st.floats(0.01, 0.5))
def test_orthogonality_property(psi, r):
    out, n2 = fock.apply(channels.orthogonalizer(psi, r), psi)
    if n2 > 1e-28:
        assert abs(fock.overlap(psi, out)) / math.sqrt(n2) < 1e-10


@given(states(min_dim=3, max_dim=32, guarded=True), st.floats(0.01, 0.5))
def test_closed_form_probability(psi, r):
    spec = channels.orthogonalizer_spec(psi, r)
    x = fock.quadrature_op(psi.dim, spec.phi)
    p = channels.apply_herald(psi, spec).probability
    assert rel(p, r**2 * fock.expectation(x @ x, psi).real) < 1e-12


@given(
    states(min_dim=3, max_dim=20, guarded=True),
    st.floats(0, 0.5), st.floats(0, 0.5), st.complex_numbers(max_magnitude=0.5),
    st.floats(-4, 4), st.floats(-4, 4), st.sampled_from("hv"),
)
def test_probability_consistency(psi, theta, r, mu, phi, varphi, det):
    spec = HeraldSpec(theta, r, mu, phi, varphi, det)
    op = channels.herald_op(psi.dim, spec)
    try:
        p = channels.apply_herald(psi, spec).probability
    except HeraldingImpossibleError:
        return
    assert rel(p, fock.expectation(op.conj().T @ op, psi).real) < 1e-12


def _zero_mean_state(rng, dim):
    """Random state supported on levels of one residue class mod 2, so <b> = 0."""
    amps = np.zeros(dim, dtype=np.complex128)
    start = int(rng.integers(0, 2))
    idx = np.arange(start, dim - 2, 2)
    amps[idx] = rng.normal(size=idx.size) + 1j * rng.normal(size=idx.size)
    return PureState(amps / np.linalg.norm(amps))


@given(st.integers(0, 2**32 - 1), st.integers(5, 20))
def test_zero_mean_universality(seed, dim):
    psi = _zero_mean_state(np.random.default_rng(seed), dim)
    assert fock.mean_angle(psi).degenerate
    for phi in np.linspace(0, 2 * np.pi, 8, endpoint=False):
        spec = HeraldSpec(theta_half=0.1, r=0.1, phi=phi, varphi=phi)
        out, n2 = fock.apply(channels.herald_op(dim, spec), psi)
        assert abs(fock.overlap(psi, out)) / math.sqrt(n2) < 1e-10


@given(st.integers(0, 2**32 - 1), st.integers(5, 20))
def test_zero_mean_ladder_probabilities(seed, dim):
    psi = _zero_mean_state(np.random.default_rng(seed), dim)
    nbar = fock.expectation(fock.number_op(dim), psi).real
    add = channels.apply_herald(psi, HeraldSpec(r=0.2))
    assert rel(add.probability, 0.04 * (nbar + 1) / 2) < 1e-12
    assert abs(fock.overlap(psi, add.state)) < 1e-12
    if nbar > 1e-12:
        sub = channels.apply_herald(psi, HeraldSpec(theta_half=0.3))
        assert rel(sub.probability, 0.09 * nbar / 2) < 1e-12
        assert abs(fock.overlap(psi, sub.state)) < 1e-12


@pytest.mark.parametrize("n", range(6))
def test_fock_ladder_probabilities(n):
    psi = PureState.fock(n, n + 4)
    assert rel(channels.apply_herald(psi, HeraldSpec(r=0.1)).probability, 0.01 * (n + 1) / 2) < 1e-12
    if n == 0:
        with pytest.raises(HeraldingImpossibleError):
            channels.apply_herald(psi, HeraldSpec(theta_half=0.1))
    else:
        assert rel(channels.apply_herald(psi, HeraldSpec(theta_half=0.1)).probability, 0.01 * n / 2) < 1e-12
