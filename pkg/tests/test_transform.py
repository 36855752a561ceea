import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from phononforge import fock, transform
from phononforge.errors import (
    HeraldingImpossibleError,
    InvalidParameterError,
    UnsolvableError,
)
from phononforge.fock import PureState
from phononforge.transform import TransformPlan

from .conftest import SQRT2, rel

SQRT24 = math.sqrt(24)


def worked_example():
    return PureState.fock(4, 5), PureState(np.array([0, 1, 0, 0, 1]) / SQRT2)


@st.composite
def transform_pairs(draw):
    dim = draw(st.integers(3, 8))
    rng = np.random.default_rng(draw(st.integers(0, 2**32 - 1)))
    while True:
        psi = fock.random_state(rng, dim)
        if abs(psi.amps[-1]) > 0.05:
            return psi, fock.random_state(rng, dim)


def test_worked_example_coefficients():
    c = transform.solve_coefficients(*worked_example())
    assert abs(c[1]) < 1e-12 and abs(c[2]) < 1e-12 and abs(c[4]) < 1e-12
    assert c[0] / c[3] == pytest.approx(SQRT24, abs=1e-10)


def test_identity_transform():
    psi = fock.random_state(np.random.default_rng(4), 6)
    c = transform.solve_coefficients(psi, psi)
    assert c[0] == pytest.approx(1, abs=1e-12)
    assert np.max(np.abs(c[1:])) < 1e-12


def test_double_subtraction_coefficients():
    psi = PureState(np.array([1, 0, 1]) / SQRT2)
    c = transform.solve_coefficients(psi, PureState.fock(0, 3))
    np.testing.assert_allclose(c, [0, 0, 1], atol=1e-15)


def test_worked_example_nu_symmetric_functions():
    c = transform.solve_coefficients(*worked_example())
    plan = transform.factor_plan(c)
    nu = np.array([s[1] for s in plan.steps])
    assert plan.degree == 3 and len(plan.steps) == 3
    assert all(mu == 1 for mu, _ in plan.steps)
    assert abs(nu.sum()) < 1e-9
    assert abs(nu[0] * nu[1] + nu[0] * nu[2] + nu[1] * nu[2]) < 1e-9
    assert abs(SQRT24 * np.prod(nu) - 1) < 1e-9


def test_pure_double_subtraction_plan():
    plan = transform.factor_plan([0, 0, 1], "unit_max")
    assert plan.steps == [(0j, 1 + 0j), (0j, 1 + 0j)]
    assert plan.expansion_error() < 1e-15


@given(st.integers(0, 2**32 - 1), st.integers(1, 10), st.sampled_from(transform.NORMALIZATIONS))
def test_factorization_soundness(seed, degree, norm):
    rng = np.random.default_rng(seed)
    c = rng.normal(size=degree + 1) + 1j * rng.normal(size=degree + 1)
    plan = transform.factor_plan(c, norm, seed=seed)
    assert plan.expansion_error() < 1e-9
    if norm == "unit_max":
        assert all(max(abs(mu), abs(nu)) == pytest.approx(1) for mu, nu in plan.steps)


def test_padding_with_identity_steps():
    plan = transform.factor_plan([1, 1], pad_to=3)
    assert plan.steps[1:] == [(1 + 0j, 0j)] * 2
    assert plan.expansion_error() < 1e-12
    with pytest.raises(InvalidParameterError):
        transform.factor_plan([1, 1, 1], pad_to=1)


def test_triangular_system():
    psi = fock.random_state(np.random.default_rng(9), 6)
    m = transform.system_matrix(psi)
    N = psi.dim - 1
    for n in range(N + 1):
        assert m[n, N - n] == pytest.approx(psi.amps[N] * math.sqrt(math.factorial(N) / math.factorial(n)))
        assert np.all(m[n, N - n + 1 :] == 0)


def test_sqrt_factorial_ratios_large():
    r = transform.sqrt_factorial_ratios(170)
    assert np.all(np.isfinite(r))
    assert r[100, 3] == pytest.approx(math.sqrt(101 * 102 * 103), rel=1e-14)


def test_unsolvable_without_top_amplitude():
    with pytest.raises(UnsolvableError):
        transform.solve_coefficients(PureState.fock(2, 5), PureState.fock(0, 5))


def test_dimension_match_raise():
    state, ops = transform.dimension_match(PureState.fock(2, 3), 5)
    assert ops == ["create", "create"]
    assert fock.fidelity(state, PureState.fock(4, 5)) == pytest.approx(1)


def test_dimension_match_superposition():
    state, ops = transform.dimension_match(PureState(np.array([1, 1]) / SQRT2), 3)
    np.testing.assert_allclose(state.amps, np.array([0, 1, SQRT2]) / math.sqrt(3), atol=1e-15)
    assert ops == ["create"]


def test_dimension_match_lower_vacuum_impossible():
    with pytest.raises(HeraldingImpossibleError):
        transform.dimension_match(PureState.fock(0, 3), 0)


def test_worked_example_execution():
    psi, phi = worked_example()
    plan = transform.plan_transform(psi, phi)
    trace = transform.execute_plan(psi, plan, phi)
    assert trace.final_fidelity > 1 - 1e-10


def test_identity_plan():
    psi = fock.random_state(np.random.default_rng(5), 5)
    plan = TransformPlan(0, np.array([1.0 + 0j]), [(1 + 0j, 0j)], SQRT2)
    trace = transform.execute_plan(psi, plan, psi)
    np.testing.assert_allclose(trace.final_state.amps, psi.amps, atol=1e-15)
    assert trace.total_probability == pytest.approx(0.5)


def test_permuted_worked_example():
    psi, phi = worked_example()
    plan = transform.plan_transform(psi, phi)
    base = transform.execute_plan(psi, plan, phi)
    other = transform.execute_plan(psi, plan, phi, order=(2, 0, 1))
    assert rel(other.total_probability, base.total_probability) < 1e-12
    # nu_j are nu * (cube roots of unity): every partial product has the same
    # |elementary symmetric| weights on |4>, so per-step values coincide too
    np.testing.assert_allclose([p for _, p in base.per_step], [p for _, p in other.per_step], rtol=1e-12)


def test_permutation_changes_per_step_generic():
    psi = fock.random_state(np.random.default_rng(11), 5)
    phi = fock.random_state(np.random.default_rng(12), 5)
    plan = transform.plan_transform(psi, phi)
    base = transform.execute_plan(psi, plan)
    other = transform.execute_plan(psi, plan, order=tuple(reversed(range(len(plan.steps)))))
    assert rel(other.total_probability, base.total_probability) < 1e-12
    assert not np.allclose([p for _, p in base.per_step], [p for _, p in other.per_step])


def test_predicted_single_subtraction():
    psi = PureState.fock(1, 3)
    plan = TransformPlan(1, np.array([0, 0.1 / SQRT2]), [(0j, 0.1 + 0j)], 1.0)
    exact = transform.execute_plan(psi, plan).total_probability
    assert transform.predicted_success(psi, plan) == pytest.approx(0.005, rel=1e-14)
    assert exact == pytest.approx(0.005, rel=1e-14)


def test_predicted_identity_step():
    psi = fock.random_state(np.random.default_rng(6), 4)
    plan = TransformPlan(0, np.array([1 + 0j]), [(1 + 0j, 0j)], 1.0)
    assert transform.predicted_success(psi, plan) == pytest.approx(0.5)


def test_predicted_vs_exact_gap_on_worked_example():
    psi, phi = worked_example()
    plan = transform.plan_transform(psi, phi)
    exact = transform.execute_plan(psi, plan).total_probability
    # the formula ignores Re(mu* nu <b>) of the intermediates, which do have nonzero means
    assert plan.predicted_probability == pytest.approx(1.3039236669274863, rel=1e-12)
    assert exact == pytest.approx(0.25, rel=1e-12)


def test_bad_normalization_and_order():
    with pytest.raises(InvalidParameterError):
        transform.factor_plan([1, 1], "whatever")
    psi, phi = worked_example()
    plan = transform.plan_transform(psi, phi)
    with pytest.raises(InvalidParameterError):
        transform.execute_plan(psi, plan, order=(0, 0, 1))


@given(transform_pairs(), st.sampled_from(transform.NORMALIZATIONS))
def test_round_trip(pair, norm):
    psi, phi = pair
    plan = transform.plan_transform(psi, phi, norm)
    assert transform.execute_plan(psi, plan, phi).final_fidelity > 1 - 1e-9


@given(transform_pairs(), st.randoms(use_true_random=False))
def test_order_invariance(pair, rnd):
    psi, phi = pair
    plan = transform.plan_transform(psi, phi)
    order = list(range(len(plan.steps)))
    rnd.shuffle(order)
    a = transform.execute_plan(psi, plan).total_probability
    b = transform.execute_plan(psi, plan, order=order).total_probability
    assert rel(b, a) < 1e-12


@given(transform_pairs())
def test_back_substitution_residual(pair):
    psi, phi = pair
    c = transform.solve_coefficients(psi, phi)
    assert np.max(np.abs(transform.system_matrix(psi) @ c - phi.amps)) < 1e-10
