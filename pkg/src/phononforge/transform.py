"""Arbitrary pure-state transformation by repeated identity+subtraction heralds.

A known state ``psi`` with support on ``0..N`` is mapped onto a target ``phi``
by ``Phi = sum_i C_i b^i``. The coefficients follow from a triangular linear
system; ``Phi`` is then factored into commuting steps ``(mu_j + nu_j b)/sqrt(2)``
through the roots of ``sum_i C_i x^i``, each step being one heralded operation.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import mpmath
import numpy as np

from . import fock
from .errors import (
    HeraldingImpossibleError,
    InvalidDimensionError,
    InvalidParameterError,
    NumericalError,
    UnsolvableError,
)
from .fock import PureState
from .polyroots import find_roots, sort_roots

TOP_AMP_TOL = 1e-12
SOLVE_RESIDUAL_TOL = 1e-10
TRIM_TOL = 1e-12
EXPANSION_TOL = 1e-9
STEP_FLOOR = 1e-14
EXTENDED_DPS = 50
NORMALIZATIONS = ("unit_identity", "unit_max")


@dataclass(frozen=True)
class TransformPlan:
    degree: int
    coeffs: np.ndarray
    steps: list[tuple[complex, complex]]
    scale: complex
    predicted_probability: float | None = None
    root_method: str = "aberth"

    def expanded(self) -> np.ndarray:
        """``scale * prod(mu_j + nu_j x) / sqrt(2)^len(steps)`` as ascending coefficients."""
        poly = np.array([1.0 + 0j])
        for mu, nu in self.steps:
            poly = np.convolve(poly, [mu, nu])
        return self.scale * poly / math.sqrt(2) ** len(self.steps)

    def expansion_error(self) -> float:
        """Max coefficient error of the re-expanded product, relative to ``max|C|``."""
        exp = self.expanded()
        ref = np.zeros(max(exp.size, self.coeffs.size), dtype=np.complex128)
        ref[: self.coeffs.size] = self.coeffs
        got = np.zeros_like(ref)
        got[: exp.size] = exp
        return float(np.max(np.abs(got - ref)) / np.max(np.abs(self.coeffs)))


@dataclass(frozen=True)
class ExecutionTrace:
    per_step: list[tuple[PureState, float]]
    total_probability: float
    final_fidelity: float | None = None
    order: tuple[int, ...] = field(default_factory=tuple)

    @property
    def final_state(self) -> PureState:
        return self.per_step[-1][0]


def sqrt_factorial_ratios(N: int) -> np.ndarray:
    """``R[n, i] = sqrt((i+n)!/n!)`` for ``i + n <= N`` (zero elsewhere).

    Built from running products of square roots so nothing overflows.
    """
    out = np.zeros((N + 1, N + 1))
    roots = np.sqrt(np.arange(N + 1, dtype=float))
    for n in range(N + 1):
        out[n, 0] = 1.0
        for i in range(1, N - n + 1):
            out[n, i] = out[n, i - 1] * roots[n + i]
    return out


def system_matrix(psi: PureState) -> np.ndarray:
    """``M[n, i] = psi_{i+n} sqrt((i+n)!/n!)`` so that ``(Phi psi)_n = sum_i M[n, i] C_i``."""
    N = psi.dim - 1
    ratios = sqrt_factorial_ratios(N)
    m = np.zeros((N + 1, N + 1), dtype=np.complex128)
    for n in range(N + 1):
        i = np.arange(N - n + 1)
        m[n, i] = psi.amps[i + n] * ratios[n, i]
    return m


def solve_coefficients(psi: PureState, phi: PureState) -> np.ndarray:
    """Coefficients ``C_0..C_N`` with ``sum_i C_i b^i psi = phi`` by back-substitution."""
    if psi.dim != phi.dim:
        raise InvalidDimensionError(f"psi has dim {psi.dim}, phi has dim {phi.dim}")
    N = psi.dim - 1
    top = psi.amps[N]
    if abs(top) <= TOP_AMP_TOL:
        raise UnsolvableError(
            f"|psi_N| = {abs(top):.3e} at N={N}: the system is singular; "
            "use dimension_match to bring psi's top level to N first"
        )
    m = system_matrix(psi)
    c = np.zeros(N + 1, dtype=np.complex128)
    for n in range(N, -1, -1):
        k = N - n  # the unknown introduced by this row
        acc = np.dot(m[n, :k], c[:k])
        c[k] = (phi.amps[n] - acc) / m[n, k]
    residual = np.max(np.abs(m @ c - phi.amps))
    if residual > SOLVE_RESIDUAL_TOL:
        raise NumericalError(f"back-substitution residual {residual:.3e} exceeds {SOLVE_RESIDUAL_TOL}")
    return c


def _trim(coeffs: np.ndarray) -> np.ndarray:
    scale = np.max(np.abs(coeffs))
    keep = np.nonzero(np.abs(coeffs) >= TRIM_TOL * scale)[0]
    return coeffs[: keep[-1] + 1]


def factor_plan(
    coeffs,
    normalization: str = "unit_identity",
    seed: int = 0,
    psi: PureState | None = None,
    pad_to: int | None = None,
) -> TransformPlan:
    """Factor ``sum_i C_i b^i`` into steps ``(mu_j + nu_j b)/sqrt(2)``.

    Each nonzero root ``x_j`` of the polynomial gives ``(1, -1/x_j)`` and each
    zero root gives ``(0, 1)``. ``unit_max`` rescales every step so that
    ``max(|mu|, |nu|) = 1``. ``pad_to`` appends identity steps ``(1, 0)``.
    When ``psi`` is given the formula-based success probability is attached.
    """
    if normalization not in NORMALIZATIONS:
        raise InvalidParameterError(f"normalization must be one of {NORMALIZATIONS}")
    c = np.asarray(coeffs, dtype=np.complex128)
    if c.size == 0 or not np.any(c != 0):
        raise InvalidParameterError("coefficients are all zero")
    c_full = c
    c = _trim(c)
    degree = c.size - 1

    # leading near-zero coefficients are exact zero roots
    small = np.abs(c) < TRIM_TOL * np.max(np.abs(c))
    n_zero = int(np.argmax(~small))
    nonzero, method = find_roots(c[n_zero:], seed=seed)
    roots = sort_roots(np.concatenate((np.zeros(n_zero, dtype=np.complex128), nonzero)))

    steps = []
    for x in roots:
        mu, nu = (0j, 1 + 0j) if x == 0 else (1 + 0j, -1 / x)
        if normalization == "unit_max":
            s = max(abs(mu), abs(nu))
            mu, nu = mu / s, nu / s
        steps.append((complex(mu), complex(nu)))
    if pad_to is not None:
        if pad_to < degree:
            raise InvalidParameterError(f"pad_to={pad_to} is below the degree {degree}")
        steps += [(1 + 0j, 0j)] * (pad_to - degree)

    unscaled = TransformPlan(degree, c_full, steps, 1.0).expanded()
    ref = np.zeros(max(unscaled.size, c_full.size), dtype=np.complex128)
    ref[: c_full.size] = c_full
    basis = np.zeros_like(ref)
    basis[: unscaled.size] = unscaled
    scale = complex(np.vdot(basis, ref) / np.vdot(basis, basis))

    plan = TransformPlan(degree, c_full, steps, scale, root_method=method)
    err = plan.expansion_error()
    if err >= EXPANSION_TOL:
        raise NumericalError(
            f"factorization re-expands with relative error {err:.3e} "
            f"(root method {method}, degree {degree})"
        )
    if psi is not None:
        plan = TransformPlan(degree, c_full, steps, scale, predicted_success(psi, plan), method)
    return plan


def step_op(dim: int, mu: complex, nu: complex) -> np.ndarray:
    return (mu * np.eye(dim) + nu * fock.annihilation_op(dim)) / math.sqrt(2)


def execute_plan(
    psi: PureState,
    plan: TransformPlan,
    target: PureState | None = None,
    order=None,
) -> ExecutionTrace:
    """Apply the plan's steps one herald at a time, renormalizing after each.

    ``order`` permutes the steps; the factors commute so only the per-step
    probabilities change.
    """
    if not psi.is_normalized():
        raise InvalidParameterError("input state is not normalized")
    order = tuple(range(len(plan.steps))) if order is None else tuple(order)
    if sorted(order) != list(range(len(plan.steps))):
        raise InvalidParameterError(f"order {order} is not a permutation of the steps")
    # factors that nearly annihilate the state cancel catastrophically in doubles;
    # the chain runs at EXTENDED_DPS digits so probabilities do not depend on order
    per_step = []
    with mpmath.workdps(EXTENDED_DPS):
        sqrt_n = [mpmath.sqrt(n) for n in range(psi.dim)]
        vec = [mpmath.mpc(complex(a)) for a in psi.amps]
        prev = _mp_norm_sq(vec)
        initial = prev
        for j in order:
            mu, nu = (mpmath.mpc(v) for v in plan.steps[j])
            vec = [
                (mu * vec[n] + (nu * sqrt_n[n + 1] * vec[n + 1] if n + 1 < len(vec) else 0))
                / mpmath.sqrt(2)
                for n in range(len(vec))
            ]
            norm_sq = _mp_norm_sq(vec)
            p = float(norm_sq / prev)
            if p < STEP_FLOOR:
                raise HeraldingImpossibleError(f"step {j} annihilates the state (p={p:.3e})")
            scale = mpmath.sqrt(norm_sq)
            per_step.append((PureState(np.array([complex(v / scale) for v in vec])), p))
            prev = norm_sq
        total = float(prev / initial)
    state = per_step[-1][0] if per_step else psi
    fid = fock.fidelity(target, state) if target is not None else None
    return ExecutionTrace(per_step, total, fid, order)


def _mp_norm_sq(vec):
    return mpmath.fsum(v.real**2 + v.imag**2 for v in vec)


def predicted_success(psi: PureState, plan: TransformPlan) -> float:
    """``prod_j (|nu_j|^2 <n>_j + |mu_j|^2) / 2`` with ``<n>_j`` taken before step ``j``.

    Exact only when every intermediate state has ``<b> = 0``; the cross term
    ``Re(mu* nu <b>)`` is otherwise ignored. ``execute_plan`` gives the exact value.
    """
    num = fock.number_op(psi.dim)
    state = psi
    total = 1.0
    for mu, nu in plan.steps:
        nbar = fock.expectation(num, state).real
        total *= (abs(nu) ** 2 * nbar + abs(mu) ** 2) / 2
        out, p = fock.apply(step_op(psi.dim, mu, nu), state)
        if p < STEP_FLOOR:
            break
        state = PureState(out.amps / math.sqrt(p))
    return float(total)


def dimension_match(psi: PureState, target_dim: int) -> tuple[PureState, list[str]]:
    """Raise (``b^dag``) or lower (``b``) ``psi`` until its top level is ``target_dim - 1``.

    The result lives in ``target_dim`` levels. Lowering the vacuum raises
    ``HeraldingImpossibleError``.
    """
    if target_dim < 0:
        raise InvalidDimensionError(f"target_dim must be >= 0, got {target_dim}")
    if not psi.is_normalized():
        raise InvalidParameterError("input state is not normalized")
    work = max(psi.dim, target_dim) + 1
    state = psi.resized(work)
    ops: list[str] = []
    b = fock.annihilation_op(work)
    while state.top_level() < target_dim - 1:
        out, p = fock.apply(b.conj().T, state)
        state = PureState(out.amps / math.sqrt(p))
        ops.append("create")
    while state.top_level() > target_dim - 1:
        out, p = fock.apply(b, state)
        if p < STEP_FLOOR:
            raise HeraldingImpossibleError("annihilation removes the whole state")
        state = PureState(out.amps / math.sqrt(p))
        ops.append("annihilate")
    return state.resized(max(target_dim, 1)), ops


def plan_transform(
    psi: PureState, phi: PureState, normalization: str = "unit_identity", seed: int = 0
) -> TransformPlan:
    """Solve, factor and attach the predicted success probability."""
    coeffs = solve_coefficients(psi, phi)
    return factor_plan(coeffs, normalization, seed=seed, psi=psi)
