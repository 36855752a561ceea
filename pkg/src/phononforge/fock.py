"""Truncated Fock-space states and ladder operators.

Conventions used across the package:

* ``b|n> = sqrt(n)|n-1>``; operators are dense ``numpy`` arrays.
* Quadratures are ``X_phi = (b e^{-i phi} + b^dag e^{i phi}) / sqrt(2)`` so the
  vacuum variance of any quadrature is 1/2.
* Phase-space amplitude ``alpha = (x + i p) / sqrt(2)``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np
from scipy.linalg import expm

from .errors import InvalidDimensionError, InvalidParameterError, TruncationError

NORM_TOL = 1e-12
MEAN_DEGENERACY_TOL = 1e-12
# occupation allowed in the top GUARD_LEVELS before raising operators are applied
GUARD_LEVELS = 2
GUARD_TOL = 1e-10


@dataclass(frozen=True)
class PureState:
    """Amplitudes over Fock levels ``0..dim-1`` (not necessarily normalized)."""

    amps: np.ndarray

    def __post_init__(self):
        amps = np.array(self.amps, dtype=np.complex128).reshape(-1)
        if amps.size < 1:
            raise InvalidDimensionError("a state needs at least one Fock level")
        if not np.all(np.isfinite(amps)):
            raise InvalidParameterError("state amplitudes must be finite")
        amps.setflags(write=False)
        object.__setattr__(self, "amps", amps)

    @property
    def dim(self) -> int:
        return self.amps.size

    @classmethod
    def fock(cls, n: int, dim: int) -> "PureState":
        if dim < 1:
            raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
        if not 0 <= n < dim:
            raise InvalidDimensionError(f"Fock level {n} outside 0..{dim - 1}")
        amps = np.zeros(dim, dtype=np.complex128)
        amps[n] = 1.0
        return cls(amps)

    @property
    def norm_sq(self) -> float:
        return float(np.vdot(self.amps, self.amps).real)

    def is_normalized(self, tol: float = NORM_TOL) -> bool:
        return abs(self.norm_sq - 1.0) < tol

    def normalized(self) -> "PureState":
        n2 = self.norm_sq
        if n2 == 0.0:
            raise InvalidParameterError("cannot normalize the zero vector")
        return PureState(self.amps / math.sqrt(n2))

    def resized(self, dim: int) -> "PureState":
        """Zero-pad or cut to ``dim`` levels. Cutting discards amplitudes."""
        if dim < 1:
            raise InvalidDimensionError(f"dim must be >= 1, got {dim}")
        out = np.zeros(dim, dtype=np.complex128)
        k = min(dim, self.dim)
        out[:k] = self.amps[:k]
        return PureState(out)

    def top_level(self, tol: float = 1e-12) -> int:
        """Index of the highest level with ``|amp| > tol`` (-1 for the zero vector)."""
        idx = np.nonzero(np.abs(self.amps) > tol)[0]
        return int(idx[-1]) if idx.size else -1


@dataclass(frozen=True)
class GaussianSpec:
    displacement: complex = 0j
    squeeze_magnitude: float = 0.0
    squeeze_angle: float = 0.0

    def __post_init__(self):
        if self.squeeze_magnitude < 0:
            raise InvalidParameterError("squeeze_magnitude must be >= 0")


class MeanAngle(NamedTuple):
    angle: float
    degenerate: bool


def _check_dim(dim: int, minimum: int = 1) -> None:
    if int(dim) != dim or dim < minimum:
        raise InvalidDimensionError(f"dim must be an integer >= {minimum}, got {dim}")


def annihilation_op(dim: int) -> np.ndarray:
    _check_dim(dim)
    return np.diag(np.sqrt(np.arange(1, dim, dtype=float)), k=1).astype(np.complex128)


def creation_op(dim: int) -> np.ndarray:
    _check_dim(dim, 2)
    return annihilation_op(dim).conj().T


def number_op(dim: int) -> np.ndarray:
    _check_dim(dim)
    return np.diag(np.arange(dim, dtype=float)).astype(np.complex128)


def identity_op(dim: int) -> np.ndarray:
    _check_dim(dim)
    return np.eye(dim, dtype=np.complex128)


def parity_op(dim: int) -> np.ndarray:
    _check_dim(dim)
    return np.diag((-1.0) ** np.arange(dim)).astype(np.complex128)


def quadrature_op(dim: int, angle: float) -> np.ndarray:
    """``X_phi = (b e^{-i phi} + b^dag e^{i phi}) / sqrt(2)``, Hermitian exactly."""
    _check_dim(dim, 2)
    half = annihilation_op(dim) * np.exp(-1j * angle) / math.sqrt(2)
    # build from one triangle so X == X^dag bitwise
    return half + half.conj().T


def displacement_op(dim: int, alpha: complex) -> np.ndarray:
    _check_dim(dim)
    b = annihilation_op(dim)
    return expm(alpha * b.conj().T - np.conj(alpha) * b)


def squeeze_op(dim: int, magnitude: float, angle: float = 0.0) -> np.ndarray:
    """``S(z) = exp((z* b^2 - z b^dag^2) / 2)`` with ``z = magnitude e^{i angle}``."""
    _check_dim(dim)
    b = annihilation_op(dim)
    z = magnitude * np.exp(1j * angle)
    b2 = b @ b
    return expm((np.conj(z) * b2 - z * b2.conj().T) / 2)


def _as_state(state) -> PureState:
    return state if isinstance(state, PureState) else PureState(state)


def apply(op: np.ndarray, state: PureState) -> tuple[PureState, float]:
    """Return ``op|state>`` (unnormalized) and its squared norm."""
    state = _as_state(state)
    op = np.asarray(op)
    if op.ndim != 2 or op.shape[1] != state.dim:
        raise InvalidDimensionError(
            f"operator of shape {op.shape} cannot act on a dim-{state.dim} state"
        )
    out = PureState(op @ state.amps)
    return out, out.norm_sq


def overlap(s1: PureState, s2: PureState) -> complex:
    """``<s1|s2>``."""
    s1, s2 = _as_state(s1), _as_state(s2)
    if s1.dim != s2.dim:
        raise InvalidDimensionError(f"dimension mismatch: {s1.dim} vs {s2.dim}")
    return complex(np.vdot(s1.amps, s2.amps))


def fidelity(s1: PureState, s2: PureState) -> float:
    """``|<s1|s2>|^2`` after normalizing both states."""
    s1, s2 = _as_state(s1), _as_state(s2)
    return abs(overlap(s1, s2)) ** 2 / (s1.norm_sq * s2.norm_sq)


def expectation(op: np.ndarray, state: PureState) -> complex:
    state = _as_state(state)
    out, _ = apply(op, state)
    return complex(np.vdot(state.amps, out.amps))


def top_occupation(state: PureState, k: int) -> float:
    """Probability held by the top ``k`` levels."""
    state = _as_state(state)
    if k <= 0:
        return 0.0
    tail = state.amps[-k:]
    return float(np.vdot(tail, tail).real)


def check_guard_band(state: PureState, tol: float = GUARD_TOL) -> None:
    """Refuse states that a creation operator would push past the cutoff."""
    occ = top_occupation(state, GUARD_LEVELS)
    if occ >= tol:
        raise TruncationError(
            f"top {GUARD_LEVELS} levels hold probability {occ:.3e} >= {tol:.0e}; "
            f"embed the state in a larger dimension (at least {state.dim + GUARD_LEVELS})",
            required_dim=state.dim + GUARD_LEVELS,
        )


def mean_amplitude(state: PureState) -> complex:
    """``<b>`` evaluated inside the truncation."""
    a = _as_state(state).amps
    if a.size < 2:
        return 0j
    return complex(np.sum(np.conj(a[:-1]) * a[1:] * np.sqrt(np.arange(1, a.size))))


def mean_angle(state: PureState) -> MeanAngle:
    """Phase of ``<b>``; degenerate (angle 0) when ``|<b>| < 1e-12``."""
    beta = mean_amplitude(state)
    if abs(beta) < MEAN_DEGENERACY_TOL:
        return MeanAngle(0.0, True)
    return MeanAngle(math.atan2(beta.imag, beta.real), False)


def _working_dim(spec: GaussianSpec, dim: int) -> int:
    nbar = abs(spec.displacement) ** 2 + math.sinh(spec.squeeze_magnitude) ** 2
    spread = math.sqrt(nbar + 1) * (abs(spec.displacement) + math.exp(spec.squeeze_magnitude))
    return max(2 * dim, dim + 40, int(math.ceil(nbar + 12 * spread + 40)))


def _gaussian_amplitudes(spec: GaussianSpec, dim: int) -> np.ndarray:
    """Amplitudes of ``D S |0>`` in a working space comfortably beyond ``dim``."""
    work = _working_dim(spec, dim)
    for _ in range(6):
        vac = np.zeros(work, dtype=np.complex128)
        vac[0] = 1.0
        vec = squeeze_op(work, spec.squeeze_magnitude, spec.squeeze_angle) @ vac
        vec = displacement_op(work, spec.displacement) @ vec
        tail = vec[-GUARD_LEVELS * 4:]
        if np.vdot(tail, tail).real < 1e-28:
            return vec
        work *= 2
    raise TruncationError(f"Gaussian state {spec} does not converge within {work} levels")


def _tail_mass(vec: np.ndarray) -> np.ndarray:
    """``tail[k]`` = probability held in levels ``>= k``."""
    p = np.abs(vec) ** 2
    return np.cumsum(p[::-1])[::-1]


def gaussian_leakage(spec: GaussianSpec, dim: int) -> float:
    """Probability of ``D S |0>`` in the guard band and beyond for cutoff ``dim``."""
    _check_dim(dim)
    vec = _gaussian_amplitudes(spec, dim)
    return float(_tail_mass(vec)[max(dim - GUARD_LEVELS, 0)])


def gaussian_state(spec: GaussianSpec, dim: int, tol: float = GUARD_TOL) -> PureState:
    """Normalized truncation of ``D(alpha) S(z) |0>``.

    The state is built in a larger working space and cut to ``dim`` levels.
    Raises ``TruncationError`` (carrying ``required_dim``) when the probability
    left in the top guard levels and beyond is ``>= tol``.
    """
    _check_dim(dim)
    vec = _gaussian_amplitudes(spec, dim)
    tail = _tail_mass(vec)
    leak = float(tail[max(dim - GUARD_LEVELS, 0)])
    if leak >= tol:
        need = int(np.argmax(tail < tol)) + GUARD_LEVELS
        raise TruncationError(
            f"Gaussian state leaks {leak:.3e} into the guard band at dim={dim}; "
            f"need dim >= {need}",
            required_dim=need,
        )
    return PureState(vec[:dim]).normalized()


def random_state(rng: np.random.Generator, dim: int, support: int | None = None) -> PureState:
    """Normalized state with complex Gaussian amplitudes on levels ``0..support-1``."""
    _check_dim(dim)
    support = dim if support is None else support
    if not 1 <= support <= dim:
        raise InvalidDimensionError(f"support {support} outside 1..{dim}")
    amps = np.zeros(dim, dtype=np.complex128)
    amps[:support] = rng.normal(size=support) + 1j * rng.normal(size=support)
    return PureState(amps).normalized()
