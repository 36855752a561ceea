"""Exact small-system oracles for the physical realizations of the herald operators.

Two schemes are modelled by exponentiating their interaction exactly and
projecting the ancilla onto the heralding outcome:

* a qubit coupled to the oscillator by a Jaynes-Cummings interaction, measured
  in the basis orthogonal to its input;
* two orthogonally polarized cavity modes (``a_h``, ``a_v``) coupled to the
  mechanical mode ``b``, followed by a polarization-mixing wave plate and
  single-photon detection.

Composite spaces are ordered with the leftmost factor varying slowest; the
optomechanical space is ``a_h (x) a_v (x) b``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np
from scipy.linalg import expm

from . import fock
from .channels import HeraldSpec, herald_op, with_detection
from .errors import InvalidDimensionError, InvalidParameterError
from .fock import PureState

MAX_OPTOMECH_PARAM = 0.1


@dataclass(frozen=True)
class QubitAmplitudes:
    A: complex
    B: complex

    def __post_init__(self):
        object.__setattr__(self, "A", complex(self.A))
        object.__setattr__(self, "B", complex(self.B))
        norm = abs(self.A) ** 2 + abs(self.B) ** 2
        if abs(norm - 1.0) > 1e-12:
            raise InvalidParameterError(f"|A|^2 + |B|^2 = {norm!r}, expected 1")


@dataclass(frozen=True)
class CompositeSpace:
    factor_dims: tuple[int, ...]

    def __post_init__(self):
        dims = tuple(int(d) for d in self.factor_dims)
        if not dims or min(dims) < 1:
            raise InvalidDimensionError(f"factor dims must be positive, got {dims}")
        object.__setattr__(self, "factor_dims", dims)

    @property
    def total_dim(self) -> int:
        return math.prod(self.factor_dims)

    def embed(self, op: np.ndarray, position: int) -> np.ndarray:
        """Lift a single-factor operator to the full space."""
        mats = [np.eye(d, dtype=np.complex128) for d in self.factor_dims]
        if op.shape != mats[position].shape:
            raise InvalidDimensionError(
                f"operator shape {op.shape} does not fit factor {position}"
            )
        mats[position] = op
        return reduce(np.kron, mats)

    def index(self, *levels: int) -> int:
        return int(np.ravel_multi_index(levels, self.factor_dims))


# qubit basis: index 0 = |g>, 1 = |e>
SIGMA_PLUS = np.array([[0, 0], [1, 0]], dtype=np.complex128)


def jc_unitary(omega_tau: float, dim: int) -> np.ndarray:
    """``exp(-i H tau)`` for ``H = -i Omega (b sigma_+ - b^dag sigma_-)`` on qubit (x) oscillator."""
    space = CompositeSpace((2, dim))
    coupling = space.embed(SIGMA_PLUS, 0) @ space.embed(fock.annihilation_op(dim), 1)
    return expm(-omega_tau * (coupling - coupling.conj().T))


def jc_conditional_map(q: QubitAmplitudes, omega_tau: float, dim: int) -> np.ndarray:
    """Oscillator operator heralded by finding the qubit in ``B*|g> - A*|e>``."""
    if not 0 < omega_tau <= 0.1:
        raise InvalidParameterError(f"omega_tau must lie in (0, 0.1], got {omega_tau}")
    if dim < 3:
        raise InvalidDimensionError(f"dim must be >= 3, got {dim}")
    u = jc_unitary(omega_tau, dim).reshape(2, dim, 2, dim)
    ket_in = np.array([q.A, q.B])
    bra_out = np.array([q.B, -q.A])
    return np.einsum("i,iajb,j->ab", bra_out, u, ket_in)


def jc_target(q: QubitAmplitudes, omega_tau: float, dim: int) -> np.ndarray:
    """First-order prediction ``Omega tau (A^2 b + B^2 b^dag)``."""
    b = fock.annihilation_op(dim)
    return omega_tau * (q.A**2 * b + q.B**2 * b.conj().T)


def _check_optomech(spec: HeraldSpec, optical_dim: int, mech_dim: int) -> None:
    if optical_dim < 3:
        raise InvalidDimensionError(f"optical_dim must be >= 3, got {optical_dim}")
    if mech_dim < 2:
        raise InvalidDimensionError(f"mech_dim must be >= 2, got {mech_dim}")
    for name, value in (("theta_half", spec.theta_half), ("r", spec.r), ("|mu|", abs(spec.mu))):
        if value > MAX_OPTOMECH_PARAM:
            raise InvalidParameterError(
                f"{name}={value} exceeds {MAX_OPTOMECH_PARAM}; the oracle targets the weak-drive regime"
            )


def optomech_unitary(spec: HeraldSpec, optical_dim: int, mech_dim: int) -> np.ndarray:
    """``exp(K - K^dag)`` with ``K = theta a_h^dag b e^{-i phi} - r a_v^dag b^dag e^{i varphi} + mu a_h^dag``.

    Its first-order expansion is the effective unitary of the pulsed interaction
    plus the weak displacement on the h mode.
    """
    _check_optomech(spec, optical_dim, mech_dim)
    space = CompositeSpace((optical_dim, optical_dim, mech_dim))
    ad = fock.creation_op(optical_dim)
    ah_d = space.embed(ad, 0)
    av_d = space.embed(ad, 1)
    b = space.embed(fock.annihilation_op(mech_dim), 2)
    k = (
        spec.theta_half * np.exp(-1j * spec.phi) * ah_d @ b
        - spec.r * np.exp(1j * spec.varphi) * av_d @ b.conj().T
        + spec.mu * ah_d
    )
    return expm(k - k.conj().T)


def _optical_blocks(spec: HeraldSpec, optical_dim: int, mech_dim: int) -> np.ndarray:
    """``blocks[nh, nv]`` = mechanical operator ``<nh, nv| U |0, 0>``."""
    u = optomech_unitary(spec, optical_dim, mech_dim)
    u = u.reshape(optical_dim, optical_dim, mech_dim, optical_dim, optical_dim, mech_dim)
    return u[:, :, :, 0, 0, :]


def _wave_plate(c_h: np.ndarray, c_v: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    # a_h^dag -> (a_h^dag + a_v^dag)/sqrt2, a_v^dag -> (a_v^dag - a_h^dag)/sqrt2 on the
    # single-photon sector; photon number is conserved so other sectors are untouched
    s = math.sqrt(2)
    return (c_h - c_v) / s, (c_h + c_v) / s


def optomech_conditional_map(
    spec: HeraldSpec, optical_dim: int = 3, mech_dim: int = 8, port: str = "h"
) -> np.ndarray:
    """Mechanical operator heralded by one photon in ``port`` and none in the other.

    ``port`` is the detector after the wave plate: ``'h'`` projects onto
    ``<1_h, 0_v|`` and ``'v'`` onto ``<0_h, 1_v|``.
    """
    blocks = _optical_blocks(spec, optical_dim, mech_dim)
    h_out, v_out = _wave_plate(blocks[1, 0], blocks[0, 1])
    if port == "h":
        return h_out
    if port == "v":
        return v_out
    raise InvalidParameterError(f"port must be 'h' or 'v', got {port!r}")


def v_port_first_order(spec: HeraldSpec, mech_dim: int) -> np.ndarray:
    """First-order v-port operator implied by the wave plate: the ``b^dag`` term changes sign.

    ``(theta b e^{-i phi} - r b^dag e^{i varphi} + mu) / sqrt(2)``
    """
    flipped = HeraldSpec(
        theta_half=spec.theta_half, r=0.0, mu=spec.mu, phi=spec.phi, varphi=spec.varphi
    )
    bd = fock.creation_op(mech_dim)
    return herald_op(mech_dim, flipped) - spec.r * np.exp(1j * spec.varphi) * bd / math.sqrt(2)


def outcome_probabilities(
    spec: HeraldSpec, optical_dim: int, mech_dim: int, probe: PureState
) -> dict[str, float]:
    """Probabilities of no photon, one h, one v (after the wave plate), and two or more photons."""
    if probe.dim != mech_dim:
        raise InvalidDimensionError(f"probe has dim {probe.dim}, expected {mech_dim}")
    fock.check_guard_band(probe)
    blocks = _optical_blocks(spec, optical_dim, mech_dim)
    vecs = blocks @ probe.amps  # (nh, nv, mech)
    h_out, v_out = _wave_plate(vecs[1, 0], vecs[0, 1])
    nh, nv = np.meshgrid(np.arange(optical_dim), np.arange(optical_dim), indexing="ij")
    multi = (nh + nv) >= 2
    weights = np.sum(np.abs(vecs) ** 2, axis=-1)
    return {
        "0": float(weights[0, 0]),
        "1h": float(np.vdot(h_out, h_out).real),
        "1v": float(np.vdot(v_out, v_out).real),
        ">=2": float(weights[multi].sum()),
    }


def multiphoton_leakage(
    spec: HeraldSpec, optical_dim: int, mech_dim: int, probe: PureState
) -> float:
    """Probability that two or more photons leave the cavity for the given probe."""
    return outcome_probabilities(spec, optical_dim, mech_dim, probe)[">=2"]


def max_residual(a: np.ndarray, b: np.ndarray) -> float:
    return float(np.max(np.abs(a - b)))


def loglog_slope(eps: np.ndarray, values: np.ndarray) -> float:
    """Least-squares slope of ``log(values)`` against ``log(eps)``."""
    return float(np.polyfit(np.log(eps), np.log(values), 1)[0])


def symmetric_spec(eps: float, detection: str = "h") -> HeraldSpec:
    """All weights equal to ``eps`` with zero phases."""
    return with_detection(HeraldSpec(theta_half=eps, r=eps, mu=eps), detection)


def realization_check(eps_values=(1e-2, 1e-3, 1e-4), mech_dim: int = 8) -> dict:
    """Residuals of the exact oracles against the first-order operators, per ``eps``."""
    eps_arr = np.asarray(eps_values, dtype=float)
    qubit = QubitAmplitudes(1 / math.sqrt(2), 1 / math.sqrt(2))
    jc, h, v_stated, v_oracle, leak = [], [], [], [], []
    probe = PureState.fock(1, mech_dim)
    for eps in eps_arr:
        jc.append(max_residual(jc_conditional_map(qubit, eps, mech_dim), jc_target(qubit, eps, mech_dim)))
        spec = symmetric_spec(eps)
        h_map = optomech_conditional_map(spec, 3, mech_dim, "h")
        v_map = optomech_conditional_map(spec, 3, mech_dim, "v")
        h.append(max_residual(h_map, herald_op(mech_dim, spec)))
        v_stated.append(max_residual(v_map, herald_op(mech_dim, with_detection(spec, "v"))))
        v_oracle.append(max_residual(v_map, v_port_first_order(spec, mech_dim)))
        leak.append(multiphoton_leakage(spec, 3, mech_dim, probe))
    return {
        "eps": eps_arr.tolist(),
        "jc": {"residuals": jc, "slope": loglog_slope(eps_arr, np.array(jc))},
        "optomech_h": {"residuals": h, "slope": loglog_slope(eps_arr, np.array(h))},
        "optomech_v_vs_mu_flipped": {"residuals": v_stated, "relative": (np.array(v_stated) / eps_arr).tolist()},
        "optomech_v_vs_r_flipped": {"residuals": v_oracle, "slope": loglog_slope(eps_arr, np.array(v_oracle))},
        "leakage": {"values": leak, "slope": loglog_slope(eps_arr, np.array(leak))},
    }
