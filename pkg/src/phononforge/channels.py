"""Heralded measurement operators acting on a single bosonic mode.

The general operator is

    Y_h = (theta_half * b e^{-i phi} + r * b^dag e^{i varphi} + mu) / sqrt(2)

and the v-port variant flips the sign of ``mu``. The orthogonalizer is the
special case ``mu = 0``, ``theta_half = r`` and ``phi = varphi`` set a quarter
turn past the phase of ``<b>``, which makes it a quadrature whose expectation
in the input state vanishes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, replace
from enum import Enum

import numpy as np

from . import fock
from .errors import HeraldingImpossibleError, InvalidParameterError
from .fock import PureState

WEAK_DRIVE_WARN = 0.5
WEAK_DRIVE_MAX = 1.0
HERALD_FLOOR = 1e-14


class Detection(str, Enum):
    H = "h"
    V = "v"


class WeakDriveWarning(UserWarning):
    pass


@dataclass(frozen=True)
class HeraldSpec:
    theta_half: float = 0.0
    r: float = 0.0
    mu: complex = 0j
    phi: float = 0.0
    varphi: float = 0.0
    detection: Detection = Detection.H

    def __post_init__(self):
        object.__setattr__(self, "detection", Detection(self.detection))
        object.__setattr__(self, "mu", complex(self.mu))
        for name in ("theta_half", "r"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise InvalidParameterError(f"{name} must be finite and >= 0, got {value}")
            if value > WEAK_DRIVE_MAX:
                raise InvalidParameterError(
                    f"{name}={value} exceeds the weak-drive limit {WEAK_DRIVE_MAX}"
                )
            if value > WEAK_DRIVE_WARN:
                warnings.warn(
                    f"{name}={value} is above {WEAK_DRIVE_WARN}; multi-photon "
                    "scattering is no longer negligible",
                    WeakDriveWarning,
                    stacklevel=3,
                )

    @property
    def identity_weight(self) -> complex:
        return -self.mu if self.detection is Detection.V else self.mu


@dataclass(frozen=True)
class HeraldOutcome:
    state: PureState
    probability: float


def herald_op(dim: int, spec: HeraldSpec) -> np.ndarray:
    b = fock.annihilation_op(dim)
    bd = fock.creation_op(dim)
    op = (
        spec.theta_half * np.exp(-1j * spec.phi) * b
        + spec.r * np.exp(1j * spec.varphi) * bd
        + spec.identity_weight * np.eye(dim)
    )
    return op / math.sqrt(2)


def orthogonalizer_spec(state: PureState, r_scale: float, mu: complex = 0j) -> HeraldSpec:
    """Herald parameters that orthogonalize ``state`` (plus an optional identity weight)."""
    angle = fock.mean_angle(state).angle + math.pi / 2
    return HeraldSpec(theta_half=r_scale, r=r_scale, mu=mu, phi=angle, varphi=angle)


def orthogonalizer(state: PureState, r_scale: float) -> np.ndarray:
    """``r_scale * X_{theta + pi/2}`` where ``theta`` is the phase of ``<b>``.

    States with a vanishing mean use ``theta = 0``; any quadrature works for them.
    """
    return herald_op(state.dim, orthogonalizer_spec(state, r_scale))


def _require_normalized(state: PureState) -> None:
    if not state.is_normalized():
        raise InvalidParameterError(f"input state is not normalized (norm^2={state.norm_sq!r})")


def _herald(op: np.ndarray, state: PureState, raises: bool) -> HeraldOutcome:
    _require_normalized(state)
    if raises:
        fock.check_guard_band(state)
    out, p = fock.apply(op, state)
    if p < HERALD_FLOOR:
        raise HeraldingImpossibleError(
            f"conditional state has squared norm {p:.3e} < {HERALD_FLOOR:.0e}"
        )
    return HeraldOutcome(PureState(out.amps / math.sqrt(p)), p)


def apply_herald(state: PureState, spec: HeraldSpec) -> HeraldOutcome:
    """Condition ``state`` on a click described by ``spec``."""
    return _herald(herald_op(state.dim, spec), state, raises=spec.r != 0)


def displaced_ladder_orthogonalize(state: PureState, which: str) -> HeraldOutcome:
    """Apply ``b - beta`` (``which='sub'``) or ``b^dag - beta*`` (``'add'``) with ``beta = <b>``."""
    _require_normalized(state)
    beta = fock.mean_amplitude(state)
    eye = np.eye(state.dim)
    if which == "sub":
        op = fock.annihilation_op(state.dim) - beta * eye
    elif which == "add":
        op = fock.creation_op(state.dim) - np.conj(beta) * eye
    else:
        raise InvalidParameterError(f"which must be 'sub' or 'add', got {which!r}")
    return _herald(op, state, raises=which == "add")


def qubit_synthesis(state: PureState, weight_mu: complex, r_scale: float) -> HeraldOutcome:
    """Apply ``mu/sqrt(2) + Y_perp``: a superposition of ``state`` and an orthogonal partner."""
    _require_normalized(state)
    return apply_herald(state, orthogonalizer_spec(state, r_scale, mu=weight_mu))


def with_detection(spec: HeraldSpec, detection: str) -> HeraldSpec:
    return replace(spec, detection=Detection(detection))
