"""Simultaneous-iteration polynomial root finder (Aberth-Ehrlich).

Coefficients are given in ascending order, ``c[0] + c[1] x + ... + c[n] x^n``.
"""

from __future__ import annotations

import math

import numpy as np

from .errors import ConvergenceError, InvalidParameterError

ROOT_TOL = 1e-13
MAX_ITER = 500


def polyval(coeffs: np.ndarray, z: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Horner evaluation of ``p(z)`` and ``p'(z)`` (ascending coefficients)."""
    p = np.zeros_like(z, dtype=np.complex128)
    dp = np.zeros_like(z, dtype=np.complex128)
    for c in coeffs[::-1]:
        dp = dp * z + p
        p = p * z + c
    return p, dp


def expand(roots, leading: complex = 1.0) -> np.ndarray:
    """Ascending coefficients of ``leading * prod(x - r)``."""
    out = np.array([leading], dtype=np.complex128)
    for r in roots:
        out = np.concatenate(([0.0], out)) - r * np.concatenate((out, [0.0]))
    return out


def aberth(coeffs, seed: int = 0, tol: float = ROOT_TOL, max_iter: int = MAX_ITER) -> np.ndarray:
    """Roots of a polynomial with nonzero leading coefficient.

    Starting points sit on a circle of radius ``1 + max|c_i / c_n|`` with a
    seeded random rotation and jitter. Raises ``ConvergenceError`` when the
    largest relative correction is still above ``tol`` after ``max_iter`` sweeps.
    """
    c = np.asarray(coeffs, dtype=np.complex128)
    n = c.size - 1
    if n < 1:
        return np.zeros(0, dtype=np.complex128)
    if c[-1] == 0:
        raise InvalidParameterError("leading coefficient must be nonzero")
    c = c / c[-1]
    if n == 1:
        return np.array([-c[0]])

    rng = np.random.default_rng(seed)
    radius = 1.0 + float(np.max(np.abs(c[:-1])))
    angles = 2 * np.pi * np.arange(n) / n + rng.uniform(0, 2 * np.pi)
    angles = angles + rng.uniform(-0.25, 0.25, size=n) * (2 * np.pi / n)
    z = radius * np.exp(1j * angles)

    off_diag = ~np.eye(n, dtype=bool)
    correction = np.inf
    for it in range(1, max_iter + 1):
        p, dp = polyval(c, z)
        diff = z[:, None] - z[None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            repulsion = np.where(off_diag, 1.0 / np.where(off_diag, diff, 1.0), 0.0).sum(axis=1)
            newton = p / dp
            step = newton / (1.0 - newton * repulsion)
        step = np.where(p == 0, 0.0, step)
        if not np.all(np.isfinite(step)):
            raise ConvergenceError("Aberth iteration produced a non-finite step", it, math.inf)
        z = z - step
        correction = float(np.max(np.abs(step) / np.maximum(1.0, np.abs(z))))
        if correction < tol:
            return z
    raise ConvergenceError(
        f"Aberth iteration did not converge in {max_iter} sweeps "
        f"(last relative correction {correction:.3e})",
        max_iter,
        correction,
    )


def companion_roots(coeffs) -> np.ndarray:
    c = np.asarray(coeffs, dtype=np.complex128)
    n = c.size - 1
    if n < 1:
        return np.zeros(0, dtype=np.complex128)
    comp = np.zeros((n, n), dtype=np.complex128)
    comp[1:, :-1] = np.eye(n - 1)
    comp[:, -1] = -c[:-1] / c[-1]
    return np.linalg.eigvals(comp)


def find_roots(coeffs, seed: int = 0) -> tuple[np.ndarray, str]:
    """Roots plus the method used (``'aberth'`` or ``'companion'``)."""
    try:
        return aberth(coeffs, seed=seed), "aberth"
    except ConvergenceError:
        return companion_roots(coeffs), "companion"


def sort_roots(roots, rel_tol: float = 1e-9) -> np.ndarray:
    """Ascending modulus; roots of (relatively) equal modulus by ascending argument."""
    roots = np.asarray(roots, dtype=np.complex128)
    if roots.size == 0:
        return roots
    mods = np.abs(roots)
    args = np.angle(roots)
    args = np.where(args <= -np.pi + 1e-12, np.pi, args)
    order = np.argsort(mods, kind="stable")
    scale = max(float(mods.max()), 1e-300)
    groups, current = [], [order[0]]
    for idx in order[1:]:
        if mods[idx] - mods[current[-1]] <= rel_tol * scale:
            current.append(idx)
        else:
            groups.append(current)
            current = [idx]
    groups.append(current)
    out = [i for g in groups for i in sorted(g, key=lambda k: args[k])]
    return roots[out]
