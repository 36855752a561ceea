"""Reproduction report: every acceptance check with its measured value and tolerance.

Each check reduces to ``error <= tolerance``. Tolerances are multiplied by the
``PHONONFORGE_TOL_SCALE`` environment variable (default 1), which exists only
to probe how close each check sits to its threshold. Informational rows are
reported but never counted as failures.
"""

from __future__ import annotations

import math
import os
from dataclasses import dataclass

import numpy as np

from . import channels, fock, realizations, transform, wigner
from .errors import HeraldingImpossibleError, TruncationError
from .feasibility import ExperimentParams, derive, drive_suppression, quoted_power_check
from .fock import GaussianSpec, PureState
from .io import dumps

TOL_ENV = "PHONONFORGE_TOL_SCALE"
SEED = 0

# illustrative displaced squeezed test state (parameters chosen here, not measured)
TEST_GAUSSIAN = GaussianSpec(displacement=1.5 * np.exp(1j * np.pi / 4), squeeze_magnitude=0.5)
TEST_GAUSSIAN_DIM = 48


@dataclass(frozen=True)
class CheckResult:
    criterion: int
    name: str
    value: float
    error: float
    tolerance: float
    anchor: str = ""
    informational: bool = False

    @property
    def passed(self) -> bool:
        return self.informational or (math.isfinite(self.error) and self.error <= self.tolerance)

    @property
    def status(self) -> str:
        if self.informational:
            return "INFO"
        return "PASS" if self.passed else "FAIL"


def tol_scale() -> float:
    return float(os.environ.get(TOL_ENV, "1"))


def _rel(a: float, b: float) -> float:
    return abs(a - b) / max(abs(b), 1e-300)


def random_guarded_state(rng: np.random.Generator, dim: int) -> PureState:
    """Random state with the top two levels empty, so raising operators are safe."""
    return fock.random_state(rng, dim, support=dim - fock.GUARD_LEVELS)


def random_gaussian_state(rng: np.random.Generator) -> PureState:
    spec = GaussianSpec(
        displacement=rng.uniform(0, 2) * np.exp(1j * rng.uniform(0, 2 * np.pi)),
        squeeze_magnitude=rng.uniform(0, 0.6),
        squeeze_angle=rng.uniform(0, 2 * np.pi),
    )
    try:
        return fock.gaussian_state(spec, 40)
    except TruncationError as exc:
        return fock.gaussian_state(spec, exc.required_dim)


def orthogonality_states(seed: int = SEED, n_random: int = 1000, n_gauss: int = 20):
    rng = np.random.default_rng(seed)
    states = [random_guarded_state(rng, int(rng.integers(4, 33))) for _ in range(n_random)]
    states += [random_gaussian_state(rng) for _ in range(n_gauss)]
    return states


# -- criterion 1 -------------------------------------------------------------


def check_orthogonality(scale: float) -> list[CheckResult]:
    worst = 0.0
    for psi in orthogonality_states():
        op = channels.orthogonalizer(psi, 0.1)
        out, n2 = fock.apply(op, psi)
        if n2 <= 1e-28:
            continue
        worst = max(worst, abs(fock.overlap(psi, out)) / math.sqrt(n2))
    return [
        CheckResult(1, "orthogonality |<psi|Y_perp psi>|/||Y_perp psi|| (1020 states)", worst, worst,
                    1e-10 * scale, "<psi|Y_perp|psi> = 0")
    ]


# -- criterion 2 -------------------------------------------------------------


def check_heralding(scale: float) -> list[CheckResult]:
    r = theta = 0.1
    worst_orth = 0.0
    rng = np.random.default_rng(SEED + 1)
    for _ in range(200):
        psi = random_guarded_state(rng, int(rng.integers(4, 33)))
        spec = channels.orthogonalizer_spec(psi, r)
        p = channels.apply_herald(psi, spec).probability
        x = fock.quadrature_op(psi.dim, spec.phi)
        closed = r**2 * fock.expectation(x @ x, psi).real
        worst_orth = max(worst_orth, _rel(p, closed))

    worst_ladder = 0.0
    for n in range(6):
        psi = PureState.fock(n, n + 4)
        add = channels.apply_herald(psi, channels.HeraldSpec(r=r)).probability
        worst_ladder = max(worst_ladder, _rel(add, r**2 * (n + 1) / 2))
        expected_sub = theta**2 * n / 2
        try:
            sub = channels.apply_herald(psi, channels.HeraldSpec(theta_half=theta)).probability
        except HeraldingImpossibleError:
            sub = 0.0
        err = abs(sub) if expected_sub == 0 else _rel(sub, expected_sub)
        worst_ladder = max(worst_ladder, err)
    return [
        CheckResult(2, "orthogonalizer P(h) = r^2 <X^2> (rel. error, 200 states)", worst_orth,
                    worst_orth, 1e-12 * scale, "P(h) = r^2 <(P_M)^2>"),
        CheckResult(2, "addition/subtraction P(h) on Fock 0..5 (rel. error)", worst_ladder,
                    worst_ladder, 1e-12 * scale, "r^2(<n>+1)/2 and (theta/2)^2 <n>/2"),
    ]


# -- criterion 3 -------------------------------------------------------------


def worked_example():
    psi = PureState.fock(4, 5)
    phi = PureState(np.array([0, 1, 0, 0, 1]) / math.sqrt(2))
    return psi, phi


def check_worked_example(scale: float) -> list[CheckResult]:
    psi, phi = worked_example()
    c = transform.solve_coefficients(psi, phi)
    zero_err = max(abs(c[1]), abs(c[2]))
    ratio = c[0] / c[3]
    plan = transform.factor_plan(c, "unit_identity", seed=SEED)
    nu = np.array([s[1] for s in plan.steps])
    e1 = nu.sum()
    e2 = nu[0] * nu[1] + nu[0] * nu[2] + nu[1] * nu[2]
    e3 = math.sqrt(24) * np.prod(nu)
    sym_err = max(abs(e1), abs(e2), abs(e3 - 1))
    fid = transform.execute_plan(psi, plan, phi).final_fidelity
    return [
        CheckResult(3, "C_1 = C_2 = 0", zero_err, zero_err, 1e-12 * scale, "C_1 = C_2 = 0"),
        CheckResult(3, "C_0/C_3 = sqrt(24)", ratio.real, abs(ratio - math.sqrt(24)), 1e-10 * scale,
                    "C_0 = sqrt(24) C_3"),
        CheckResult(3, "nu symmetric functions (0, 0, 1/sqrt(24))", sym_err, sym_err, 1e-9 * scale,
                    "nu_1 nu_2 nu_3 sqrt(24) = 1"),
        CheckResult(3, "worked example final infidelity", 1 - fid, 1 - fid, 1e-10 * scale,
                    "|<phi|Phi psi>|^2 = 1"),
    ]


# -- criterion 4 -------------------------------------------------------------


def random_transform_pair(rng: np.random.Generator) -> tuple[PureState, PureState]:
    dim = int(rng.integers(3, 9))
    while True:
        psi = fock.random_state(rng, dim)
        if abs(psi.amps[-1]) > 0.05:
            break
    return psi, fock.random_state(rng, dim)


def check_round_trip(scale: float) -> list[CheckResult]:
    rng = np.random.default_rng(SEED + 2)
    worst_infid = 0.0
    worst_perm = 0.0
    for _ in range(200):
        psi, phi = random_transform_pair(rng)
        plan = transform.plan_transform(psi, phi, seed=SEED)
        trace = transform.execute_plan(psi, plan, phi)
        worst_infid = max(worst_infid, 1 - trace.final_fidelity)
        perm = rng.permutation(len(plan.steps))
        permuted = transform.execute_plan(psi, plan, phi, order=perm)
        worst_perm = max(worst_perm, _rel(permuted.total_probability, trace.total_probability))
    return [
        CheckResult(4, "round-trip worst infidelity (200 pairs)", worst_infid, worst_infid,
                    1e-9 * scale, "F(Phi psi, phi) = 1"),
        CheckResult(4, "total probability under step permutation (rel.)", worst_perm, worst_perm,
                    1e-12 * scale, "[mu_j + nu_j b, mu_k + nu_k b] = 0"),
    ]


# -- criterion 5 -------------------------------------------------------------


def check_realizations(scale: float) -> list[CheckResult]:
    rep = realizations.realization_check()
    jc = rep["jc"]["slope"]
    h = rep["optomech_h"]["slope"]
    v_rel = max(rep["optomech_v_vs_mu_flipped"]["relative"])
    leak = rep["leakage"]["slope"]
    v_oracle = rep["optomech_v_vs_r_flipped"]["slope"]
    return [
        CheckResult(5, "JC raw-residual log-log slope (target 2)", jc, abs(jc - 2), 0.1 * scale,
                    "Y_QED = Omega tau (A^2 b + B^2 b^dag)"),
        CheckResult(5, "optomech h-port raw-residual log-log slope (target 2)", h, abs(h - 2),
                    0.1 * scale, "Y_h = (theta/2 b e^-i phi + r b^dag e^i varphi + mu)/sqrt2"),
        CheckResult(5, "optomech v-port vs mu-flipped Y_v (max residual / eps)", v_rel, v_rel,
                    5e-3 * scale, "Y_v = Y_h(mu -> -mu)"),
        CheckResult(5, "multiphoton leakage log-log slope (target 4, 10%)", leak, abs(leak - 4) / 4,
                    0.1 * scale, "P(>=2 photons) ~ eps^4"),
        CheckResult(5, "optomech v-port vs b^dag-flipped operator, slope (informational)", v_oracle,
                    abs(v_oracle - 3), 0.1 * scale, "Y_v = Y_h(r -> -r)", informational=True),
    ]


# -- criterion 6 -------------------------------------------------------------


def check_wigner(scale: float) -> list[CheckResult]:
    vac = PureState.fock(0, 8)
    grid = wigner.wigner_grid(vac, -7, 7, -7, 7, 0.05)
    integral = wigner.grid_integral(grid)
    parity_err = 0.0
    for n in range(7):
        w = wigner.wigner_point(PureState.fock(n, 30), 0.0, 0.0)
        parity_err = max(parity_err, abs(w - (-1) ** n / math.pi))
    psi = fock.gaussian_state(TEST_GAUSSIAN, TEST_GAUSSIAN_DIM)
    orth = channels.apply_herald(psi, channels.orthogonalizer_spec(psi, 0.1)).state
    wmin = float(wigner.wigner_grid(orth, -6, 6, -6, 6, 0.1).values.min())
    return [
        CheckResult(6, "vacuum grid integral (+-7, step 0.05)", integral, abs(integral - 1),
                    1e-5 * scale, "int W dx dp = 1"),
        CheckResult(6, "W_n(0,0) = (-1)^n/pi, n <= 6", parity_err, parity_err, 1e-9 * scale,
                    "W_n(0,0) = (-1)^n/pi"),
        # strict negativity: the minimum itself must sit below -1e-12 (roundoff floor)
        CheckResult(6, "orthogonalized displaced squeezed state min W < 0", wmin,
                    wmin, -1e-12 * scale, "min W < 0"),
    ]


# -- criterion 7 -------------------------------------------------------------


def check_feasibility(scale: float) -> list[CheckResult]:
    d = derive(ExperimentParams())
    sup = drive_suppression(0.9999)
    quoted = quoted_power_check()
    return [
        CheckResult(7, "omega_M/kappa (lambda=1064nm, L=75um, F=5e4, 200 MHz)", d.sideband_resolution,
                    abs(d.sideband_resolution - 10), 1e-9 * scale, "omega_M/kappa = 10"),
        CheckResult(7, "xi (Q=1e5, T=100 mK, 100 periods) in [0.9, 1.1]e-2", d.xi,
                    abs(d.xi - 1e-2), 1e-3 * scale, "xi ~ 1e-2"),
        CheckResult(7, "drive suppression at visibility 0.9999", sup, abs(sup - 1e4), 0.0,
                    "1/(1 - V) = 1e4"),
        CheckResult(7, "derived r^2 at 1.3 mW vs quoted 0.01 (ratio)", quoted["ratio"],
                    abs(quoted["ratio"] - 1), 0.0, "r^2(1.3 mW) = 0.01", informational=True),
    ]


CHECKS = (
    check_orthogonality,
    check_heralding,
    check_worked_example,
    check_round_trip,
    check_realizations,
    check_wigner,
    check_feasibility,
)


def run_checks(scale: float | None = None) -> list[CheckResult]:
    scale = tol_scale() if scale is None else scale
    rows: list[CheckResult] = []
    for check in CHECKS:
        rows.extend(check(scale))
    return rows


def render_table(rows: list[CheckResult]) -> str:
    lines = [f"{'#':>2}  {'status':<6} {'value':>14} {'error':>12} {'tol':>10}  check"]
    for row in rows:
        lines.append(
            f"{row.criterion:>2}  {row.status:<6} {row.value:>14.6e} {row.error:>12.3e} "
            f"{row.tolerance:>10.1e}  {row.name}  [{row.anchor}]"
        )
    failed = sum(1 for r in rows if not r.passed)
    lines.append(f"{len(rows)} rows, {failed} failed")
    return "\n".join(lines) + "\n"


def report_dict(rows: list[CheckResult]) -> dict:
    return {
        "tol_scale": tol_scale(),
        "checks": [
            {
                "criterion": r.criterion,
                "name": r.name,
                "status": r.status,
                "value": r.value,
                "error": r.error,
                "tolerance": r.tolerance,
                "anchor": r.anchor,
                "informational": r.informational,
            }
            for r in rows
        ],
    }


def repro_report(scale: float | None = None) -> tuple[str, str]:
    """Run every check; return ``(table_text, json_text)``."""
    rows = run_checks(scale)
    return render_table(rows), dumps(report_dict(rows))
