"""Command-line front end.

Exit codes: 0 success, 2 validation error, 3 numerical error (truncation,
heralding impossible, non-convergence), 4 I/O error. Diagnostics go to stderr
as ``LEVEL key=value ...`` lines.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path

import numpy as np

from . import channels, fock, io, realizations, repro, transform, wigner
from .errors import NumericalError
from .feasibility import ExperimentParams, derive, filter_budget, quoted_power_check

log = logging.getLogger("phononforge")

EXIT_OK, EXIT_VALIDATION, EXIT_NUMERICAL, EXIT_IO = 0, 2, 3, 4


class KeyValueFormatter(logging.Formatter):
    def format(self, record):
        fields = getattr(record, "fields", {})
        parts = [record.levelname, f"msg={json.dumps(record.getMessage())}"]
        parts += [f"{k}={v}" for k, v in fields.items()]
        return " ".join(parts)


def _emit(level, msg, **fields):
    log.log(level, msg, extra={"fields": fields})


class CliInputError(Exception):
    """Bad paths: mapped to the I/O exit code."""


class ArgumentParser(argparse.ArgumentParser):
    def error(self, message):
        _emit(logging.ERROR, message, kind="usage")
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_VALIDATION)


def _input(path) -> Path:
    p = Path(path)
    if not p.is_file():
        raise CliInputError(f"input file not found: {p}")
    return p


def _output(path) -> Path:
    p = Path(path)
    if not p.parent.exists():
        raise CliInputError(f"output directory does not exist: {p.parent}")
    return p


def _load_state(path) -> fock.PureState:
    try:
        data = io.read_json(path)
    except json.JSONDecodeError as exc:
        raise CliInputError(f"{path}: not valid JSON ({exc})") from exc
    return io.state_from_dict(data)


def _write_outcome(path, outcome: channels.HeraldOutcome) -> None:
    io.write_json(path, {"state": io.state_to_dict(outcome.state), "probability": outcome.probability})
    _emit(logging.INFO, "heralded", probability=f"{outcome.probability:.17g}", out=path)


# -- subcommands -------------------------------------------------------------


def cmd_state(args):
    out = _output(args.out)
    if args.fock is not None:
        state = fock.PureState.fock(args.fock, args.dim)
    elif args.random:
        rng = np.random.default_rng(args.seed)
        state = fock.random_state(rng, args.dim, support=args.dim - fock.GUARD_LEVELS)
    else:
        spec = fock.GaussianSpec(complex(*args.alpha), args.squeeze, args.squeeze_angle)
        state = fock.gaussian_state(spec, args.dim)
    io.write_json(out, io.state_to_dict(state))
    _emit(logging.INFO, "state written", dim=state.dim, out=out)


def cmd_orthogonalize(args):
    src, out = _input(args.input), _output(args.out)
    psi = _load_state(src)
    spec = channels.orthogonalizer_spec(psi, args.r)
    angle = fock.mean_angle(psi)
    _emit(logging.INFO, "mean angle", angle=f"{angle.angle:.17g}", degenerate=angle.degenerate)
    _write_outcome(out, channels.apply_herald(psi, spec))


def cmd_qubit(args):
    src, out = _input(args.input), _output(args.out)
    psi = _load_state(src)
    _write_outcome(out, channels.qubit_synthesis(psi, complex(*args.mu), args.r))


def cmd_herald(args):
    src, out = _input(args.input), _output(args.out)
    psi = _load_state(src)
    if args.spec:
        spec = io.herald_spec_from_dict(io.read_json(_input(args.spec)))
    else:
        spec = channels.HeraldSpec(
            theta_half=args.theta_half,
            r=args.r,
            mu=complex(*args.mu),
            phi=args.phi,
            varphi=args.varphi,
            detection=args.detection,
        )
    _write_outcome(out, channels.apply_herald(psi, spec))


def cmd_transform(args):
    src, tgt, out = _input(args.input), _input(args.target), _output(args.out)
    trace_out = _output(args.trace) if args.trace else None
    psi, phi = _load_state(src), _load_state(tgt)
    if args.match_dim:
        psi, ops = transform.dimension_match(psi, phi.dim)
        _emit(logging.INFO, "dimension matched", operations=",".join(ops) or "none")
    plan = transform.plan_transform(psi, phi, args.normalization, seed=args.seed)
    io.write_json(out, io.plan_to_dict(plan))
    trace = transform.execute_plan(psi, plan, phi)
    _emit(
        logging.INFO,
        "plan written",
        degree=plan.degree,
        root_method=plan.root_method,
        total_probability=f"{trace.total_probability:.17g}",
        predicted_probability=f"{plan.predicted_probability:.17g}",
        fidelity=f"{trace.final_fidelity:.17g}",
        out=out,
    )
    if trace_out:
        io.write_json(
            trace_out,
            {
                "per_step": [
                    {"state": io.state_to_dict(s), "probability": p} for s, p in trace.per_step
                ],
                "total_probability": trace.total_probability,
                "final_fidelity": trace.final_fidelity,
            },
        )


def cmd_wigner(args):
    src, out = _input(args.input), _output(args.out)
    psi = _load_state(src)
    if args.bounds is not None:
        x_lo, x_hi, p_lo, p_hi = -args.bounds, args.bounds, -args.bounds, args.bounds
    else:
        (x_lo, x_hi), (p_lo, p_hi) = args.x_range, args.p_range
    grid = wigner.wigner_grid(psi, x_lo, x_hi, p_lo, p_hi, args.step)
    if out.suffix == ".json":
        io.write_json(out, io.grid_to_dict(grid))
    else:
        out.write_text(io.grid_to_csv(grid), encoding="utf-8")
    _emit(
        logging.INFO,
        "grid written",
        points=grid.values.size,
        integral=f"{wigner.grid_integral(grid):.17g}",
        min=f"{grid.values.min():.17g}",
        out=out,
    )


def _feasibility_table(params: ExperimentParams, derived, budget, quoted) -> str:
    rows = [
        ("kappa [rad/s]", derived.kappa),
        ("FSR [Hz]", derived.fsr),
        ("omega_M/kappa", derived.sideband_resolution),
        ("x_zpf [m]", derived.x_zpf),
        ("g0 [rad/s]", derived.g0),
        ("tau [s]", derived.tau),
        ("N photons/pulse", derived.photon_number),
        ("|alpha|^2", derived.alpha_sq),
        ("G [1/s]", derived.G),
        ("theta/2", derived.theta_half),
        ("r", derived.r),
        ("beta", derived.beta),
        ("n_bar", derived.n_bar),
        ("xi", derived.xi),
        ("drive suppression", budget.suppression),
        ("filter transmission", budget.filter_transmission),
        ("residual drive photons", budget.residual_drive_photons),
        ("sideband photons", budget.sideband_photons),
        ("r^2 at 1.3 mW (derived)", quoted["derived_r_sq"]),
        ("r^2 at 1.3 mW (quoted)", quoted["quoted_r_sq"]),
    ]
    width = max(len(k) for k, _ in rows)
    return "\n".join(f"{k:<{width}}  {v:.6e}" for k, v in rows) + "\n"


def cmd_feasibility(args):
    params = ExperimentParams()
    if args.params:
        params = io.params_from_dict(io.read_json(_input(args.params)))
    out = _output(args.out) if args.out else None
    derived = derive(params)
    budget = filter_budget(params, args.sideband_detuning)
    quoted = quoted_power_check(params)
    for w in derived.warnings:
        _emit(logging.WARNING, w)
    report = {
        "params": asdict(params),
        "derived": asdict(derived),
        "filter_budget": asdict(budget),
        "quoted_power_check": quoted,
    }
    if out:
        io.write_json(out, report)
    sys.stdout.write(_feasibility_table(params, derived, budget, quoted))


def cmd_realization_check(args):
    out = _output(args.out) if args.out else None
    report = realizations.realization_check(tuple(args.eps), args.mech_dim)
    text = io.dumps(report)
    if out:
        out.write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def cmd_repro(args):
    out_dir = Path(args.out_dir)
    if not out_dir.is_dir():
        raise CliInputError(f"output directory does not exist: {out_dir}")
    table, report = repro.repro_report()
    (out_dir / "repro_report.txt").write_text(table, encoding="utf-8")
    (out_dir / "repro_report.json").write_text(report, encoding="utf-8")
    sys.stdout.write(table)
    failed = sum(1 for c in json.loads(report)["checks"] if c["status"] == "FAIL")
    _emit(logging.INFO if not failed else logging.WARNING, "report written", failed=failed, out=out_dir)


# -- parser ------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = ArgumentParser(prog="phononforge", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=ArgumentParser)

    p = sub.add_parser("state", help="generate a state JSON")
    kind = p.add_mutually_exclusive_group()
    kind.add_argument("--fock", type=int)
    kind.add_argument("--random", action="store_true", help="random state with an empty guard band")
    p.add_argument("--alpha", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.add_argument("--squeeze", type=float, default=0.0)
    p.add_argument("--squeeze-angle", type=float, default=0.0)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_state)

    p = sub.add_parser("orthogonalize", help="apply the orthogonalizer")
    p.add_argument("--input", required=True)
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_orthogonalize)

    p = sub.add_parser("qubit", help="apply mu/sqrt2 + orthogonalizer")
    p.add_argument("--input", required=True)
    p.add_argument("--mu", type=float, nargs=2, default=(0.0, -0.1), metavar=("RE", "IM"))
    p.add_argument("--r", type=float, default=0.1)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_qubit)

    p = sub.add_parser("herald", help="apply a general herald operator")
    p.add_argument("--input", required=True)
    p.add_argument("--spec", help="herald spec JSON (overrides the flags)")
    p.add_argument("--theta-half", type=float, default=0.0)
    p.add_argument("--r", type=float, default=0.0)
    p.add_argument("--mu", type=float, nargs=2, default=(0.0, 0.0), metavar=("RE", "IM"))
    p.add_argument("--phi", type=float, default=0.0)
    p.add_argument("--varphi", type=float, default=0.0)
    p.add_argument("--detection", choices=("h", "v"), default="h")
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_herald)

    p = sub.add_parser("transform", help="plan a state transformation")
    p.add_argument("--input", required=True)
    p.add_argument("--target", required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--trace", help="also write the execution trace JSON here")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--normalization", choices=transform.NORMALIZATIONS, default="unit_identity")
    p.add_argument("--match-dim", action="store_true", help="raise/lower the input to the target's top level first")
    p.set_defaults(func=cmd_transform)

    p = sub.add_parser("wigner", help="Wigner function on a grid (CSV, or JSON by extension)")
    p.add_argument("--input", required=True)
    p.add_argument("--bounds", type=float, help="symmetric bound for both axes")
    p.add_argument("--x-range", type=float, nargs=2, default=(-6.0, 6.0))
    p.add_argument("--p-range", type=float, nargs=2, default=(-6.0, 6.0))
    p.add_argument("--step", type=float, default=0.05)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_wigner)

    p = sub.add_parser("feasibility", help="experimental parameter chain")
    p.add_argument("--params", help="ExperimentParams JSON (SI units)")
    p.add_argument("--sideband-detuning", type=float, default=None, help="rad/s, default omega_M")
    p.add_argument("--out")
    p.set_defaults(func=cmd_feasibility)

    p = sub.add_parser("realization-check", help="exact oracles vs first-order operators")
    p.add_argument("--eps", type=float, nargs="+", default=[1e-2, 1e-3, 1e-4])
    p.add_argument("--mech-dim", type=int, default=8)
    p.add_argument("--out")
    p.set_defaults(func=cmd_realization_check)

    p = sub.add_parser("repro", help="run every acceptance check and write the report")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    handler = logging.StreamHandler(sys.stderr)
    handler.setFormatter(KeyValueFormatter())
    log.handlers[:] = [handler]
    log.propagate = False
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    log.setLevel(logging.DEBUG if args.verbose else logging.INFO)
    try:
        args.func(args)
    except NumericalError as exc:
        _emit(logging.ERROR, str(exc), kind=type(exc).__name__)
        return EXIT_NUMERICAL
    except (CliInputError, OSError) as exc:
        _emit(logging.ERROR, str(exc), kind="io")
        return EXIT_IO
    except ValueError as exc:
        _emit(logging.ERROR, str(exc), kind=type(exc).__name__)
        return EXIT_VALIDATION
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
