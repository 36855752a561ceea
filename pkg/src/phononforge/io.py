"""JSON/CSV serialization for states, herald specs, plans, grids and reports.

Complex numbers are written as ``[re, im]`` pairs and every float carries 17
significant digits, which round-trips IEEE doubles exactly. Output is
deterministic: keys keep insertion order and no timestamps are emitted.
"""

from __future__ import annotations

import json
import math
from dataclasses import asdict, fields, is_dataclass
from enum import Enum
from pathlib import Path

import numpy as np

from .channels import HeraldSpec
from .errors import InvalidParameterError
from .feasibility import ExperimentParams
from .fock import PureState
from .transform import TransformPlan
from .wigner import PhaseSpaceGrid


def fmt_float(x: float) -> str:
    x = float(x)
    if math.isnan(x) or math.isinf(x):
        raise InvalidParameterError(f"cannot serialize non-finite value {x}")
    return "%.17g" % x


def _encode(obj, indent: int, level: int) -> str:
    pad = "\n" + " " * (indent * (level + 1)) if indent else ""
    end = "\n" + " " * (indent * level) if indent else ""
    sep = "," + pad if indent else ", "
    if obj is None or isinstance(obj, (bool, np.bool_)):
        return json.dumps(None if obj is None else bool(obj))
    if isinstance(obj, Enum):
        return json.dumps(obj.value)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return fmt_float(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return "[" + fmt_float(obj.real) + ", " + fmt_float(obj.imag) + "]"
    if isinstance(obj, str):
        return json.dumps(obj)
    if isinstance(obj, np.ndarray):
        return _encode(obj.tolist(), indent, level)
    if isinstance(obj, dict):
        if not obj:
            return "{}"
        items = [json.dumps(str(k)) + ": " + _encode(v, indent, level + 1) for k, v in obj.items()]
        return "{" + pad + sep.join(items) + end + "}"
    if isinstance(obj, (list, tuple)):
        if not obj:
            return "[]"
        # keep numeric rows on one line
        if all(isinstance(v, (int, float, complex, np.number)) for v in obj):
            return "[" + ", ".join(_encode(v, 0, 0) for v in obj) + "]"
        return "[" + pad + sep.join(_encode(v, indent, level + 1) for v in obj) + end + "]"
    raise TypeError(f"cannot serialize {type(obj).__name__}")


def dumps(obj, indent: int = 2) -> str:
    return _encode(obj, indent, 0) + "\n"


def write_json(path, obj) -> None:
    Path(path).write_text(dumps(obj), encoding="utf-8")


def read_json(path):
    return json.loads(Path(path).read_text(encoding="utf-8"))


def _complex(pair) -> complex:
    if isinstance(pair, (int, float)):
        return complex(pair)
    if not (isinstance(pair, list) and len(pair) == 2):
        raise InvalidParameterError(f"expected a [re, im] pair, got {pair!r}")
    return complex(float(pair[0]), float(pair[1]))


def state_to_dict(state: PureState) -> dict:
    return {"dim": state.dim, "amps": [complex(a) for a in state.amps]}


def state_from_dict(d: dict) -> PureState:
    try:
        dim = int(d["dim"])
        amps = [_complex(a) for a in d["amps"]]
    except (KeyError, TypeError) as exc:
        raise InvalidParameterError(f"malformed state JSON: {exc}") from exc
    if len(amps) != dim:
        raise InvalidParameterError(f"state JSON has dim={dim} but {len(amps)} amplitudes")
    return PureState(np.array(amps))


def herald_spec_to_dict(spec: HeraldSpec) -> dict:
    return {
        "theta_half": spec.theta_half,
        "r": spec.r,
        "mu": spec.mu,
        "phi": spec.phi,
        "varphi": spec.varphi,
        "detection": spec.detection.value,
    }


def herald_spec_from_dict(d: dict) -> HeraldSpec:
    try:
        return HeraldSpec(
            theta_half=float(d.get("theta_half", 0.0)),
            r=float(d.get("r", 0.0)),
            mu=_complex(d.get("mu", [0.0, 0.0])),
            phi=float(d.get("phi", 0.0)),
            varphi=float(d.get("varphi", 0.0)),
            detection=d.get("detection", "h"),
        )
    except (TypeError, ValueError) as exc:
        raise InvalidParameterError(f"malformed herald spec JSON: {exc}") from exc


def plan_to_dict(plan: TransformPlan) -> dict:
    return {
        "coeffs": [complex(c) for c in plan.coeffs],
        "steps": [{"mu": mu, "nu": nu} for mu, nu in plan.steps],
        "scale": plan.scale,
        "predicted_probability": plan.predicted_probability,
    }


def plan_from_dict(d: dict) -> TransformPlan:
    try:
        coeffs = np.array([_complex(c) for c in d["coeffs"]])
        steps = [(_complex(s["mu"]), _complex(s["nu"])) for s in d["steps"]]
        scale = _complex(d["scale"])
    except (KeyError, TypeError) as exc:
        raise InvalidParameterError(f"malformed plan JSON: {exc}") from exc
    nz = np.nonzero(np.abs(coeffs) > 0)[0]
    degree = int(nz[-1]) if nz.size else 0
    pred = d.get("predicted_probability")
    return TransformPlan(degree, coeffs, steps, scale, None if pred is None else float(pred))


def grid_to_csv(grid: PhaseSpaceGrid) -> str:
    lines = ["x,p,w"]
    for i, x in enumerate(grid.xs):
        for j, p in enumerate(grid.ps):
            lines.append(f"{fmt_float(x)},{fmt_float(p)},{fmt_float(grid.values[i, j])}")
    return "\n".join(lines) + "\n"


def grid_from_csv(text: str, step: float | None = None) -> PhaseSpaceGrid:
    rows = text.strip().splitlines()
    if not rows or rows[0].strip() != "x,p,w":
        raise InvalidParameterError("grid CSV must start with the header 'x,p,w'")
    data = np.array([[float(v) for v in r.split(",")] for r in rows[1:]])
    xs = np.unique(data[:, 0])
    ps = np.unique(data[:, 1])
    values = data[:, 2].reshape(xs.size, ps.size)
    if step is None:
        step = float(xs[1] - xs[0]) if xs.size > 1 else 1.0
    return PhaseSpaceGrid(xs[0], xs[-1], ps[0], ps[-1], step, xs, ps, values)


def grid_to_dict(grid: PhaseSpaceGrid) -> dict:
    return {f.name: getattr(grid, f.name) for f in fields(grid)}


def grid_from_dict(d: dict) -> PhaseSpaceGrid:
    return PhaseSpaceGrid(
        float(d["x_min"]),
        float(d["x_max"]),
        float(d["p_min"]),
        float(d["p_max"]),
        float(d["step"]),
        np.array(d["xs"], dtype=float),
        np.array(d["ps"], dtype=float),
        np.array(d["values"], dtype=float),
    )


def params_from_dict(d: dict) -> ExperimentParams:
    known = {f.name for f in fields(ExperimentParams)}
    unknown = set(d) - known
    if unknown:
        raise InvalidParameterError(f"unknown experiment parameters: {sorted(unknown)}")
    return ExperimentParams(**d)


def to_plain(obj):
    """Dataclass -> dict, leaving other values alone."""
    return asdict(obj) if is_dataclass(obj) else obj
