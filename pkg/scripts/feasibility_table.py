"""Derived optomechanical parameters and a pulse-power sweep of r^2."""

import argparse
from dataclasses import asdict, dataclass, replace
from pathlib import Path

import numpy as np

from phononforge import io
from phononforge.feasibility import ExperimentParams, derive, filter_budget, quoted_power_check


@dataclass(frozen=True)
class Config:
    power_min: float = 1e-4
    power_max: float = 1e-1
    points: int = 13
    out: str = "out/feasibility.json"


def run(cfg: Config, params: ExperimentParams = ExperimentParams()) -> dict:
    powers = np.geomspace(cfg.power_min, cfg.power_max, cfg.points)
    sweep = [{"power_W": p, "r_sq": derive(replace(params, pulse_power=p)).r ** 2} for p in powers]
    result = {
        "config": asdict(cfg),
        "params": asdict(params),
        "derived": asdict(derive(params)),
        "filter_budget": asdict(filter_budget(params)),
        "quoted_power_check": quoted_power_check(params),
        "power_sweep": sweep,
    }
    Path(cfg.out).parent.mkdir(parents=True, exist_ok=True)
    io.write_json(cfg.out, result)
    return result


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--out", default=Config.out)
    res = run(Config(out=ap.parse_args().out))
    d = res["derived"]
    print(f"omega_M/kappa = {d['sideband_resolution']:.6f}")
    print(f"xi            = {d['xi']:.4e}")
    print(f"r^2 at 1.3 mW = {res['quoted_power_check']['derived_r_sq']:.5f} (reference 0.01)")
    for row in res["power_sweep"]:
        print(f"  P = {row['power_W']:.3e} W  r^2 = {row['r_sq']:.4e}")
