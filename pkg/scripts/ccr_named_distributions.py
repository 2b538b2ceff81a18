"""Husimi, Wigner and Glauber-Sudarshan fields of standard oscillator states.

Writes one CSV per (state, order) and prints the deviation from closed forms
where one exists.

    python3 scripts/ccr_named_distributions.py --outdir fields/
"""
from __future__ import annotations

import argparse
import warnings
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qpdkit.ccr import CcrSystem, PlanarGrid, coherent_dm, fock, glauber_sudarshan_ccr, husimi_ccr, thermal, wigner_ccr
from qpdkit.errors import SingularPWarning
from qpdkit.io import write_field_csv


@dataclass
class PlaneConfig:
    cutoff: int = 40
    half_width: float = 5.0
    points: int = 128
    kappa: float = 6.0
    nbar: float = 1.0
    alpha: complex = 1.0 + 0.5j


def closed_forms(cfg: PlaneConfig, r2: np.ndarray, d2: np.ndarray) -> dict:
    n = cfg.nbar
    return {
        ("vacuum", "husimi"): np.exp(-r2),
        ("vacuum", "wigner"): 2 * np.exp(-2 * r2),
        ("fock1", "husimi"): r2 * np.exp(-r2),
        ("fock1", "wigner"): -2 * (1 - 4 * r2) * np.exp(-2 * r2),
        ("coherent", "husimi"): np.exp(-d2),
        ("coherent", "wigner"): 2 * np.exp(-2 * d2),
        ("thermal", "husimi"): np.exp(-r2 / (n + 1)) / (n + 1),
        ("thermal", "wigner"): np.exp(-r2 / (n + 0.5)) / (n + 0.5),
        ("thermal", "glauber"): np.exp(-r2 / n) / n,
    }


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--outdir", default="fields")
    p.add_argument("--kappa", type=float, default=PlaneConfig.kappa)
    a = p.parse_args()
    cfg = PlaneConfig(kappa=a.kappa)
    out = Path(a.outdir)
    out.mkdir(parents=True, exist_ok=True)
    S, g = CcrSystem(cfg.cutoff), PlanarGrid(cfg.half_width, cfg.points)
    states = {"vacuum": fock(S, 0), "fock1": fock(S, 1), "coherent": coherent_dm(S, cfg.alpha),
              "thermal": thermal(S, cfg.nbar)}
    r2 = np.abs(g.nodes) ** 2
    exact = closed_forms(cfg, r2, np.abs(g.nodes - cfg.alpha) ** 2)
    print(f"{'state':>9} {'field':>8} {'norm':>12} {'max err':>10}  note")
    for name, rho in states.items():
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", SingularPWarning)   # flagged in info["singular"]
            fields = {"husimi": husimi_ccr(rho, g, label=name), "wigner": wigner_ccr(rho, g, label=name),
                      "glauber": glauber_sudarshan_ccr(rho, g, cfg.kappa, label=name)}
        for kind, f in fields.items():
            write_field_csv(f, out / f"{name}_{kind}.csv")
            ref = exact.get((name, kind))
            err = f"{np.abs(f.values - ref).max():10.2e}" if ref is not None else f"{'-':>10}"
            note = "singular at this kappa" if kind == "glauber" and f.info["singular"] else ""
            print(f"{name:>9} {kind:>8} {f.integral().real:12.9f} {err}  {note}")


if __name__ == "__main__":
    main()
