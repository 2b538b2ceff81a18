"""Amplitude damping of an oscillator: moments and phase-space snapshots.

    python3 scripts/damped_oscillator.py --alpha 1.5 --gamma 0.2 --steps 5000
"""
from __future__ import annotations

import argparse
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from qpdkit.ccr import CcrPhaseSpace, CcrSystem, PlanarGrid, coherent_dm, fock, wigner_ccr
from qpdkit.dynamics import LindbladSpec, evolve, qpd_trajectory
from qpdkit.io import write_field_csv


@dataclass
class DampingConfig:
    cutoff: int = 30
    omega: float = 1.0
    gamma: float = 0.2
    alpha: float = 1.5
    dt: float = 1e-3
    steps: int = 5000
    record_every: int = 500


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for k, v in DampingConfig().__dict__.items():
        p.add_argument("--" + k.replace("_", "-"), type=type(v), default=v)
    p.add_argument("--snapshots", help="write Husimi snapshots of the coherent run here")
    a = p.parse_args()
    cfg = DampingConfig(**{k: getattr(a, k) for k in DampingConfig().__dict__})

    S = CcrSystem(cfg.cutoff)
    spec = LindbladSpec(cfg.omega * S.number, ((S.a, cfg.gamma),))
    coh = evolve(coherent_dm(S, cfg.alpha), spec, cfg.dt, cfg.steps, cfg.record_every)
    one = evolve(fock(S, 1), spec, cfg.dt, cfg.steps, cfg.record_every)
    g = PlanarGrid(5.0, 128)
    origin = int(np.argmin(np.abs(g.nodes)))

    amp = coh.expectation(S.a)
    exact = cfg.alpha * np.exp((-1j * cfg.omega - cfg.gamma / 2) * coh.times)
    print(f"{'t':>6} {'|<a> - exact|':>14} {'W_|1>(0)':>10} {'exact':>10}")
    for t, z, ze, r in zip(coh.times, amp, exact, one.states):
        w0 = wigner_ccr(r, g).values[origin]
        print(f"{t:6.2f} {abs(z - ze):14.2e} {w0:10.6f} {2 * (1 - 2 * np.exp(-cfg.gamma * t)):10.6f}")
    print(f"trace drift {coh.info['trace_drift']:.2e}, min eigenvalue {coh.info['min_eigenvalue']:.2e}")

    if a.snapshots:
        out = Path(a.snapshots)
        out.mkdir(parents=True, exist_ok=True)
        for k, f in enumerate(qpd_trajectory(coh, 1.0, CcrPhaseSpace(S, g))):
            write_field_csv(f, out / f"husimi_{k:03d}.csv")


if __name__ == "__main__":
    main()
