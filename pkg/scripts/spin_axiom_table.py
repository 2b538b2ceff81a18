"""Kernel-axiom deviations for spin j over a sweep of orders s.

    python3 scripts/spin_axiom_table.py --j 1/2 1 2 --s -1 0 1 --json out.json
"""
from __future__ import annotations

import argparse
import json
from dataclasses import asdict, dataclass, field

from qpdkit.spectral import axiom_report, sw_kernel_field
from qpdkit.su2 import SpinPhaseSpace, SpinSystem, parse_j


@dataclass
class SweepConfig:
    js: list[str] = field(default_factory=lambda: ["1/2", "1", "2"])
    orders: list[float] = field(default_factory=lambda: [-1.0, 0.0, 1.0])
    pairs: int = 20
    seed: int = 0


def sweep(cfg: SweepConfig) -> list[dict]:
    rows = []
    for jt in cfg.js:
        space = SpinPhaseSpace(SpinSystem(parse_j(jt)))
        for s in cfg.orders:
            report = axiom_report(space, sw_kernel_field(space, s), sw_kernel_field(space, -s),
                                  n_pairs=cfg.pairs, seed=cfg.seed)
            rows.append({"j": jt, "s": s, "checks": report})
    return rows


def main():
    p = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    p.add_argument("--j", nargs="+", default=SweepConfig().js)
    p.add_argument("--s", nargs="+", type=float, default=SweepConfig().orders)
    p.add_argument("--pairs", type=int, default=20)
    p.add_argument("--json")
    a = p.parse_args()
    cfg = SweepConfig(js=a.j, orders=a.s, pairs=a.pairs)
    rows = sweep(cfg)
    names = [c["name"] for c in rows[0]["checks"]]
    print(f"{'j':>5} {'s':>6} " + " ".join(f"{n:>9}" for n in names))
    for r in rows:
        devs = " ".join(f"{c['max_abs_deviation']:9.1e}" for c in r["checks"])
        flag = "" if all(c["pass"] for c in r["checks"]) else "  FAIL"
        print(f"{r['j']:>5} {r['s']:6.2f} {devs}{flag}")
    if a.json:
        with open(a.json, "w") as fh:
            json.dump({"config": asdict(cfg), "rows": rows}, fh, indent=2, sort_keys=True)


if __name__ == "__main__":
    main()
