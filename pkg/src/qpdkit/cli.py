"""``qpd`` command line.

Examples::

    qpd husimi --backend spin --j 1 --state jj --grid 64x128 --out h.csv
    qpd axioms --backend spin --j 2 --s 0 --report r.json
    qpd transform --from 1 --to 0 --in h.csv --spectrum spin:1 --out w.csv

Failures print one JSON object to stderr and exit with the category code
(config 2, conditioning 3, cutoff 4, singular P 5, integration 6, axiom 7,
weak value 8).
"""
from __future__ import annotations

import argparse
import json
import sys
import warnings
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import ccr, su2
from .dynamics import LindbladSpec, evolve
from .errors import AxiomViolation, ConfigError, QPDError, SingularPError, SingularPWarning
from .fields import QPDField
from .io import format_field, read_field_csv, read_matrix_csv
from .naimark import gaussian_probe, joint_distribution
from .spectral import axiom_report, qpd, qpd_via_weak_values, sw_kernel_field, transform, weak_value

TASKS = ("husimi", "wigner", "glauber", "qpd", "transform", "axioms", "naimark", "dynamics", "weakvalue")


@dataclass
class JobConfig:
    task: str
    backend: str = "spin"
    j: str = "1"
    cutoff: int = 40
    grid: str | None = None
    half_width: float = 5.0
    kappa: float = 6.0
    state: str = "vacuum"
    s: float | None = None
    out: str | None = None
    report: str | None = None
    strict: bool = False
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.task not in TASKS:
            raise ConfigError(f"unknown task {self.task!r}")
        if self.backend not in ("spin", "ccr"):
            raise ConfigError(f"unknown backend {self.backend!r}")
        if self.s is not None and not np.isfinite(self.s):
            raise ConfigError("s must be finite")
        if self.task == "qpd" and self.s is None:
            raise ConfigError("qpd needs --s")


# ---------------------------------------------------------------- building blocks

def _floats(text: str, n: int, what: str) -> list[float]:
    try:
        vals = [float(x) for x in text.split(",")]
    except ValueError as exc:
        raise ConfigError(f"cannot parse {what} {text!r}") from exc
    if len(vals) != n:
        raise ConfigError(f"{what} needs {n} comma-separated numbers, got {text!r}")
    return vals


def _grid_dims(text: str) -> tuple[int, int]:
    try:
        parts = [int(x) for x in text.lower().split("x")]
    except ValueError as exc:
        raise ConfigError(f"bad grid {text!r}") from exc
    if len(parts) == 1:
        parts *= 2
    if len(parts) != 2:
        raise ConfigError(f"bad grid {text!r}")
    return parts[0], parts[1]


def build_space(cfg: JobConfig):
    if cfg.backend == "spin":
        j = su2.parse_j(cfg.j)
        system = su2.SpinSystem(j)
        grid = None if cfg.grid is None else su2.sphere_quadrature(system, *_grid_dims(cfg.grid))
        return su2.SpinPhaseSpace(system, grid)
    system = ccr.CcrSystem(cfg.cutoff)
    m = 128 if cfg.grid is None else _grid_dims(cfg.grid)[0]
    if cfg.grid is not None and len(set(_grid_dims(cfg.grid))) != 1:
        raise ConfigError("plane grids are square")
    return ccr.CcrPhaseSpace(system, ccr.PlanarGrid(cfg.half_width, m), ccr.PlanarSpectrum(cfg.kappa))


def build_state(space, text: str) -> np.ndarray:
    dim = space.dim
    name, _, arg = text.partition(":")
    if name == "mixed":
        return np.eye(dim, dtype=complex) / dim
    if space.name == "spin":
        system = space.system
        if name in ("jj", "vacuum"):  # the reference state |j, j>
            rho = np.zeros((dim, dim), dtype=complex)
            rho[0, 0] = 1
            return rho
        if name == "fock":
            n = int(arg)
            if not 0 <= n < dim:
                raise ConfigError(f"spin level {n} outside 0..{dim - 1}")
            rho = np.zeros((dim, dim), dtype=complex)
            rho[n, n] = 1
            return rho
        if name == "coherent":
            th, ph = _floats(arg, 2, "spin coherent angles")
            v = su2.spin_coherent(system, th, ph)
            return np.outer(v, v.conj())
    else:
        system = space.system
        if name == "vacuum":
            return ccr.vacuum(system)
        if name == "fock":
            return ccr.fock(system, int(arg))
        if name == "coherent":
            re, im = _floats(arg, 2, "coherent amplitude")
            return ccr.coherent_dm(system, complex(re, im))
        if name == "thermal":
            return ccr.thermal(system, _floats(arg, 1, "thermal occupation")[0])
    path = Path(text)
    if path.is_file():
        return read_matrix_csv(path, dim)
    raise ConfigError(f"unknown state {text!r} for backend {space.name}")


def build_operator(space, text: str) -> np.ndarray:
    sys_ = space.system
    named = {
        "spin": {"jx": "jx", "jy": "jy", "jz": "jz", "jplus": "jplus", "jminus": "jminus"},
        "ccr": {"a": "a", "adag": "adag", "n": "number", "q": "q", "p": "p"},
    }[space.name]
    if text in named:
        return np.asarray(getattr(sys_, named[text]), dtype=complex)
    path = Path(text)
    if path.is_file():
        return read_matrix_csv(path, space.dim)
    raise ConfigError(f"unknown operator {text!r}; use {sorted(named)} or a matrix file")


def _point(space, text: str):
    if space.name == "spin":
        return np.array([_floats(text, 2, "sphere point")])
    re, im = _floats(text, 2, "plane point")
    return np.array([complex(re, im)])


def space_from_label(label: str, grid, kappa: float):
    kind, _, param = label.partition(":")
    if kind == "spin":
        system = su2.SpinSystem(su2.parse_j(param))
        if grid is not None and grid.j != system.j:
            raise ConfigError(f"field grid is for j={grid.j}, spectrum asks for {label}")
        return su2.SpinPhaseSpace(system, grid)
    if kind == "ccr":
        return ccr.CcrPhaseSpace(ccr.CcrSystem(int(param)), grid, ccr.PlanarSpectrum(kappa))
    raise ConfigError(f"unknown spectrum {label!r}")


# ---------------------------------------------------------------- output

def _emit_field(f, cfg: JobConfig, stdout, stderr):
    text = format_field(f)
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    norm = f.info.get("normalization", float(np.real(f.integral())))
    stderr.write(f"normalization={norm:.17g}\n")


def _emit_report(obj, cfg: JobConfig, stdout):
    text = json.dumps(obj, sort_keys=True, indent=2) + "\n"
    if cfg.report:
        Path(cfg.report).write_text(text)
    else:
        stdout.write(text)


# ---------------------------------------------------------------- tasks

def _field_task(cfg: JobConfig, stdout, stderr):
    space = build_space(cfg)
    rho = build_state(space, cfg.state)
    s = {"husimi": 1.0, "wigner": 0.0, "glauber": -1.0}.get(cfg.task, cfg.s)
    if space.name == "spin":
        f = su2.husimi_spin(rho, space.grid, label=cfg.state) if s == 1 else qpd(space, rho, s, label=cfg.state)
    elif cfg.task == "husimi":
        f = ccr.husimi_ccr(rho, space.grid, space.system, label=cfg.state)
    elif cfg.task == "wigner":
        f = ccr.wigner_ccr(rho, space.grid, label=cfg.state)
    elif cfg.task == "glauber":
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", SingularPWarning)
            f = ccr.glauber_sudarshan_ccr(rho, space.grid, cfg.kappa, label=cfg.state)
        for w in (w for w in caught if issubclass(w.category, SingularPWarning)):
            if cfg.strict:
                raise SingularPError(str(w.message))
            stderr.write(json.dumps({"warning": "singular_p", "message": str(w.message)}, sort_keys=True) + "\n")
    else:
        f = qpd(space, rho, s, label=cfg.state)
    _emit_field(f, cfg, stdout, stderr)
    return 0


def _transform_task(cfg: JobConfig, stdout, stderr):
    src = cfg.extra.get("input")
    if not src:
        raise ConfigError("transform needs --in")
    f = read_field_csv(src)
    s_from, s_to = cfg.extra.get("s_from"), cfg.extra.get("s_to")
    if s_to is None:
        raise ConfigError("transform needs --to")
    if s_from is not None and not np.isclose(s_from, f.s):
        raise ConfigError(f"--from {s_from} does not match the file order s={f.s}")
    label = cfg.extra.get("spectrum") or f.backend
    space = space_from_label(label, f.grid, cfg.kappa)
    out = transform(space, f, s_to)
    _emit_field(out, cfg, stdout, stderr)
    return 0


def _axioms_task(cfg: JobConfig, stdout, stderr):
    space = build_space(cfg)
    s = 0.0 if cfg.s is None else cfg.s
    rows = axiom_report(space, sw_kernel_field(space, s), sw_kernel_field(space, -s),
                        n_pairs=cfg.extra.get("pairs", 20), seed=cfg.extra.get("seed", 0))
    _emit_report(rows, cfg, stdout)
    failed = [r["name"] for r in rows if not r["pass"]]
    if failed:
        stderr.write(json.dumps({"warning": "axiom", "failed": failed}, sort_keys=True) + "\n")
        if cfg.strict:
            raise AxiomViolation(f"axioms out of tolerance: {', '.join(failed)}")
    return 0


def _naimark_task(cfg: JobConfig, stdout, stderr):
    if cfg.backend != "ccr":
        raise ConfigError("naimark runs on the ccr backend")
    space = build_space(cfg)
    rho = build_state(space, cfg.state)
    d = cfg.extra.get("probe_d", 1.0)
    f = joint_distribution(rho, gaussian_probe(space.system, d), space.grid, label=cfg.state)
    _emit_field(f, cfg, stdout, stderr)
    if cfg.report or d == 1.0:
        rows = [{"name": "normalization", "max_abs_deviation": abs(f.info["normalization"] - 1),
                 "tolerance": 1e-6, "pass": bool(abs(f.info["normalization"] - 1) < 1e-6)}]
        if d == 1.0:
            h = ccr.husimi_ccr(rho, space.grid, space.system)
            dev = float(np.max(np.abs(f.values - h.values)))
            rows.append({"name": "joint_equals_husimi", "max_abs_deviation": dev,
                         "tolerance": 1e-5, "pass": dev < 1e-5})
        if cfg.report:
            _emit_report(rows, cfg, stdout)
    return 0


def _dynamics_task(cfg: JobConfig, stdout, stderr):
    if cfg.backend != "ccr":
        raise ConfigError("dynamics runs on the ccr backend")
    space = build_space(cfg)
    system = space.system
    rho = build_state(space, cfg.state)
    x = cfg.extra
    spec = LindbladSpec(x.get("omega", 1.0) * system.number, ((system.a, x.get("gamma", 0.2)),))
    traj = evolve(rho, spec, x.get("dt", 1e-3), x.get("steps", 5000), x.get("record_every", 100))
    a_mean = traj.expectation(system.a)
    n_mean = traj.expectation(system.number).real
    lines = ["t,re_a,im_a,n"]
    lines += [f"{t:.17g},{z.real:.17g},{z.imag:.17g},{n:.17g}" for t, z, n in zip(traj.times, a_mean, n_mean)]
    text = "\n".join(lines) + "\n"
    if cfg.out:
        Path(cfg.out).write_text(text)
    else:
        stdout.write(text)
    snap = x.get("snapshots")
    if snap:
        outdir = Path(snap)
        outdir.mkdir(parents=True, exist_ok=True)
        s = 1.0 if cfg.s is None else cfg.s
        for k, (t, r) in enumerate(zip(traj.times, traj.states)):
            f = ccr.husimi_ccr(r, space.grid, system) if s == 1 else qpd(space, r, s)
            (outdir / f"field_{k:05d}.csv").write_text(format_field(f))
    stderr.write(f"trace_drift={traj.info['trace_drift']:.3g} min_eigenvalue={traj.info['min_eigenvalue']:.3g}\n")
    return 0


def _weakvalue_task(cfg: JobConfig, stdout, stderr):
    space = build_space(cfg)
    A = build_operator(space, cfg.extra.get("operator") or ("jz" if space.name == "spin" else "n"))
    pre, post = cfg.extra.get("pre"), cfg.extra.get("post")
    if pre or post:
        if not (pre and post):
            raise ConfigError("weakvalue needs both --pre and --post")
        vpre = space.coherent_states(_point(space, pre))[0]
        vpost = space.coherent_states(_point(space, post))[0]
        w = weak_value(A, vpre, vpost)
        _emit_report({"weak_value": [w.real, w.imag], "pre": pre, "post": post}, cfg, stdout)
        return 0
    s = 1.0 if cfg.s is None else cfg.s
    vals = qpd_via_weak_values(space, A, s, space.points)
    f = QPDField(s, space.grid, vals, label="weak", backend=space.label)
    _emit_field(f, cfg, stdout, stderr)
    return 0


DISPATCH = {
    "husimi": _field_task, "wigner": _field_task, "glauber": _field_task, "qpd": _field_task,
    "transform": _transform_task, "axioms": _axioms_task, "naimark": _naimark_task,
    "dynamics": _dynamics_task, "weakvalue": _weakvalue_task,
}


def run(cfg: JobConfig, stdout=None, stderr=None) -> int:
    stdout = sys.stdout if stdout is None else stdout
    stderr = sys.stderr if stderr is None else stderr
    return DISPATCH[cfg.task](cfg, stdout, stderr)


# ---------------------------------------------------------------- argument parsing

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError(message)


def _common(p: argparse.ArgumentParser):
    p.add_argument("--backend", choices=("spin", "ccr"), default="spin")
    p.add_argument("--j", default="1", help="spin quantum number, e.g. 1/2 or 2")
    p.add_argument("--cutoff", "-N", type=int, default=40, help="Fock cutoff (ccr)")
    p.add_argument("--grid", help="spin: <n_theta>x<n_phi>; ccr: <M> or <M>x<M>")
    p.add_argument("--half-width", "-L", type=float, default=5.0, help="ccr grid covers [-L, L)^2")
    p.add_argument("--kappa", type=float, default=6.0, help="band limit for negative powers (ccr)")
    p.add_argument("--state", default="vacuum",
                   help="vacuum | fock:n | coherent:re,im | thermal:nbar | jj | mixed | matrix CSV")
    p.add_argument("--s", type=float)
    p.add_argument("--out")
    p.add_argument("--report")
    p.add_argument("--strict", action="store_true")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpd", description="s-parameterized quasi-probability distributions")
    sub = parser.add_subparsers(dest="task", required=True, parser_class=_Parser)
    for name in ("husimi", "wigner", "glauber", "qpd", "axioms"):
        p = sub.add_parser(name)
        _common(p)
        if name == "axioms":
            p.add_argument("--pairs", type=int, default=20)
            p.add_argument("--seed", type=int, default=0)
    p = sub.add_parser("transform")
    _common(p)
    p.add_argument("--from", dest="s_from", type=float)
    p.add_argument("--to", dest="s_to", type=float, required=True)
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--spectrum", help="spin:<j> or ccr:<N>; defaults to the file backend")
    p = sub.add_parser("naimark")
    _common(p)
    p.add_argument("--probe-d", type=float, default=1.0, help="probe position variance (1 = vacuum)")
    p = sub.add_parser("dynamics")
    _common(p)
    p.add_argument("--omega", type=float, default=1.0)
    p.add_argument("--gamma", type=float, default=0.2)
    p.add_argument("--dt", type=float, default=1e-3)
    p.add_argument("--steps", type=int, default=5000)
    p.add_argument("--record-every", type=int, default=100)
    p.add_argument("--snapshots", help="directory for per-time field files of order --s")
    p = sub.add_parser("weakvalue")
    _common(p)
    p.add_argument("--operator")
    p.add_argument("--pre")
    p.add_argument("--post")
    return parser


_CONFIG_KEYS = {"task", "backend", "j", "cutoff", "grid", "half_width", "kappa", "state", "s",
                "out", "report", "strict"}


def config_from_args(argv=None) -> JobConfig:
    ns = vars(make_parser().parse_args(argv))
    base = {k: v for k, v in ns.items() if k in _CONFIG_KEYS}
    extra = {k: v for k, v in ns.items() if k not in _CONFIG_KEYS and v is not None}
    return JobConfig(**base, extra=extra)


def main(argv=None) -> int:
    try:
        cfg = config_from_args(argv)
        return run(cfg)
    except QPDError as exc:
        err = exc
    except (ValueError, OSError) as exc:
        err = ConfigError(str(exc))
    sys.stderr.write(json.dumps({"error": err.category, "code": err.code, "message": str(err)},
                                sort_keys=True) + "\n")
    return err.code


if __name__ == "__main__":
    sys.exit(main())
