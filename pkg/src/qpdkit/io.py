"""Field CSV files and density-matrix files.

Field file::

    # s=<s> backend=<spin:j | ccr:N> grid=<AxB>
    coord1,coord2,value            (real fields)
    coord1,coord2,re,im            (complex fields)

Spin coordinates are (theta, phi); plane coordinates are (Re alpha, Im alpha).
Numbers are written with 17 significant digits so files round-trip exactly.
"""
from __future__ import annotations

import io
from pathlib import Path

import numpy as np

from .ccr import PlanarGrid
from .errors import ConfigError
from .fields import QPDField
from .su2 import SphereGrid, parse_j

COMPLEX_TOL = 1e-12


def _fmt(x: float) -> str:
    return format(float(x), ".17g")


def field_header(field: QPDField) -> str:
    return f"# s={_fmt(field.s)} backend={field.backend} grid={field.grid.label}"


def format_field(field: QPDField) -> str:
    c1, c2 = field.grid.coordinates()
    vals = field.values
    cplx = np.iscomplexobj(vals) and np.max(np.abs(vals.imag)) > COMPLEX_TOL
    lines = [field_header(field)]
    if cplx:
        for a, b, v in zip(c1, c2, vals):
            lines.append(f"{_fmt(a)},{_fmt(b)},{_fmt(v.real)},{_fmt(v.imag)}")
    else:
        for a, b, v in zip(c1, c2, np.real(vals)):
            lines.append(f"{_fmt(a)},{_fmt(b)},{_fmt(v)}")
    return "\n".join(lines) + "\n"


def write_field_csv(field: QPDField, path) -> None:
    Path(path).write_text(format_field(field))


def _parse_header(line: str) -> dict:
    if not line.startswith("#"):
        raise ConfigError("field file must start with a '# s=... backend=... grid=...' header")
    meta = {}
    for tok in line[1:].split():
        if "=" in tok:
            k, v = tok.split("=", 1)
            meta[k] = v
    missing = {"s", "backend", "grid"} - meta.keys()
    if missing:
        raise ConfigError(f"field header lacks {sorted(missing)}")
    return meta


def grid_from_header(backend: str, grid: str, coords: np.ndarray):
    kind, _, param = backend.partition(":")
    try:
        a, b = (int(x) for x in grid.lower().split("x"))
    except ValueError as exc:
        raise ConfigError(f"bad grid label {grid!r}") from exc
    if kind == "spin":
        g = SphereGrid(parse_j(param), a, b)
        ref = g.points
    elif kind == "ccr":
        if a != b:
            raise ConfigError("plane grids are square")
        half = -float(coords[0, 0])
        g = PlanarGrid(half, a)
        ref = np.stack(g.coordinates(), axis=-1)
    else:
        raise ConfigError(f"unknown backend {backend!r}")
    if coords.shape != ref.shape or np.max(np.abs(coords - ref)) > 1e-9:
        raise ConfigError("node coordinates do not match the declared grid")
    return g


def read_field_csv(path) -> QPDField:
    text = Path(path).read_text()
    head, _, body = text.partition("\n")
    meta = _parse_header(head)
    data = np.loadtxt(io.StringIO(body), delimiter=",", ndmin=2)
    if data.shape[1] not in (3, 4):
        raise ConfigError("field rows must have 3 or 4 columns")
    coords = data[:, :2]
    values = data[:, 2] if data.shape[1] == 3 else data[:, 2] + 1j * data[:, 3]
    grid = grid_from_header(meta["backend"], meta["grid"], coords)
    return QPDField(float(meta["s"]), grid, values, backend=meta["backend"])


def read_matrix_csv(path, dim: int | None = None) -> np.ndarray:
    """Row-major matrix with (re, im) pairs interleaved along each row."""
    data = np.loadtxt(path, delimiter=",", ndmin=2)
    if data.shape[1] % 2:
        raise ConfigError("matrix rows need an even number of columns (re,im pairs)")
    m = data[:, 0::2] + 1j * data[:, 1::2]
    if m.shape[0] != m.shape[1]:
        raise ConfigError(f"matrix is not square: {m.shape}")
    if dim is not None and m.shape[0] != dim:
        raise ConfigError(f"matrix dimension {m.shape[0]} does not match the backend dimension {dim}")
    return m


def write_matrix_csv(m: np.ndarray, path) -> None:
    rows = []
    for row in np.asarray(m, dtype=complex):
        rows.append(",".join(f"{_fmt(z.real)},{_fmt(z.imag)}" for z in row))
    Path(path).write_text("\n".join(rows) + "\n")
