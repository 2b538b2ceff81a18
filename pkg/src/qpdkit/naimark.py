"""Joint position/momentum measurement through a doubled system.

The observed mode is coupled to a probe; the commuting composite observables
q x 1 - 1 x q and p x 1 + 1 x p have a joint distribution whose
characteristic function is Z_rho(u, v) * <psi|e^{-i(uq+vp)}|psi>. With the
vacuum as probe this is the Husimi function.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .ccr import CcrSystem, PlanarGrid, _check_dual_boundary, _grid_from_characteristic, characteristic_function
from .fields import QPDField
from .linalg import as_matrix, commutator, tensor_product


@dataclass(frozen=True)
class CompositePair:
    q_comp: np.ndarray
    p_comp: np.ndarray
    cutoff: int
    interior_commutator_norm: float
    full_commutator_norm: float


def interior_indices(cutoff: int) -> np.ndarray:
    """Product-basis indices with n1 + n2 <= cutoff/2."""
    dim = cutoff + 1
    n1, n2 = np.divmod(np.arange(dim * dim), dim)
    return np.flatnonzero(n1 + n2 <= cutoff / 2)


def composite_pair(cutoff: int) -> CompositePair:
    if cutoff < 16:
        raise ValueError(f"composite pair needs cutoff >= 16, got {cutoff}")
    sys = CcrSystem(cutoff)
    eye = np.eye(sys.dim)
    qc = tensor_product(sys.q, eye) - tensor_product(eye, sys.q)
    pc = tensor_product(sys.p, eye) + tensor_product(eye, sys.p)
    comm = commutator(qc, pc)
    idx = interior_indices(cutoff)
    inner = comm[np.ix_(idx, idx)]
    return CompositePair(qc, pc, cutoff,
                         interior_commutator_norm=float(np.linalg.norm(inner, 2)),
                         full_commutator_norm=float(np.linalg.norm(comm, 2)))


def _hermite_functions(nmax: int, q: np.ndarray) -> np.ndarray:
    h = np.zeros((nmax + 1, q.size))
    h[0] = np.pi ** -0.25 * np.exp(-q ** 2 / 2)
    if nmax:
        h[1] = np.sqrt(2) * q * h[0]
    for n in range(1, nmax):
        h[n + 1] = np.sqrt(2 / (n + 1)) * q * h[n] - np.sqrt(n / (n + 1)) * h[n - 1]
    return h


def gaussian_probe(sys: CcrSystem, d: float = 1.0, return_norm: bool = False):
    """Fock coefficients of the wavefunction (pi d)^{-1/4} exp(-q^2 / 2d).

    d = 1 is the vacuum. Overlaps with the number states are computed by
    quadrature of Hermite functions; the vector is renormalized and the
    captured norm optionally returned.
    """
    if d <= 0:
        raise ValueError("probe variance d must be positive")
    half = 12.0 * np.sqrt(max(d, 1.0))
    q = np.linspace(-half, half, 8001)
    psi = (np.pi * d) ** -0.25 * np.exp(-q ** 2 / (2 * d))
    c = _hermite_functions(sys.cutoff, q) @ psi * (q[1] - q[0])
    norm = float(np.linalg.norm(c))
    c = (c / norm).astype(complex)
    return (c, norm) if return_norm else c


def joint_distribution(rho, probe, grid: PlanarGrid, tol: float = 1e-6, label: str = "") -> QPDField:
    """Density of the composite outcomes (per d^2 alpha / pi) on ``grid``."""
    a = as_matrix(rho)
    psi = np.asarray(probe, dtype=complex)
    if psi.shape != (a.shape[0],):
        raise ValueError("probe and state must share the Fock cutoff")
    psi = psi / np.linalg.norm(psi)
    uu, vv = np.meshgrid(grid.dual_axis, grid.dual_axis, indexing="ij")
    Z = characteristic_function(a, uu, vv) * characteristic_function(np.outer(psi, psi.conj()), -uu, -vv)
    edge = _check_dual_boundary(Z, tol, "joint_distribution")
    F = _grid_from_characteristic(Z, grid).real
    f = QPDField(1.0, grid, F, label=label or "joint", backend=f"ccr:{a.shape[0] - 1}")
    f.info.update(normalization=float(np.sum(grid.weights * f.values)), minimum=float(F.min()), dual_boundary=edge)
    return f


def classical_characteristic(field: QPDField, u, v) -> np.ndarray:
    """int F(alpha) exp(i(u q + v p)) d^2 alpha / pi by grid quadrature."""
    q = np.sqrt(2) * field.grid.nodes.real
    p = np.sqrt(2) * field.grid.nodes.imag
    u = np.atleast_1d(u)
    v = np.atleast_1d(v)
    phase = np.exp(1j * (np.multiply.outer(u, q) + np.multiply.outer(v, p)))
    return phase @ (field.grid.weights * field.values)


def marginal_moments(field: QPDField) -> dict:
    x, y = field.grid.nodes.real, field.grid.nodes.imag
    w = field.grid.weights * field.values.real
    mass = w.sum()
    mx, my = (w * x).sum() / mass, (w * y).sum() / mass
    return {"mass": float(mass), "mean": complex(mx, my),
            "var_re": float((w * (x - mx) ** 2).sum() / mass),
            "var_im": float((w * (y - my) ** 2).sum() / mass)}
