"""Dense finite-dimensional operator algebra.

Everything here works on plain ``numpy`` arrays; :class:`Operator` and
:class:`DensityOperator` are thin validating wrappers used at API
boundaries (CLI input, dynamics) where we want the invariants checked once.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Union

import numpy as np
import scipy.linalg

HERMITIAN_TOL = 1e-12
TRACE_TOL = 1e-12
POSITIVITY_TOL = -1e-10


class DimensionError(ValueError):
    pass


@dataclass(frozen=True)
class HilbertSpec:
    """Finite Hilbert space: a truncated Fock space or a spin-j irrep."""

    kind: str  # "fock" or "spin"
    param: float  # cutoff N, or j

    def __post_init__(self):
        if self.kind == "fock":
            if int(self.param) != self.param or self.param < 0:
                raise ValueError(f"Fock cutoff must be a non-negative integer, got {self.param}")
        elif self.kind == "spin":
            if 2 * self.param != int(2 * self.param) or self.param < 0.5:
                raise ValueError(f"spin j must be a positive half-integer, got {self.param}")
        else:
            raise ValueError(f"unknown Hilbert space kind {self.kind!r}")

    @classmethod
    def fock(cls, cutoff: int) -> "HilbertSpec":
        return cls("fock", int(cutoff))

    @classmethod
    def spin(cls, j: float) -> "HilbertSpec":
        return cls("spin", float(j))

    @property
    def dim(self) -> int:
        if self.kind == "fock":
            return int(self.param) + 1
        return int(round(2 * self.param)) + 1


@dataclass(frozen=True, eq=False)
class Operator:
    space: HilbertSpec
    matrix: np.ndarray

    def __post_init__(self):
        m = np.array(self.matrix, dtype=complex)
        d = self.space.dim
        if m.shape != (d, d):
            raise DimensionError(f"matrix shape {m.shape} does not match dim {d}")
        if not np.all(np.isfinite(m)):
            raise ValueError("operator has non-finite entries")
        m.setflags(write=False)
        object.__setattr__(self, "matrix", m)

    @property
    def dim(self) -> int:
        return self.space.dim

    def dag(self) -> "Operator":
        return Operator(self.space, self.matrix.conj().T)


class DensityOperator(Operator):
    """Hermitian, unit-trace, positive semidefinite operator."""

    def __post_init__(self):
        super().__post_init__()
        m = self.matrix
        herm = np.max(np.abs(m - m.conj().T)) if m.size else 0.0
        if herm > HERMITIAN_TOL:
            raise ValueError(f"density operator not Hermitian (deviation {herm:.3e})")
        tr = np.trace(m)
        if abs(tr - 1.0) > TRACE_TOL:
            raise ValueError(f"density operator trace {tr.real:.15g} != 1")
        lo = np.linalg.eigvalsh(m).min()
        if lo < POSITIVITY_TOL:
            raise ValueError(f"density operator has negative eigenvalue {lo:.3e}")

    @classmethod
    def from_vector(cls, space: HilbertSpec, psi) -> "DensityOperator":
        psi = np.asarray(psi, dtype=complex)
        psi = psi / np.linalg.norm(psi)
        return cls(space, np.outer(psi, psi.conj()))


OperatorLike = Union[Operator, np.ndarray]


def as_matrix(A: OperatorLike) -> np.ndarray:
    if isinstance(A, Operator):
        return A.matrix
    return np.asarray(A, dtype=complex)


def _check_same(A: np.ndarray, B: np.ndarray):
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError(f"expected a square matrix, got shape {A.shape}")
    if A.shape != B.shape:
        raise DimensionError(f"dimension mismatch: {A.shape} vs {B.shape}")


def trace_product(A: OperatorLike, B: OperatorLike) -> complex:
    """Tr(AB) without forming the product."""
    a, b = as_matrix(A), as_matrix(B)
    _check_same(a, b)
    if isinstance(A, Operator) and isinstance(B, Operator) and A.space != B.space:
        raise DimensionError("operators live on different spaces")
    return complex(np.einsum("ik,ki->", a, b))


def matrix_exponential(A: OperatorLike) -> np.ndarray:
    """exp(A) by scaling-and-squaring (scipy's Padé implementation)."""
    a = as_matrix(A)
    if not np.all(np.isfinite(a)):
        raise ValueError("matrix_exponential: non-finite input")
    with np.errstate(over="raise", invalid="raise"):
        try:
            out = scipy.linalg.expm(a)
        except FloatingPointError as exc:
            raise OverflowError("matrix_exponential overflowed") from exc
    if not np.all(np.isfinite(out)):
        raise OverflowError("matrix_exponential overflowed")
    return out


def tensor_product(A: OperatorLike, B: OperatorLike) -> np.ndarray:
    return np.kron(as_matrix(A), as_matrix(B))


def dagger(A: OperatorLike) -> np.ndarray:
    return as_matrix(A).conj().T


def hermiticity_error(A: OperatorLike) -> float:
    a = as_matrix(A)
    return float(np.max(np.abs(a - a.conj().T)))


def commutator(A: OperatorLike, B: OperatorLike) -> np.ndarray:
    a, b = as_matrix(A), as_matrix(B)
    return a @ b - b @ a


def random_hermitian(dim: int, rng: np.random.Generator, scale: float = 1.0) -> np.ndarray:
    g = rng.normal(size=(dim, dim)) + 1j * rng.normal(size=(dim, dim))
    return scale * (g + g.conj().T) / 2


def random_density(dim: int, rng: np.random.Generator, rank: int | None = None,
                   support: int | None = None) -> np.ndarray:
    """Random density matrix from a Ginibre ensemble.

    ``support`` restricts the state to the first ``support`` basis vectors,
    which keeps truncated-Fock states away from the cutoff.
    """
    support = dim if support is None else support
    rank = support if rank is None else rank
    g = rng.normal(size=(support, rank)) + 1j * rng.normal(size=(support, rank))
    rho = np.zeros((dim, dim), dtype=complex)
    rho[:support, :support] = g @ g.conj().T
    rho /= np.trace(rho).real
    return (rho + rho.conj().T) / 2
