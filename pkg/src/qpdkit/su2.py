"""Spin-j coherent states on the sphere.

Phase space is S^2 with measure dmu = (2j+1) sin(theta) dtheta dphi / (4 pi),
so that the coherent projectors integrate to the identity. The overlap
factor |<n|n'>|^2 = cos^{4j}(Theta/2) is a zonal function, which makes its
spectrum (one eigenvalue per harmonic degree l <= 2j) easy to get exactly.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np
from numpy.polynomial import legendre as npleg
from scipy.spatial.transform import Rotation
from scipy.special import comb, eval_legendre, sph_harm_y

from .errors import ConditioningError
from .fields import QPDField
from .linalg import as_matrix, matrix_exponential

MAX_AMPLIFICATION = 1e14


@dataclass(frozen=True)
class SpinSystem:
    j: float

    def __post_init__(self):
        if 2 * self.j != int(2 * self.j) or self.j < 0.5:
            raise ValueError(f"j must be a half-integer >= 1/2, got {self.j}")

    @property
    def dim(self) -> int:
        return int(round(2 * self.j)) + 1

    @property
    def twoj(self) -> int:
        return int(round(2 * self.j))

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order: j, j-1, ..., -j."""
        return self.j - np.arange(self.dim)

    @cached_property
    def jz(self) -> np.ndarray:
        return np.diag(self.m_values).astype(complex)

    @cached_property
    def jplus(self) -> np.ndarray:
        m = self.m_values[1:]
        # |m> -> |m+1>, which sits one index earlier
        return np.diag(np.sqrt(self.j * (self.j + 1) - m * (m + 1)), 1).astype(complex)

    @property
    def jminus(self) -> np.ndarray:
        return self.jplus.conj().T

    @property
    def jx(self) -> np.ndarray:
        return (self.jplus + self.jminus) / 2

    @property
    def jy(self) -> np.ndarray:
        return (self.jplus - self.jminus) / 2j

    def rotation(self, rotvec) -> np.ndarray:
        """U = exp(-i omega n.J) for the rotation vector omega*n."""
        rotvec = np.asarray(rotvec, dtype=float)
        gen = rotvec[0] * self.jx + rotvec[1] * self.jy + rotvec[2] * self.jz
        return matrix_exponential(-1j * gen)


def unit_vectors(points) -> np.ndarray:
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    th, ph = pts[:, 0], pts[:, 1]
    return np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)


def angles(vectors) -> np.ndarray:
    v = np.atleast_2d(vectors)
    v = v / np.linalg.norm(v, axis=-1, keepdims=True)
    th = np.arccos(np.clip(v[:, 2], -1.0, 1.0))
    ph = np.mod(np.arctan2(v[:, 1], v[:, 0]), 2 * np.pi)
    return np.stack([th, ph], axis=-1)


def spin_coherent_many(sys: SpinSystem, points) -> np.ndarray:
    """Rows are coherent vectors for each (theta, phi) in ``points``.

    <j,m|n> = sqrt(C(2j, j-m)) cos^{j+m}(theta/2) sin^{j-m}(theta/2) e^{i(j-m)phi}
    """
    pts = np.atleast_2d(np.asarray(points, dtype=float))
    th, ph = pts[:, :1], pts[:, 1:2]
    k = np.arange(sys.dim)  # k = j - m
    amp = np.sqrt(comb(sys.twoj, k)) * np.cos(th / 2) ** (sys.twoj - k) * np.sin(th / 2) ** k
    return amp * np.exp(1j * k * ph)


def spin_coherent(sys: SpinSystem, theta: float, phi: float) -> np.ndarray:
    if not 0 <= theta <= np.pi:
        raise ValueError(f"theta must lie in [0, pi], got {theta}")
    return spin_coherent_many(sys, [[theta, phi]])[0]


def cos_angle(xi, eta) -> np.ndarray:
    """Matrix of n(xi_a) . n(eta_b)."""
    return np.clip(unit_vectors(xi) @ unit_vectors(eta).T, -1.0, 1.0)


def su2_delta(sys: SpinSystem, xi, eta) -> np.ndarray:
    c = cos_angle(xi, eta)
    return ((1 + c) / 2) ** sys.twoj


@dataclass(frozen=True)
class SphereGrid:
    """Gauss-Legendre in cos(theta) times a uniform periodic grid in phi."""

    j: float
    n_theta: int
    n_phi: int

    @property
    def shape(self) -> tuple[int, int]:
        return (self.n_theta, self.n_phi)

    @property
    def size(self) -> int:
        return self.n_theta * self.n_phi

    @property
    def label(self) -> str:
        return f"{self.n_theta}x{self.n_phi}"

    @cached_property
    def _rule(self):
        x, g = np.polynomial.legendre.leggauss(self.n_theta)
        # north pole first
        return x[::-1], g[::-1]

    @cached_property
    def theta(self) -> np.ndarray:
        return np.arccos(self._rule[0])

    @cached_property
    def phi(self) -> np.ndarray:
        return 2 * np.pi * np.arange(self.n_phi) / self.n_phi

    @cached_property
    def points(self) -> np.ndarray:
        th, ph = np.meshgrid(self.theta, self.phi, indexing="ij")
        return np.stack([th.ravel(), ph.ravel()], axis=-1)

    @cached_property
    def weights(self) -> np.ndarray:
        w = (2 * self.j + 1) / (4 * np.pi) * np.outer(self._rule[1], np.full(self.n_phi, 2 * np.pi / self.n_phi))
        return w.ravel()

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points[:, 0], self.points[:, 1]


def sphere_quadrature(sys: SpinSystem, n_theta: int | None = None, n_phi: int | None = None) -> SphereGrid:
    """Grid exact for integrands band-limited to harmonic degree 4j."""
    n_theta = sys.twoj + 1 if n_theta is None else int(n_theta)
    n_phi = 2 * sys.twoj + 2 if n_phi is None else int(n_phi)
    if n_theta < sys.twoj + 1:
        raise ValueError(f"need at least {sys.twoj + 1} Gauss-Legendre nodes for j={sys.j}, got {n_theta}")
    if n_phi < 2 * sys.twoj + 1:
        raise ValueError(f"need at least {2 * sys.twoj + 1} azimuthal nodes for j={sys.j}, got {n_phi}")
    return SphereGrid(sys.j, n_theta, n_phi)


@dataclass(frozen=True)
class SpinSpectrum:
    """Eigen-expansion of the overlap factor in harmonics orthonormal for dmu.

    ``eigenvalues[l]`` multiplies the (2l+1) functions
    sqrt(4 pi / (2j+1)) Y_lm, l = 0..2j.
    """

    j: float
    eigenvalues: np.ndarray

    @property
    def band(self) -> int:
        return len(self.eigenvalues) - 1

    @property
    def size(self) -> int:
        return (self.band + 1) ** 2

    def check_power(self, t: float):
        amp = np.max(self.eigenvalues ** t)
        if not np.isfinite(amp) or amp > MAX_AMPLIFICATION:
            raise ConditioningError(
                f"kernel power t={t} amplifies a harmonic by {amp:.3e} (limit {MAX_AMPLIFICATION:.0e})")

    def basis(self, points) -> np.ndarray:
        """(npoints, (2j+1)^2) matrix of orthonormal harmonics, ordered (l, m)."""
        pts = np.atleast_2d(np.asarray(points, dtype=float))
        th, ph = pts[:, 0], pts[:, 1]
        scale = np.sqrt(4 * np.pi / (2 * self.j + 1))
        cols = [scale * sph_harm_y(l, m, th, ph)
                for l in range(self.band + 1) for m in range(-l, l + 1)]
        return np.stack(cols, axis=-1)

    def mode_eigenvalues(self) -> np.ndarray:
        return np.concatenate([np.full(2 * l + 1, v) for l, v in enumerate(self.eigenvalues)])

    def power(self, t: float, xi, eta) -> np.ndarray:
        """Delta^t(xi_a, eta_b) via the addition theorem (real, symmetric)."""
        self.check_power(t)
        l = np.arange(self.band + 1)
        coef = self.eigenvalues ** t * (2 * l + 1) / (2 * self.j + 1)
        return npleg.legval(cos_angle(xi, eta), coef)

    def power_from_basis(self, t: float, xi, eta) -> np.ndarray:
        self.check_power(t)
        bx, be = self.basis(xi), self.basis(eta)
        return (bx.conj() * self.mode_eigenvalues() ** t) @ be.T


def delta_spectrum(sys: SpinSystem) -> SpinSpectrum:
    """Project cos^{4j}(Theta/2) = ((1+x)/2)^{2j} onto Legendre polynomials."""
    x, g = np.polynomial.legendre.leggauss(sys.twoj + 1)
    f = ((1 + x) / 2) ** sys.twoj
    ups = np.array([(2 * sys.j + 1) / 2 * np.sum(g * f * eval_legendre(l, x))
                    for l in range(sys.twoj + 1)])
    return SpinSpectrum(sys.j, ups)


def husimi_spin(rho, grid: SphereGrid, label: str = "") -> QPDField:
    sys = SpinSystem(grid.j)
    vecs = spin_coherent_many(sys, grid.points)
    a = as_matrix(rho)
    vals = np.einsum("ki,ij,kj->k", vecs.conj(), a, vecs)
    if np.allclose(a, a.conj().T, atol=1e-12):
        vals = vals.real
    f = QPDField(1.0, grid, vals, label=label, backend=f"spin:{_jlabel(grid.j)}")
    f.info["normalization"] = float(np.real(f.integral()))
    return f


def _jlabel(j: float) -> str:
    return str(int(j)) if j == int(j) else f"{int(2 * j)}/2"


def parse_j(text: str) -> float:
    if "/" in text:
        num, den = text.split("/")
        return float(num) / float(den)
    return float(text)


# 12 fixed rotations for covariance sampling: the identity, the three
# coordinate quarter turns, and eight generic axis-angle pairs.
_ROTVECS = [
    (0.0, 0.0, 0.0),
    (np.pi / 2, 0.0, 0.0),
    (0.0, np.pi / 2, 0.0),
    (0.0, 0.0, np.pi / 2),
    (0.3, -1.1, 0.7),
    (-2.0, 0.4, 0.9),
    (1.3, 1.3, -1.3),
    (0.0, 2.5, 1.0),
    (-0.7, -0.2, -2.2),
    (2.9, 0.1, 0.0),
    (0.5, 0.5, 0.5),
    (-1.6, 2.1, 0.3),
]


class SpinPhaseSpace:
    """Sphere backend: coherent states, kernel powers and quadrature on one grid."""

    name = "spin"

    def __init__(self, system: SpinSystem, grid: SphereGrid | None = None,
                 spectrum: SpinSpectrum | None = None):
        self.system = system
        self.grid = sphere_quadrature(system) if grid is None else grid
        if self.grid.j != system.j:
            raise ValueError("grid built for a different j")
        self.spectrum = delta_spectrum(system) if spectrum is None else spectrum

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def label(self) -> str:
        return f"spin:{_jlabel(self.system.j)}"

    @property
    def points(self) -> np.ndarray:
        return self.grid.points

    @property
    def weights(self) -> np.ndarray:
        return self.grid.weights

    def coherent_states(self, points=None) -> np.ndarray:
        return spin_coherent_many(self.system, self.points if points is None else points)

    def kernel(self, t: float, xi=None, eta=None) -> np.ndarray:
        xi = self.points if xi is None else xi
        eta = self.points if eta is None else eta
        return self.spectrum.power(t, xi, eta)

    def check_power(self, t: float):
        self.spectrum.check_power(t)

    @cached_property
    def _grid_basis(self) -> np.ndarray:
        return self.spectrum.basis(self.points)

    def convolve(self, values, t: float, points=None) -> np.ndarray:
        """Quadrature of int dmu(eta) f(eta) Delta^t(xi, eta) at ``points``.

        On the grid this goes through the harmonic coefficients, so the cost
        is linear in the node count.
        """
        values = np.asarray(values)
        if points is None:
            self.check_power(t)
            B = self._grid_basis
            coef = B.T @ (self.weights * values)
            out = B.conj() @ (self.spectrum.mode_eigenvalues() ** t * coef)
            return out if np.iscomplexobj(values) else out.real
        mat = self.kernel(t, points, self.points) * self.weights
        return mat @ values

    def husimi(self, A, points=None) -> np.ndarray:
        vecs = self.coherent_states(points)
        return np.einsum("ki,ij,kj->k", vecs.conj(), as_matrix(A), vecs)

    def group_elements(self) -> list:
        return [np.array(r) for r in _ROTVECS]

    def act(self, g, points) -> np.ndarray:
        rot = Rotation.from_rotvec(g)
        return angles(rot.apply(unit_vectors(points)))

    def unitary(self, g) -> np.ndarray:
        return self.system.rotation(g)
