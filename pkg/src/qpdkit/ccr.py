"""Single-mode CCR (Heisenberg group) coherent states on the plane.

Conventions: hbar = 1, a = (q + i p)/sqrt(2), phase-space point alpha with
q = sqrt(2) Re(alpha), p = sqrt(2) Im(alpha), measure d^2 alpha / pi.
Fields are normalized against that measure, so the vacuum Husimi function
is exp(-|alpha|^2) and the vacuum Wigner function is 2 exp(-2|alpha|^2).
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.special import eval_genlaguerre, gammaln, j0

from .errors import ConditioningError, CutoffError, SingularPWarning, TruncationWarning
from .fields import QPDField
from .linalg import as_matrix, matrix_exponential

MIN_CUTOFF = 8
MAX_AMPLIFICATION = 1e14


@dataclass(frozen=True)
class CcrSystem:
    cutoff: int

    def __post_init__(self):
        if int(self.cutoff) != self.cutoff or self.cutoff < 1:
            raise ValueError(f"cutoff must be a positive integer, got {self.cutoff}")

    @property
    def dim(self) -> int:
        return self.cutoff + 1

    def require_cutoff(self):
        if self.cutoff < MIN_CUTOFF:
            raise CutoffError(f"Fock cutoff {self.cutoff} < {MIN_CUTOFF}; too small for distributions")

    @cached_property
    def a(self) -> np.ndarray:
        return np.diag(np.sqrt(np.arange(1, self.dim)), 1).astype(complex)

    @property
    def adag(self) -> np.ndarray:
        return self.a.conj().T

    @property
    def number(self) -> np.ndarray:
        return np.diag(np.arange(self.dim)).astype(complex)

    @property
    def q(self) -> np.ndarray:
        return (self.a + self.adag) / np.sqrt(2)

    @property
    def p(self) -> np.ndarray:
        return (self.a - self.adag) / (1j * np.sqrt(2))


def _log_coherent_amplitudes(dim: int, alpha: np.ndarray):
    n = np.arange(dim)
    r = np.abs(alpha)[:, None]
    with np.errstate(divide="ignore", invalid="ignore"):
        logamp = -r ** 2 / 2 + n * np.log(r) - 0.5 * gammaln(n + 1)
    logamp[:, 0] = (-r ** 2 / 2)[:, 0]
    return logamp, np.angle(alpha)[:, None] * n


def coherent_vectors(sys: CcrSystem, alphas, renormalize: bool = True):
    """Rows c_n = exp(-|a|^2/2) a^n / sqrt(n!), n = 0..N, for each alpha.

    Returns ``(vectors, norms)``; ``norms`` is the truncated norm before
    renormalization (1 means nothing was lost to the cutoff).
    """
    alpha = np.atleast_1d(np.asarray(alphas, dtype=complex)).ravel()
    logamp, phase = _log_coherent_amplitudes(sys.dim, alpha)
    vecs = np.exp(logamp + 1j * phase)
    if not np.all(np.isfinite(vecs)):
        raise OverflowError("coherent amplitude overflow")
    norms = np.linalg.norm(vecs, axis=1)
    if np.any(norms == 0):
        raise OverflowError("coherent state lies entirely beyond the Fock cutoff")
    if renormalize:
        vecs = vecs / norms[:, None]
    return vecs, norms


def coherent_vector(sys: CcrSystem, alpha: complex, return_norm: bool = False):
    if abs(alpha) ** 2 > sys.cutoff / 4:
        warnings.warn(f"|alpha|^2 = {abs(alpha) ** 2:.3g} exceeds N/4 = {sys.cutoff / 4:.3g}; "
                      "truncation may be significant", TruncationWarning, stacklevel=2)
    vecs, norms = coherent_vectors(sys, [alpha])
    return (vecs[0], float(norms[0])) if return_norm else vecs[0]


def displacement(sys: CcrSystem, alpha: complex) -> np.ndarray:
    """exp(alpha a^dag - conj(alpha) a) on the truncated space."""
    return matrix_exponential(alpha * sys.adag - np.conj(alpha) * sys.a)


def ccr_delta(alpha, beta):
    return np.exp(-np.abs(np.asarray(alpha) - np.asarray(beta)) ** 2)


def displacement_trace(A, betas) -> np.ndarray:
    """Tr[A D(beta)] using the exact (untruncated) Fock matrix elements of D.

    <n+d|D(b)|n> = sqrt(n!/(n+d)!) b^d e^{-|b|^2/2} L_n^{(d)}(|b|^2)
    <n|D(b)|n+d> = sqrt(n!/(n+d)!) (-conj b)^d e^{-|b|^2/2} L_n^{(d)}(|b|^2)
    """
    a = as_matrix(A)
    dim = a.shape[0]
    b = np.asarray(betas, dtype=complex)
    shape = b.shape
    b = b.ravel()
    x = np.abs(b) ** 2
    out = np.zeros(b.shape, dtype=complex)
    for d in range(dim):
        n = np.arange(dim - d)
        upper = np.diagonal(a, offset=d)   # A[n, n+d], pairs with D[n+d, n]
        lower = np.diagonal(a, offset=-d)  # A[n+d, n], pairs with D[n, n+d]
        if not (np.any(upper) or np.any(lower)):
            continue
        lag = eval_genlaguerre(n[:, None], d, x[None, :])
        pref = np.exp(0.5 * (gammaln(n + 1) - gammaln(n + d + 1)))[:, None] * np.exp(-x / 2)[None, :]
        core = np.sum(upper[:, None] * pref * lag, axis=0) * b ** d
        if d:
            core += np.sum(lower[:, None] * pref * lag, axis=0) * (-b.conj()) ** d
        out += core
    return out.reshape(shape)


def characteristic_function(A, u, v) -> np.ndarray:
    """Z_A(u, v) = Tr[A exp(i(u q + v p))]."""
    u, v = np.broadcast_arrays(np.asarray(u, dtype=float), np.asarray(v, dtype=float))
    return displacement_trace(A, (-v + 1j * u) / np.sqrt(2))


@dataclass(frozen=True)
class PlanarGrid:
    """Uniform periodic grid on [-L, L)^2 in (Re alpha, Im alpha).

    The node at index M/2 is the origin. Weights are the trapezoid weights
    of the periodic rule, h^2/pi, against d^2 alpha / pi.
    """

    half_width: float = 5.0
    points: int = 128

    def __post_init__(self):
        if self.points % 2:
            raise ValueError("points per axis must be even")

    @property
    def shape(self) -> tuple[int, int]:
        return (self.points, self.points)

    @property
    def size(self) -> int:
        return self.points ** 2

    @property
    def label(self) -> str:
        return f"{self.points}x{self.points}"

    @property
    def spacing(self) -> float:
        return 2 * self.half_width / self.points

    @cached_property
    def axis(self) -> np.ndarray:
        return -self.half_width + self.spacing * np.arange(self.points)

    @cached_property
    def nodes(self) -> np.ndarray:
        x, y = np.meshgrid(self.axis, self.axis, indexing="ij")
        return (x + 1j * y).ravel()

    @cached_property
    def weights(self) -> np.ndarray:
        return np.full(self.size, self.spacing ** 2 / np.pi)

    @cached_property
    def wavenumber_sq(self) -> np.ndarray:
        """|k|^2 on the FFT grid (unshifted order), k dual to (Re, Im) alpha."""
        k = 2 * np.pi * np.fft.fftfreq(self.points, d=self.spacing)
        kx, ky = np.meshgrid(k, k, indexing="ij")
        return kx ** 2 + ky ** 2

    def coordinates(self) -> tuple[np.ndarray, np.ndarray]:
        return self.nodes.real, self.nodes.imag

    def gaussian_check(self) -> float:
        """sum w exp(-|alpha|^2) - 1."""
        return float(np.sum(self.weights * np.exp(-np.abs(self.nodes) ** 2)) - 1.0)

    @cached_property
    def dual_axis(self) -> np.ndarray:
        """Centered (u or v) axis dual to q = sqrt(2) Re(alpha)."""
        dq = np.sqrt(2) * self.spacing
        du = 2 * np.pi / (self.points * dq)
        return du * (np.arange(self.points) - self.points // 2)


def _grid_from_characteristic(Z: np.ndarray, grid: PlanarGrid) -> np.ndarray:
    """2 pi * int dudv/(2pi)^2 exp(-i(uq+vp)) Z(u,v) on the grid nodes.

    The factor 2 pi converts a density in dq dp to one in d^2 alpha / pi.
    """
    du = grid.dual_axis[1] - grid.dual_axis[0]
    F = np.fft.fftshift(np.fft.fft2(np.fft.ifftshift(Z)))
    return 2 * np.pi * F * du * du / (2 * np.pi) ** 2


def _check_dual_boundary(Z: np.ndarray, tol: float, what: str):
    edge = max(np.abs(Z[0]).max(), np.abs(Z[-1]).max(), np.abs(Z[:, 0]).max(), np.abs(Z[:, -1]).max())
    if edge > tol:
        raise CutoffError(f"{what}: |Z| = {edge:.3e} at the dual-grid boundary exceeds {tol:.0e}; "
                          "refine the grid spacing")
    return float(edge)


def dual_characteristic(A, grid: PlanarGrid) -> np.ndarray:
    uu, vv = np.meshgrid(grid.dual_axis, grid.dual_axis, indexing="ij")
    return characteristic_function(A, uu, vv)


def husimi_ccr(rho, grid: PlanarGrid, sys: CcrSystem | None = None, label: str = "") -> QPDField:
    a = as_matrix(rho)
    sys = CcrSystem(a.shape[0] - 1) if sys is None else sys
    sys.require_cutoff()
    # unnormalized projections: exact for operators supported below the cutoff
    vecs, _ = coherent_vectors(sys, grid.nodes, renormalize=False)
    vals = np.einsum("ki,ij,kj->k", vecs.conj(), a, vecs)
    if np.allclose(a, a.conj().T, atol=1e-12):
        vals = vals.real
    f = QPDField(1.0, grid, vals, label=label, backend=f"ccr:{sys.cutoff}")
    f.info["normalization"] = float(np.real(f.integral()))
    return f


def wigner_ccr(rho, grid: PlanarGrid, tol: float = 1e-6, label: str = "") -> QPDField:
    """Wigner function as the inverse Fourier transform of Tr[rho e^{i(uq+vp)}]."""
    a = as_matrix(rho)
    CcrSystem(a.shape[0] - 1).require_cutoff()
    Z = dual_characteristic(a, grid)
    edge = _check_dual_boundary(Z, tol, "wigner_ccr")
    F = _grid_from_characteristic(Z, grid)
    if np.allclose(a, a.conj().T, atol=1e-12):
        F = F.real
    f = QPDField(0.0, grid, F, label=label, backend=f"ccr:{a.shape[0] - 1}")
    f.info.update(normalization=float(np.real(f.integral())), dual_boundary=edge)
    return f


def planar_convolve(values, grid: PlanarGrid, t: float, kappa: float | None) -> np.ndarray:
    """Convolve a grid field with Delta^t, symbol exp(-t|k|^2/4).

    Negative t requires a band limit; modes with |k| > kappa are dropped.
    """
    vals = np.asarray(values).reshape(grid.shape)
    k2 = grid.wavenumber_sq
    if t < 0 or (t == 0 and kappa is not None):
        if kappa is None:
            raise ConditioningError("anti-mollifying transform needs an explicit band limit kappa")
        symbol = np.where(k2 <= kappa ** 2, np.exp(-t * np.minimum(k2, kappa ** 2) / 4), 0.0)
    else:
        symbol = np.exp(-t * k2 / 4)
    out = np.fft.ifft2(np.fft.fft2(vals) * symbol)
    if not np.iscomplexobj(values):
        out = out.real
    return out.ravel()


def glauber_sudarshan_ccr(rho, grid: PlanarGrid, kappa: float, label: str = "",
                          energy_tol: float = 1e-3) -> QPDField:
    """Band-limited Glauber-Sudarshan field: Husimi times exp(+|k|^2/4), |k| <= kappa."""
    if kappa <= 0:
        raise ValueError("kappa must be positive")
    husimi = husimi_ccr(rho, grid)
    k2 = grid.wavenumber_sq
    inband = k2 <= kappa ** 2
    spec = np.fft.fft2(husimi.as_2d()) * np.where(inband, np.exp(np.minimum(k2, kappa ** 2) / 4), 0.0)
    P = np.fft.ifft2(spec)
    if not np.iscomplexobj(husimi.values):
        P = P.real
    energy = np.abs(spec) ** 2
    total = energy.sum()
    frac = float(energy[inband & (k2 > (0.8 * kappa) ** 2)].sum() / total) if total > 0 else 0.0
    back = np.fft.ifft2(spec * np.exp(-k2 / 4))
    recon = float(np.max(np.abs(back - husimi.as_2d())))
    f = QPDField(-1.0, grid, P, label=label, backend=husimi.backend)
    f.info.update(kappa=kappa, edge_energy_fraction=frac, reconstruction_error=recon,
                  normalization=float(np.real(f.integral())), singular=frac > energy_tol)
    if frac > energy_tol:
        warnings.warn(f"Glauber-Sudarshan field not resolved at kappa={kappa}: "
                      f"{frac:.3e} of the spectral energy lies in 0.8kappa < |k| <= kappa",
                      SingularPWarning, stacklevel=2)
    return f


# fixed displacements for covariance sampling
_SHIFTS = [0.0, 0.25, 0.25j, -0.3 + 0.1j, 0.4 - 0.2j, 0.1 + 0.35j,
           -0.15 - 0.25j, 0.5, -0.5j, 0.2 + 0.2j, -0.35 + 0.3j, 0.05 - 0.45j]


class PlanarSpectrum:
    """Plane-wave expansion of exp(-|alpha-beta|^2): eigenvalue exp(-|k|^2/4).

    ``kappa`` bounds |k| for non-positive powers.
    """

    def __init__(self, kappa: float | None = 6.0, hankel_nodes: int = 400):
        self.kappa = kappa
        self._x, self._g = np.polynomial.legendre.leggauss(hankel_nodes)

    def check_power(self, t: float):
        if t >= 0:
            return
        if self.kappa is None:
            raise ConditioningError("negative kernel power without a band limit")
        amp = np.exp(-t * self.kappa ** 2 / 4)
        if amp > MAX_AMPLIFICATION:
            raise ConditioningError(f"kernel power t={t} at kappa={self.kappa} amplifies by {amp:.3e}")

    def radial(self, t: float, r) -> np.ndarray:
        """Delta^t as a function of |alpha - beta|."""
        self.check_power(t)
        r = np.asarray(r, dtype=float)
        if t > 0:
            return np.exp(-r ** 2 / t) / t
        # (1/2) int_0^kappa exp(-t k^2/4) J0(k r) k dk
        k = self.kappa * (self._x + 1) / 2
        wk = self.kappa / 2 * self._g * np.exp(-t * k ** 2 / 4) * k / 2
        return j0(np.multiply.outer(r, k)) @ wk

    def power(self, t: float, xi, eta) -> np.ndarray:
        xi = np.atleast_1d(np.asarray(xi, dtype=complex))
        eta = np.atleast_1d(np.asarray(eta, dtype=complex))
        return self.radial(t, np.abs(xi[:, None] - eta[None, :]))


class CcrPhaseSpace:
    """Plane backend: truncated-Fock coherent states on a periodic grid."""

    name = "ccr"

    def __init__(self, system: CcrSystem, grid: PlanarGrid | None = None,
                 spectrum: PlanarSpectrum | None = None):
        system.require_cutoff()
        self.system = system
        self.grid = PlanarGrid() if grid is None else grid
        self.spectrum = PlanarSpectrum() if spectrum is None else spectrum

    @property
    def dim(self) -> int:
        return self.system.dim

    @property
    def label(self) -> str:
        return f"ccr:{self.system.cutoff}"

    @property
    def points(self) -> np.ndarray:
        return self.grid.nodes

    @property
    def weights(self) -> np.ndarray:
        return self.grid.weights

    def coherent_states(self, points=None) -> np.ndarray:
        """Fock projections of the coherent states (norm < 1 far from the origin).

        Keeping the projection unnormalized makes the grid sum of projectors
        the identity and the Husimi symbol exact for truncated operators.
        """
        pts = self.points if points is None else points
        return coherent_vectors(self.system, pts, renormalize=False)[0]

    def kernel(self, t: float, xi=None, eta=None) -> np.ndarray:
        xi = self.points if xi is None else xi
        eta = self.points if eta is None else eta
        return self.spectrum.power(t, xi, eta)

    def check_power(self, t: float):
        self.spectrum.check_power(t)

    def convolve(self, values, t: float, points=None) -> np.ndarray:
        self.check_power(t)
        if points is None:
            return planar_convolve(values, self.grid, t, self.spectrum.kappa)
        return (self.kernel(t, points, self.points) * self.weights) @ np.asarray(values)

    def husimi(self, A, points=None) -> np.ndarray:
        vecs = self.coherent_states(points)
        return np.einsum("ki,ij,kj->k", vecs.conj(), as_matrix(A), vecs)

    def group_elements(self) -> list:
        return [complex(b) for b in _SHIFTS]

    def act(self, g, points) -> np.ndarray:
        return np.asarray(points) + g

    def unitary(self, g) -> np.ndarray:
        return displacement(self.system, g)


def vacuum(sys: CcrSystem) -> np.ndarray:
    return fock(sys, 0)


def fock(sys: CcrSystem, n: int) -> np.ndarray:
    if not 0 <= n <= sys.cutoff:
        raise ValueError(f"Fock level {n} outside 0..{sys.cutoff}")
    rho = np.zeros((sys.dim, sys.dim), dtype=complex)
    rho[n, n] = 1.0
    return rho


def coherent_dm(sys: CcrSystem, alpha: complex) -> np.ndarray:
    c = coherent_vectors(sys, [alpha])[0][0]
    return np.outer(c, c.conj())


def thermal(sys: CcrSystem, nbar: float) -> np.ndarray:
    """(1-lam) sum lam^n |n><n| with lam = nbar/(nbar+1), renormalized after truncation."""
    lam = nbar / (nbar + 1)
    p = (1 - lam) * lam ** np.arange(sys.dim)
    return np.diag(p / p.sum()).astype(complex)
