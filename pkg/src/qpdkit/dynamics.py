"""Lindblad evolution of a density matrix and the induced field trajectories."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IntegrationError
from .linalg import as_matrix, hermiticity_error
from .spectral import qpd

STABILITY_LIMIT = 0.1
POSITIVITY_ABORT = -1e-6


@dataclass(frozen=True)
class LindbladSpec:
    """drho/dt = -i[H, rho] + sum_k g_k (L rho L^dag - {L^dag L, rho}/2)."""

    hamiltonian: np.ndarray
    jumps: tuple = ()

    def __post_init__(self):
        H = as_matrix(self.hamiltonian)
        if hermiticity_error(H) > 1e-12:
            raise ValueError("Hamiltonian is not Hermitian")
        jumps = tuple((as_matrix(L), float(g)) for L, g in self.jumps)
        for L, g in jumps:
            if g < 0:
                raise ValueError(f"negative jump rate {g}")
            if L.shape != H.shape:
                raise ValueError("jump operator shape does not match the Hamiltonian")
        object.__setattr__(self, "hamiltonian", H)
        object.__setattr__(self, "jumps", jumps)

    @property
    def dim(self) -> int:
        return self.hamiltonian.shape[0]

    def rate_scale(self) -> float:
        """||H|| + sum g ||L||^2 (spectral norms)."""
        return float(np.linalg.norm(self.hamiltonian, 2)
                     + sum(g * np.linalg.norm(L, 2) ** 2 for L, g in self.jumps))

    def __call__(self, rho: np.ndarray) -> np.ndarray:
        H = self.hamiltonian
        out = -1j * (H @ rho - rho @ H)
        for L, g in self.jumps:
            if g == 0:
                continue
            LdL = L.conj().T @ L
            out += g * (L @ rho @ L.conj().T - 0.5 * (LdL @ rho + rho @ LdL))
        return out


@dataclass
class Trajectory:
    times: np.ndarray
    states: np.ndarray
    info: dict = field(default_factory=dict)

    def __len__(self):
        return len(self.times)

    def expectation(self, A) -> np.ndarray:
        return np.einsum("ij,tji->t", as_matrix(A), self.states)


def evolve(rho0, spec: LindbladSpec, dt: float, steps: int, record_every: int = 1) -> Trajectory:
    """Fixed-step RK4; the state is re-symmetrized after every step."""
    scale = dt * spec.rate_scale()
    if scale >= STABILITY_LIMIT:
        raise IntegrationError(f"dt * (||H|| + sum g||L||^2) = {scale:.3g} >= {STABILITY_LIMIT}")
    rho = as_matrix(rho0).copy()
    if rho.shape != (spec.dim, spec.dim):
        raise ValueError("initial state and generator dimensions differ")
    times, states = [0.0], [rho.copy()]
    min_eig = np.linalg.eigvalsh(rho).min()
    for n in range(1, steps + 1):
        k1 = spec(rho)
        k2 = spec(rho + dt / 2 * k1)
        k3 = spec(rho + dt / 2 * k2)
        k4 = spec(rho + dt * k3)
        rho = rho + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        rho = (rho + rho.conj().T) / 2
        lo = np.linalg.eigvalsh(rho)[0]
        min_eig = min(min_eig, lo)
        if lo < POSITIVITY_ABORT:
            raise IntegrationError(f"positivity lost at step {n}: eigenvalue {lo:.3e}")
        if n % record_every == 0:
            times.append(n * dt)
            states.append(rho.copy())
    traj = Trajectory(np.array(times), np.array(states))
    traj.info.update(min_eigenvalue=float(min_eig),
                     trace_drift=float(np.max(np.abs(np.trace(traj.states, axis1=1, axis2=2) - np.trace(states[0])))))
    return traj


def qpd_trajectory(traj: Trajectory, s: float, space) -> list:
    """Order-s field of every recorded state."""
    fields = []
    for t, rho in zip(traj.times, traj.states):
        f = qpd(space, rho, s, label=f"t={t:.17g}")
        f.info["time"] = float(t)
        fields.append(f)
    return fields
