import warnings

import numpy as np
import pytest

from qpdkit.ccr import (CcrPhaseSpace, CcrSystem, PlanarGrid, PlanarSpectrum, ccr_delta, characteristic_function,
                        coherent_dm, coherent_vector, coherent_vectors, displacement, displacement_trace, fock,
                        glauber_sudarshan_ccr, husimi_ccr, planar_convolve, thermal, vacuum, wigner_ccr)
from qpdkit.errors import ConditioningError, CutoffError, SingularPWarning, TruncationWarning


def test_ladder_commutator_interior():
    S = CcrSystem(20)
    comm = S.a @ S.adag - S.adag @ S.a
    # exact except at the cutoff corner
    assert np.allclose(comm[:-1, :-1], np.eye(20))
    assert np.isclose(comm[-1, -1], -20)


def test_cutoff_guard():
    with pytest.raises(CutoffError):
        husimi_ccr(vacuum(CcrSystem(4)), PlanarGrid(5.0, 16))


def test_coherent_vector_is_displaced_vacuum():
    S = CcrSystem(40)
    a = 0.8 - 0.6j
    v = coherent_vector(S, a)
    assert np.allclose(displacement(S, a)[:, 0], v, atol=1e-12)
    assert np.allclose(S.a @ v, a * v, atol=1e-9)


def test_coherent_vector_truncation_warning():
    with pytest.warns(TruncationWarning):
        _, norm = coherent_vector(CcrSystem(8), 2.5, return_norm=True)
    assert norm < 1


def test_resolution_of_unity_plane():
    S = CcrSystem(20)
    g = PlanarGrid(8.0, 128)
    v, _ = coherent_vectors(S, g.nodes, renormalize=False)
    res = np.einsum("k,ki,kj->ij", g.weights, v, v.conj())
    assert np.abs(res - np.eye(S.dim)).max() < 1e-9


def test_grid_layout():
    g = PlanarGrid(5.0, 128)
    assert g.axis[64] == 0
    assert g.nodes.reshape(g.shape)[64, 64] == 0
    assert abs(g.gaussian_check()) < 1e-10
    with pytest.raises(ValueError):
        PlanarGrid(5.0, 127)


def test_displacement_trace_against_dense():
    S = CcrSystem(40)
    rho = thermal(S, 0.5)
    for b in (0.3 - 0.2j, -0.1 + 0.5j, 0.0):
        dense = np.trace(rho @ displacement(S, b))
        assert abs(displacement_trace(rho, [b])[0] - dense) < 1e-12


def test_characteristic_function_coherent():
    S = CcrSystem(40)
    a = 0.7 + 0.4j
    u, v = 0.5, -0.3
    b = (-v + 1j * u) / np.sqrt(2)
    exact = np.exp(b * np.conj(a) - np.conj(b) * a - abs(b) ** 2 / 2)
    assert abs(characteristic_function(coherent_dm(S, a), u, v) - exact) < 1e-12


def test_vacuum_named_fields(ccr40):
    g = ccr40.grid
    r2 = np.abs(g.nodes) ** 2
    rho = vacuum(ccr40.system)
    assert np.abs(husimi_ccr(rho, g).values - np.exp(-r2)).max() < 1e-12
    assert np.abs(wigner_ccr(rho, g).values - 2 * np.exp(-2 * r2)).max() < 1e-10


def test_wigner_fock_one(ccr40):
    g = ccr40.grid
    r2 = np.abs(g.nodes) ** 2
    w = wigner_ccr(fock(ccr40.system, 1), g)
    exact = -2 * (1 - 4 * r2) * np.exp(-2 * r2)
    assert np.abs(w.values - exact).max() < 1e-9


def test_wigner_dual_grid_check():
    # a coarse grid cannot resolve a high Fock state
    with pytest.raises(CutoffError):
        wigner_ccr(fock(CcrSystem(40), 30), PlanarGrid(3.0, 16))


def test_husimi_is_smoothed_wigner(ccr40):
    rho = coherent_dm(ccr40.system, 0.5 + 0.2j) * 0.5 + fock(ccr40.system, 2) * 0.5
    W = wigner_ccr(rho, ccr40.grid)
    Q = husimi_ccr(rho, ccr40.grid)
    # residual is periodic wrap-around at the grid edge
    assert np.abs(planar_convolve(W.values, ccr40.grid, 0.5, None) - Q.values).max() < 1e-8


def test_thermal_glauber(ccr40):
    nbar = 1.0
    g = ccr40.grid
    with warnings.catch_warnings():
        warnings.simplefilter("error", SingularPWarning)
        P = glauber_sudarshan_ccr(thermal(ccr40.system, nbar), g, kappa=6.0)
    exact = np.exp(-np.abs(g.nodes) ** 2 / nbar) / nbar
    assert np.abs(P.values - exact).max() < 1e-3
    assert not P.info["singular"]
    assert P.info["reconstruction_error"] < 1e-6


def test_fock_glauber_flags_singular(ccr40):
    with pytest.warns(SingularPWarning):
        P = glauber_sudarshan_ccr(fock(ccr40.system, 1), ccr40.grid, kappa=6.0)
    assert P.info["singular"]


def test_coherent_glauber_concentrates():
    S = CcrSystem(40)
    g = PlanarGrid(5.0, 128)
    a = 1.0 + 0.5j
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", SingularPWarning)
        P = glauber_sudarshan_ccr(coherent_dm(S, a), g, kappa=8.0)
    # band-limited delta: peak at alpha, unit mass, smoothing returns the Husimi
    assert abs(g.nodes[np.argmax(P.values)] - a) <= g.spacing
    assert abs(P.info["normalization"] - 1) < 1e-6
    assert P.info["reconstruction_error"] < 1e-6


def test_planar_negative_power_needs_band():
    g = PlanarGrid(5.0, 32)
    with pytest.raises(ConditioningError):
        planar_convolve(np.zeros(g.size), g, -0.5, None)
    with pytest.raises(ConditioningError):
        PlanarSpectrum(kappa=None).check_power(-0.5)
    with pytest.raises(ConditioningError):
        PlanarSpectrum(kappa=20.0).check_power(-1.0)


def test_planar_kernel_positive_power_closed_form():
    sp = PlanarSpectrum()
    a, b = np.array([0.1 + 0.2j]), np.array([1.0 - 0.3j, 0.0])
    assert np.allclose(sp.power(1.0, a, b), ccr_delta(a[:, None], b[None, :]))


def test_planar_band_limited_delta_peak():
    """Delta^0 at kappa: (1/2) int_0^kappa k dk = kappa^2 / 4 at r = 0."""
    sp = PlanarSpectrum(kappa=6.0)
    assert np.isclose(sp.radial(0.0, 0.0), 9.0)
    # Delta^{-1/2} at kappa: (1/2) int_0^kappa exp(k^2/8) k dk = 2 (exp(kappa^2/8) - 1)
    assert np.isclose(sp.radial(-0.5, 0.0), 2 * (np.exp(4.5) - 1))


def test_phase_space_husimi_matches(ccr40):
    rho = thermal(ccr40.system, 0.3)
    assert np.allclose(ccr40.husimi(rho).real, husimi_ccr(rho, ccr40.grid).values, atol=1e-14)


def test_displacement_covariance(ccr40):
    S = ccr40.system
    pts = np.array([0.1 + 0.2j, -0.5 + 0.3j, 0.0])
    for g in ccr40.group_elements():
        U = ccr40.unitary(g)
        moved = ccr40.coherent_states(ccr40.act(g, pts))
        pushed = ccr40.coherent_states(pts) @ U.T
        ov = np.abs(np.sum(moved.conj() * pushed, axis=1))
        assert np.allclose(ov, 1, atol=1e-8), S


def test_thermal_renormalized():
    rho = thermal(CcrSystem(10), 3.0)
    assert np.isclose(np.trace(rho), 1)
    assert CcrPhaseSpace(CcrSystem(10)).label == "ccr:10"
