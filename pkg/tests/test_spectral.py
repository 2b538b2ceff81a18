import numpy as np
import pytest

from qpdkit.ccr import CcrPhaseSpace, CcrSystem, PlanarGrid, PlanarSpectrum, fock, wigner_ccr
from qpdkit.errors import ConditioningError
from qpdkit.linalg import random_density, random_hermitian
from qpdkit.spectral import (OrthogonalSelection, axiom_report, delta_power, qpd, qpd_via_weak_values,
                             sw_kernel_field, symbols_from_kernels, transform, weak_value)
from qpdkit.su2 import SpinPhaseSpace, SpinSystem, su2_delta


def test_husimi_order_is_expectation(spin_space, rng):
    rho = random_density(spin_space.dim, rng)
    f = qpd(spin_space, rho, 1.0)
    vecs = spin_space.coherent_states()
    exact = np.einsum("ki,ij,kj->k", vecs.conj(), rho, vecs).real
    assert np.allclose(f.values, exact, atol=1e-14)


@pytest.mark.parametrize("s", [-1.0, -0.5, 0.0, 0.5, 1.0])
def test_normalization_every_order(spin_space, rng, s):
    f = qpd(spin_space, random_density(spin_space.dim, rng), s)
    assert abs(f.info["normalization"] - 1) < 1e-12


def test_spin_half_wigner_closed_form():
    """j = 1/2: W = 1/2 + sqrt(3)/2 * <sigma>.n, Q = 1/2 + 1/2 <sigma>.n (per dmu)."""
    space = SpinPhaseSpace(SpinSystem(0.5))
    rho = np.array([[0.8, 0.1 - 0.2j], [0.1 + 0.2j, 0.2]])
    r = np.array([2 * rho[0, 1].real, -2 * rho[0, 1].imag, (rho[0, 0] - rho[1, 1]).real])
    th, ph = space.points.T
    n = np.stack([np.sin(th) * np.cos(ph), np.sin(th) * np.sin(ph), np.cos(th)], axis=-1)
    W = qpd(space, rho, 0.0).values
    assert np.allclose(W, 0.5 + np.sqrt(3) / 2 * n @ r, atol=1e-13)
    P = qpd(space, rho, -1.0).values
    assert np.allclose(P, 0.5 + 1.5 * n @ r, atol=1e-13)


def test_transform_semigroup(spin_space, rng):
    rho = random_density(spin_space.dim, rng)
    f1 = qpd(spin_space, rho, 1.0)
    back = transform(spin_space, transform(spin_space, f1, -1.0), 1.0)
    assert np.abs(back.values - f1.values).max() < 1e-10
    direct = qpd(spin_space, rho, -0.4)
    assert np.abs(transform(spin_space, f1, -0.4).values - direct.values).max() < 1e-12


def test_kernel_field_husimi_is_projector():
    space = SpinPhaseSpace(SpinSystem(1))
    K = sw_kernel_field(space, 1.0)
    vecs = space.coherent_states()
    assert np.allclose(K.operators, np.einsum("ki,kj->kij", vecs, vecs.conj()), atol=1e-12)


def test_symbols_from_kernels_match_qpd(spin_space, rng):
    A = random_hermitian(spin_space.dim, rng)
    for s in (-1.0, 0.0):
        K = sw_kernel_field(spin_space, s)
        assert np.allclose(symbols_from_kernels(K, A).real, qpd(spin_space, A, s).values, atol=1e-12)


@pytest.mark.parametrize("s", [-1.0, 0.0, 1.0])
def test_axiom_report_shape(s):
    space = SpinPhaseSpace(SpinSystem(1))
    rows = axiom_report(space, sw_kernel_field(space, s), sw_kernel_field(space, -s), n_pairs=5)
    assert [r["name"] for r in rows] == ["K.1", "K.2", "K.3", "K.4", "K.5'", "S.1", "S.2", "S.3", "S.4'"]
    assert all(set(r) == {"name", "max_abs_deviation", "tolerance", "pass"} for r in rows)
    assert all(r["pass"] for r in rows)


def test_axiom_report_requires_opposite_orders():
    space = SpinPhaseSpace(SpinSystem(1))
    with pytest.raises(ValueError):
        axiom_report(space, sw_kernel_field(space, 0.5), sw_kernel_field(space, 0.5))


def test_axiom_report_detects_broken_kernel():
    space = SpinPhaseSpace(SpinSystem(1))
    good = sw_kernel_field(space, 0.0)
    bad = sw_kernel_field(space, 0.0)
    bad.operators = bad.operators * 1.01
    rows = {r["name"]: r for r in axiom_report(space, good, bad, n_pairs=3)}
    assert not rows["K.3"]["pass"]
    assert not rows["K.4"]["pass"]


def test_delta_power_one_is_overlap():
    space = SpinPhaseSpace(SpinSystem(1.5))
    pts = space.points[:10]
    assert np.allclose(delta_power(space, 1.0, pts, pts), su2_delta(space.system, pts, pts), atol=1e-13)


def test_band_limited_delta_reproduces(spin_space):
    """Delta^0 reproduces every band-limited function under the quadrature."""
    rng = np.random.default_rng(3)
    f = qpd(spin_space, random_hermitian(spin_space.dim, rng), 0.0).values
    K0 = delta_power(spin_space, 0.0)
    assert np.allclose((K0 * spin_space.weights) @ f, f, atol=1e-11)


def test_weak_value_basic():
    pre = np.array([1, 1]) / np.sqrt(2)
    post = np.array([1, 0])
    sz = np.diag([1.0, -1.0])
    assert np.isclose(weak_value(sz, pre, post), 1.0)
    # anomalous weak value
    post = np.array([np.cos(0.1), -np.sin(0.1)])
    pre = np.array([np.cos(0.2), np.sin(0.2)])
    expected = (np.cos(0.1) * np.cos(0.2) + np.sin(0.1) * np.sin(0.2)) / np.cos(0.3)
    assert np.isclose(weak_value(sz, pre, post), expected)
    # cos(a+b)/cos(a-b) leaves the spectrum [-1, 1] as a - b -> pi/2
    a, b = 0.8, -0.7
    w = weak_value(sz, [np.cos(a), np.sin(a)], [np.cos(b), np.sin(b)])
    assert np.isclose(w, np.cos(a + b) / np.cos(a - b))
    assert abs(w) > 1


def test_weak_value_orthogonal_raises():
    with pytest.raises(OrthogonalSelection):
        weak_value(np.eye(2), [1, 0], [0, 1])


def test_weak_value_route(spin_space, rng):
    A = random_hermitian(spin_space.dim, rng)
    xi = spin_space.points[rng.choice(spin_space.grid.size, 8, replace=False)]
    for s in (-1.0, 0.0, 1.0):
        assert np.allclose(qpd_via_weak_values(spin_space, A, s, xi), qpd(spin_space, A, s, points=xi), atol=1e-10)


def test_spin_conditioning_propagates():
    with pytest.raises(ConditioningError):
        qpd(SpinPhaseSpace(SpinSystem(5)), np.eye(11) / 11, -5.0)


def test_ccr_generic_wigner_matches_fourier():
    """The band-limited kernel route at s=0 approaches the Fourier Wigner field.

    The residual is the spectrum of W beyond kappa, ~exp(-kappa^2/8); larger
    kappa trades it for amplified round-off (exp(+kappa^2/8)).
    """
    system = CcrSystem(40)
    grid = PlanarGrid(5.0, 128)
    rho = fock(system, 1)
    exact = wigner_ccr(rho, grid).values
    errs = [np.abs(qpd(CcrPhaseSpace(system, grid, PlanarSpectrum(kappa=k)), rho, 0.0).values - exact).max()
            for k in (6.0, 8.0, 10.0)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 5e-4


def test_ccr_weak_value_route():
    system = CcrSystem(12)
    space = CcrPhaseSpace(system, PlanarGrid(7.0, 64), PlanarSpectrum(kappa=4.0))
    rho = fock(system, 1) * 0.6 + fock(system, 0) * 0.4
    xi = np.array([0.0, 0.3 - 0.2j, 1.0j])
    assert np.allclose(qpd_via_weak_values(space, rho, 0.0, xi), qpd(space, rho, 0.0, points=xi), atol=1e-8)
