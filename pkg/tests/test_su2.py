import numpy as np
import pytest
from scipy.special import factorial

from qpdkit.errors import ConditioningError
from qpdkit.linalg import random_density
from qpdkit.su2 import (SphereGrid, SpinPhaseSpace, SpinSystem, cos_angle, delta_spectrum, husimi_spin,
                        parse_j, spin_coherent, spin_coherent_many, sphere_quadrature, su2_delta,
                        unit_vectors)

JS = [0.5, 1, 1.5, 2, 3, 5]


@pytest.mark.parametrize("j", JS)
def test_angular_momentum_algebra(j):
    S = SpinSystem(j)
    comm = S.jx @ S.jy - S.jy @ S.jx
    assert np.allclose(comm, 1j * S.jz, atol=1e-12)
    casimir = S.jx @ S.jx + S.jy @ S.jy + S.jz @ S.jz
    assert np.allclose(casimir, j * (j + 1) * np.eye(S.dim), atol=1e-12)


@pytest.mark.parametrize("j", [0.5, 1, 2])
def test_coherent_state_points_along_direction(j):
    S = SpinSystem(j)
    th, ph = 1.1, -0.7
    v = spin_coherent(S, th, ph)
    n = unit_vectors(np.array([[th, ph]]))[0]
    mean = [np.vdot(v, op @ v).real for op in (S.jx, S.jy, S.jz)]
    assert np.allclose(mean, j * n, atol=1e-12)


def test_north_pole_is_highest_weight():
    v = spin_coherent(SpinSystem(2), 0.0, 0.3)
    assert np.isclose(abs(v[0]), 1)


@pytest.mark.parametrize("j", [0.5, 1, 2, 3])
def test_overlap_factor(j):
    S = SpinSystem(j)
    pts = np.array([[0.3, 0.1], [2.0, -1.5], [1.0, 4.0]])
    vecs = spin_coherent_many(S, pts)
    direct = np.abs(vecs.conj() @ vecs.T) ** 2
    assert np.allclose(direct, su2_delta(S, pts, pts), atol=1e-13)


@pytest.mark.parametrize("j", JS)
def test_resolution_of_unity_default_grid(j):
    S = SpinSystem(j)
    g = sphere_quadrature(S)
    vecs = spin_coherent_many(S, g.points)
    res = np.einsum("k,ki,kj->ij", g.weights, vecs, vecs.conj())
    assert np.linalg.norm(res - np.eye(S.dim)) < 1e-12


def test_too_coarse_grid_rejected():
    with pytest.raises(ValueError):
        sphere_quadrature(SpinSystem(2), n_theta=4)


@pytest.mark.parametrize("j", JS)
def test_spectrum_closed_form(j):
    S = SpinSystem(j)
    n = S.twoj
    ups = delta_spectrum(S).eigenvalues
    exact = [factorial(n) * factorial(n + 1) / (factorial(n - l) * factorial(n + l + 1)) for l in range(n + 1)]
    assert np.allclose(ups, exact, rtol=1e-12)
    assert np.isclose(ups[0], 1.0)


@pytest.mark.parametrize("j", [0.5, 1, 2])
def test_kernel_power_zero_is_reproducing(j):
    """Delta^1 from the expansion equals the direct overlap factor."""
    S = SpinSystem(j)
    space = SpinPhaseSpace(S)
    pts = space.points[::3]
    assert np.allclose(space.kernel(1.0, pts, pts), su2_delta(S, pts, pts), atol=1e-12)
    assert np.allclose(space.spectrum.power_from_basis(0.5, pts, pts), space.kernel(0.5, pts, pts), atol=1e-12)


@pytest.mark.parametrize("j", [1, 2])
def test_semigroup(j):
    space = SpinPhaseSpace(SpinSystem(j))
    w = space.weights
    a, b = 0.4, -0.9
    lhs = (space.kernel(a) * w) @ space.kernel(b)
    assert np.allclose(lhs, space.kernel(a + b), atol=1e-10)


def test_conditioning_guard():
    space = SpinPhaseSpace(SpinSystem(5))
    space.check_power(-1.0)
    with pytest.raises(ConditioningError):
        space.check_power(-3.0)


@pytest.mark.parametrize("j", [0.5, 1, 2])
def test_rotation_covariance(j):
    space = SpinPhaseSpace(SpinSystem(j))
    pts = space.points[:7]
    for g in space.group_elements():
        U = space.unitary(g)
        moved = space.coherent_states(space.act(g, pts))
        rotated = space.coherent_states(pts) @ U.T
        # equal up to a phase per point
        ov = np.abs(np.sum(moved.conj() * rotated, axis=1))
        assert np.allclose(ov, 1, atol=1e-12)


def test_husimi_normalized(rng):
    S = SpinSystem(1.5)
    g = sphere_quadrature(S)
    f = husimi_spin(random_density(S.dim, rng), g)
    assert abs(f.info["normalization"] - 1) < 1e-12
    assert f.values.min() >= -1e-14


def test_parse_j_and_grid_label():
    assert parse_j("1/2") == 0.5
    assert parse_j("3") == 3.0
    assert SphereGrid(1, 64, 128).label == "64x128"


def test_cos_angle_bounds():
    pts = np.array([[0.0, 0.0], [np.pi, 0.0]])
    assert np.allclose(cos_angle(pts, pts), [[1, -1], [-1, 1]])
