import numpy as np
import pytest

from qpdkit.ccr import CcrSystem, PlanarGrid, coherent_dm, fock, husimi_ccr, thermal, vacuum
from qpdkit.naimark import (classical_characteristic, composite_pair, gaussian_probe, interior_indices,
                            joint_distribution, marginal_moments)


@pytest.fixture(scope="module")
def setup():
    return CcrSystem(40), PlanarGrid(5.0, 128)


def test_composite_observables_commute_in_interior():
    pair = composite_pair(20)
    assert pair.interior_commutator_norm < 1e-12
    assert pair.full_commutator_norm > 1     # truncation breaks it at the edge
    with pytest.raises(ValueError):
        composite_pair(10)


def test_interior_indices():
    idx = interior_indices(4)
    n1, n2 = np.divmod(idx, 5)
    assert np.all(n1 + n2 <= 2)
    assert len(idx) == 6


def test_vacuum_probe_is_vacuum():
    S = CcrSystem(20)
    c, norm = gaussian_probe(S, 1.0, return_norm=True)
    assert abs(norm - 1) < 1e-12
    assert np.allclose(c, np.eye(S.dim)[0], atol=1e-12)


def test_squeezed_probe_only_even_levels():
    c = gaussian_probe(CcrSystem(30), 2.5)
    assert np.abs(c[1::2]).max() < 1e-12
    assert c[0].real > 0


@pytest.mark.parametrize("make", [vacuum, lambda S: fock(S, 1), lambda S: coherent_dm(S, 1.0),
                                  lambda S: thermal(S, 0.5)], ids=["vacuum", "fock1", "coherent", "thermal"])
def test_vacuum_probe_gives_husimi(setup, make):
    S, g = setup
    rho = make(S)
    J = joint_distribution(rho, gaussian_probe(S), g)
    assert np.abs(J.values - husimi_ccr(rho, g).values).max() < 1e-5
    assert abs(J.info["normalization"] - 1) < 1e-6


@pytest.mark.parametrize("d", [0.5, 1.0, 2.0])
def test_probe_variance_sets_marginals(setup, d):
    """Vacuum observed with a probe of position variance d/2."""
    S, g = setup
    J = joint_distribution(vacuum(S), gaussian_probe(S, d), g)
    m = marginal_moments(J)
    assert abs(m["mass"] - 1) < 1e-8
    assert abs(m["mean"]) < 1e-6      # [-L, L) is not symmetric
    assert abs(m["var_re"] - (1 + d) / 4) < 1e-6
    assert abs(m["var_im"] - (1 + 1 / d) / 4) < 1e-6


def test_joint_nonnegative(setup):
    S, g = setup
    J = joint_distribution(fock(S, 2), gaussian_probe(S, 1.7), g)
    assert J.info["minimum"] > -1e-10


def test_classical_characteristic_of_joint(setup):
    """Characteristic function of the joint field factorizes into state x probe."""
    S, g = setup
    rho = thermal(S, 0.3)
    J = joint_distribution(rho, gaussian_probe(S), g)
    u, v = 0.4, -0.7
    # Tr[rho exp(i(uq+vp))] for a thermal state, times the vacuum factor
    n = 0.3
    expected = np.exp(-(u ** 2 + v ** 2) * (2 * n + 1) / 4) * np.exp(-(u ** 2 + v ** 2) / 4)
    assert abs(classical_characteristic(J, u, v)[0] - expected) < 1e-8


def test_probe_shape_checked(setup):
    S, g = setup
    with pytest.raises(ValueError):
        joint_distribution(vacuum(S), np.ones(5), g)
