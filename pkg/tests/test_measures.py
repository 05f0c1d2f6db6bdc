import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisenqi import measures as ms
from heisenqi.mub import bz_measure
from heisenqi.operators import OperatorError, projector, random_density_matrix, random_pure_state, random_unitary
from conftest import seeds


def _dist(seed, n):
    return np.random.default_rng(seed).dirichlet(np.ones(n))


def test_shannon_values():
    assert ms.shannon_entropy([0.5, 0.3, 0.2]) == pytest.approx(1.485475, abs=1e-6)
    assert ms.shannon_entropy([0.5, 1 / 3, 1 / 6]) == pytest.approx(1.459148, abs=1e-6)
    assert ms.shannon_entropy([1.0, 0.0]) == 0.0
    assert ms.shannon_entropy(np.full(8, 1 / 8)) == pytest.approx(3.0)


def test_distribution_validation():
    for bad in ([0.5, 0.6], [1.2, -0.2], [], [np.nan, 1.0]):
        with pytest.raises(ms.DistributionError):
            ms.shannon_entropy(bad)


def test_binary_symmetric_channel():
    f = 0.11
    j = 0.5 * np.array([[1 - f, f], [f, 1 - f]])
    assert ms.mutual_information(j) == pytest.approx(1 - ms.shannon_entropy([f, 1 - f]), abs=1e-12)
    assert ms.mutual_information(j) == pytest.approx(0.500084, abs=1e-6)


def test_conditional_slice_needs_weight():
    j = np.array([[0.5, 0.0], [0.5, 0.0]])
    assert ms.conditional_entropy(j) == 1.0
    with pytest.raises(ms.DistributionError):
        ms.conditional_slice_entropy(j, 1)


@given(seeds, st.integers(2, 5), st.integers(2, 5))
def test_chain_rule_and_bounds(seed, nx, ny):
    j = _dist(seed, nx * ny).reshape(nx, ny)
    px, py = ms.marginals(j)
    hxy = ms.joint_entropy(j)
    assert hxy == pytest.approx(ms.shannon_entropy(py) + ms.conditional_entropy(j), abs=1e-12)
    i = ms.mutual_information(j)
    assert -1e-12 <= i <= min(ms.shannon_entropy(px), ms.shannon_entropy(py)) + 1e-12
    assert ms.conditional_entropy(j) <= ms.shannon_entropy(px) + 1e-12


def test_worked_grouping_instance():
    lhs = ms.shannon_entropy([1 / 2, 1 / 3, 1 / 6])
    rhs = ms.shannon_entropy([1 / 2, 1 / 2]) + 0.5 * ms.shannon_entropy([2 / 3, 1 / 3])
    assert abs(lhs - rhs) <= 1e-12
    assert ms.grouping_residual([1 / 2, 1 / 3, 1 / 6], (1, 2)) <= 1e-12


@given(seeds, st.integers(2, 8), st.data())
def test_grouping_axiom(seed, n, data):
    p = _dist(seed, n)
    i = data.draw(st.integers(0, n - 1))
    k = data.draw(st.integers(0, n - 1).filter(lambda v: v != i))
    assert ms.grouping_residual(p, (i, k)) <= 1e-12


def test_bz_measure_violates_grouping():
    p = [1 / 2, 1 / 3, 1 / 6]
    assert ms.grouping_residual(p, (1, 2), bz_measure) == pytest.approx(1 / 36, abs=1e-12)
    assert ms.grouping_residual(p, (1, 2), lambda q: bz_measure(q, len(q))) == pytest.approx(1 / 9, abs=1e-12)


def test_grouping_bad_pair():
    with pytest.raises(ms.DistributionError):
        ms.grouping_residual([0.5, 0.5], (0, 0))
    with pytest.raises(ms.DistributionError):
        ms.grouping_residual([0.5, 0.5], (0, 2))


def test_dretske_nine_bits():
    px = np.full(512, 1 / 512)
    assert ms.dretske_measure(px, [1.0], 0) == pytest.approx(9.0)
    assert ms.dretske_measure([0.5, 0.5], [0.5, 0.5], 1) == pytest.approx(0.0)


def test_von_neumann_values():
    assert ms.von_neumann_entropy(np.diag([0.9, 0.1])) == pytest.approx(0.468996, abs=1e-6)
    assert ms.von_neumann_entropy(np.eye(4) / 4) == pytest.approx(2.0)
    psi = random_pure_state(4, 3)
    assert ms.von_neumann_entropy(projector(psi)) == pytest.approx(0.0, abs=1e-9)


def test_spectrum_rejects_negative():
    with pytest.raises(OperatorError):
        ms.spectrum(np.diag([1.1, -0.1]))
    assert np.all(ms.spectrum(np.diag([1.0, -1e-12])) >= 0)


@given(seeds, st.integers(2, 4))
def test_entropy_unitarily_invariant(seed, d):
    rho = random_density_matrix(d, seed=seed)
    u = random_unitary(d, seed + 1)
    assert ms.von_neumann_entropy(u @ rho @ u.conj().T) == pytest.approx(ms.von_neumann_entropy(rho), abs=1e-9)


def test_holevo_zero_plus():
    e = ms.Ensemble.of_pure([[1, 0], [1 / np.sqrt(2), 1 / np.sqrt(2)]], [0.5, 0.5])
    assert ms.holevo_chi(e) == pytest.approx(0.6009, abs=1e-4)
    assert not ms.states_commute(e)


def test_holevo_orthogonal_ensemble_saturates():
    e = ms.Ensemble.of_pure(np.eye(3), [0.2, 0.3, 0.5])
    j = ms.induced_joint(e, [projector(v) for v in np.eye(3)])
    assert ms.holevo_chi(e) == pytest.approx(ms.shannon_entropy([0.2, 0.3, 0.5]), abs=1e-12)
    assert ms.mutual_information(j) == pytest.approx(ms.holevo_chi(e), abs=1e-10)


@given(seeds, st.integers(2, 4), st.integers(2, 4))
def test_holevo_bounds_accessible_information(seed, d, k):
    rng = np.random.default_rng(seed)
    states = tuple(random_density_matrix(d, seed=rng) for _ in range(k))
    e = ms.Ensemble(states, rng.dirichlet(np.ones(k)))
    u = random_unitary(d, rng)
    j = ms.induced_joint(e, [projector(u[:, i]) for i in range(d)])
    assert ms.mutual_information(j) <= ms.holevo_chi(e) + 1e-9
    assert ms.holevo_chi(e) <= np.log2(d) + 1e-9


def test_ensemble_validation():
    with pytest.raises(ms.DistributionError):
        ms.Ensemble((np.eye(2) / 2,), np.array([0.5, 0.5]))
    with pytest.raises(OperatorError):
        ms.Ensemble((np.eye(2) / 2, np.eye(3) / 3), np.array([0.5, 0.5]))


def test_projective_measurement_validation():
    with pytest.raises(OperatorError):
        ms.check_projective_measurement([np.diag([1, 0])])
    with pytest.raises(OperatorError):
        ms.check_projective_measurement([np.diag([1, 0]), np.diag([1, 1]) - np.diag([1, 0]) + np.diag([0.1, 0])])


def test_majorization_examples():
    assert ms.majorizes([1, 0], [0.5, 0.5])
    assert not ms.majorizes([0.5, 0.5], [1, 0])
    assert ms.majorizes([0.6, 0.4], [0.5, 0.3, 0.2])


@given(seeds, st.integers(2, 6))
def test_uniform_is_majorized_by_everything(seed, n):
    p = _dist(seed, n)
    assert ms.majorizes(p, np.full(n, 1 / n))
    assert ms.majorizes(p, p)


@given(seeds, st.integers(2, 6))
def test_doubly_stochastic_image_is_majorized(seed, n):
    p = _dist(seed, n)
    u = random_unitary(n, seed + 3)
    q = (np.abs(u) ** 2) @ p
    assert ms.majorizes(p, q)
    # Schur concavity of the entropy
    assert ms.shannon_entropy(q) >= ms.shannon_entropy(p) - 1e-12
