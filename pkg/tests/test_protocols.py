import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from heisenqi import protocols as pr
from heisenqi.entanglement import Status
from heisenqi.operators import OperatorError, ket
from conftest import seeds

angles = st.floats(-math.pi, math.pi, allow_nan=False)


@given(st.floats(0, math.pi), angles)
def test_teleportation(theta, phi):
    r = pr.teleport_run(theta, phi)
    assert r.ok, r.summary()["checks"]
    assert np.allclose(r.value("final_state_qubit5"), r.states["chi"], atol=1e-10)


def test_teleport_report_is_derived_from_states():
    r = pr.teleport_run(0.7)
    r.states["final_5"] = np.eye(2) / 2
    assert r.value("fidelity") == pytest.approx(0.5)
    assert not r.passed("fidelity_one")


def test_teleport_leaves_qubit1_unentangled_and_pair_consumed():
    r = pr.teleport_run(1.3, 0.4)
    assert r.value("pair_45_verdict") is Status.SEPARABLE


@pytest.mark.parametrize("bits", list(itertools.product((0, 1), repeat=2)))
def test_dense_coding(bits):
    r = pr.dense_code_run(bits)
    assert r.ok
    assert tuple(r.value("decoded_bits")) == bits
    assert r.value("holevo_two_qubit") == pytest.approx(2.0)
    assert r.value("holevo_transmitted_qubit") == pytest.approx(0.0, abs=1e-9)


def test_dense_coding_rejects_bad_message():
    with pytest.raises(OperatorError):
        pr.dense_code_run((2, 0))


def test_entanglement_swap():
    r = pr.entanglement_swap_run()
    assert r.ok, r.summary()["checks"]
    assert all(v == pytest.approx(0.25) for v in r.value("branch_probabilities").values())
    assert r.value("unconditional_14_verdict") is Status.SEPARABLE
    assert r.value("pre_14_verdict") is Status.SEPARABLE


@given(angles, angles)
def test_bell_correlation(theta, phi):
    res = pr.bell_experiment_run(theta, phi)
    assert res.E == pytest.approx(math.cos(theta - phi), abs=1e-10)
    assert np.allclose(res.marginal_alice, 0.5) and np.allclose(res.marginal_bob, 0.5)


@given(angles, angles, angles)
def test_no_signalling(theta1, theta2, phi):
    a = pr.bell_experiment_run(theta1, phi)
    b = pr.bell_experiment_run(theta2, phi)
    assert np.allclose(a.marginal_bob, b.marginal_bob, atol=1e-10)


def test_gate_order_does_not_matter():
    a = pr.bell_experiment_run(0.3, 1.2, alice_first=True)
    b = pr.bell_experiment_run(0.3, 1.2, alice_first=False)
    assert np.allclose(a.joint, b.joint, atol=1e-12)


def test_correlated_outcomes_are_not_factorizable():
    assert not pr.bell_experiment_run(0.0, 0.0).factorizable()
    assert pr.bell_experiment_run(0.0, math.pi / 2).factorizable()


def test_chsh():
    s = pr.chsh_value()
    assert abs(abs(s) - 2 * math.sqrt(2)) <= 1e-9 and abs(s) > 2


@pytest.mark.parametrize("committed,revealed", list(itertools.product((0, 1), repeat=2)))
def test_bit_commitment_cheat(committed, revealed):
    r = pr.bc_epr_cheat_run(committed, revealed)
    assert r.ok
    assert r.value("cheat_pass_probability") == pytest.approx(1.0, abs=1e-10)
    expected = 1.0 if committed == revealed else 0.5
    assert r.value("honest_pass_probability") == pytest.approx(expected, abs=1e-10)


def _brute_weight(p0, p1, N, eps, S):
    total = 0.0
    for seq in itertools.product((0, 1), repeat=N):
        k = sum(seq)
        prob = p0 ** (N - k) * p1**k
        if abs(-math.log2(prob) / N - S) <= eps:
            total += prob
    return total


@pytest.mark.parametrize("p,N,eps", [(0.9, 10, 0.1), (0.9, 12, 0.2), (0.75, 14, 0.05), (0.6, 9, 0.3)])
def test_schumacher_against_enumeration(p, N, eps):
    s = pr.schumacher_report(np.diag([p, 1 - p]), N, eps)
    assert abs(s.typical_weight - _brute_weight(p, 1 - p, N, eps, s.S)) <= 1e-12


def test_schumacher_entropy_and_rate():
    s = pr.schumacher_report(np.diag([0.9, 0.1]), 50, 0.1)
    assert s.S == pytest.approx(0.46900, abs=1e-5)
    assert abs(s.rate - s.S) <= s.epsilon


def test_schumacher_weight_grows_for_moderate_source():
    trend = pr.schumacher_trend(np.diag([0.75, 0.25]), [5, 10, 20, 50], 0.1)
    w = [t.typical_weight for t in trend]
    assert all(b > a for a, b in zip(w, w[1:]))


def test_schumacher_basis_independent():
    u = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    rho = u @ np.diag([0.8, 0.2]) @ u.T
    a = pr.schumacher_report(rho, 30, 0.1)
    b = pr.schumacher_report(np.diag([0.8, 0.2]), 30, 0.1)
    assert a.typical_dimension == b.typical_dimension
    assert a.typical_weight == pytest.approx(b.typical_weight, abs=1e-12)


def test_schumacher_validation():
    with pytest.raises(OperatorError):
        pr.schumacher_report(np.diag([0.9, 0.1]), 61, 0.1)
    with pytest.raises(OperatorError):
        pr.schumacher_report(np.diag([0.9, 0.1]), 10, 0.0)


def test_pure_source_is_one_dimensional():
    s = pr.schumacher_report(np.diag([1.0, 0.0]), 20, 0.01)
    assert s.typical_dimension == 1 and s.typical_weight == pytest.approx(1.0)


def test_no_cloning():
    plus = np.array([1, 1]) / np.sqrt(2)
    assert pr.no_cloning_compatibility([ket("0"), ket("1")]).compatible
    v = pr.no_cloning_compatibility([ket("0"), plus])
    assert not v.compatible and v.overlap == pytest.approx(1 / np.sqrt(2))
    assert pr.no_cloning_compatibility([ket("0"), -1j * ket("0")]).compatible


@given(seeds)
def test_no_cloning_random_pairs(seed):
    rng = np.random.default_rng(seed)
    a = rng.normal(size=2) + 1j * rng.normal(size=2)
    b = rng.normal(size=2) + 1j * rng.normal(size=2)
    assert not pr.no_cloning_compatibility([a / np.linalg.norm(a), b / np.linalg.norm(b)]).compatible


def test_skewed_source_weight_is_not_monotone_at_small_n():
    # binomial lattice effect: the window catches few k values at small N
    w = [t.typical_weight for t in pr.schumacher_trend(np.diag([0.9, 0.1]), [5, 10, 20, 50], 0.1)]
    assert w[0] == 0.0
    assert w[2] < w[1] < w[3]
    assert w == pytest.approx([0.0, 0.387420489, 0.285179807, 0.519932936], abs=1e-9)


def test_no_cloning_singleton():
    assert pr.no_cloning_compatibility([ket("0")]).compatible
    with pytest.raises(OperatorError):
        pr.no_cloning_compatibility([np.array([1.0, 1.0])])
