from itertools import product

import numpy as np
import pytest

from residual_distill.exceptions import DomainError
from residual_distill.gl_protocol import step_b, step_p
from residual_distill.oracle import (
    _step_p_unitary,
    apply_unitary,
    bilateral_xor_labels,
    bilateral_xor_transfer,
    cnot,
    exact_step_b,
    exact_step_p,
    exact_step_p_classes,
    mc_step_b,
    single_qubit_gate,
)
from residual_distill.qstate import BellDiagonalState, isotropic, random_bell_diagonal, random_density_matrix


def _basis_state(label):
    w = np.zeros(4)
    w[label] = 1.0
    return BellDiagonalState.from_weights(w)


def test_exact_step_b_examples():
    ex, an = exact_step_b(isotropic(0.79)), step_b(isotropic(0.79))
    assert ex.p_fail == pytest.approx(0.2408, abs=1e-12)
    np.testing.assert_allclose(ex.accepted.weights, an.accepted.weights, atol=1e-12)
    np.testing.assert_allclose(ex.residual.weights, [0.25] * 4, atol=1e-12)
    pure = exact_step_b(BellDiagonalState(1, 0, 0, 0))
    assert pure.p_fail == pytest.approx(0.0, abs=1e-15)
    assert pure.residual is None


def test_exact_step_b_random(rng):
    for _ in range(200):
        s = random_bell_diagonal(rng)
        ex, an = exact_step_b(s), step_b(s)
        assert ex.p_fail == pytest.approx(an.p_fail, abs=1e-10)
        np.testing.assert_allclose(ex.accepted.weights, an.accepted.weights, atol=1e-10)
        np.testing.assert_allclose(ex.residual.weights, an.residual.weights, atol=1e-10)


def test_exact_step_p_examples():
    ex = exact_step_p(isotropic(0.25))
    np.testing.assert_allclose(ex.branch_main.weights, [0.25] * 4, atol=1e-12)
    acc = step_b(isotropic(0.79)).accepted
    ex = exact_step_p(acc)
    np.testing.assert_allclose(ex.branch_main.weights, [0.7875, 0.1390, 0.0539, 0.0196], atol=5e-5)
    assert ex.q_main == pytest.approx(0.8666, abs=5e-5)


def test_exact_step_p_random(rng):
    for _ in range(20):
        s = random_bell_diagonal(rng)
        ex, an = exact_step_p(s), step_p(s)
        np.testing.assert_allclose(ex.branch_main.weights, an.branch_main.weights, atol=1e-9)
        assert ex.q_main == pytest.approx(an.q_main, abs=1e-9)


def test_step_p_correction_choice(rng):
    s = random_bell_diagonal(rng)
    zz, none, za = (exact_step_p(s, c) for c in ("zz", "none", "z_a"))
    # Z (x) Z is a global phase on every Bell state
    np.testing.assert_allclose(zz.branch_main.weights, none.branch_main.weights, atol=1e-12)
    # a one-sided Z flips the phase bit in the corrected class, which does change the weights
    assert np.max(np.abs(za.branch_main.weights - zz.branch_main.weights)) > 1e-4
    assert za.q_main == pytest.approx(zz.q_main, abs=1e-12)


def test_step_p_classes_cover_all_outcomes(rng):
    s = random_bell_diagonal(rng)
    classes = exact_step_p_classes(s)
    assert set(classes) == set(product([False, True], repeat=2))
    assert sum(v.sum() for v in classes.values()) == pytest.approx(1.0, abs=1e-12)


@pytest.mark.parametrize("l1,l2", list(product(range(4), repeat=2)))
def test_label_dynamics_soundness(l1, l2):
    kept, failed = bilateral_xor_transfer(_basis_state(l1), _basis_state(l2))
    did_fail, (a, b) = bilateral_xor_labels(l1 >> 1, l1 & 1, l2 >> 1, l2 & 1)
    expected = np.zeros(4)
    expected[2 * a + b] = 1.0
    np.testing.assert_allclose(failed if did_fail else kept, expected, atol=1e-12)
    np.testing.assert_allclose(kept if did_fail else failed, 0.0, atol=1e-12)


def test_gates_are_unitary():
    for n in (2, 4, 6):
        for c, t in [(0, 1), (1, 0), (0, n - 1)]:
            u = cnot(c, t, n)
            np.testing.assert_allclose(u @ u.conj().T, np.eye(2**n), atol=1e-15)
    h = np.array([[1, 1], [1, -1]]) / np.sqrt(2)
    u = single_qubit_gate(h, 2, 4)
    np.testing.assert_allclose(u @ u.conj().T, np.eye(16), atol=1e-14)
    u = _step_p_unitary()
    np.testing.assert_allclose(u @ u.conj().T, np.eye(64), atol=1e-12)


def test_trace_preserved_by_gates(rng):
    rho = random_density_matrix(16, rng)
    for u in (cnot(0, 2, 4), cnot(1, 3, 4), single_qubit_gate(np.diag([1, -1]), 3, 4)):
        rho = apply_unitary(rho, u)
        assert np.trace(rho).real == pytest.approx(1.0, abs=1e-12)


def test_cnot_action():
    # |10> -> |11> on two qubits with control 0
    u = cnot(0, 1, 2)
    np.testing.assert_array_equal(u @ np.eye(4)[2], np.eye(4)[3])
    np.testing.assert_array_equal(u @ np.eye(4)[1], np.eye(4)[1])


# --- Monte Carlo ----------------------------------------------------------------

def test_mc_isotropic():
    rep = mc_step_b(isotropic(0.79), 10**6, seed=7)
    assert abs(rep.empirical_p_fail - 0.2408) < 3 * rep.std_errors["p_fail"]
    dev = np.abs(rep.empirical_residual.weights - 0.25)
    assert np.all(dev < 3 * rep.std_errors["residual"])


def test_mc_half_half():
    rep = mc_step_b(BellDiagonalState(0.5, 0, 0.5, 0), 10**6, seed=11)
    assert abs(rep.empirical_p_fail - 0.5) < 3 * rep.std_errors["p_fail"]
    res = rep.empirical_residual.weights
    assert res[1] == 0 and res[3] == 0
    assert abs(res[0] - 0.5) < 3 * rep.std_errors["residual"][0]


def test_mc_pure_never_fails():
    rep = mc_step_b(BellDiagonalState(1, 0, 0, 0), 5000, seed=1)
    assert rep.n_fail == 0
    assert rep.empirical_residual is None
    np.testing.assert_array_equal(rep.empirical_accepted.weights, [1, 0, 0, 0])


def test_mc_seed_determinism():
    s = random_bell_diagonal(np.random.default_rng(3))
    a, b = mc_step_b(s, 20000, seed=99, shards=3), mc_step_b(s, 20000, seed=99, shards=3)
    assert a.n_fail == b.n_fail
    np.testing.assert_array_equal(a.empirical_residual.weights, b.empirical_residual.weights)
    np.testing.assert_array_equal(a.empirical_accepted.weights, b.empirical_accepted.weights)
    c = mc_step_b(s, 20000, seed=100, shards=3)
    assert c.n_fail != a.n_fail or not np.array_equal(c.empirical_accepted.weights, a.empirical_accepted.weights)


def test_mc_sharding_preserves_sample_count():
    rep = mc_step_b(isotropic(0.79), 1001, seed=5, shards=4)
    assert rep.n_samples == 1001 and rep.shards == 4


def test_mc_rejects_bad_counts():
    for n in (0, -3, 2.5):
        with pytest.raises(DomainError):
            mc_step_b(isotropic(0.79), n, seed=1)
    with pytest.raises(DomainError):
        mc_step_b(isotropic(0.79), 10, seed=1, shards=0)
