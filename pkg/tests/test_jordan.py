import warnings

import numpy as np
import pytest

from epk.hamiltonian import BoseHubbardParams, build_sub_hamiltonian
from epk.jordan import (
    JordanSpec,
    bh_transition_matrix,
    ep_order_estimate,
    jordan_matrix,
    verify_similarity,
)


def test_jordan_matrix_single_block():
    assert np.array_equal(jordan_matrix(JordanSpec(((2, 0j),))), np.array([[0, 1], [0, 0]], dtype=complex))


def test_jordan_matrix_direct_sum():
    j = jordan_matrix(JordanSpec(((2, 0j), (3, 0j))))
    expected = np.zeros((5, 5), dtype=complex)
    expected[0, 1] = expected[2, 3] = expected[3, 4] = 1
    assert np.array_equal(j, expected)


def test_jordan_matrix_scalar_block():
    eta = 0.3 - 0.2j
    assert np.array_equal(jordan_matrix(JordanSpec(((1, eta),))), np.array([[eta]]))


def test_nilpotency_index_is_max_block_size():
    j = jordan_matrix(JordanSpec(((3, 0j), (2, 0j))))
    assert (np.linalg.matrix_power(j, 2) != 0).any()
    assert not np.linalg.matrix_power(j, 3).any()


def test_transition_matrix_k2_display():
    dec = bh_transition_matrix(2)
    assert np.array_equal(dec.Q, np.array([[-1j, 1], [1, 0]], dtype=complex))


def test_transition_matrix_k3_display():
    dec = bh_transition_matrix(3)
    r2 = np.sqrt(2)
    expected = np.array([[-2, -2j, 1], [-2j * r2, r2, 0], [2, 0, 0]], dtype=complex)
    assert np.array_equal(dec.Q, expected)


def test_transition_matrix_determinants():
    # cofactor expansion of the two displays: -1, and (along the bottom row)
    # 2 * det([[-2i, 1], [sqrt2, 0]]) = -2*sqrt(2)
    assert np.isclose(np.linalg.det(bh_transition_matrix(2).Q), -1.0)
    assert np.isclose(np.linalg.det(bh_transition_matrix(3).Q), -2 * np.sqrt(2))


@pytest.mark.parametrize("K", range(2, 9))
def test_similarity_certified_for_growing_order(K):
    dec = bh_transition_matrix(K)
    h = build_sub_hamiltonian(BoseHubbardParams(gamma=1.0, N=K - 1))
    ok, residual = verify_similarity(h, dec.Q, dec.J, tol=1e-10 * K)
    assert ok
    assert dec.residual == residual
    assert dec.abs_det_q > 0


def test_chain_seed_normalization():
    # for K >= 4 the kernel column ends in exactly 1
    for K in (4, 6, 9):
        q = bh_transition_matrix(K).Q
        assert q[K - 1, 0] == 1.0


def test_verify_similarity_identity():
    h = np.array([[1.0, 2.0], [3.0, 4.0]])
    ok, residual = verify_similarity(h, np.eye(2), h, tol=0.0)
    assert ok and residual == 0.0


def test_verify_similarity_away_from_ep():
    h = build_sub_hamiltonian(BoseHubbardParams(gamma=0.5, N=2))
    dec = bh_transition_matrix(3)
    ok, residual = verify_similarity(h, dec.Q, dec.J, tol=1e-6)
    assert not ok
    assert residual > 1e-3


def test_verify_similarity_dimension_mismatch():
    with pytest.raises(ValueError):
        verify_similarity(np.eye(2), np.eye(3), np.eye(3), tol=1.0)


def test_ep_order_on_sub_hamiltonian():
    h = build_sub_hamiltonian(BoseHubbardParams(gamma=1.0, N=3))
    assert ep_order_estimate(h, 0j) == [4]


def test_ep_order_simple_and_absent_eigenvalue():
    d = np.diag([1.0, 2.0, 3.0]).astype(complex)
    assert ep_order_estimate(d, 1.0) == [1]
    assert ep_order_estimate(d, 7.0) == []


def test_ep_order_block_structure():
    j = jordan_matrix(JordanSpec(((2, 0j), (3, 0j))))
    assert ep_order_estimate(j, 0j) == [3, 2]


def test_ep_order_invariant_under_wellconditioned_similarity():
    rng = np.random.default_rng(42)
    for sizes, eta in (((3, 2), 0j), ((4,), 0j), ((2, 2, 1), 0.5 + 0j)):
        spec = JordanSpec(tuple((s, eta) for s in sizes))
        j = jordan_matrix(spec)
        n = j.shape[0]
        u, _, vt = np.linalg.svd(rng.normal(size=(n, n)))
        s = u @ np.diag(np.linspace(1.0, 500.0, n)) @ vt  # condition 500 < 1e3
        m = s @ j @ np.linalg.inv(s)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore")
            assert ep_order_estimate(m, eta) == sorted(sizes, reverse=True)


def test_ep_order_warns_near_threshold():
    # a singular value sitting right at the rank threshold triggers the warning
    m = np.diag([1.0, 1e-8, 1e-16]).astype(complex)
    with pytest.warns(UserWarning):
        ep_order_estimate(m, 0j, tol=1e-8)
