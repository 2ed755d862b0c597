from fractions import Fraction

import numpy as np
import pytest

from epk import exact


def test_charpoly_swap_matrix():
    coeffs = exact.charpoly(exact.matrix_to_qc(np.array([[0.0, 1.0], [1.0, 0.0]])))
    assert coeffs == [exact.ONE, exact.ZERO, (Fraction(-1), Fraction(0))]


def test_charpoly_nilpotent_block():
    j5 = np.diag(np.ones(4), 1)
    coeffs = exact.charpoly(exact.matrix_to_qc(j5))
    assert coeffs[0] == exact.ONE
    assert all(c == exact.ZERO for c in coeffs[1:])


def test_charpoly_matches_numpy_on_random_integer_matrices():
    rng = np.random.default_rng(5)
    for _ in range(5):
        a = rng.integers(-3, 4, size=(4, 4)).astype(float)
        got = np.array([exact.qc_to_complex(c) for c in exact.charpoly(exact.matrix_to_qc(a))])
        ref = np.poly(a)
        assert np.allclose(got.real, ref, atol=1e-9)


def test_tridiag_charpoly_agrees_with_dense_recursion():
    rng = np.random.default_rng(7)
    for _ in range(5):
        n = 5
        diag = rng.integers(-3, 4, size=n)
        off = rng.integers(1, 4, size=n - 1)
        t = np.diag(diag.astype(float)) + np.diag(off.astype(float), 1) + np.diag(np.ones(n - 1), -1)
        via_tri = exact.tridiag_charpoly(
            [exact.to_qc(int(d)) for d in diag],
            [exact.to_qc(int(o)) for o in off],
        )
        via_dense = exact.charpoly(exact.matrix_to_qc(t))
        assert via_tri == via_dense


def test_roots_deflates_exact_zeros():
    # z^5 - z^3 = z^3 (z-1)(z+1)
    coeffs = [exact.ONE, exact.ZERO, (Fraction(-1), Fraction(0)), exact.ZERO, exact.ZERO, exact.ZERO]
    r = exact.roots(coeffs)
    assert np.count_nonzero(r == 0) == 3
    assert np.allclose(sorted(r.real), [-1, 0, 0, 0, 1], atol=1e-25)


def test_determinant_from_charpoly():
    a = np.array([[2.0, 1.0], [1.0, 2.0]])
    assert exact.determinant(exact.matrix_to_qc(a)) == (Fraction(3), Fraction(0))
    b = np.array([[0.0, 1.0], [1.0, 0.0]])
    assert exact.determinant(exact.matrix_to_qc(b)) == (Fraction(-1), Fraction(0))


def test_rational_sqrt():
    assert exact.rational_sqrt(Fraction(1, 100)) == Fraction(1, 10)
    assert exact.rational_sqrt(Fraction(4, 9)) == Fraction(2, 3)
    assert exact.rational_sqrt(Fraction(1, 10)) is None
    assert exact.rational_sqrt(Fraction(-1)) is None


def test_to_qc_rejects_non_finite():
    with pytest.raises((ValueError, OverflowError)):
        exact.to_qc(float("nan"))
    assert not exact.is_exact(float("inf"))
