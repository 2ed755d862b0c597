"""Exact complex-rational arithmetic helpers.

Matrices whose entries are (binary) rationals admit exact characteristic
polynomials.  Scalars are represented as ``(re, im)`` pairs of
:class:`fractions.Fraction`; every finite float is a binary rational, so
any float matrix can be lifted losslessly.  Root extraction deflates
exact zero roots first (the degenerate eigenvalues that a floating
eigensolver smears into K-th-root-of-eps clusters) and polishes the rest
with mpmath at extended precision.
"""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational

import mpmath as mp
import numpy as np

QC = tuple[Fraction, Fraction]

ZERO: QC = (Fraction(0), Fraction(0))
ONE: QC = (Fraction(1), Fraction(0))

DEFAULT_DPS = 40


def to_qc(x) -> QC:
    """Lift a scalar (int, Fraction, float, complex) to a complex rational."""
    if isinstance(x, tuple):
        return (Fraction(x[0]), Fraction(x[1]))
    if isinstance(x, Rational):
        return (Fraction(x), Fraction(0))
    if isinstance(x, complex):
        return (Fraction(x.real), Fraction(x.imag))
    return (Fraction(x), Fraction(0))


def is_exact(x) -> bool:
    """True when ``to_qc(x)`` is lossless (always, except for NaN/inf)."""
    try:
        to_qc(x)
        return True
    except (OverflowError, ValueError, TypeError):
        return False


def qadd(x: QC, y: QC) -> QC:
    return (x[0] + y[0], x[1] + y[1])


def qsub(x: QC, y: QC) -> QC:
    return (x[0] - y[0], x[1] - y[1])


def qmul(x: QC, y: QC) -> QC:
    return (x[0] * y[0] - x[1] * y[1], x[0] * y[1] + x[1] * y[0])


def qdiv(x: QC, y: QC) -> QC:
    d = y[0] * y[0] + y[1] * y[1]
    if d == 0:
        raise ZeroDivisionError("complex-rational division by zero")
    return ((x[0] * y[0] + x[1] * y[1]) / d, (x[1] * y[0] - x[0] * y[1]) / d)


def qc_to_complex(x: QC) -> complex:
    return complex(float(x[0]), float(x[1]))


def matrix_to_qc(m) -> list[list[QC]]:
    """Lift a square matrix (ndarray or nested sequence) to QC entries."""
    a = np.asarray(m)
    n = a.shape[0]
    if a.dtype == object:
        return [[to_qc(a[i, j]) for j in range(n)] for i in range(n)]
    return [[to_qc(complex(a[i, j])) for j in range(n)] for i in range(n)]


def charpoly(rows: list[list[QC]]) -> list[QC]:
    """Characteristic polynomial det(zI - A) by the trace recursion.

    Returns monic coefficients in degree-descending order, length n+1.
    Exact for rational (or complex-rational) entries; the only divisions
    are by the integers 1..n.
    """
    n = len(rows)
    M = [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]
    coeffs = [ONE]
    for k in range(1, n + 1):
        M = [
            [_dot(rows[i], [M[l][j] for l in range(n)]) for j in range(n)]
            for i in range(n)
        ]
        tr = ZERO
        for i in range(n):
            tr = qadd(tr, M[i][i])
        c = (-tr[0] / k, -tr[1] / k)
        coeffs.append(c)
        for i in range(n):
            M[i][i] = qadd(M[i][i], c)
    return coeffs


def _dot(row: list[QC], col: list[QC]) -> QC:
    acc = ZERO
    for a, b in zip(row, col):
        if a != ZERO and b != ZERO:
            acc = qadd(acc, qmul(a, b))
    return acc


def tridiag_charpoly(diag: list[QC], subsup: list[QC]) -> list[QC]:
    """det(zI - T) for tridiagonal T, given diagonal and sub*super products.

    Three-term recurrence; O(K^2) exact operations.
    """
    k_dim = len(diag)
    if len(subsup) != k_dim - 1:
        raise ValueError("need K-1 offdiagonal products for a K-diagonal")
    pm1 = [ONE]
    p = [qmul((Fraction(-1), Fraction(0)), diag[0]), ONE]
    for k in range(1, k_dim):
        zp = [ZERO] + p
        new = [
            qsub(zp[i], qmul(diag[k], p[i]) if i < len(p) else ZERO)
            for i in range(len(zp))
        ]
        for i, c in enumerate(pm1):
            new[i] = qsub(new[i], qmul(subsup[k - 1], c))
        pm1, p = p, new
    return list(reversed(p))


def determinant(rows: list[list[QC]]) -> QC:
    """Exact determinant: (-1)^n times the charpoly constant term."""
    n = len(rows)
    c = charpoly(rows)[-1]
    if n % 2:
        return (-c[0], -c[1])
    return c


def deflate_zero_roots(coeffs: list[QC]) -> tuple[list[QC], int]:
    """Strip exact zero roots: returns (deflated coefficients, multiplicity)."""
    t = 0
    while t < len(coeffs) - 1 and coeffs[-1 - t] == ZERO:
        t += 1
    return coeffs[: len(coeffs) - t], t


def roots(coeffs: list[QC], dps: int = DEFAULT_DPS) -> np.ndarray:
    """All roots of an exact polynomial, as a sorted complex128 array.

    Exact zero roots are deflated first; the rest go through mpmath's
    polynomial rootfinder at `dps` decimal digits.
    """
    work, nzero = deflate_zero_roots(coeffs)
    vals = [0j] * nzero
    if len(work) > 1:
        with mp.workdps(dps):
            cs = [
                mp.mpf(c[0].numerator) / mp.mpf(c[0].denominator)
                + 1j * (mp.mpf(c[1].numerator) / mp.mpf(c[1].denominator))
                for c in work
            ]
            found = mp.polyroots(cs, maxsteps=200, extraprec=80)
        vals.extend(complex(r) for r in found)
    arr = np.asarray(vals, dtype=complex)
    return arr[np.lexsort((arr.imag, arr.real))]


def rational_sqrt(x: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if x < 0:
        return None
    rn = math.isqrt(x.numerator)
    rd = math.isqrt(x.denominator)
    if rn * rn == x.numerator and rd * rd == x.denominator:
        return Fraction(rn, rd)
    return None
