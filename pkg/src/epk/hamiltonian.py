"""Non-Hermitian two-mode Bose-Hubbard matrices and their exact spectra.

Fixed boson number N selects an (N+1)x(N+1) sub-Hamiltonian; the full
(truncated) Hamiltonian is the direct sum over N = 1..N_max.  At c = 0
the spectrum is known in closed form and stays real exactly for
gamma^2 <= 1, with an exceptional point of order K = N+1 at gamma = +-1.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .spectral import sort_spectrum


@dataclass(frozen=True)
class BoseHubbardParams:
    """Model parameters: on-site gain/loss gamma, tunneling v, boson-boson
    coupling c, boson number N (matrix dimension K = N+1)."""

    gamma: float
    v: float = 1.0
    c: float = 0.0
    N: int = 1

    def __post_init__(self):
        if self.N < 1:
            raise ValueError("N must be >= 1 (the 1x1 N=0 sector is out of scope)")
        if self.v == 0:
            raise ValueError("tunneling v must be nonzero")

    @property
    def K(self) -> int:
        return self.N + 1


def build_sub_hamiltonian(p: BoseHubbardParams) -> np.ndarray:
    """Fixed-N sub-Hamiltonian.

    Diagonal: -i*gamma*(N-2k) + (c/2)*(N-2k)^2 for k = 0..N.
    First off-diagonals: v*sqrt((k+1)(N-k)).  Basis ordered by the boson
    occupation index k; all transition matrices downstream depend on this
    ordering, so it is fixed here once.
    """
    n = p.N
    h = np.zeros((p.K, p.K), dtype=complex)
    for k in range(p.K):
        m = n - 2 * k
        h[k, k] = -1j * p.gamma * m + 0.5 * p.c * m * m
    for k in range(n):
        h[k, k + 1] = h[k + 1, k] = p.v * np.sqrt((k + 1) * (n - k))
    return h


def block_dimension(n_max: int) -> int:
    """Total dimension of the direct sum over N = 1..n_max."""
    return (n_max * n_max + 3 * n_max) // 2


def build_block_hamiltonian(n_max: int, gamma: float) -> np.ndarray:
    """Direct sum of the N = 1..n_max sub-Hamiltonians at v=1, c=0.

    Finite truncation of the conserved-number block structure; the
    per-block analysis is unaffected by the cut.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    dim = block_dimension(n_max)
    h = np.zeros((dim, dim), dtype=complex)
    off = 0
    for n in range(1, n_max + 1):
        k = n + 1
        h[off : off + k, off : off + k] = build_sub_hamiltonian(
            BoseHubbardParams(gamma=gamma, N=n)
        )
        off += k
    return h


def number_operator_matrix(n_max: int) -> np.ndarray:
    """Diagonal boson-number operator on the truncated direct sum: the value
    N repeated N+1 times per sector."""
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    diag = np.concatenate([np.full(n + 1, float(n)) for n in range(1, n_max + 1)])
    return np.diag(diag).astype(complex)


def exact_energies(K: int, gamma: float) -> np.ndarray:
    """Closed-form spectrum (1-gamma^2)^(1/2) * (1-K+2n), n = 0..K-1.

    Real for gamma^2 <= 1, purely imaginary pairs beyond; all K values
    collapse to 0 at gamma = +-1.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    levels = 1 - K + 2 * np.arange(K)
    s = 1.0 - gamma * gamma
    if s >= 0:
        return np.sqrt(s) * levels.astype(float)
    return (1j * np.sqrt(-s)) * levels.astype(float)


def sub_hamiltonian_spectrum(p: BoseHubbardParams, dps: int = exact.DEFAULT_DPS) -> np.ndarray:
    """Numerically computed spectrum of the fixed-N sub-Hamiltonian via its
    exact characteristic polynomial.

    The matrix is tridiagonal and its sub/super-diagonal products
    v^2*(k+1)(N-k) are rational for any float v, so the secular polynomial
    is computed exactly and rooted at extended precision.  This route keeps
    full accuracy near gamma = +-1, where the eigenvalue condition numbers
    of a plain dense eigensolve blow up with K.
    """
    n = p.N
    g = Fraction(p.gamma)
    cc = Fraction(p.c)
    vv = Fraction(p.v)
    diag: list[exact.QC] = []
    for k in range(p.K):
        m = n - 2 * k
        diag.append((cc / 2 * m * m, -g * m))
    subsup: list[exact.QC] = [
        (vv * vv * Fraction((k + 1) * (n - k)), Fraction(0)) for k in range(n)
    ]
    coeffs = exact.tridiag_charpoly(diag, subsup)
    return sort_spectrum(exact.roots(coeffs, dps=dps))
