"""Jordan matrices, transition matrices, and EP-order certification.

The Bose-Hubbard sub-Hamiltonian at gamma = 1 is similar to a single
nilpotent Jordan block; `bh_transition_matrix` produces the similarity
witness.  EP structure is fragile under rounding, so everything here
reports explicit residuals and uses configurable rank thresholds.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from . import exact
from .hamiltonian import BoseHubbardParams, build_sub_hamiltonian


class ChainSolveError(RuntimeError):
    """Jordan-chain construction failed to produce an invertible transition."""


@dataclass(frozen=True)
class JordanSpec:
    """Block sizes with their eigenvalues, e.g. ((3, 0j), (2, 0j))."""

    blocks: tuple

    def __post_init__(self):
        blocks = tuple((int(s), complex(e)) for s, e in self.blocks)
        if not blocks or any(s < 1 for s, _ in blocks):
            raise ValueError("each Jordan block needs size >= 1")
        object.__setattr__(self, "blocks", blocks)

    @property
    def dim(self) -> int:
        return sum(s for s, _ in self.blocks)


@dataclass(frozen=True)
class JordanDecomposition:
    """Similarity witness H = Q J Q^-1, certified by the residual
    max-norm(H Q - Q J) rather than by an explicit inverse."""

    Q: np.ndarray
    J: np.ndarray
    residual: float

    @property
    def abs_det_q(self) -> float:
        return float(abs(np.linalg.det(self.Q)))


def jordan_matrix(spec: JordanSpec) -> np.ndarray:
    """Block-diagonal Jordan matrix: eta on the diagonal, 1 on the
    superdiagonal of each block."""
    j = np.zeros((spec.dim, spec.dim), dtype=complex)
    off = 0
    for size, eta in spec.blocks:
        for i in range(size):
            j[off + i, off + i] = eta
        for i in range(size - 1):
            j[off + i, off + i + 1] = 1.0
        off += size
    return j


def verify_similarity(H, Q, J, tol: float) -> tuple[bool, float]:
    """Check H Q = Q J to within `tol` in the entrywise max norm.

    Returns (passed, residual).  Formulated without inverting Q for
    numerical robustness; conformability is enforced.
    """
    H = np.asarray(H, dtype=complex)
    Q = np.asarray(Q, dtype=complex)
    J = np.asarray(J, dtype=complex)
    if not (H.shape == Q.shape == J.shape) or H.shape[0] != H.shape[1]:
        raise ValueError(
            f"conformable square matrices required, got {H.shape}, {Q.shape}, {J.shape}"
        )
    residual = float(np.max(np.abs(H @ Q - Q @ J)))
    return residual <= tol, residual


# The K=2,3 transition matrices have compact closed displays; they fix the
# normalization convention that the chain construction follows for K >= 4.
_Q2 = np.array([[-1j, 1], [1, 0]], dtype=complex)


def _q3() -> np.ndarray:
    r2 = np.sqrt(2.0)
    return np.array(
        [[-2, -2j, 1], [-2j * r2, r2, 0], [2, 0, 0]], dtype=complex
    )


def _balanced_chain(K: int) -> np.ndarray:
    """Jordan chain of the gamma=1 sub-Hamiltonian in exact arithmetic.

    A diagonal balancing D (products of the off-diagonal square roots)
    turns H into an integer tridiagonal T = D^-1 H D with unit
    subdiagonal, so kernel and chain vectors follow from a forward
    recursion over complex rationals; the last row of each solve must
    vanish identically, which certifies consistency exactly.
    """
    n = K - 1
    diag = [(Fraction(0), Fraction(-(n - 2 * k))) for k in range(K)]
    sup = [Fraction((k + 1) * (n - k)) for k in range(n)]

    def solve(rhs, x0):
        x = [x0] + [exact.ZERO] * (K - 1)
        for k in range(K - 1):
            prev = x[k - 1] if k > 0 else exact.ZERO
            num = exact.qsub(exact.qsub(rhs[k], prev), exact.qmul(diag[k], x[k]))
            x[k + 1] = (num[0] / sup[k], num[1] / sup[k])
        last = exact.qadd(x[K - 2], exact.qmul(diag[K - 1], x[K - 1]))
        if last != rhs[K - 1]:
            raise ChainSolveError(f"chain solve inconsistent at K={K}")
        return x

    kernel = solve([exact.ZERO] * K, exact.ONE)
    if kernel[K - 1] == exact.ZERO:
        raise ChainSolveError(f"kernel vector has vanishing last entry at K={K}")
    # scale the whole chain so the kernel seed ends in a positive real entry
    scale = exact.qdiv(exact.ONE, kernel[K - 1])
    cols = [[exact.qmul(scale, c) for c in kernel]]
    for _ in range(K - 1):
        cols.append(solve(cols[-1], exact.ZERO))

    d = np.ones(K)
    for k in range(1, K):
        d[k] = d[k - 1] * np.sqrt(float(sup[k - 1]))
    # scalar division keeps the kernel's last entry exactly 1.0
    scale_rows = [float(d[r]) / float(d[K - 1]) for r in range(K)]
    q = np.empty((K, K), dtype=complex)
    for j, col in enumerate(cols):
        for r in range(K):
            q[r, j] = exact.qc_to_complex(col[r]) * scale_rows[r]
    return q


def bh_transition_matrix(K: int, det_tol: float = 0.0) -> JordanDecomposition:
    """Transition matrix Q with H^(K)(gamma=1) = Q J^(K)(0) Q^-1.

    K = 2, 3 return the closed displays exactly; larger K solve the Jordan
    chain from the kernel seed (last entry normalized positive real).  The
    certified residual is part of the result; `det_tol` guards against a
    degenerate numerical outcome.
    """
    if K < 2:
        raise ValueError("K must be >= 2")
    if K == 2:
        q = _Q2.copy()
    elif K == 3:
        q = _q3()
    else:
        q = _balanced_chain(K)
    h = build_sub_hamiltonian(BoseHubbardParams(gamma=1.0, N=K - 1))
    j = jordan_matrix(JordanSpec(((K, 0j),)))
    _, residual = verify_similarity(h, q, j, tol=np.inf)
    det = abs(np.linalg.det(q))
    if not np.isfinite(det) or det <= det_tol:
        raise ChainSolveError(f"|det Q| = {det:.3e} at K={K} is at or below tolerance")
    return JordanDecomposition(Q=q, J=j, residual=residual)


def ep_order_estimate(H, eta: complex, tol: float = 1e-8) -> list[int]:
    """Jordan block sizes of H at eigenvalue eta, largest first.

    Estimated from the nullities of (H - eta I)^p with numerical rank
    decided by the relative singular-value threshold
    tol * max(sigma_max((H-eta I)^p), sigma_max(H-eta I)^p); a warning is
    emitted when singular values sit within a decade of the threshold.
    Returns [] when eta is not an eigenvalue at this tolerance.
    """
    a = np.asarray(H, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("H must be square")
    n = a.shape[0]
    shifted = a - eta * np.eye(n)
    smax = float(np.linalg.svd(shifted, compute_uv=False)[0])
    if smax == 0.0:
        return [1] * n

    nullities = [0]
    power = np.eye(n, dtype=complex)
    for p in range(1, n + 1):
        power = power @ shifted
        s = np.linalg.svd(power, compute_uv=False)
        thr = tol * max(float(s[0]), smax**p)
        near = np.sum((s > thr / 10) & (s < thr * 10))
        if near:
            warnings.warn(
                f"{near} singular value(s) within a decade of the rank "
                f"threshold at power {p}; block sizes may be indeterminate",
                stacklevel=2,
            )
        nullities.append(int(np.sum(s <= thr)))
        if nullities[-1] in (nullities[-2], n):
            break
    while len(nullities) < n + 2:
        nullities.append(nullities[-1])

    sizes: list[int] = []
    for p in range(1, n + 1):
        count = 2 * nullities[p] - nullities[p - 1] - nullities[p + 1]
        sizes.extend([p] * count)
    return sorted(sizes, reverse=True)
