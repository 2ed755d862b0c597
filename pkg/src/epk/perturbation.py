"""Admissible perturbations of the exceptional point and their unfoldings.

The cut-off parameter Lambda = 1/sqrt(lambda) rescales a perturbation
W(lambda) of the nilpotent Jordan matrix into M(Lambda); admissibility
means every entry (m+j, m) stays O(Lambda^-(j-1)) with the upper triangle
empty.  The leading coefficients a_m^(j) fill a fundamental matrix whose
spectrum {eps_n} drives the unfolded energies E_n = sqrt(lambda) * eps_n.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import exact
from .jordan import JordanSpec, jordan_matrix
from .spectral import (
    Classification,
    SpectrumReport,
    ToleranceConfig,
    classify_spectrum,
    eigenvalues,
    sort_spectrum,
)


class NonRealFundamentalSpectrum(ValueError):
    """The fundamental spectrum is not real-nondegenerate, so the chosen
    perturbation leaves the corridor where the unfolding stays unitary."""

    def __init__(self, report: SpectrumReport):
        super().__init__(
            f"fundamental spectrum classified {report.classification.value}; "
            "unfolding requires real-nondegenerate"
        )
        self.report = report


@dataclass(frozen=True)
class ScalingParams:
    """Perturbation strength lam > 0 with the derived cut-off 1/sqrt(lam).

    The asymptotic regime assumes the cut-off is large; below 10 a warning
    is emitted (never an error).
    """

    lam: float

    def __post_init__(self):
        if not self.lam > 0:
            raise ValueError("lam must be positive")
        if self.cutoff < 10:
            warnings.warn(
                f"cutoff {self.cutoff:.3g} < 10: outside the large-cutoff regime",
                stacklevel=2,
            )

    @property
    def cutoff(self) -> float:
        return 1.0 / math.sqrt(self.lam)

    @classmethod
    def from_cutoff(cls, cutoff: float) -> "ScalingParams":
        if not cutoff > 0:
            raise ValueError("cutoff must be positive")
        return cls(lam=1.0 / (cutoff * cutoff))


@dataclass(frozen=True)
class FundamentalMatrix:
    """Leading perturbation coefficients a_m^(j), stored as {(j, m): value}.

    The realized matrix is K x K with a fixed unit superdiagonal (owned by
    the Jordan matrix, deliberately not a coefficient) and a_m^(j) at
    position (m+j, m).  Values may be exact rationals; they survive into
    the exact secular machinery.
    """

    K: int
    coeffs: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.K < 2:
            raise ValueError("K must be >= 2")
        clean = {}
        for (j, m), v in self.coeffs.items():
            if not (1 <= j <= self.K - 1 and 0 <= m <= self.K - 1 - j):
                raise ValueError(f"coefficient index (j={j}, m={m}) outside K={self.K}")
            if not exact.is_exact(v):
                raise ValueError(f"coefficient a_{m}^({j}) is not finite")
            clean[(int(j), int(m))] = v
        object.__setattr__(self, "coeffs", clean)

    @classmethod
    def kronecker_delta(cls, K: int) -> "FundamentalMatrix":
        """a_m^(j) = delta_{j,1}: the exactly solvable tridiagonal choice."""
        return cls(K=K, coeffs={(1, m): 1 for m in range(K - 1)})

    def as_exact_rows(self) -> list[list[exact.QC]]:
        rows = [[exact.ZERO] * self.K for _ in range(self.K)]
        for i in range(self.K - 1):
            rows[i][i + 1] = exact.ONE
        for (j, m), v in self.coeffs.items():
            rows[m + j][m] = exact.to_qc(v)
        return rows


@dataclass(frozen=True)
class PerturbationFamily:
    """Cut-off-dependent perturbation entries W_mn = coeff * Lambda^power.

    `element_rules` maps (m, n) to (coeff, power); `bound` is the declared
    sup of |W_mn| over Lambda >= 1.
    """

    K: int
    element_rules: dict
    bound: float = 0.0

    def __post_init__(self):
        rules = {}
        for (m, n), (coeff, power) in self.element_rules.items():
            if not (0 <= m < self.K and 0 <= n < self.K):
                raise ValueError(f"rule position ({m}, {n}) outside K={self.K}")
            rules[(int(m), int(n))] = (coeff, int(power))
        object.__setattr__(self, "element_rules", rules)
        if self.bound == 0.0 and rules:
            object.__setattr__(
                self, "bound", max(abs(float(c)) for c, _ in rules.values())
            )

    def realize(self, s: ScalingParams) -> np.ndarray:
        """Evaluate W(lambda) at the given scaling."""
        w = np.zeros((self.K, self.K))
        for (m, n), (coeff, power) in self.element_rules.items():
            w[m, n] = float(coeff) * s.cutoff**power
        return w


@dataclass(frozen=True)
class AdmissibilityReport:
    ok: bool
    violations: tuple = ()

    @property
    def first_violation(self):
        return self.violations[0] if self.violations else None


def scaling_matrix(K: int, cutoff: float) -> np.ndarray:
    """Auxiliary diagonal matrix diag(Lambda^0, ..., Lambda^(K-1))."""
    if K < 1 or not cutoff > 0:
        raise ValueError("need K >= 1 and cutoff > 0")
    return np.diag(cutoff ** np.arange(K)).astype(complex)


def rescale_perturbation(W, s: ScalingParams) -> np.ndarray:
    """Rescaled perturbation M_mn = Lambda^(m-n-1) * W_mn."""
    w = np.asarray(W, dtype=complex)
    if w.ndim != 2 or w.shape[0] != w.shape[1]:
        raise ValueError("W must be square")
    k = w.shape[0]
    m_idx = np.arange(k)[:, None]
    n_idx = np.arange(k)[None, :]
    return s.cutoff ** (m_idx - n_idx - 1) * w


def leading_order(M, cutoff: float) -> np.ndarray:
    """Leading-order part of a rescaled perturbation: the strictly lower
    triangle (entries with nonnegative cut-off power); everything on or
    above the diagonal is O(1/Lambda) and dropped."""
    m = np.asarray(M, dtype=complex)
    return np.tril(m, k=-1)


def realize_fundamental(C: FundamentalMatrix) -> np.ndarray:
    """Dense real matrix: unit superdiagonal plus a_m^(j) at (m+j, m)."""
    out = np.zeros((C.K, C.K))
    for i in range(C.K - 1):
        out[i, i + 1] = 1.0
    for (j, m), v in C.coeffs.items():
        out[m + j, m] = float(v)
    return out


def admissible_family_from_fundamental(C: FundamentalMatrix) -> PerturbationFamily:
    """Canonical admissible family: rule (m+j, m) -> (a_m^(j), -(j-1))."""
    rules = {(m + j, m): (v, -(j - 1)) for (j, m), v in C.coeffs.items()}
    return PerturbationFamily(K=C.K, element_rules=rules)


def fundamental_from_family(family: PerturbationFamily) -> FundamentalMatrix:
    """Leading coefficients of a family: rules sitting exactly at the
    canonical power -(j-1) contribute; strictly subleading rules do not."""
    coeffs = {}
    for (m, n), (coeff, power) in family.element_rules.items():
        j = m - n
        if j >= 1 and power == -(j - 1):
            coeffs[(j, n)] = coeff
    return FundamentalMatrix(K=family.K, coeffs=coeffs)


def check_admissibility(family: PerturbationFamily, cutoff_grid) -> AdmissibilityReport:
    """Verify the size hierarchy |W_(m+j,m)| = O(Lambda^-(j-1)) across the
    grid and the absence of upper-triangle entries.

    Report-style: never raises; all violations are listed, first one first.
    """
    grid = [float(g) for g in cutoff_grid]
    if not grid or min(grid) < 1:
        raise ValueError("cutoff grid must be nonempty with values >= 1")
    violations = []
    for (m, n), (coeff, power) in sorted(family.element_rules.items()):
        if m <= n:
            violations.append(
                ((m, n), f"triangularity: rule at ({m}, {n}) is not strictly lower")
            )
            continue
        required = -(m - n - 1)
        if float(coeff) != 0.0 and power > required:
            violations.append(
                (
                    (m, n),
                    f"size hierarchy: rule at ({m}, {n}) scales as power {power}, "
                    f"needs <= {required}",
                )
            )
            continue
        for lam_cut in grid:
            realized = abs(float(coeff)) * lam_cut**power
            allowed = family.bound * lam_cut**required
            if realized > allowed * (1 + 1e-12):
                violations.append(
                    (
                        (m, n),
                        f"bound: |W| = {realized:.3g} exceeds "
                        f"{allowed:.3g} at cutoff {lam_cut:.3g}",
                    )
                )
                break
    return AdmissibilityReport(ok=not violations, violations=tuple(violations))


def unfold_energies(
    C: FundamentalMatrix, lam, tol: ToleranceConfig | None = None
) -> np.ndarray:
    """Leading-order unfolded energies sqrt(lam) * eps_n, ascending.

    Requires lam > 0 (signed perturbations belong in the coefficients) and
    a real-nondegenerate fundamental spectrum; raises
    NonRealFundamentalSpectrum otherwise.
    """
    lam = float(lam)
    if not lam > 0:
        raise ValueError("lam must be positive")
    report = classify_spectrum(eigenvalues(realize_fundamental(C)), tol)
    if report.classification is not Classification.REAL_NONDEGENERATE:
        raise NonRealFundamentalSpectrum(report)
    eps = np.sort(np.asarray(report.eigenvalues).real)
    return math.sqrt(lam) * eps


@dataclass(frozen=True)
class ConvergenceRow:
    lam: float
    cutoff: float
    scaled_energies: np.ndarray
    deviation: float
    eig_deviation: float
    exact: bool


@dataclass(frozen=True)
class ConvergenceStudy:
    epsilon: np.ndarray
    rows: tuple

    @property
    def deviations(self) -> list[float]:
        return [r.deviation for r in self.rows]


def _exact_cutoff(lam) -> Fraction | None:
    if not isinstance(lam, Rational):
        return None
    return exact.rational_sqrt(Fraction(1, 1) / Fraction(lam))


def convergence_study(
    source: FundamentalMatrix | PerturbationFamily,
    lambdas,
    tol: ToleranceConfig | None = None,
) -> ConvergenceStudy:
    """Tabulate E_n(lam)/sqrt(lam) against the fundamental spectrum eps_n
    along a decreasing list of perturbation strengths.

    For each lam the full matrix H(lam) = J + lam * W(lam) is built from
    the family.  Exact eigenvalues come from the rescaled frame
    J + M(Lambda), whose spectrum equals Lambda * spec(H(lam)) identically:
    when lam and the coefficients are rational with a rational sqrt(lam)
    the per-row deviation is computed exactly (it vanishes identically for
    a family holding nothing beyond its leading rules).  `eig_deviation`
    is the independent dense-eigensolver cross-check.  Rows are
    independent and may be evaluated concurrently; output order follows
    the input order.
    """
    if isinstance(source, FundamentalMatrix):
        family = admissible_family_from_fundamental(source)
        fundamental = source
    else:
        family = source
        fundamental = fundamental_from_family(source)

    lams = list(lambdas)
    vals = [float(x) for x in lams]
    if not vals or any(v <= 0 for v in vals):
        raise ValueError("lambdas must be positive")
    if any(b >= a for a, b in zip(vals, vals[1:])):
        raise ValueError("lambdas must be strictly decreasing")

    report = classify_spectrum(eigenvalues(realize_fundamental(fundamental)), tol)
    if report.classification is not Classification.REAL_NONDEGENERATE:
        raise NonRealFundamentalSpectrum(report)

    rules_exact = all(exact.is_exact(c) for c, _ in family.element_rules.values())
    k = family.K
    eps_exact = (
        np.sort(exact.roots(exact.charpoly(fundamental.as_exact_rows())).real)
        if rules_exact
        else None
    )
    eps = (
        eps_exact
        if eps_exact is not None
        else np.sort(np.asarray(report.eigenvalues).real)
    )

    j_mat = jordan_matrix(JordanSpec(((k, 0j),))).real
    rows = []
    for lam in lams:
        lam_f = float(lam)
        s = ScalingParams(lam=lam_f)
        h = j_mat + lam_f * family.realize(s)
        eig_scaled = np.sort(eigenvalues(h).real) / math.sqrt(lam_f)
        eig_dev = float(np.max(np.abs(eig_scaled - eps)))

        cut = _exact_cutoff(lam) if rules_exact else None
        if cut is not None:
            rescaled = [[exact.ZERO] * k for _ in range(k)]
            for i in range(k - 1):
                rescaled[i][i + 1] = exact.ONE
            for (m, n), (coeff, power) in family.element_rules.items():
                term = exact.qmul(
                    exact.to_qc(coeff), (cut ** (power + m - n - 1), Fraction(0))
                )
                rescaled[m][n] = exact.qadd(rescaled[m][n], term)
            scaled = np.sort(exact.roots(exact.charpoly(rescaled)).real)
            deviation = float(np.max(np.abs(scaled - eps)))
            rows.append(
                ConvergenceRow(lam_f, float(cut), scaled, deviation, eig_dev, True)
            )
        else:
            rows.append(
                ConvergenceRow(lam_f, s.cutoff, eig_scaled, eig_dev, eig_dev, False)
            )
    return ConvergenceStudy(epsilon=eps, rows=tuple(rows))
