"""Shared eigenvalue computation and spectrum classification.

Every other module funnels its spectra through `classify_spectrum`, so
the floating-point meaning of "real and non-degenerate" is defined in
exactly one place, with the thresholds carried alongside every report.
"""

from __future__ import annotations

import enum
import hashlib
from dataclasses import dataclass, field

import numpy as np


class EigensolverError(RuntimeError):
    """Dense eigensolver failed to converge; carries a hash of the input."""

    def __init__(self, matrix_hash: str):
        super().__init__(f"eigensolver did not converge (matrix sha256={matrix_hash})")
        self.matrix_hash = matrix_hash


class Classification(str, enum.Enum):
    REAL_NONDEGENERATE = "real-nondegenerate"
    REAL_DEGENERATE = "real-degenerate"
    COMPLEX = "complex"


@dataclass(frozen=True)
class ToleranceConfig:
    """Thresholds turning exact spectral predicates into float predicates.

    reality_abs / reality_rel: an eigenvalue counts as real when
        |Im| <= reality_abs + reality_rel * rho   (rho = spectral radius).
    gap_rel: the spectrum counts as degenerate when the minimal pairwise
        distance is <= gap_rel * max(rho, 1).
    """

    reality_abs: float = 1e-10
    reality_rel: float = 1e-10
    gap_rel: float = 1e-8

    def __post_init__(self):
        if min(self.reality_abs, self.reality_rel, self.gap_rel) < 0:
            raise ValueError("tolerances must be nonnegative")

    def to_dict(self) -> dict:
        return {
            "reality_abs": self.reality_abs,
            "reality_rel": self.reality_rel,
            "gap_rel": self.gap_rel,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "ToleranceConfig":
        return cls(**d)


@dataclass(frozen=True)
class SpectrumReport:
    """Classified spectrum with the thresholds that produced the verdict."""

    eigenvalues: tuple
    classification: Classification
    min_gap: float
    max_imag: float
    tolerances: ToleranceConfig = field(default_factory=ToleranceConfig)

    def to_dict(self) -> dict:
        return {
            "eigenvalues": [[z.real, z.imag] for z in self.eigenvalues],
            "classification": self.classification.value,
            "min_gap": self.min_gap,
            "max_imag": self.max_imag,
            "tolerances": self.tolerances.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SpectrumReport":
        return cls(
            eigenvalues=tuple(complex(re, im) for re, im in d["eigenvalues"]),
            classification=Classification(d["classification"]),
            min_gap=d["min_gap"],
            max_imag=d["max_imag"],
            tolerances=ToleranceConfig.from_dict(d["tolerances"]),
        )


def sort_spectrum(values) -> np.ndarray:
    """Sort eigenvalues lexicographically by (Re, Im); fixed globally so
    golden data stays stable across platforms."""
    arr = np.asarray(values, dtype=complex)
    return arr[np.lexsort((arr.imag, arr.real))]


def eigenvalues(matrix) -> np.ndarray:
    """Full eigenvalue multiset of a dense square matrix, (Re, Im)-sorted."""
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    if a.shape[0] > 10_000:
        raise ValueError("dense eigensolve capped at dimension 10^4")
    try:
        vals = np.linalg.eigvals(a)
    except np.linalg.LinAlgError:
        raise EigensolverError(hashlib.sha256(np.ascontiguousarray(a).tobytes()).hexdigest())
    return sort_spectrum(vals)


def classify_spectrum(eigs, tol: ToleranceConfig | None = None) -> SpectrumReport:
    """Classify an eigenvalue multiset as real-nondegenerate / real-degenerate
    / complex under the given tolerances.

    Classification happens on the raw values: no conjugate-pair symmetrisation
    is applied, so fragile near-degenerate cases surface honestly.
    """
    tol = tol or ToleranceConfig()
    vals = sort_spectrum(eigs)
    if vals.size == 0:
        raise ValueError("empty spectrum")
    rho = float(np.max(np.abs(vals)))
    max_imag = float(np.max(np.abs(vals.imag)))
    if vals.size == 1:
        min_gap = float("inf")
    else:
        diffs = np.abs(vals[:, None] - vals[None, :])
        min_gap = float(np.min(diffs[np.triu_indices(vals.size, k=1)]))

    if max_imag > tol.reality_abs + tol.reality_rel * rho:
        cls = Classification.COMPLEX
    elif min_gap <= tol.gap_rel * max(rho, 1.0):
        cls = Classification.REAL_DEGENERATE
    else:
        cls = Classification.REAL_NONDEGENERATE
    return SpectrumReport(
        eigenvalues=tuple(complex(z) for z in vals),
        classification=cls,
        min_gap=min_gap,
        max_imag=max_imag,
        tolerances=tol,
    )


def in_physical_domain(matrix, tol: ToleranceConfig | None = None) -> bool:
    """True when the spectrum is real and non-degenerate (unitary evolution
    is possible for the associated model)."""
    report = classify_spectrum(eigenvalues(matrix), tol)
    return report.classification is Classification.REAL_NONDEGENERATE
