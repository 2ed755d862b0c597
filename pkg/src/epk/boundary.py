"""Stability-boundary structure of the [2, 3] sector-coupled model.

Closed-form quintic roots on the e = g = 0 subfamily, the two boundary
solutions (the full EP5 merger and the weaker EP4 / EP3+EP2 chain with
their explicit transition matrices and determinants), staged
degeneracy-breaking, and parameter-domain scanning.
"""

from __future__ import annotations

import cmath
from dataclasses import dataclass, field
from fractions import Fraction
from numbers import Rational

import numpy as np

from . import exact
from .jordan import JordanDecomposition, JordanSpec, ep_order_estimate, jordan_matrix, verify_similarity
from .partitioned import (
    MaskViolation,
    PartitionLayout,
    PartitionedFundamental,
    realize_partitioned_fundamental,
)
from .spectral import (
    Classification,
    ToleranceConfig,
    classify_spectrum,
    eigenvalues,
    in_physical_domain,
    sort_spectrum,
)

LAYOUT_23 = PartitionLayout((2, 3))

# free-coefficient positions of the 5x5 sector-coupled fundamental matrix
Q23_POSITIONS = {
    "a": (1, 0),
    "b": (1, 2),
    "c": (3, 0),
    "d": (3, 2),
    "e": (4, 0),
    "f": (4, 1),
    "g": (4, 2),
    "h": (4, 3),
}


class SingularTransition(ValueError):
    """The requested transition matrix is singular for these parameters."""


@dataclass(frozen=True)
class Quintic23Params:
    """The eight coefficients a..h of the [2, 3] fundamental matrix."""

    a: float
    b: float
    c: float
    d: float
    e: float = 0.0
    f: float = 0.0
    g: float = 0.0
    h: float = 0.0

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in "abcdefgh"}

    def to_fundamental(self) -> PartitionedFundamental:
        entries = {Q23_POSITIONS[k]: v for k, v in self.as_dict().items()}
        return PartitionedFundamental(layout=LAYOUT_23, entries=entries)

    def realize(self) -> np.ndarray:
        return realize_partitioned_fundamental(self.to_fundamental())


def _require_eg_zero(p: Quintic23Params):
    if float(p.e) != 0.0 or float(p.g) != 0.0:
        raise ValueError("closed quintic formulas require e = g = 0")


def secular_poly_23(p: Quintic23Params) -> np.ndarray:
    """Coefficients (degree-descending) of the secular polynomial on the
    e = g = 0 subfamily: z^5 - (a+d+h) z^3 + (a(d+h) - b(f+c)) z."""
    _require_eg_zero(p)
    a, b, c, d, f, h = (float(p.a), float(p.b), float(p.c), float(p.d), float(p.f), float(p.h))
    return np.array([1.0, 0.0, -(a + d + h), 0.0, a * (d + h) - b * (f + c), 0.0])


def quintic_roots_closed_form(p: Quintic23Params) -> np.ndarray:
    """The five closed-form roots on the e = g = 0 subfamily:
    0 and +-sqrt((a+d+h +- sqrt(4b(c+f) + (d+h-a)^2)) / 2), possibly complex."""
    _require_eg_zero(p)
    a, b, c, d, f, h = (float(p.a), float(p.b), float(p.c), float(p.d), float(p.f), float(p.h))
    inner = cmath.sqrt(4 * b * (c + f) + (d + h - a) ** 2)
    roots = [0j]
    for sign in (1, -1):
        w = cmath.sqrt((a + d + h + sign * inner) / 2)
        roots.extend((w, -w))
    return sort_spectrum(roots)


@dataclass(frozen=True)
class CharPoly:
    """Characteristic polynomial with an exactness flag; `exact_coeffs`
    holds the complex-rational coefficients when available."""

    coeffs: np.ndarray
    exact: bool
    exact_coeffs: tuple | None = None


def exact_poly(matrix, dim_cap: int = 12) -> CharPoly:
    """Characteristic polynomial det(zI - M), degree-descending.

    Computed by the exact trace recursion for dimensions up to `dim_cap`
    (exact for rational entries, which includes every finite float);
    beyond the cap it falls back to floating coefficients with the flag
    cleared.
    """
    a = np.asarray(matrix, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    if a.shape[0] > dim_cap:
        return CharPoly(coeffs=np.poly(a), exact=False)
    qc = exact.charpoly(exact.matrix_to_qc(a))
    coeffs = np.array([exact.qc_to_complex(c) for c in qc])
    return CharPoly(coeffs=coeffs, exact=True, exact_coeffs=tuple(qc))


def spectrum_via_secular(matrix, dim_cap: int = 12, dps: int = exact.DEFAULT_DPS) -> np.ndarray:
    """Eigenvalues through the exact characteristic polynomial when the
    dimension permits: exact zero roots are deflated before rooting, so
    degenerate spectra come out clean instead of as eps^(1/K) clusters.
    Falls back to the dense eigensolver above the cap."""
    a = np.asarray(matrix, dtype=complex)
    if a.shape[0] > dim_cap:
        return eigenvalues(a)
    return sort_spectrum(exact.roots(exact.charpoly(exact.matrix_to_qc(a)), dps=dps))


@dataclass(frozen=True)
class BoundaryPoint:
    """A certified point of the stability boundary: parameter values, the
    Jordan signature at the degenerate eigenvalue, the similarity witness,
    the computed determinant of the transition matrix, and the value of
    its closed determinant formula when that formula is defined."""

    params: dict
    ep_signature: tuple
    witness: JordanDecomposition
    det_q: object
    det_q_formula: object = None


def _exact_det(rows) -> object:
    d = exact.determinant(rows)
    if d[1] == 0:
        fr = d[0]
        return int(fr) if fr.denominator == 1 else fr
    return complex(float(d[0]), float(d[1]))


def _all_rational(*vals) -> bool:
    return all(isinstance(v, Rational) for v in vals)


def solution_A(a, b, c, d, tol: float = 1e-9) -> BoundaryPoint:
    """Full EP5 merger: h = -a-d and f = F = -a^2/b - c collapse the secular
    polynomial to z^5; returns the explicit transition matrix with
    det Q = -F^5 b^2 and the verified similarity to a single 5-block."""
    if float(b) == 0.0:
        raise SingularTransition("solution A needs b != 0")
    exact_in = _all_rational(a, b, c, d)
    if exact_in:
        af, bf, cf, df = Fraction(a), Fraction(b), Fraction(c), Fraction(d)
        F = -af * af / bf - cf
        corner = -((af * af + F * bf + af * df) * F)
        mid = -(2 * cf * af + cf * df + af**3 / bf)
        q_rows = [
            [-F * bf, 0, af, 0, 1],
            [0, -F * bf, 0, af, 0],
            [af * F, 0, cf, 0, 0],
            [0, af * F, 0, cf, 0],
            [corner, 0, mid, 0, 0],
        ]
        det_exact = _exact_det([[exact.to_qc(x) for x in row] for row in q_rows])
        formula = -(F**5) * bf * bf
        q = np.array([[float(x) for x in row] for row in q_rows], dtype=complex)
        F_out: object = F
    else:
        a, b, c, d = float(a), float(b), float(c), float(d)
        F = -a * a / b - c
        q = np.array(
            [
                [-F * b, 0, a, 0, 1],
                [0, -F * b, 0, a, 0],
                [a * F, 0, c, 0, 0],
                [0, a * F, 0, c, 0],
                [-(a * a + F * b + a * d) * F, 0, -(2 * c * a + c * d + a**3 / b), 0, 0],
            ],
            dtype=complex,
        )
        det_exact = complex(np.linalg.det(q))
        formula = -(F**5) * b * b
        F_out = F
    if float(F_out) * float(b) == 0.0:
        raise SingularTransition("solution A transition is singular when F*b = 0")

    params = Quintic23Params(
        a=a, b=b, c=c, d=d, e=0, f=F_out, g=0, h=-(Fraction(a) + Fraction(d)) if exact_in else -(float(a) + float(d))
    )
    c_mat = params.realize()
    j5 = jordan_matrix(JordanSpec(((5, 0j),)))
    _, residual = verify_similarity(c_mat, q, j5, tol=np.inf)
    signature = tuple(ep_order_estimate(c_mat, 0j, tol=1e-8))
    return BoundaryPoint(
        params=params.as_dict(),
        ep_signature=signature,
        witness=JordanDecomposition(Q=q, J=j5, residual=residual),
        det_q=det_exact,
        det_q_formula=formula,
    )


def solution_B(c, d, f) -> BoundaryPoint:
    """Weaker boundary branch a = b = 0, h = -d, dispatched through the
    singular limits:

    * generic c != 0 (and alpha = f + c != 0): EP4+EP1 with det Q = alpha^3/c;
    * c -> 0 with f != 0: the transition stays regular, but the displayed
      determinant formula alpha^3/c is singular there, so the closed value
      is reported as undefined next to the true computed determinant;
    * f -> 0 after c -> 0 (d != 0): EP3+EP2 with det Q = d^3.
    """
    exact_in = _all_rational(c, d, f)
    cf = Fraction(c) if exact_in else float(c)
    df = Fraction(d) if exact_in else float(d)
    ff = Fraction(f) if exact_in else float(f)

    if float(c) != 0.0:
        alpha = ff + cf
        if float(alpha) == 0.0:
            raise SingularTransition("solution B needs alpha = f + c != 0 when c != 0")
        q_rows = [
            [0, 0, 1, -1 / cf, -1 / cf],
            [0, 0, 0, 1, 0],
            [alpha, 0, 0, 0, 0],
            [0, alpha, 0, 0, 0],
            [-alpha * df, 0, ff, 1, 1],
        ]
        spec = JordanSpec(((4, 0j), (1, 0j)))
        formula = alpha**3 / cf
    elif float(f) != 0.0:
        q_rows = [
            [0, 0, 1, -1 / ff, -1 / ff],
            [0, 0, 0, 1, 0],
            [ff, 0, 0, 0, 0],
            [0, ff, 0, 0, 0],
            [-ff * df, 0, ff, 0, 0],
        ]
        spec = JordanSpec(((4, 0j), (1, 0j)))
        formula = None  # alpha^3/c is singular at c = 0; see det_q for the true value
    elif float(d) != 0.0:
        q_rows = [
            [0, 1, 0, -1, 0],
            [0, 0, 1, 0, -1],
            [df, 0, 1, 0, 0],
            [0, df, 0, 0, 0],
            [-df * df, 0, 0, 0, 0],
        ]
        spec = JordanSpec(((3, 0j), (2, 0j)))
        formula = df**3
    else:
        raise ValueError("c = d = f = 0 is the parameter-free deep limit; use solution_B_deep_limit()")

    if exact_in:
        det = _exact_det([[exact.to_qc(x) for x in row] for row in q_rows])
    else:
        det = complex(np.linalg.det(np.array(q_rows, dtype=complex)))

    params = Quintic23Params(a=0, b=0, c=cf, d=df, e=0, f=ff, g=0, h=-df)
    c_mat = params.realize()
    q = np.array([[float(x) for x in row] for row in q_rows], dtype=complex)
    j_mat = jordan_matrix(spec)
    _, residual = verify_similarity(c_mat, q, j_mat, tol=np.inf)
    signature = tuple(ep_order_estimate(c_mat, 0j, tol=1e-8))
    return BoundaryPoint(
        params=params.as_dict(),
        ep_signature=signature,
        witness=JordanDecomposition(Q=q, J=j_mat, residual=residual),
        det_q=det,
        det_q_formula=formula,
    )


def solution_B_deep_limit() -> BoundaryPoint:
    """The d -> 0 endpoint: the fundamental matrix degenerates to the plain
    2+3 block direct sum, and a fixed parameter-free (non-permutation)
    transition matrix with unit determinant reorders it to canonical 3+2
    form."""
    q_rows = [
        [0, 1, 0, -1, 0],
        [0, 0, 1, 0, -1],
        [1, 0, 0, 0, 0],
        [0, 1, 0, 0, 0],
        [0, 0, 1, 0, 0],
    ]
    det = _exact_det([[exact.to_qc(x) for x in row] for row in q_rows])
    c_mat = jordan_matrix(JordanSpec(((2, 0j), (3, 0j))))
    j_mat = jordan_matrix(JordanSpec(((3, 0j), (2, 0j))))
    q = np.array(q_rows, dtype=complex)
    _, residual = verify_similarity(c_mat, q, j_mat, tol=np.inf)
    signature = tuple(ep_order_estimate(c_mat, 0j, tol=1e-8))
    return BoundaryPoint(
        params={"a": 0, "b": 0, "c": 0, "d": 0, "e": 0, "f": 0, "g": 0, "h": 0},
        ep_signature=signature,
        witness=JordanDecomposition(Q=q, J=j_mat, residual=residual),
        det_q=det,
        det_q_formula=1,
    )


@dataclass(frozen=True)
class SearchStage:
    index: int
    positions: tuple
    delta: object
    eigenvalues: tuple
    classification: Classification
    min_gap: float


@dataclass(frozen=True)
class SearchLog:
    stages: tuple
    succeeded: bool
    success_stage: int | None


def degeneracy_breaking_search(
    F: PartitionedFundamental,
    schedule,
    tol: ToleranceConfig | None = None,
) -> SearchLog:
    """Iteratively shift selected entries and watch the degeneracy break.

    `schedule` is a list of (positions, delta) stages applied cumulatively
    on top of the starting matrix; stage 0 records the unmodified start.
    Spectra go through the exact secular route, so exactly degenerate
    roots stay exactly degenerate in the log.  The search succeeds at the
    first stage classified real-nondegenerate.
    """
    stages = []
    current = F
    succeeded = False
    success_stage = None

    def record(idx, positions, delta, mat):
        spectrum = spectrum_via_secular(realize_partitioned_fundamental(mat))
        report = classify_spectrum(spectrum, tol)
        stages.append(
            SearchStage(
                index=idx,
                positions=tuple(positions),
                delta=delta,
                eigenvalues=tuple(report.eigenvalues),
                classification=report.classification,
                min_gap=report.min_gap,
            )
        )
        return report.classification

    cls = record(0, (), 0, current)
    if cls is Classification.REAL_NONDEGENERATE:
        succeeded, success_stage = True, 0
    for idx, (positions, delta) in enumerate(schedule, start=1):
        updates = {}
        for pos in positions:
            pos = tuple(pos)
            if pos not in current.entries:
                raise MaskViolation(f"schedule entry {pos} is not a coefficient of the template")
            updates[pos] = current.entries[pos] + delta
        current = current.with_entries(updates)
        cls = record(idx, positions, delta, current)
        if cls is Classification.REAL_NONDEGENERATE and not succeeded:
            succeeded, success_stage = True, idx
    return SearchLog(stages=tuple(stages), succeeded=succeeded, success_stage=success_stage)


@dataclass(frozen=True)
class SampleRecord:
    params: dict
    classification: Classification
    min_gap: float
    max_imag: float


@dataclass(frozen=True)
class ScanReport:
    samples: tuple
    fraction_real_nondegenerate: float
    seed: int
    crossings: dict = field(default_factory=dict)


def domain_scan(
    F_template: PartitionedFundamental,
    box: dict,
    samples: int,
    seed: int,
    tol: ToleranceConfig | None = None,
    slices: dict | None = None,
) -> ScanReport:
    """Uniformly sample the per-entry intervals in `box` over the template
    and classify every realized matrix.

    Each sample draws from a generator seeded by (seed, index), so serial
    and work-split runs classify identical matrices.  Optional `slices`
    maps an entry position to a (lo, hi) interval along which boundary
    crossings are bisection-bracketed to width 1e-8.
    """
    if samples < 1:
        raise ValueError("samples must be >= 1")
    positions = sorted(tuple(p) for p in box)
    records = []
    hits = 0
    for i in range(samples):
        rng = np.random.default_rng([seed, i])
        updates = {}
        for pos in positions:
            lo, hi = box[pos]
            updates[pos] = float(lo) + rng.random() * (float(hi) - float(lo))
        mat = realize_partitioned_fundamental(F_template.with_entries(updates))
        report = classify_spectrum(eigenvalues(mat), tol)
        if report.classification is Classification.REAL_NONDEGENERATE:
            hits += 1
        records.append(
            SampleRecord(
                params={f"{r},{c}": v for (r, c), v in updates.items()},
                classification=report.classification,
                min_gap=report.min_gap,
                max_imag=report.max_imag,
            )
        )
    crossings = {}
    for pos, (lo, hi) in (slices or {}).items():
        crossings[tuple(pos)] = slice_crossings(F_template, tuple(pos), lo, hi, tol=tol)
    return ScanReport(
        samples=tuple(records),
        fraction_real_nondegenerate=hits / samples,
        seed=seed,
        crossings=crossings,
    )


def slice_crossings(
    F_template: PartitionedFundamental,
    entry: tuple,
    lo: float,
    hi: float,
    tol: ToleranceConfig | None = None,
    width: float = 1e-8,
    coarse: int = 64,
) -> list[tuple[float, float]]:
    """Bisection-bracketed boundary crossings of the real-nondegenerate
    predicate along a 1-D slice of one entry, to brackets of width <= `width`."""

    def inside(t: float) -> bool:
        mat = realize_partitioned_fundamental(F_template.with_entries({entry: t}))
        return in_physical_domain(mat, tol)

    ts = np.linspace(float(lo), float(hi), coarse + 1)
    flags = [inside(t) for t in ts]
    brackets = []
    for a, b, fa, fb in zip(ts, ts[1:], flags, flags[1:]):
        if fa == fb:
            continue
        x, y = float(a), float(b)
        while y - x > width:
            mid = 0.5 * (x + y)
            if inside(mid) == fa:
                x = mid
            else:
                y = mid
        brackets.append((x, y))
    return brackets
