import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from epk.hamiltonian import BoseHubbardParams, build_sub_hamiltonian
from epk.perturbation import FundamentalMatrix, realize_fundamental
from epk.spectral import (
    Classification,
    SpectrumReport,
    ToleranceConfig,
    classify_spectrum,
    eigenvalues,
    in_physical_domain,
)


def test_eigenvalues_swap_matrix():
    got = eigenvalues(np.array([[0.0, 1.0], [1.0, 0.0]]))
    assert np.allclose(got, [-1, 1])


def test_eigenvalues_sub_hamiltonian_half_gamma():
    h = build_sub_hamiltonian(BoseHubbardParams(gamma=0.5, N=2))
    got = eigenvalues(h)
    expected = np.sqrt(0.75) * np.array([-2, 0, 2])
    assert np.allclose(got.real, expected, atol=1e-12)
    assert np.allclose(got.imag, 0, atol=1e-12)


def test_eigenvalues_nilpotent():
    j4 = np.diag(np.ones(3), 1)
    assert np.allclose(eigenvalues(j4), np.zeros(4))


def test_eigenvalues_sorted_lexicographically():
    got = eigenvalues(np.diag([1.0 + 1j, 1.0 - 1j, -2.0]))
    assert list(got) == [-2.0, 1.0 - 1j, 1.0 + 1j]


def test_eigenvalues_rejects_nonsquare():
    with pytest.raises(ValueError):
        eigenvalues(np.zeros((2, 3)))


@pytest.mark.parametrize(
    "values, expected",
    [
        ([-1, 0, 1], Classification.REAL_NONDEGENERATE),
        ([0, 0, 0, 0, 0], Classification.REAL_DEGENERATE),
        ([1j, -1j], Classification.COMPLEX),
    ],
)
def test_classify_spectrum_cases(values, expected):
    assert classify_spectrum(values).classification is expected


def test_classification_consistent_with_metrics():
    report = classify_spectrum([0.0, 1.0, 1.0 + 5e-9])
    assert report.classification is Classification.REAL_DEGENERATE
    assert report.min_gap <= report.tolerances.gap_rel * max(1.0, 1.0)


def test_in_physical_domain():
    assert in_physical_domain(realize_fundamental(FundamentalMatrix.kronecker_delta(5)))
    assert not in_physical_domain(np.eye(3))  # fully degenerate


@settings(max_examples=50, deadline=None)
@given(
    eigs=st.lists(
        st.floats(min_value=-50, max_value=50).map(lambda x: round(x, 3)),
        min_size=2,
        max_size=8,
        unique=True,
    ),
    scale=st.floats(min_value=1.0, max_value=1e6),
)
def test_classification_scale_consistent(eigs, scale):
    # with reality_abs = 0 and rho >= 1, classification is invariant under
    # positive rescaling of the whole spectrum
    if max(abs(e) for e in eigs) < 1.0:
        eigs = [e + 10.0 for e in eigs]
    tol = ToleranceConfig(reality_abs=0.0)
    base = classify_spectrum(eigs, tol).classification
    scaled = classify_spectrum([scale * e for e in eigs], tol).classification
    assert base is scaled


@settings(max_examples=30, deadline=None)
@given(
    data=st.lists(
        st.tuples(
            st.integers(min_value=1, max_value=4),
            st.integers(min_value=0, max_value=3),
            st.floats(min_value=-2, max_value=2, allow_nan=False),
        ),
        min_size=1,
        max_size=6,
    ),
    k=st.integers(min_value=2, max_value=6),
)
def test_real_matrices_have_conjugate_closed_spectra(data, k):
    coeffs = {}
    for j, m, v in data:
        if 1 <= j <= k - 1 and m <= k - 1 - j:
            coeffs[(j, m)] = v
    c = FundamentalMatrix(K=k, coeffs=coeffs)
    eigs = eigenvalues(realize_fundamental(c))
    # multiset closed under conjugation: greedily match each conjugate
    # to its nearest unused eigenvalue
    available = list(eigs)
    for z in np.conj(eigs):
        dists = [abs(z - w) for w in available]
        nearest = int(np.argmin(dists))
        assert dists[nearest] < 1e-10
        available.pop(nearest)


def test_report_round_trip():
    report = classify_spectrum([1.0, -1.0, 0.5 + 0.25j])
    again = SpectrumReport.from_dict(report.to_dict())
    assert again == report


def test_tolerances_embedded_and_validated():
    tol = ToleranceConfig(reality_abs=1e-9, reality_rel=1e-9, gap_rel=1e-7)
    report = classify_spectrum([0.0, 1.0], tol)
    assert report.tolerances == tol
    with pytest.raises(ValueError):
        ToleranceConfig(reality_abs=-1)
