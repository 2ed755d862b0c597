from fractions import Fraction

import numpy as np

from epk.partitioned import PartitionLayout, PartitionedFundamental
from epk.perturbation import FundamentalMatrix
from epk.serialize import (
    fundamental_from_dict,
    fundamental_to_dict,
    matrix_from_dict,
    matrix_to_dict,
    partitioned_from_dict,
    partitioned_to_dict,
)


def test_matrix_round_trip():
    m = np.array([[1.0 + 2.0j, 0.0], [-0.5j, 3.0]])
    d = matrix_to_dict(m)
    assert d["dim"] == 2 and len(d["entries"]) == 4
    assert np.array_equal(matrix_from_dict(d), m)


def test_fundamental_round_trip_preserves_rationals():
    c = FundamentalMatrix(K=4, coeffs={(1, 0): 1, (2, 1): Fraction(-1, 10), (3, 0): 0.25})
    d = fundamental_to_dict(c)
    assert d["coeffs"]["2,1"] == "-1/10"
    back = fundamental_from_dict(d)
    assert back.K == 4
    assert back.coeffs[(2, 1)] == Fraction(-1, 10)
    assert back.coeffs[(3, 0)] == 0.25


def test_partitioned_round_trip():
    f = PartitionedFundamental(
        PartitionLayout((2, 3)), {(1, 0): Fraction(9, 10), (4, 3): 1}
    )
    back = partitioned_from_dict(partitioned_to_dict(f))
    assert back.layout.dims == (2, 3)
    assert back.entries == {(1, 0): Fraction(9, 10), (4, 3): 1}
