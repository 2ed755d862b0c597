"""JSON wire formats.

Matrices: {"dim": n, "entries": [[re, im], ...]} in row-major order.
Fundamental matrices: {"K": k, "coeffs": {"j,m": value}}.
Partitioned fundamentals: {"dims": [...], "entries": {"r,c": value}}.
Values may be JSON numbers or exact rational strings like "-1/10", which
round-trip losslessly into Fractions.
"""

from __future__ import annotations

import json
from fractions import Fraction
from numbers import Rational

import numpy as np

from .partitioned import PartitionLayout, PartitionedFundamental
from .perturbation import FundamentalMatrix

SCHEMA = "epk-1"


def _num_out(v):
    if isinstance(v, Rational) and not isinstance(v, int):
        fr = Fraction(v)
        if fr.denominator == 1:
            return int(fr)
        return f"{fr.numerator}/{fr.denominator}"
    if isinstance(v, float) and v.is_integer():
        return v
    return v


def _num_in(v):
    if isinstance(v, str):
        return Fraction(v)
    return v


def matrix_to_dict(m) -> dict:
    a = np.asarray(m, dtype=complex)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError("matrix must be square")
    return {
        "dim": int(a.shape[0]),
        "entries": [[float(z.real), float(z.imag)] for z in a.reshape(-1)],
    }


def matrix_from_dict(d: dict) -> np.ndarray:
    n = int(d["dim"])
    entries = d["entries"]
    if len(entries) != n * n:
        raise ValueError(f"expected {n * n} entries, got {len(entries)}")
    flat = np.array([complex(re, im) for re, im in entries])
    return flat.reshape(n, n)


def fundamental_to_dict(c: FundamentalMatrix) -> dict:
    return {
        "K": c.K,
        "coeffs": {f"{j},{m}": _num_out(v) for (j, m), v in sorted(c.coeffs.items())},
    }


def fundamental_from_dict(d: dict) -> FundamentalMatrix:
    coeffs = {}
    for key, v in d.get("coeffs", {}).items():
        j, m = (int(x) for x in key.split(","))
        coeffs[(j, m)] = _num_in(v)
    return FundamentalMatrix(K=int(d["K"]), coeffs=coeffs)


def partitioned_to_dict(f: PartitionedFundamental) -> dict:
    return {
        "dims": list(f.layout.dims),
        "entries": {f"{r},{c}": _num_out(v) for (r, c), v in sorted(f.entries.items())},
    }


def partitioned_from_dict(d: dict) -> PartitionedFundamental:
    entries = {}
    for key, v in d.get("entries", {}).items():
        r, c = (int(x) for x in key.split(","))
        entries[(r, c)] = _num_in(v)
    return PartitionedFundamental(
        layout=PartitionLayout(tuple(d["dims"])), entries=entries
    )


def load_json(path) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def dump_json(obj, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2)
        fh.write("\n")
