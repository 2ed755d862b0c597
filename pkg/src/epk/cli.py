"""Command-line front end.

Exit codes: 0 success, 1 usage errors, 2 domain errors (an operation's
precondition was violated).  All numeric output is printed to 12
significant digits; `--json` switches every command to a versioned
machine-readable envelope.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

import numpy as np

from . import reproduce, serialize
from .boundary import (
    SingularTransition,
    domain_scan,
    solution_A,
    solution_B,
    solution_B_deep_limit,
)
from .hamiltonian import BoseHubbardParams, build_sub_hamiltonian, sub_hamiltonian_spectrum
from .jordan import ChainSolveError, bh_transition_matrix, ep_order_estimate
from .partitioned import (
    MaskViolation,
    PartitionLayout,
    PartitionedFundamental,
    dominant_positions,
    realize_partitioned_fundamental,
    sparse_template,
)
from .perturbation import NonRealFundamentalSpectrum, convergence_study, unfold_energies
from .spectral import (
    EigensolverError,
    ToleranceConfig,
    classify_spectrum,
    eigenvalues,
)

DOMAIN_ERRORS = (
    NonRealFundamentalSpectrum,
    SingularTransition,
    MaskViolation,
    ChainSolveError,
    EigensolverError,
    ValueError,
    ZeroDivisionError,
    FileNotFoundError,
)


class _Parser(argparse.ArgumentParser):
    """argparse exits with 2 on usage errors; this tool reserves 2 for
    domain errors, so remap usage failures to exit code 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        sys.stderr.write(f"{self.prog}: error: {message}\n")
        sys.exit(1)


def _fmt(x) -> str:
    if isinstance(x, complex):
        re = x.real + 0.0  # normalize -0.0
        if x.imag == 0:
            return f"{re:.12g}"
        sign = "+" if x.imag >= 0 else "-"
        return f"{re:.12g}{sign}{abs(x.imag):.12g}i"
    return f"{float(x) + 0.0:.12g}"


def _print_matrix(m):
    m = np.asarray(m, dtype=complex)
    for row in m:
        print("  [" + ", ".join(_fmt(z) for z in row) + "]")


def _num_arg(s):
    try:
        return Fraction(s)
    except (ValueError, ZeroDivisionError):
        return float(s)


def _tol_from_args(args) -> ToleranceConfig:
    kw = {}
    if args.tol_reality is not None:
        kw["reality_abs"] = args.tol_reality
        kw["reality_rel"] = args.tol_reality
    if args.tol_gap is not None:
        kw["gap_rel"] = args.tol_gap
    return ToleranceConfig(**kw)


def _envelope(command: str, payload: dict) -> dict:
    return {"schema": serialize.SCHEMA, "command": command, **payload}


def _cmd_bh(args) -> int:
    p = BoseHubbardParams(gamma=args.gamma, v=args.v, c=args.c, N=args.n)
    h = build_sub_hamiltonian(p)
    spec = sub_hamiltonian_spectrum(p)
    report = classify_spectrum(spec, _tol_from_args(args))
    if args.json:
        print(json.dumps(_envelope("bh", {
            "matrix": serialize.matrix_to_dict(h),
            "report": report.to_dict(),
        })))
        return 0
    print(f"sub-Hamiltonian N={args.n} (K={p.K}), gamma={_fmt(args.gamma)}, "
          f"v={_fmt(args.v)}, c={_fmt(args.c)}:")
    _print_matrix(h)
    print(f"spectrum [{report.classification.value}]:")
    print("  " + ", ".join(_fmt(z) for z in report.eigenvalues))
    print(f"min gap {_fmt(report.min_gap)}, max |Im| {_fmt(report.max_imag)}")
    return 0


def _cmd_jordan(args) -> int:
    dec = bh_transition_matrix(args.k)
    if args.json:
        print(json.dumps(_envelope("jordan", {
            "K": args.k,
            "Q": serialize.matrix_to_dict(dec.Q),
            "J": serialize.matrix_to_dict(dec.J),
            "residual": dec.residual,
        })))
        return 0
    print(f"transition matrix Q for the order-{args.k} exceptional point:")
    _print_matrix(dec.Q)
    print("Jordan matrix J:")
    _print_matrix(dec.J)
    print(f"similarity residual: {_fmt(dec.residual)}")
    return 0


def _cmd_ep_order(args) -> int:
    m = serialize.matrix_from_dict(serialize.load_json(args.input))
    re, im = (float(x) for x in args.eta.split(","))
    sizes = ep_order_estimate(m, complex(re, im), tol=args.rank_tol)
    if args.json:
        print(json.dumps(_envelope("ep-order", {"eta": [re, im], "block_sizes": sizes})))
        return 0
    print(f"Jordan block sizes at eta={_fmt(complex(re, im))}: {sizes or 'none (not an eigenvalue)'}")
    return 0


def _cmd_unfold(args) -> int:
    c = serialize.fundamental_from_dict(serialize.load_json(args.fundamental))
    energies = unfold_energies(c, args.lam, _tol_from_args(args))
    if args.json:
        print(json.dumps(_envelope("unfold", {
            "lambda": float(args.lam), "energies": list(energies),
        })))
        return 0
    print(f"unfolded energies at lambda={_fmt(float(args.lam))}:")
    print("  " + ", ".join(_fmt(e) for e in energies))
    return 0


def _cmd_converge(args) -> int:
    c = serialize.fundamental_from_dict(serialize.load_json(args.fundamental))
    lambdas = [_num_arg(s) for s in args.lambdas.split(",")]
    study = convergence_study(c, lambdas, _tol_from_args(args))
    if args.json:
        print(json.dumps(_envelope("converge", {
            "epsilon": list(study.epsilon),
            "rows": [
                {"lambda": r.lam, "cutoff": r.cutoff,
                 "scaled_energies": list(r.scaled_energies),
                 "deviation": r.deviation, "eig_deviation": r.eig_deviation,
                 "exact": r.exact}
                for r in study.rows
            ],
        })))
        return 0
    # CSV for external plotters
    k = len(study.epsilon)
    header = ["lambda", "cutoff"] + [f"scaled_{n}" for n in range(k)] + [
        "deviation", "eig_deviation"]
    print(",".join(header))
    for r in study.rows:
        cells = [_fmt(r.lam), _fmt(r.cutoff)]
        cells += [_fmt(e) for e in r.scaled_energies]
        cells += [_fmt(r.deviation), _fmt(r.eig_deviation)]
        print(",".join(cells))
    return 0


def _cmd_partitioned(args) -> int:
    if args.sub == "template":
        layout = PartitionLayout(tuple(int(d) for d in args.dims.split(",")))
        mask = sparse_template(layout)
        dominant = set(dominant_positions(layout))
        if args.json:
            print(json.dumps(_envelope("partitioned-template", {
                "dims": list(layout.dims),
                "stars": [[int(r), int(c)] for r, c in sorted(zip(*np.nonzero(mask)))],
                "dominant": sorted([int(r), int(c)] for r, c in dominant),
                "star_count": int(mask.sum()),
                "standard_layout": layout.standard,
            })))
            return 0
        n = layout.total
        print(f"layout {list(layout.dims)} (dimension {n}, {int(mask.sum())} stars, "
              f"{len(dominant)} dominant):")
        base = realize_partitioned_fundamental(PartitionedFundamental(layout, {}))
        for r in range(n):
            cells = []
            for c in range(n):
                if mask[r, c]:
                    cells.append("O" if (r, c) in dominant else "*")
                else:
                    cells.append("1" if base[r, c] else ".")
            print("  " + " ".join(cells))
        if not layout.standard:
            print("note: layout extrapolates beyond the two-block and chain forms")
        return 0
    f = serialize.partitioned_from_dict(serialize.load_json(args.input))
    report = classify_spectrum(eigenvalues(realize_partitioned_fundamental(f)),
                               _tol_from_args(args))
    if args.json:
        print(json.dumps(_envelope("partitioned-eig", {"report": report.to_dict()})))
        return 0
    print(f"spectrum [{report.classification.value}]:")
    print("  " + ", ".join(_fmt(z) for z in report.eigenvalues))
    return 0


def _print_boundary_point(pt, label, as_json):
    det_formula = pt.det_q_formula
    if as_json:
        print(json.dumps(_envelope("boundary", {
            "solution": label,
            "params": {k: float(v) for k, v in pt.params.items()},
            "ep_signature": list(pt.ep_signature),
            "det_q": float(complex(pt.det_q).real) if not isinstance(pt.det_q, complex)
                     else [pt.det_q.real, pt.det_q.imag],
            "det_q_formula": None if det_formula is None else float(det_formula),
            "residual": pt.witness.residual,
        })))
        return
    print(f"solution {label}: EP signature {list(pt.ep_signature)}")
    print("  params: " + ", ".join(f"{k}={_fmt(float(v))}" for k, v in pt.params.items()))
    print(f"  det Q = {pt.det_q}" + ("" if det_formula is None
          else f" (closed formula: {det_formula})"))
    if det_formula is None:
        print("  closed determinant formula undefined in this singular limit")
    print(f"  similarity residual: {_fmt(pt.witness.residual)}")


def _cmd_boundary(args) -> int:
    if args.sub == "solution-a":
        pt = solution_A(_num_arg(args.a), _num_arg(args.b), _num_arg(args.c), _num_arg(args.d))
        _print_boundary_point(pt, "A", args.json)
    elif args.sub == "solution-b":
        pt = solution_B(_num_arg(args.c), _num_arg(args.d), _num_arg(args.f))
        _print_boundary_point(pt, "B", args.json)
    else:
        pt = solution_B_deep_limit()
        _print_boundary_point(pt, "B deep limit", args.json)
    return 0


def _cmd_scan(args) -> int:
    template = serialize.partitioned_from_dict(serialize.load_json(args.template))
    box_raw = serialize.load_json(args.box)
    box = {}
    for key, interval in box_raw.items():
        r, c = (int(x) for x in key.split(","))
        box[(r, c)] = (float(interval[0]), float(interval[1]))
    report = domain_scan(template, box, args.samples, args.seed, _tol_from_args(args))
    lines = [
        json.dumps({
            "params": rec.params,
            "classification": rec.classification.value,
            "min_gap": rec.min_gap,
            "max_imag": rec.max_imag,
        })
        for rec in report.samples
    ]
    out = "\n".join(lines)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(out + "\n")
    else:
        print(out)
    summary = {
        "fraction_real_nondegenerate": report.fraction_real_nondegenerate,
        "samples": args.samples,
        "seed": args.seed,
    }
    if args.json:
        print(json.dumps(_envelope("scan", summary)))
    else:
        print(f"fraction real-nondegenerate: "
              f"{_fmt(report.fraction_real_nondegenerate)} "
              f"({args.samples} samples, seed {args.seed})", file=sys.stderr)
    return 0


def _cmd_reproduce(args) -> int:
    cases = list(reproduce.CASE_IDS) if args.all else [args.case]
    if not args.all and args.case is None:
        raise ValueError("give a case id or --all")
    all_ok = True
    results = []
    for case in cases:
        result = reproduce.run_case(case)
        results.append(result)
        all_ok &= result.passed
        if not args.json:
            for rec in result.records:
                mark = "ok " if rec.ok else "BAD"
                print(f"  [{mark}] {rec.name}: expected {rec.expected} | "
                      f"actual {rec.actual} | tol {rec.tol}")
            print(f"{'PASS' if result.passed else 'FAIL'} {case}")
    if args.json:
        print(json.dumps(_envelope("reproduce", {
            "results": [
                {"case": r.case, "passed": r.passed,
                 "records": [{"name": c.name, "ok": c.ok, "tol": c.tol}
                             for c in r.records]}
                for r in results
            ],
            "passed": all_ok,
        })))
    return 0 if all_ok else 2


def build_parser() -> _Parser:
    parser = _Parser(prog="epk", description=__doc__)
    parser.add_argument("--config", help="JSON file with default flag values")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    common.add_argument("--tol-reality", type=float, default=None,
                        help="absolute and relative reality threshold")
    common.add_argument("--tol-gap", type=float, default=None,
                        help="relative degeneracy gap threshold")
    common.add_argument("--seed", type=int, default=None,
                        help="RNG seed (default: EPK_SEED or 0)")

    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("bh", parents=[common], help="build a fixed-N sub-Hamiltonian")
    p.add_argument("--n", type=int, required=True, help="boson number N >= 1")
    p.add_argument("--gamma", type=float, required=True)
    p.add_argument("--c", type=float, default=0.0)
    p.add_argument("--v", type=float, default=1.0)
    p.set_defaults(func=_cmd_bh)

    p = sub.add_parser("jordan", parents=[common],
                       help="transition matrix certifying the order-K exceptional point")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=_cmd_jordan)

    p = sub.add_parser("ep-order", parents=[common], help="Jordan block sizes at eta")
    p.add_argument("--input", required=True, help="matrix JSON file")
    p.add_argument("--eta", default="0,0", help="eigenvalue as re,im")
    p.add_argument("--rank-tol", type=float, default=1e-8)
    p.set_defaults(func=_cmd_ep_order)

    p = sub.add_parser("unfold", parents=[common],
                       help="leading-order unfolded energies sqrt(lambda)*eps_n")
    p.add_argument("--fundamental", required=True, help="fundamental matrix JSON file")
    p.add_argument("--lambda", dest="lam", type=_num_arg, required=True)
    p.set_defaults(func=_cmd_unfold)

    p = sub.add_parser("converge", parents=[common],
                       help="convergence table along decreasing lambda (CSV)")
    p.add_argument("--fundamental", required=True)
    p.add_argument("--lambdas", required=True, help="comma-separated, decreasing")
    p.set_defaults(func=_cmd_converge)

    p = sub.add_parser("partitioned", parents=[common],
                       help="sector-coupling templates and spectra")
    psub = p.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    pt = psub.add_parser("template", parents=[common])
    pt.add_argument("--dims", required=True, help="comma-separated block dimensions")
    pt.set_defaults(func=_cmd_partitioned, sub="template")
    pe = psub.add_parser("eig", parents=[common])
    pe.add_argument("--input", required=True, help="partitioned fundamental JSON file")
    pe.set_defaults(func=_cmd_partitioned, sub="eig")

    p = sub.add_parser("boundary", parents=[common],
                       help="certified stability-boundary points")
    bsub = p.add_subparsers(dest="sub", required=True, parser_class=_Parser)
    ba = bsub.add_parser("solution-a", parents=[common])
    for name in "abcd":
        ba.add_argument(f"--{name}", required=True)
    ba.set_defaults(func=_cmd_boundary, sub="solution-a")
    bb = bsub.add_parser("solution-b", parents=[common])
    for name in "cdf":
        bb.add_argument(f"--{name}", required=True)
    bb.set_defaults(func=_cmd_boundary, sub="solution-b")
    bd = bsub.add_parser("deep-limit", parents=[common])
    bd.set_defaults(func=_cmd_boundary, sub="deep-limit")

    p = sub.add_parser("scan", parents=[common],
                       help="classify uniform samples from a parameter box")
    p.add_argument("--template", required=True)
    p.add_argument("--box", required=True, help='JSON {"r,c": [lo, hi], ...}')
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--out", help="write JSONL records here instead of stdout")
    p.set_defaults(func=_cmd_scan)

    p = sub.add_parser("reproduce", parents=[common], help="run golden cases")
    p.add_argument("case", nargs="?", choices=list(reproduce.CASE_IDS))
    p.add_argument("--all", action="store_true")
    p.set_defaults(func=_cmd_reproduce)
    return parser


def _apply_config(args, argv):
    if not args.config:
        return
    cfg = serialize.load_json(args.config)
    mapping = {"json": "json", "tol_reality": "tol_reality",
               "tol_gap": "tol_gap", "seed": "seed"}
    for key, attr in mapping.items():
        if key in cfg and getattr(args, attr, None) in (None, False):
            setattr(args, attr, cfg[key])


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        _apply_config(args, argv)
        if getattr(args, "seed", None) is None:
            args.seed = int(os.environ.get("EPK_SEED", "0"))
        return args.func(args)
    except DOMAIN_ERRORS as err:
        print(f"epk: error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
