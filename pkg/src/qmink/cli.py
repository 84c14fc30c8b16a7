"""Command-line front end: dump, verify, derive and dirac."""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from . import qalgebra as qa
from .catalog import CaseSpec, InvalidParameter, default_grid
from .diracsolve import (
    NegativeMassSquare,
    NotScalar,
    UnsupportedCase,
    dirac_report,
)
from .polytext import ParseError, format_complex, format_poly, parse_poly
from .structures import StructureInconsistent, structures_for
from .verify import GROUPS, checks_to_json, first_failure, run_grid, tolerances

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_UNSUPPORTED = 0, 1, 2, 3


class UsageError(ValueError):
    pass


def default_tolerance() -> float:
    raw = os.environ.get("QMINK_TOL")
    if raw is None:
        return 1e-9
    try:
        tol = float(raw)
    except ValueError:
        raise UsageError(f"QMINK_TOL must be a number, got {raw!r}")
    if not tol > 0:
        raise UsageError("QMINK_TOL must be positive")
    return tol


def spec_from_args(args) -> CaseSpec:
    """Case from flags; unspecified parameters fall back to t=1, c=1, r=0 (case 7 needs t)."""
    t = args.t if args.t is not None or args.case == 7 else 1.0
    c = 1.0 if args.c is None else args.c
    r = 0.0 if args.r is None else args.r
    if args.case in (1, 5, 7):
        c = None
    if args.case != 3:
        r = None
    else:
        t = None
    if args.case not in (1, 5, 7):
        t = None
    return CaseSpec(args.case, t=t, c=c, r=r, s=args.s).validate()


def complex_pairs(a) -> list:
    """Nested lists with every entry as an [re, im] pair."""
    a = np.asarray(a, dtype=complex)
    if a.ndim == 0:
        return [float(a.real), float(a.imag)]
    return [complex_pairs(x) for x in a]


def ascii_matrix(a) -> str:
    a = np.atleast_2d(np.asarray(a, dtype=complex))
    cells = [[format_complex(x) for x in row] for row in a]
    width = max(len(c) for row in cells for c in row)
    return "\n".join("[ " + "  ".join(c.rjust(width) for c in row) + " ]" for row in cells)


# -- commands ------------------------------------------------------------------

def cmd_dump(args) -> int:
    spec = spec_from_args(args)
    tensors = structures_for(spec).tensors()
    names = args.tensor or sorted(tensors)
    unknown = [n for n in names if n not in tensors]
    if unknown:
        raise UsageError(f"unknown tensor {unknown[0]!r}; choose from {', '.join(sorted(tensors))}")
    if args.format == "json":
        payload = {"case": json.loads(spec.to_json()), "tensors": {n: complex_pairs(tensors[n]) for n in names}}
        print(json.dumps(payload))
    else:
        print(spec.label())
        for n in names:
            print(f"{n} =")
            print(ascii_matrix(tensors[n]))
    return EXIT_OK


def cmd_verify(args) -> int:
    tol = tolerances(default_tolerance())
    if args.case is None:
        specs = default_grid()
    else:
        specs = [s for s in default_grid() if s.case == args.case]
        if not specs:
            raise UsageError(f"case must be 1..7, got {args.case}")
    groups = GROUPS if args.claims == "all" else (args.claims,)
    start = time.perf_counter()
    checks = run_grid(specs, groups, tol, gamma_fault=args.inject_fault, jobs=args.jobs)
    elapsed = time.perf_counter() - start
    failed = first_failure(checks)
    if args.format == "json":
        print(json.dumps({
            "passed": failed is None,
            "first_failure": None if failed is None else f"{failed.group}/{failed.name}",
            "seconds": elapsed,
            "checks": checks_to_json(checks),
        }))
    else:
        for c in checks:
            if args.verbose or not c.passed:
                print(c.line())
        fatal = sum(c.fatal and not c.passed for c in checks)
        print(f"{len(checks)} checks on {len(specs)} grid points, {fatal} failed, {elapsed:.1f}s")
        if failed is None:
            print("PASS")
        else:
            print(f"FAIL at {failed.group}/{failed.name} ({failed.where})")
    return EXIT_OK if failed is None else EXIT_FAIL


def cmd_derive(args) -> int:
    spec = spec_from_args(args)
    if args.index not in range(4):
        raise UsageError(f"derivative index must be 0..3, got {args.index}")
    ss = structures_for(spec)
    rt = qa.build_rewrite_table(ss.R)
    f = parse_poly(args.expr, rt)
    out = qa.derive(args.index, f, ss, rt)
    if args.format == "json":
        terms = [{"exponents": list(m), "coefficient": [c.real, c.imag]} for m, c in sorted(out.terms.items())]
        print(json.dumps({"case": json.loads(spec.to_json()), "order": list(rt.order), "result": format_poly(out, rt), "terms": terms}))
    else:
        print(format_poly(out, rt))
    return EXIT_OK


def cmd_dirac(args) -> int:
    spec = spec_from_args(args)
    if spec.case not in (1, 2):
        raise UnsupportedCase(f"no representations are tabulated for case {spec.case}")
    if args.rep is None:
        raise UsageError("--rep is required")
    params = {"a": args.a, "d": args.d, "b": args.b}
    params = {k: v for k, v in params.items() if v is not None}
    ss = structures_for(spec)
    report = dirac_report(spec, args.rep, params, args.N, ss, default_tolerance())
    if args.format == "json":
        print(json.dumps(report))
        return EXIT_OK
    print(f"{spec.label()}  rep {report['rep']}  N={report['N']}")
    print(f"mass            {format_complex(report['mass'])}")
    print(f"solution dim    {report['solution_dim']} (printed rank {report['printed_rank']})")
    print(f"families        {', '.join(report['printed_families']) or 'none'}")
    print(f"max residual    {report['max_residual']:.3e}")
    if "table_residual" in report:
        print(f"momenta tables  {report['table_residual']:.3e} ({report['closure']} closure)")
    for s in report["spectra"]:
        print(f"P~{s['t']}: all_real={s['all_real']} diagonalizable={s['diagonalizable']}")
    return EXIT_OK


# -- parser --------------------------------------------------------------------

def _case_flags(p, case_default=None):
    p.add_argument("--case", type=int, default=case_default, required=case_default is None)
    p.add_argument("--t", type=float)
    p.add_argument("--c", type=float)
    p.add_argument("--r", type=float)
    p.add_argument("--s", type=int, default=1, choices=(1, -1))
    p.add_argument("--format", choices=("text", "json"), default="text")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qmink", description="Quantum Minkowski space toolkit.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("dump", help="print tensors of one case")
    _case_flags(p)
    p.add_argument("--tensor", action="append", help="tensor name, repeatable (default: all)")
    p.set_defaults(func=cmd_dump)

    p = sub.add_parser("verify", help="run the verification grid")
    p.add_argument("--case", type=int)
    p.add_argument("--claims", choices=("all",) + GROUPS, default="all")
    p.add_argument("--format", choices=("text", "json"), default="text")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--verbose", action="store_true", help="list passing checks too")
    p.add_argument("--inject-fault", type=float, default=0.0, metavar="SIZE",
                   help="perturb one gamma entry by SIZE (negative control)")
    p.set_defaults(func=cmd_verify)

    p = sub.add_parser("derive", help="normal form of a partial derivative")
    p.add_argument("expr")
    p.add_argument("index", type=int)
    _case_flags(p, case_default=1)
    p.set_defaults(func=cmd_derive)

    p = sub.add_parser("dirac", help="solve the Dirac equation in a truncated representation")
    _case_flags(p)
    p.add_argument("--rep", choices=("1a", "1b", "2a", "2b"))
    p.add_argument("--a", type=float)
    p.add_argument("--b", type=complex)
    p.add_argument("--d", type=float)
    p.add_argument("--N", type=int, default=12)
    p.set_defaults(func=cmd_dirac)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UnsupportedCase as exc:
        print(f"unsupported: {exc}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except ParseError as exc:
        print(f"parse error at column {exc.column}: {exc.reason}", file=sys.stderr)
        return EXIT_INPUT
    except (InvalidParameter, UsageError, NotScalar, NegativeMassSquare) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (StructureInconsistent, qa.PivotFailure, qa.NonTermination) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
