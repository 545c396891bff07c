"""Command-line front end.

Exit status: 0 on success, 1 when a checked inequality fails, 2 on usage or
input errors.
"""
from __future__ import annotations

import argparse
import math
import sys
from pathlib import Path

import numpy as np

from . import counterexample, formats, greedy, kernels, transform
from .radix import INDEX_LIMIT, MemoryGuardError, ResolutionError, check_order, grid_size, resolution_for
from .walsh import sample_walsh

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _emit(text: str, args) -> None:
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        Path(args.output).write_text(text)


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _positive(name):
    def parse(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from None
        if v < 1:
            raise argparse.ArgumentTypeError(f"{name} must be >= 1, got {v}")
        return v
    return parse


def _nonneg(name):
    def parse(s):
        try:
            v = int(s)
        except ValueError:
            raise argparse.ArgumentTypeError(f"{name} must be an integer, got {s!r}") from None
        if v < 0:
            raise argparse.ArgumentTypeError(f"{name} must be >= 0, got {v}")
        return v
    return parse


def cmd_eval(args) -> int:
    size = grid_size(args.resolution, args.order)
    if args.index >= size:
        raise UsageError(f"--index {args.index} needs a resolution finer than {args.resolution}")
    f = sample_walsh(args.index, args.resolution, args.order)
    _emit(formats.step_function_to_json(f) if args.format == "json" else formats.step_function_to_csv(f), args)
    return EXIT_OK


def cmd_kernel(args) -> int:
    a, n = args.order, args.n
    N = resolution_for(n, a) if args.resolution is None else args.resolution
    if n > grid_size(N, a):
        raise UsageError(f"--n {n} needs a resolution finer than {N}")
    tally = kernels.dirichlet(n, N, a, cell_cap=args.cell_cap)
    vals = tally.values()
    ok = bool(np.all(tally.counts.sum(axis=1) == n)) and bool(np.all(np.abs(vals) <= n * (1 + 1e-12)))
    if args.format == "json":
        rows = [
            {"index": i, "re": float(v.real), "im": float(v.imag), "counts": [int(c) for c in cs]}
            for i, (v, cs) in enumerate(zip(vals, tally.counts))
        ]
        text = formats.table_to_json({"order": a, "resolution": N, "n": n}, "values", rows)
    else:
        rows = [(i, v.real, v.imag, *cs) for i, (v, cs) in enumerate(zip(vals, tally.counts))]
        header = ("index", "re", "im", *(f"c{e}" for e in range(a)))
        text = formats._write_csv({"order": a, "resolution": N, "n": n}, rows, header)
    _emit(text, args)
    return EXIT_OK if ok else EXIT_FAILED


def _read_n_list(path):
    out = []
    for line in _read(path).splitlines():
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            v = int(line)
        except ValueError:
            raise UsageError(f"malformed entry {line!r} in {path}") from None
        if v < 1:
            raise UsageError(f"kernel index must be >= 1, got {v} in {path}")
        out.append(v)
    if not out:
        raise UsageError(f"{path} holds no kernel indices")
    return out


def cmd_lebesgue(args) -> int:
    ns = [args.n] if args.n is not None else _read_n_list(args.n_list)
    for n in ns:
        kernels.check_cells(resolution_for(n, args.order), args.order, args.cell_cap)
    rows = []
    for n in ns:
        ki = kernels.kernel_integrals(n, args.order, cell_cap=args.cell_cap)
        rows.append({"n": n, "resolution": ki.resolution, "lebesgue": ki.total,
                     "error_bound": ki.error_bound, "pass": ki.total >= 1 - ki.error_bound})
    cols = ["n", "resolution", "lebesgue", "error_bound", "pass"]
    text = (formats.table_to_json({"order": args.order}, "rows", rows) if args.format == "json"
            else formats.table_to_csv(cols, rows))
    _emit(text, args)
    return EXIT_OK if all(r["pass"] for r in rows) else EXIT_FAILED


LEMMA_COLUMNS = ["k", "n_k", "resolution", "lebesgue", "bound_half_k", "bound_log",
                 "partial_integral", "head_integral", "head_bound", "tail_step",
                 "error_bound", "pass"]


def cmd_lemma(args) -> int:
    limit = kernels.max_feasible_k(args.order, args.cell_cap)
    if args.k_max > limit:
        raise UsageError(f"--k-max {args.k_max} exceeds the cell cap; largest feasible k is {limit}")
    report = kernels.verify_lemma(args.k_max, args.order, cell_cap=args.cell_cap)
    rows = [r.as_dict() for r in report.rows]
    text = (formats.table_to_json({"order": args.order, "pass": report.passed}, "rows", rows)
            if args.format == "json" else formats.table_to_csv(LEMMA_COLUMNS, rows))
    _emit(text, args)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_transform(args) -> int:
    text = _read(args.input)
    if args.inverse:
        S = formats.read_spectrum(text)
        if S.order != args.order:
            raise UsageError(f"file has order {S.order}, --order is {args.order}")
        N = resolution_for(len(S), S.order) if args.resolution is None else args.resolution
        if len(S) > grid_size(N, S.order):
            raise UsageError(f"{len(S)} coefficients need a resolution finer than {N}")
        f = transform.inverse(S, N)
        out = formats.step_function_to_json(f) if args.format == "json" else formats.step_function_to_csv(f)
    else:
        f = formats.read_step_function(text)
        if f.order != args.order:
            raise UsageError(f"file has order {f.order}, --order is {args.order}")
        S = transform.forward(f)
        out = formats.spectrum_to_json(S) if args.format == "json" else formats.spectrum_to_csv(S)
    _emit(out, args)
    return EXIT_OK


def cmd_greedy(args) -> int:
    S = formats.read_spectrum(_read(args.coeffs))
    if args.m > len(S):
        raise UsageError(f"--m {args.m} exceeds the {len(S)} coefficients")
    if len(S) > grid_size(args.resolution, S.order):
        raise UsageError(f"{len(S)} coefficients need a resolution finer than {args.resolution}")
    sel = greedy.greedy_select(S, args.m)
    G = greedy.thresholding_sum(S, sel, args.resolution)
    norm = greedy.l1_norm(G)
    ok = greedy.is_greedy(S, sel)
    meta = {"order": S.order, "resolution": args.resolution, "m": args.m, "l1_norm": norm}
    if args.format == "json":
        doc = dict(meta, selected=list(sel.indices))
        text = formats.table_to_json(doc, "values", formats._complex_json(G.values))
    else:
        body = formats._write_csv(meta, [(i,) for i in sel.indices], ("selected",))
        rows = formats._complex_rows(G.values)
        body += "index,re,im\n" + "".join(",".join(formats.fmt(v) for v in r) + "\n" for r in rows)
        text = body
    _emit(text, args)
    return EXIT_OK if ok else EXIT_FAILED


GAP_COLUMNS = ["order", "k", "block_start", "m_k", "block_end", "resolution", "gap",
               "lebesgue_m", "j2_bound", "j2_bound_log2", "dirichlet_bound", "final_bound",
               "error_bound", "window_ok", "chain_ok", "j1_identity", "pass_dirichlet",
               "pass_final", "pass"]


def cmd_gap(args) -> int:
    s, m = counterexample.gap_window(args.k, args.order)
    kernels.check_cells(resolution_for(s + m, args.order), args.order, args.cell_cap)
    report = counterexample.block_gap(args.k, args.order, cell_cap=args.cell_cap,
                                      check_identity=not args.skip_identity)
    rec = report.as_dict()
    text = formats.record_to_json(rec) if args.format == "json" else formats.table_to_csv(GAP_COLUMNS, [rec])
    _emit(text, args)
    return EXIT_OK if report.passed else EXIT_FAILED


def cmd_coeffs(args) -> int:
    rows = []
    for i in range(1, args.max_index + 1):
        key = counterexample.coefficient(i, args.order)
        rows.append({"i": i, "k": key.block, "value": key.value,
                     "inverse_square": 1.0 / key.block**2, "dyadic_log2": key.dyadic_log2})
    ok = all(counterexample.coefficient(i + 1, args.order) < counterexample.coefficient(i, args.order)
             for i in range(1, args.max_index))
    cols = ["i", "k", "value", "inverse_square", "dyadic_log2"]
    text = (formats.table_to_json({"order": args.order, "strictly_decreasing": ok}, "rows", rows)
            if args.format == "json" else formats.table_to_csv(cols, rows))
    _emit(text, args)
    return EXIT_OK if ok else EXIT_FAILED


NORMS_COLUMNS = ["order", "blocks", "resolution", "g_norm", "h_norm", "f_norm", "g_bound",
                 "h_bound", "f_bound", "split_residual", "passed"]


def cmd_norms(args) -> int:
    kernels.check_cells(args.blocks**2, args.order, args.cell_cap)
    report = counterexample.decomposition_norms(args.blocks, args.order, cell_cap=args.cell_cap)
    rec = report.as_dict()
    text = formats.record_to_json(rec) if args.format == "json" else formats.table_to_csv(NORMS_COLUMNS, [rec])
    _emit(text, args)
    return EXIT_OK if report.passed else EXIT_FAILED


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="chrestenson",
        description="Generalized Walsh system of order a: evaluation, transforms, "
        "Dirichlet kernels, Lebesgue constants and the greedy divergence check.",
    )
    sub = p.add_subparsers(dest="command", required=True, metavar="COMMAND")

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("csv", "json"), default="csv", help="output format (default: csv)")
    common.add_argument("--output", "-o", default="-", help="output file (default: stdout)")
    common.add_argument("--cell-cap", type=_positive("--cell-cap"), default=kernels.DEFAULT_CELL_CAP,
                        help="largest grid in cells (default: 2**26)")

    def add(name, func, help_):
        sp = sub.add_parser(name, parents=[common], help=help_, description=help_)
        sp.set_defaults(func=func)
        return sp

    order = dict(type=int, required=True, help="order a, 2 <= a <= 16")

    sp = add("eval", cmd_eval, "sample psi_n on a grid")
    sp.add_argument("--order", **order)
    sp.add_argument("--index", type=_nonneg("--index"), required=True)
    sp.add_argument("--resolution", type=_nonneg("--resolution"), required=True)

    sp = add("kernel", cmd_kernel, "Dirichlet kernel values and exponent tallies")
    sp.add_argument("--order", **order)
    sp.add_argument("--n", type=_positive("--n"), required=True)
    sp.add_argument("--resolution", type=_nonneg("--resolution"), default=None,
                    help="grid resolution (default: smallest that holds D_n)")

    sp = add("lebesgue", cmd_lebesgue, "Lebesgue constants L_n")
    sp.add_argument("--order", **order)
    g = sp.add_mutually_exclusive_group(required=True)
    g.add_argument("--n", type=_positive("--n"))
    g.add_argument("--n-list", metavar="FILE", help="file with one n per line")

    sp = add("lemma", cmd_lemma, "lower bounds on L_{n_k} along the sequence n_k")
    sp.add_argument("--order", **order)
    sp.add_argument("--k-max", type=_nonneg("--k-max"), required=True)

    sp = add("transform", cmd_transform, "forward or inverse generalized Walsh transform")
    sp.add_argument("--order", **order)
    sp.add_argument("--input", required=True, metavar="FILE")
    sp.add_argument("--inverse", action="store_true", help="synthesize a step function from a spectrum")
    sp.add_argument("--resolution", type=_nonneg("--resolution"), default=None,
                    help="grid resolution for --inverse (default: smallest that fits)")

    sp = add("greedy", cmd_greedy, "greedy m-term approximant of a spectrum")
    sp.add_argument("--coeffs", required=True, metavar="FILE")
    sp.add_argument("--m", type=_nonneg("--m"), required=True)
    sp.add_argument("--resolution", type=_nonneg("--resolution"), required=True)

    sp = add("gap", cmd_gap, "block gap of the counterexample's greedy approximants")
    sp.add_argument("--order", **order)
    sp.add_argument("--k", type=int, required=True, help="block index, k >= 2")
    sp.add_argument("--skip-identity", action="store_true",
                    help="skip the exact psi_s D_m factorization check")

    sp = add("coeffs", cmd_coeffs, "coefficient table of the counterexample")
    sp.add_argument("--order", **order)
    sp.add_argument("--max-index", type=_positive("--max-index"), required=True)

    sp = add("norms", cmd_norms, "L1 norms of the g + h split of the counterexample")
    sp.add_argument("--order", **order)
    sp.add_argument("--blocks", type=_positive("--blocks"), required=True)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        if hasattr(args, "order"):
            check_order(args.order)
        if getattr(args, "k", None) is not None and args.command == "gap" and args.k < 2:
            raise UsageError(f"--k must be >= 2, got {args.k}")
        return args.func(args)
    except (UsageError, ValueError, OverflowError, MemoryGuardError, ResolutionError) as exc:
        print(f"{parser.prog} {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
