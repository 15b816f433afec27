"""Command line interface.

Exit codes: 0 success, 1 usage or file error, 2 parse/validation error,
3 verification failure.  Errors are reported on stderr as one JSON object.
"""

from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

import numpy as np

from . import bench
from .complex import ValidationError, validate
from .connect import ConleyComplex, IndexGenerator, extract, global_reduce, prune
from .io import ParseError, parse_any, serialize_result
from .oracle import (
    SplitError,
    NilpotencyError,
    build_contraction,
    split_blocks,
    verify_contraction,
    zigzag_dM,
)
from .reduction import clearing_reduce

EXIT_OK, EXIT_USAGE, EXIT_PARSE, EXIT_VERIFY = 0, 1, 2, 3


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        _fail(EXIT_USAGE, "usage", message)


class _Failure(Exception):
    def __init__(self, code: int, kind: str, message: str, **extra) -> None:
        super().__init__(message)
        self.code, self.kind, self.extra = code, kind, extra


def _fail(code: int, kind: str, message: str, **extra):
    raise _Failure(code, kind, message, **extra)


def _load(path: str, field: int | None):
    try:
        text = Path(path).read_text()
    except OSError as exc:
        _fail(EXIT_USAGE, "file", f"{path}: {exc.strerror or exc}")
    try:
        return parse_any(text, field)
    except ParseError as exc:
        _fail(EXIT_PARSE, "parse", str(exc), line=exc.line)
    except ValidationError as exc:
        _fail(
            EXIT_PARSE,
            "validation",
            "complex violates invariants",
            violations=[
                {"kind": v.kind, "row": v.row, "col": v.col, "message": v.message}
                for v in exc.report.violations
            ],
        )


def _emit(text: str, output: str | None) -> None:
    if output:
        try:
            Path(output).write_text(text)
        except OSError as exc:
            _fail(EXIT_USAGE, "file", f"{output}: {exc.strerror or exc}")
    else:
        sys.stdout.write(text)


def oracle_result(cx) -> tuple[ConleyComplex, object]:
    """Conley complex computed by the perturbation path only."""
    state = clearing_reduce(cx)
    maps = build_contraction(split_blocks(state))
    _, g, _ = maps.in_original_basis()
    morse = maps.blocks.morse()
    gens = []
    cycles = {j: z for cell in state.sep.H.values() for j, z in cell}
    for i, j in enumerate(morse):
        gen = cx.generators[j]
        col = {r: int(g[r, i]) for r in np.flatnonzero(g[:, i])}
        gens.append(
            IndexGenerator(
                gen.id, gen.grade, gen.dim, j, cx.chain_by_id(col), cx.chain_by_id(cycles[j])
            )
        )
    delta = {(int(i), int(j)): int(maps.dM[i, j]) for i, j in np.argwhere(maps.dM)}
    return ConleyComplex(cx.poset, cx.field, gens, delta), maps


def verify(cx, cc: ConleyComplex) -> list[str]:
    """Run every oracle check against a computed Conley complex."""
    problems = []
    try:
        state = clearing_reduce(cx)
        blocks = split_blocks(state)
        maps = build_contraction(blocks)
        zz = zigzag_dM(blocks)
    except (SplitError, NilpotencyError) as exc:
        return [str(exc)]
    delta = cc.matrix()
    if not np.array_equal(zz, maps.dM):
        problems.append("zigzag sum differs from f~ S g~")
    if not np.array_equal(delta, maps.dM):
        problems.append("connection matrix differs from the perturbation differential")
    problems += verify_contraction(maps, cx).failures
    problems += cc.violations()
    return problems


def cmd_validate(args) -> int:
    cx = _load(args.file, args.field)
    report = validate(cx)
    print(f"valid: {len(cx)} generators, |P| = {len(cx.poset)}, p = {cx.p}")
    return EXIT_OK if report.ok else EXIT_PARSE


def cmd_compute(args) -> int:
    cx = _load(args.file, args.field)
    state = clearing_reduce(cx, parallel=args.parallel_grades)
    if not args.no_prune:
        state = prune(state)
    cc = extract(global_reduce(state, order=args.order))
    if args.verify:
        problems = verify(cx, cc)
        if problems:
            _fail(EXIT_VERIFY, "verification", "oracle mismatch", failures=problems)
        print("verify: all checks passed", file=sys.stderr)
    _emit(serialize_result(cc), args.output)
    return EXIT_OK


def cmd_oracle(args) -> int:
    cx = _load(args.file, args.field)
    try:
        cc, maps = oracle_result(cx)
    except (SplitError, NilpotencyError) as exc:
        _fail(EXIT_VERIFY, "verification", str(exc))
    report = verify_contraction(maps, cx)
    if not report.ok:
        _fail(EXIT_VERIFY, "verification", "contraction identities fail", failures=report.failures)
    _emit(serialize_result(cc), args.output)
    return EXIT_OK


def cmd_bench(args) -> int:
    cfg = bench.GeneratorConfig(
        seed=args.seed,
        n_grades=args.grades,
        shape=args.shape,
        characteristic=args.field,
    )
    rows = bench.scaling_run(args.sizes, cfg, repeats=args.repeats)
    _emit(bench.to_csv(rows), args.output)
    slope = bench.loglog_slope(rows)
    if slope is not None:
        print(f"log-log slope: {slope:.3f}", file=sys.stderr)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="conley", description="Connection matrices of graded complexes.")
    sub = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(sp):
        sp.add_argument("file")
        sp.add_argument("--field", type=int, default=None, help="prime characteristic")

    sp = sub.add_parser("validate", help="check a complex or filtration file")
    common(sp)
    sp.set_defaults(func=cmd_validate)

    sp = sub.add_parser("compute", help="compute the Conley complex")
    common(sp)
    sp.add_argument("--no-prune", action="store_true", help="skip the optional pruning step")
    sp.add_argument("--verify", action="store_true", help="cross-check with the oracle")
    sp.add_argument("--parallel-grades", action="store_true")
    sp.add_argument(
        "--order", choices=["descending", "forward", "reverse"], default="descending"
    )
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_compute)

    sp = sub.add_parser("oracle", help="compute via the perturbation lemma only")
    common(sp)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_oracle)

    sp = sub.add_parser("bench", help="timing run on random complexes, CSV output")
    sp.add_argument("--sizes", type=int, nargs="+", default=[250, 500, 1000])
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--grades", type=int, default=4)
    sp.add_argument("--shape", choices=["chain", "antichain", "random"], default="chain")
    sp.add_argument("--field", type=int, default=2)
    sp.add_argument("--repeats", type=int, default=1)
    sp.add_argument("--output", "-o")
    sp.set_defaults(func=cmd_bench)
    return ap


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        return args.func(args)
    except _Failure as exc:
        print(json.dumps({"error": exc.kind, "message": str(exc), **exc.extra}), file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
