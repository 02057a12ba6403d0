"""Command-line surface.

Commands: ``roots``, ``product``, ``mfsearch``, ``bound``, ``selftest``.
stdout carries only the machine-readable result and is byte-stable across
runs and thread counts; progress goes to stderr. Exit codes: 0 success,
1 computational error, 2 usage error, 3 selftest mismatch.
"""

from __future__ import annotations

import argparse
import json
import os
import re
import sys
import time

from . import candim, oracle, weyl
from .cartan import CartanDatum, load_cartan_file
from .chow import ChowEngine
from .errors import Interrupted, SchuboundError, UsageError
from .rootsys import RootSystem, build_root_system
from .search import DEFAULT_MEMO_CAPACITY, SearchConfig, run_search

SELFTEST_LABELS = ("A2", "A3", "B2", "B3", "G2", "D4")
_LABEL_LIKE = re.compile(r"^[A-Ga-g][_ ]?\d+$")


def _resolve_type(type_arg: str) -> RootSystem:
    if _LABEL_LIKE.match(type_arg.strip()):
        return build_root_system(CartanDatum.from_label(type_arg))
    if not os.path.exists(type_arg):
        raise UsageError(f"--type {type_arg!r} is neither a type label nor a readable file")
    return build_root_system(load_cartan_file(type_arg))


def _parse_degrees(text: str, rank: int) -> tuple[int, ...]:
    try:
        degrees = tuple(int(x) for x in text.split(","))
    except ValueError as exc:
        raise UsageError(f"--degrees must be comma-separated integers, got {text!r}") from exc
    if len(degrees) != rank:
        raise UsageError(f"--degrees must list {rank} exponents, got {len(degrees)}")
    if any(n < 0 for n in degrees):
        raise UsageError("--degrees entries must be nonnegative")
    return degrees


def _edge_lines(rs: RootSystem) -> list[str]:
    """Generic diagram description: one line per bond, arrows toward short roots."""
    matrix = rs.datum.matrix
    d = rs.datum.symmetrizer
    lines = []
    for i in range(rs.rank):
        for j in range(i + 1, rs.rank):
            if matrix[i][j] == 0:
                continue
            multiplicity = matrix[i][j] * matrix[j][i]
            if multiplicity == 1:
                lines.append(f"  {i + 1} -- {j + 1}")
            elif d[i] > d[j]:
                lines.append(f"  {i + 1} --({multiplicity})--> {j + 1}")
            else:
                lines.append(f"  {j + 1} --({multiplicity})--> {i + 1}")
    return lines


def _cmd_roots(args) -> int:
    rs = _resolve_type(args.type)
    out = []
    out.append(f"label={rs.label or 'custom'}")
    out.append(f"rank={rs.rank}")
    out.append(f"positive_roots={rs.dim_flag}")
    out.append(f"dim_flag={rs.dim_flag}")
    poincare = weyl.poincare_polynomial(rs)
    out.append("poincare=" + ",".join(str(c) for c in poincare))
    out.append(f"weyl_order={sum(poincare)}")
    out.append("numbering=bourbaki (simple roots 1..r; multidegrees n1..nr follow it)")
    out.append("diagram:")
    out.extend(_edge_lines(rs) or ["  (rank 1, no bonds)"])
    print("\n".join(out))
    return 0


def _cmd_product(args) -> int:
    rs = _resolve_type(args.type)
    degrees = _parse_degrees(args.degrees, rs.rank)
    engine = ChowEngine(rs)
    vector = engine.product_of_divisors(degrees)
    terms = vector.word_terms()
    if args.json:
        payload = {
            "label": rs.label or "custom",
            "degrees": list(degrees),
            "grade": vector.grade,
            "zero": vector.is_zero,
            "terms": [{"coefficient": c, "word": w} for c, w in terms],
        }
        print(json.dumps(payload, indent=2, sort_keys=True))
    else:
        for coefficient, word in terms:
            print(f"{coefficient}\t{word}")
    return 0


def _search_config(args, collect=False) -> SearchConfig:
    memo_env = os.environ.get("SCHUBOUND_MEMO_CAP")
    memo = args.memo_cap if args.memo_cap is not None else (
        int(memo_env) if memo_env else DEFAULT_MEMO_CAPACITY
    )
    threads = args.threads if args.threads is not None else (os.cpu_count() or 1)
    return SearchConfig(
        target=getattr(args, "target", None),
        thread_count=threads,
        memo_capacity=memo,
        checkpoint_path=args.checkpoint,
        resume_path=args.resume,
        symmetry_reduction=not args.no_symmetry,
        collect_solutions=collect,
        progress=lambda msg: print(f"[search] {msg}", file=sys.stderr, flush=True),
    )


def _cmd_mfsearch(args) -> int:
    rs = _resolve_type(args.type)
    cfg = _search_config(args)
    result = run_search(rs, cfg, handle_sigint=True)
    lines = []
    if cfg.target is not None:
        lines.append(f"target={cfg.target}")
    lines.append(f"N={result.n}")
    lines.append("witness_degrees=" + ",".join(str(n) for n in result.witness.degrees))
    lines.append(f"witness_word={result.witness.word}")
    lines.append(f"exhaustive={'true' if result.exhaustive else 'false'}")
    print("\n".join(lines))
    return 0


def _cmd_bound(args) -> int:
    rs = _resolve_type(args.type)
    cfg = _search_config(args)
    started = time.monotonic()
    result = run_search(rs, cfg, handle_sigint=True)
    report = candim.build_bound_report(rs, result, seconds=time.monotonic() - started)
    print(report.to_json())
    return 0


def _cmd_selftest(args) -> int:
    failed = False
    for label in SELFTEST_LABELS:
        rs = build_root_system(CartanDatum.from_label(label))
        if rs.rank > args.max_rank:
            continue
        report = oracle.compare_all(label)
        if report.passed:
            print(
                f"selftest {label}: PASS "
                f"({report.monomials_checked} monomials, {report.seconds:.2f}s)"
            )
        else:
            failed = True
            print(
                f"selftest {label}: FAIL "
                f"({len(report.mismatches)} mismatching monomials)"
            )
            for mismatch in report.mismatches[:10]:
                print(f"  degrees={mismatch.degrees}: {mismatch.detail}")
    return 3 if failed else 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="schubound",
        description=(
            "Exact Schubert-divisor arithmetic on full flag varieties: "
            "multiplicity-free products and canonical-dimension upper bounds."
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p_roots = sub.add_parser("roots", help="root-system summary for a type")
    p_roots.add_argument("--type", required=True, help="type label (e.g. E6) or Cartan matrix file")
    p_roots.set_defaults(func=_cmd_roots)

    p_product = sub.add_parser("product", help="expand a divisor monomial in the Schubert basis")
    p_product.add_argument("--type", required=True)
    p_product.add_argument("--degrees", required=True, help="comma-separated exponents n1,...,nr")
    p_product.add_argument("--json", action="store_true")
    p_product.set_defaults(func=_cmd_product)

    def add_search_flags(p, with_target: bool) -> None:
        if with_target:
            p.add_argument("--target", type=int, default=None,
                           help="cap the explored total degree")
        p.add_argument("--threads", type=int, default=None,
                       help="worker threads (default: available parallelism)")
        p.add_argument("--checkpoint", default=None, help="checkpoint file to write")
        p.add_argument("--resume", default=None, help="checkpoint file to replay")
        p.add_argument("--no-symmetry", action="store_true",
                       help="disable diagram-automorphism reduction")
        p.add_argument("--memo-cap", type=int, default=None,
                       help="settled-map capacity (default: SCHUBOUND_MEMO_CAP or 2^22)")

    p_search = sub.add_parser("mfsearch", help="maximize the multiplicity-free total degree")
    p_search.add_argument("--type", required=True)
    add_search_flags(p_search, with_target=True)
    p_search.set_defaults(func=_cmd_mfsearch)

    p_bound = sub.add_parser("bound", help="run mfsearch and emit the bound report JSON")
    p_bound.add_argument("--type", required=True)
    add_search_flags(p_bound, with_target=False)
    p_bound.set_defaults(func=_cmd_bound)

    p_selftest = sub.add_parser("selftest", help="compare the engine against the dense oracle")
    p_selftest.add_argument("--max-rank", type=int, default=4)
    p_selftest.set_defaults(func=_cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except Interrupted as exc:
        print(f"interrupted: {exc}", file=sys.stderr)
        return 1
    except SchuboundError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
