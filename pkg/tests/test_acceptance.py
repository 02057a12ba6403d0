"""Acceptance suite.

Each criterion is one test that appends a PASS/FAIL line to the module-level
report; the conftest terminal-summary hook prints one line per criterion at
the end of the run.
"""

import functools
import json
import os
import random
import subprocess
import sys
import time

import pytest

from schubound import weyl
from schubound.chow import ChowEngine
from schubound.errors import Interrupted
from schubound.oracle import compare_all
from schubound.rootsys import root_system_from_label
from schubound.search import SearchConfig, max_multiplicity_free_degree, verify_multidegree

ACCEPTANCE_LINES = []

SELFTEST_LABELS = ("A2", "A3", "B2", "B3", "G2", "D4")


def criterion(number, name):
    def decorate(fn):
        @functools.wraps(fn)
        def wrapper(*args, **kwargs):
            try:
                detail = fn(*args, **kwargs)
            except pytest.skip.Exception as exc:
                ACCEPTANCE_LINES.append(f"criterion {number} ({name}): SKIPPED — {exc}")
                raise
            except BaseException as exc:
                ACCEPTANCE_LINES.append(f"criterion {number} ({name}): FAIL — {exc}")
                raise
            ACCEPTANCE_LINES.append(
                f"criterion {number} ({name}): PASS — {detail or 'ok'}"
            )

        return wrapper

    return decorate


def run_cli(*argv, timeout=900):
    return subprocess.run(
        [sys.executable, "-m", "schubound.cli", *argv],
        capture_output=True,
        timeout=timeout,
    )


@pytest.fixture(scope="module")
def e6_bound_runs():
    """`bound --type E6` with 1 and 8 threads; reused by criteria 2, 5, 7."""
    started = time.monotonic()
    one = run_cli("bound", "--type", "E6", "--threads", "1")
    first_seconds = time.monotonic() - started
    eight = run_cli("bound", "--type", "E6", "--threads", "8")
    assert one.returncode == 0, one.stderr.decode()
    assert eight.returncode == 0, eight.stderr.decode()
    return one.stdout, eight.stdout, first_seconds


@criterion(1, "oracle equivalence")
def test_criterion_1_selftest():
    started = time.monotonic()
    proc = run_cli("selftest", timeout=120)
    elapsed = time.monotonic() - started
    stdout = proc.stdout.decode()
    assert proc.returncode == 0, stdout
    for label in SELFTEST_LABELS:
        assert f"selftest {label}: PASS" in stdout
    assert elapsed < 60, f"selftest took {elapsed:.1f}s (budget 60s)"
    # belt and braces: the library path reports the same comparisons clean
    total = 0
    for label in SELFTEST_LABELS:
        report = compare_all(label)
        assert report.passed, f"{label}: {len(report.mismatches)} mismatches"
        total += report.monomials_checked
    return f"exit 0; {total} monomials across {len(SELFTEST_LABELS)} types, {elapsed:.1f}s"


@criterion(2, "E6 bound 17")
def test_criterion_2_e6(e6_bound_runs):
    stdout, _, seconds = e6_bound_runs
    report = json.loads(stdout)
    assert report["bound"] == 17, f"bound={report['bound']}"
    assert report["max_mf_degree"] == 19, f"N={report['max_mf_degree']}"
    assert report["exhaustive"] is True
    assert report["dim_flag"] == 36
    assert seconds <= 600, f"E6 run took {seconds:.0f}s (budget 600s)"
    # the reported witness re-verifies from scratch
    rs = root_system_from_label("E6")
    witness = verify_multidegree(rs, report["witness"]["degrees"])
    assert witness is not None
    assert witness.word == report["witness"]["word"]
    return (
        f"bound 17, N=19, witness {tuple(report['witness']['degrees'])} "
        f"re-verified, {seconds:.0f}s"
    )


@criterion(3, "E7 bound 37 (extended tier)")
def test_criterion_3_e7():
    if not os.environ.get("RUN_E7"):
        pytest.skip("extended tier (<=12h); set RUN_E7=1 to run")
    rs = root_system_from_label("E7")
    started = time.monotonic()
    result = max_multiplicity_free_degree(
        rs,
        SearchConfig(
            thread_count=int(os.environ.get("RUN_E7_THREADS", "2")),
            checkpoint_path=os.environ.get("RUN_E7_CHECKPOINT"),
        ),
    )
    elapsed = time.monotonic() - started
    assert result.n == 26, f"N={result.n}"
    assert rs.dim_flag - result.n == 37
    assert result.exhaustive
    return f"bound 37, N=26, {elapsed:.0f}s"


@criterion(4, "E8 truncated checkpoint/resume + certificate check")
def test_criterion_4_e8(tmp_path):
    rs = root_system_from_label("E8")
    straight = max_multiplicity_free_degree(rs, SearchConfig(target=10))

    ckpt = str(tmp_path / "e8.ckpt")
    with pytest.raises(Interrupted):
        max_multiplicity_free_degree(
            rs, SearchConfig(target=10, checkpoint_path=ckpt, stop_after_nodes=800)
        )
    resumed = max_multiplicity_free_degree(
        rs, SearchConfig(target=10, checkpoint_path=ckpt, resume_path=ckpt)
    )
    assert resumed.stats.replayed_records > 0

    def render(result):
        return (
            f"N={result.n}\n"
            f"witness_degrees={','.join(str(n) for n in result.witness.degrees)}\n"
            f"witness_word={result.witness.word}\n"
            f"exhaustive={'true' if result.exhaustive else 'false'}\n"
        )

    assert render(straight) == render(resumed), "resume broke bit-identity"

    detail = (
        f"target-10 run: N={straight.n}, resume bit-identical "
        f"({resumed.stats.replayed_records} replayed records)"
    )
    supplied = os.environ.get("SCHUBOUND_E8_WITNESS")
    if supplied:
        degrees = tuple(int(x) for x in supplied.split(","))
        assert sum(degrees) == 34, "supplied multidegree must have total 34"
        started = time.monotonic()
        witness = verify_multidegree(rs, degrees)
        elapsed = time.monotonic() - started
        assert elapsed <= 3600, f"verification took {elapsed:.0f}s (budget 1h)"
        assert witness is not None, "supplied multidegree is not multiplicity-free"
        detail += f"; supplied degree-34 witness certified in {elapsed:.0f}s"
    else:
        detail += "; no external degree-34 multidegree supplied (4b vacuous)"
    return detail


@criterion(5, "known-values consistency")
def test_criterion_5_known_values(e6_bound_runs):
    from schubound.candim import build_bound_report, reference_table

    observed = {}
    for label in ("A2", "A3", "G2"):
        rs = root_system_from_label(label)
        result = max_multiplicity_free_degree(rs, SearchConfig())
        report = build_bound_report(rs, result)
        observed[label] = report.bound
        reference = reference_table(label)
        assert reference.kind == "exact"
        assert report.bound >= reference.value
    assert observed["A2"] == 0
    assert observed["A3"] == 0
    assert observed["G2"] == 3
    e6_report = json.loads(e6_bound_runs[0])
    assert e6_report["bound"] >= 0
    return f"A2=0, A3=0, G2=3; exact references dominated"


@criterion(6, "algebraic invariant suite")
def test_criterion_6_invariants():
    started = time.monotonic()

    # commutativity + monotone minimum + grading, exhaustive at rank <= 3
    for label in ("A2", "B2", "G2", "A3", "B3"):
        rs = root_system_from_label(label)
        engine = ChowEngine(rs)
        stack = [(engine.unit(), (0,) * rs.rank, 0)]
        while stack:
            v, deg, first = stack.pop()
            if sum(deg) == rs.dim_flag:
                continue
            base_min = engine.min_coefficient(v)
            images = [engine.multiply_by_divisor(v, i) for i in range(rs.rank)]
            for i in range(rs.rank):
                for j in range(i + 1, rs.rank):
                    assert engine.multiply_by_divisor(
                        images[i], j
                    ) == engine.multiply_by_divisor(images[j], i)
            for i in range(first, rs.rank):
                child = images[i]
                if child.is_zero:
                    continue
                assert child.grade == sum(deg) + 1
                assert engine.min_coefficient(child) >= base_min
                stack.append((child, deg[:i] + (deg[i] + 1,) + deg[i + 1 :], i))

    # commutativity at E6: 1000 seeded random triples
    rs = root_system_from_label("E6")
    engine = ChowEngine(rs)
    rng = random.Random(20240809)
    vectors = []
    while len(vectors) < 60:
        v = engine.unit()
        for _ in range(rng.randint(0, 8)):
            v = engine.multiply_by_divisor(v, rng.randrange(6))
            if v.is_zero:
                break
        if not v.is_zero:
            vectors.append(v)
    for _ in range(1000):
        v = rng.choice(vectors)
        i, j = rng.randrange(6), rng.randrange(6)
        assert engine.multiply_by_divisor(
            engine.multiply_by_divisor(v, i), j
        ) == engine.multiply_by_divisor(engine.multiply_by_divisor(v, j), i)

    # support saturation vs the Poincare polynomial at rank <= 4
    for label in ("A3", "B3", "D4"):
        rs = root_system_from_label(label)
        engine = ChowEngine(rs)
        poincare = weyl.poincare_polynomial(rs)
        coeffs = {0: 1}
        for grade in range(1, rs.dim_flag + 1):
            vector = engine.vector_from_items(
                [(engine.element(wid), c) for wid, c in coeffs.items()]
            )
            merged = {}
            for i in range(rs.rank):
                part = engine.multiply_by_divisor(vector, i)
                for wid, c in zip(part.ids.tolist(), part.coefficient_list()):
                    merged[wid] = merged.get(wid, 0) + c
            coeffs = merged
            assert len(coeffs) == poincare[grade]

    # pruned DFS equals unpruned enumeration at rank <= 3
    from test_search import full_mf_set

    for label in ("A2", "B2", "G2", "A3", "B3"):
        rs = root_system_from_label(label)
        result = max_multiplicity_free_degree(
            rs, SearchConfig(symmetry_reduction=False, collect_solutions=True)
        )
        brute = full_mf_set(rs)
        assert result.solutions == brute
        assert result.n == max(sum(m) for m in brute)

    elapsed = time.monotonic() - started
    assert elapsed < 300, f"invariant suite took {elapsed:.0f}s (budget 300s)"
    return f"exhaustive rank<=3 checks, 1000 E6 triples, saturation, pruning: {elapsed:.0f}s"


@criterion(7, "determinism across thread counts")
def test_criterion_7_determinism(e6_bound_runs):
    one, eight, _ = e6_bound_runs

    def normalize(raw: bytes) -> bytes:
        payload = json.loads(raw)
        payload.pop("stats", None)
        return json.dumps(payload, sort_keys=True).encode()

    assert normalize(one) == normalize(eight), "reports differ beyond the stats block"
    return "bound --type E6 --threads 1 == --threads 8 (stats excluded)"
