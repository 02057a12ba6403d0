import json

import pytest

from schubound.chow import ChowEngine
from schubound.errors import Interrupted, MemoryBudgetExceeded, UsageError
from schubound.rootsys import root_system_from_label
from schubound.search import (
    SearchConfig,
    Witness,
    max_multiplicity_free_degree,
    verify_multidegree,
)
from schubound.weyl import reduced_word


def full_mf_set(rs):
    """Unpruned enumeration: every multiplicity-free multidegree, brute force."""
    engine = ChowEngine(rs)
    out = {(0,) * rs.rank}
    stack = [(engine.unit(), (0,) * rs.rank, 0)]
    while stack:
        v, deg, first = stack.pop()
        if sum(deg) == rs.dim_flag:
            continue
        for i in range(first, rs.rank):
            m = deg[:i] + (deg[i] + 1,) + deg[i + 1 :]
            vm = engine.multiply_by_divisor(v, i)
            if vm.is_zero:
                continue
            if engine.min_coefficient(vm) == 1:
                out.add(m)
            stack.append((vm, m, i))  # no pruning at all
    return out


def test_a2_search(a2):
    result = max_multiplicity_free_degree(a2, SearchConfig(collect_solutions=True))
    assert result.n == 3 == a2.dim_flag
    # (1,2) and (2,1) are both maximal; the witness tie-break is lex-smallest
    assert result.witness.degrees == (1, 2)
    assert result.exhaustive
    assert (2, 1) in result.solutions
    assert result.witness.total == 3
    assert reduced_word(result.witness.witness_element) == (1, 2, 1)


def test_g2_search(g2):
    result = max_multiplicity_free_degree(g2)
    assert result.n == 3
    assert g2.dim_flag - result.n == 3


def test_verify_multidegree(a2):
    witness = verify_multidegree(a2, (2, 1))
    assert witness is not None
    assert reduced_word(witness.witness_element) == (1, 2, 1)
    assert verify_multidegree(a2, (3, 0)) is None
    trivial = verify_multidegree(a2, (0, 0))
    assert trivial is not None and trivial.witness_element.length == 0
    assert trivial.word == ""


def test_witness_reverifies(b3):
    result = max_multiplicity_free_degree(b3)
    engine = ChowEngine(b3)
    v = engine.product_of_divisors(result.witness.degrees)
    assert v.coefficient(result.witness.witness_element) == 1


@pytest.mark.parametrize("label", ["A2", "B2", "G2", "A3", "B3"])
def test_pruned_equals_unpruned(label):
    rs = root_system_from_label(label)
    brute = full_mf_set(rs)
    result = max_multiplicity_free_degree(
        rs, SearchConfig(symmetry_reduction=False, collect_solutions=True)
    )
    assert result.solutions == brute
    assert result.n == max(sum(m) for m in brute)
    best = max(sum(m) for m in brute)
    assert result.witness.degrees == min(m for m in brute if sum(m) == best)


@pytest.mark.parametrize("label", ["A3", "D4"])
def test_symmetry_reduction_matches_plain(label):
    rs = root_system_from_label(label)
    on = max_multiplicity_free_degree(rs, SearchConfig(collect_solutions=True))
    off = max_multiplicity_free_degree(
        rs, SearchConfig(symmetry_reduction=False, collect_solutions=True)
    )
    assert (on.n, on.witness.degrees, on.witness.word) == (
        off.n,
        off.witness.degrees,
        off.witness.word,
    )
    assert on.solutions == off.solutions
    # the reduction does less work when automorphisms exist
    assert on.stats.products_computed < off.stats.products_computed


@pytest.mark.parametrize("threads", [2, 4])
def test_thread_count_does_not_change_result(d4, threads):
    base = max_multiplicity_free_degree(d4, SearchConfig(thread_count=1))
    multi = max_multiplicity_free_degree(d4, SearchConfig(thread_count=threads))
    assert (base.n, base.witness.degrees, base.witness.word, base.exhaustive) == (
        multi.n,
        multi.witness.degrees,
        multi.witness.word,
        multi.exhaustive,
    )


def test_target_caps_exploration(b3):
    capped = max_multiplicity_free_degree(
        b3, SearchConfig(target=4, collect_solutions=True)
    )
    assert capped.n == 4
    assert all(sum(m) <= 4 for m in capped.solutions)
    full = max_multiplicity_free_degree(b3, SearchConfig(collect_solutions=True))
    assert capped.solutions == {m for m in full.solutions if sum(m) <= 4}


def test_interrupt_and_resume_bit_identity(tmp_path, b3):
    straight = max_multiplicity_free_degree(b3, SearchConfig(symmetry_reduction=False))
    ckpt = str(tmp_path / "b3.ckpt")
    with pytest.raises(Interrupted):
        max_multiplicity_free_degree(
            b3,
            SearchConfig(
                symmetry_reduction=False, checkpoint_path=ckpt, stop_after_nodes=5
            ),
        )
    resumed = max_multiplicity_free_degree(
        b3,
        SearchConfig(symmetry_reduction=False, checkpoint_path=ckpt, resume_path=ckpt),
    )
    assert resumed.stats.replayed_records > 0
    assert (straight.n, straight.witness.degrees, straight.witness.word, True) == (
        resumed.n,
        resumed.witness.degrees,
        resumed.witness.word,
        resumed.exhaustive,
    )


def test_resume_with_symmetry_and_threads(tmp_path, d4):
    straight = max_multiplicity_free_degree(d4, SearchConfig())
    ckpt = str(tmp_path / "d4.ckpt")
    with pytest.raises(Interrupted):
        max_multiplicity_free_degree(
            d4, SearchConfig(checkpoint_path=ckpt, stop_after_nodes=8, thread_count=3)
        )
    resumed = max_multiplicity_free_degree(
        d4, SearchConfig(checkpoint_path=ckpt, resume_path=ckpt, thread_count=3)
    )
    assert (straight.n, straight.witness.degrees, straight.witness.word) == (
        resumed.n,
        resumed.witness.degrees,
        resumed.witness.word,
    )


def test_checkpoint_records_unique_and_postordered(tmp_path, b3):
    ckpt = str(tmp_path / "b3.ckpt")
    max_multiplicity_free_degree(
        b3, SearchConfig(symmetry_reduction=False, checkpoint_path=ckpt)
    )
    lines = open(ckpt).read().splitlines()
    header = json.loads(lines[0])
    assert header["version"] == 1
    assert header["label"] == "B3"
    assert header["rank"] == 3
    assert header["order"] == "bourbaki"
    seen = set()
    for line in lines[1:]:
        entry = json.loads(line)
        key = tuple(entry["n"])
        assert key not in seen
        seen.add(key)
        assert isinstance(entry["mf"], bool)
        assert entry["min"] is None or entry["min"] >= 1
    # post-order: the root is the last record written
    assert tuple(json.loads(lines[-1])["n"]) == (0, 0, 0)


def test_resume_header_mismatch(tmp_path, b3, a3):
    ckpt = str(tmp_path / "x.ckpt")
    max_multiplicity_free_degree(b3, SearchConfig(checkpoint_path=ckpt))
    with pytest.raises(UsageError):
        max_multiplicity_free_degree(a3, SearchConfig(resume_path=ckpt))
    with pytest.raises(UsageError):
        max_multiplicity_free_degree(b3, SearchConfig(resume_path=ckpt, target=3))
    with pytest.raises(UsageError):
        max_multiplicity_free_degree(
            b3, SearchConfig(resume_path=str(tmp_path / "missing.ckpt"))
        )


def test_resume_of_complete_run(tmp_path, g2):
    ckpt = str(tmp_path / "g2.ckpt")
    first = max_multiplicity_free_degree(g2, SearchConfig(checkpoint_path=ckpt))
    again = max_multiplicity_free_degree(g2, SearchConfig(resume_path=ckpt))
    assert again.stats.nodes_expanded == 0
    assert (first.n, first.witness.degrees) == (again.n, again.witness.degrees)


def test_memo_capacity_guard(d4):
    with pytest.raises(MemoryBudgetExceeded):
        max_multiplicity_free_degree(d4, SearchConfig(memo_capacity=4))


def test_search_with_tiny_cover_cache(b3):
    base = max_multiplicity_free_degree(b3, SearchConfig())
    squeezed = max_multiplicity_free_degree(b3, SearchConfig(cover_capacity=1))
    assert (base.n, base.witness.degrees, base.witness.word) == (
        squeezed.n,
        squeezed.witness.degrees,
        squeezed.witness.word,
    )


def test_config_validation(a2):
    with pytest.raises(UsageError):
        max_multiplicity_free_degree(a2, SearchConfig(thread_count=0))
    with pytest.raises(UsageError):
        max_multiplicity_free_degree(a2, SearchConfig(target=-1))


def test_witness_dataclass_fields(a2):
    witness = verify_multidegree(a2, (1, 1))
    assert isinstance(witness, Witness)
    assert witness.total == 2
    assert witness.degrees == (1, 1)
    assert witness.word in ("1 2", "2 1")
