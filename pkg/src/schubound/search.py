"""Exhaustive search for the maximal multiplicity-free divisor product.

A nonzero divisor monomial is multiplicity-free exactly when its minimum
support coefficient is 1, and a divisor multiplication maps every coefficient
to a sum of old coefficients times positive structure constants, so the
minimum never decreases. Pruning at minimum >= 2 is therefore exact, and the
set of multiplicity-free multidegrees is downward closed: the DFS that extends
only multiplicity-free monomials visits all of them, so the maximum total
degree it reports is the global maximum.

Two traversals share the node machinery:

* plain: nondecreasing divisor-index sequences, each multidegree reached once
  through its sorted factorization; no bookkeeping beyond the stack.
* symmetry-reduced: when the Cartan diagram has nontrivial automorphisms, only
  lexicographically-minimal orbit representatives are expanded, with a settled
  map for deduplication. Every canonical multiplicity-free multidegree stays
  reachable because decrementing its smallest positive index preserves
  canonicality.

Checkpoint records are written post-order (a node only after its whole
subtree), so on resume a settled multidegree can be skipped outright.
"""

from __future__ import annotations

import json
import os
import signal
import threading
import time
from collections import deque
from dataclasses import dataclass
from typing import Callable, NamedTuple

from . import weyl
from .chow import DEFAULT_COVER_CAPACITY, ChowEngine
from .errors import Interrupted, MemoryBudgetExceeded, UsageError
from .rootsys import RootSystem
from .weyl import WeylElement

DEFAULT_MEMO_CAPACITY = 2**22
CHECKPOINT_VERSION = 1
_DONE = object()


@dataclass
class SearchConfig:
    target: int | None = None
    thread_count: int = 1
    memo_capacity: int = DEFAULT_MEMO_CAPACITY
    coefficient_backend: str = "arbitrary-precision"
    checkpoint_path: str | None = None
    resume_path: str | None = None
    symmetry_reduction: bool = True
    checkpoint_interval: float = 60.0
    cover_capacity: int = DEFAULT_COVER_CAPACITY
    collect_solutions: bool = False
    stop_after_nodes: int | None = None  # test hook: simulate an interrupt
    progress: Callable[[str], None] | None = None
    progress_interval: float = 10.0


@dataclass(frozen=True)
class Witness:
    """A multidegree together with an element whose coefficient is exactly 1."""

    degrees: tuple[int, ...]
    witness_element: WeylElement
    total: int

    @property
    def word(self) -> str:
        return weyl.word_to_string(weyl.reduced_word(self.witness_element))


@dataclass
class SearchStats:
    nodes_expanded: int = 0
    products_computed: int = 0
    seconds: float = 0.0
    replayed_records: int = 0


class SearchResult(NamedTuple):
    n: int
    witness: Witness
    exhaustive: bool
    stats: SearchStats
    solutions: frozenset | None


def verify_multidegree(
    rs: RootSystem, degrees, coefficient_backend: str = "arbitrary-precision"
) -> Witness | None:
    """Independent certificate check: recompute the monomial from scratch."""
    degrees = tuple(int(n) for n in degrees)
    engine = ChowEngine(rs, coefficient_backend)
    v = engine.product_of_divisors(degrees)
    wid = engine.multiplicity_free_witness(v)
    if wid is None:
        return None
    return Witness(degrees=degrees, witness_element=engine.element(wid), total=sum(degrees))


class _Node:
    __slots__ = ("degrees", "vector", "pending", "parents", "expanded", "complete", "record")

    def __init__(self, degrees):
        self.degrees = degrees
        self.vector = None
        self.pending = 0
        self.parents: list["_Node"] = []
        self.expanded = False
        self.complete = False
        self.record = None  # (min or None, mf)


class _Driver:
    def __init__(self, rs: RootSystem, cfg: SearchConfig):
        if cfg.thread_count < 1:
            raise UsageError("thread_count must be >= 1")
        if cfg.target is not None and cfg.target < 0:
            raise UsageError("target must be nonnegative")
        self.rs = rs
        self.cfg = cfg
        self.engine = ChowEngine(rs, cfg.coefficient_backend, cfg.cover_capacity)
        self.r = rs.rank
        self.cap = min(cfg.target if cfg.target is not None else rs.dim_flag, rs.dim_flag)

        identity_perm = tuple(range(self.r))
        autos = [p for p in rs.datum.diagram_automorphisms() if p != identity_perm]
        self.autos = autos if cfg.symmetry_reduction else []
        self.sym = bool(self.autos)

        self.lock = threading.Lock()
        self.cond = threading.Condition(self.lock)
        self.flush_lock = threading.Lock()
        self.tasks: deque[_Node] = deque()
        self.nodes: dict[tuple[int, ...], object] = {}
        self.done = False
        self.stop_reason: str | None = None
        self.error: BaseException | None = None

        self.best_total = -1
        self.best_degrees: tuple[int, ...] | None = None
        self.solutions: set[tuple[int, ...]] | None = set() if cfg.collect_solutions else None

        self.stats = SearchStats()
        self.root_degrees = (0,) * self.r

        self.replayed: dict[tuple[int, ...], tuple] = {}
        self.pending_records: list[tuple] = []
        self.checkpoint_handle = None
        self.last_flush = time.monotonic()
        self.last_progress = time.monotonic()

    # -- symmetry --------------------------------------------------------

    def _orbit(self, m: tuple[int, ...]):
        yield m
        for p in self.autos:
            yield tuple(m[p[j]] for j in range(self.r))

    def _canonical(self, m: tuple[int, ...]) -> bool:
        return all(m <= image for image in self._orbit(m))

    # -- checkpointing -----------------------------------------------------

    def _header(self) -> dict:
        return {
            "version": CHECKPOINT_VERSION,
            "label": self.rs.label or "custom",
            "rank": self.r,
            "order": "bourbaki",
            "target": self.cfg.target,
            "symmetry": self.cfg.symmetry_reduction,
        }

    def _open_checkpoint(self) -> None:
        cfg = self.cfg
        if cfg.resume_path:
            if not os.path.exists(cfg.resume_path):
                raise UsageError(f"resume file not found: {cfg.resume_path}")
            with open(cfg.resume_path, "r", encoding="utf-8") as handle:
                lines = handle.read().splitlines()
            if not lines:
                raise UsageError("resume file is empty")
            header = json.loads(lines[0])
            mine = self._header()
            for key in ("version", "label", "rank", "order", "target", "symmetry"):
                if key in header and header[key] != mine[key]:
                    raise UsageError(
                        f"checkpoint header mismatch for {key!r}: "
                        f"file has {header[key]!r}, run has {mine[key]!r}"
                    )
            for line in lines[1:]:
                line = line.strip()
                if not line:
                    continue
                try:
                    entry = json.loads(line)
                except json.JSONDecodeError:
                    continue  # truncated final line from an interrupted writer
                degrees = tuple(int(x) for x in entry["n"])
                self.replayed[degrees] = (entry["min"], bool(entry["mf"]))
                if entry["mf"]:
                    self._note_mf(degrees)
            self.stats.replayed_records = len(self.replayed)
        if cfg.checkpoint_path:
            fresh = not (cfg.resume_path and cfg.resume_path == cfg.checkpoint_path)
            mode = "w" if fresh else "a"
            self.checkpoint_handle = open(cfg.checkpoint_path, mode, encoding="utf-8")
            if fresh:
                self.checkpoint_handle.write(json.dumps(self._header()) + "\n")
                self.checkpoint_handle.flush()

    def _flush_records(self) -> None:
        # flush_lock keeps grab+write atomic so the file order stays the
        # completion order; resume relies on records being prefix-closed
        # under the descendant relation.
        with self.flush_lock:
            with self.lock:
                batch = self.pending_records
                self.pending_records = []
                self.last_flush = time.monotonic()
            if self.checkpoint_handle is None or not batch:
                return
            out = []
            for degrees, min_coeff, mf in batch:
                out.append(json.dumps({"n": list(degrees), "min": min_coeff, "mf": mf}))
            self.checkpoint_handle.write("\n".join(out) + "\n")
            self.checkpoint_handle.flush()

    # -- search ------------------------------------------------------------

    def _note_mf(self, degrees: tuple[int, ...]) -> None:
        total = sum(degrees)
        if total > self.best_total or (
            total == self.best_total and degrees < self.best_degrees
        ):
            self.best_total = total
            self.best_degrees = degrees
        if self.solutions is not None:
            if self.sym:
                self.solutions.update(self._orbit(degrees))
            else:
                self.solutions.add(degrees)

    def _complete_locked(self, node: _Node) -> None:
        node.complete = True
        if self.checkpoint_handle is not None:
            min_coeff, mf = node.record
            self.pending_records.append((node.degrees, min_coeff, mf))
        if self.sym:
            self.nodes[node.degrees] = _DONE
        if node.degrees == self.root_degrees:
            self.done = True
            self.cond.notify_all()
        parents, node.parents = node.parents, []
        for parent in parents:
            parent.pending -= 1
            if parent.pending == 0 and parent.expanded:
                self._complete_locked(parent)

    def _request_stop(self, reason: str) -> None:
        with self.lock:
            if self.stop_reason is None:
                self.stop_reason = reason
            self.cond.notify_all()

    def request_interrupt(self) -> None:
        """Ask a running search to stop; a checkpoint is flushed before raising."""
        self._request_stop("interrupt")

    def _expand(self, node: _Node) -> None:
        cfg = self.cfg
        with self.lock:
            self.stats.nodes_expanded += 1
            if (
                cfg.stop_after_nodes is not None
                and self.stats.nodes_expanded > cfg.stop_after_nodes
                and self.stop_reason is None
            ):
                self.stop_reason = "interrupt"
                self.cond.notify_all()
                return
        vector = node.vector
        node.vector = None
        degrees = node.degrees
        if self.sym:
            span = range(self.r)
        else:
            first = 0
            for i in range(self.r - 1, -1, -1):
                if degrees[i] > 0:
                    first = i
                    break
            span = range(first, self.r)

        for i in span:
            child_degrees = degrees[:i] + (degrees[i] + 1,) + degrees[i + 1 :]
            if sum(child_degrees) > self.cap:
                continue
            if child_degrees in self.replayed:
                continue  # entire subtree settled by a previous run
            if self.sym:
                with self.lock:
                    existing = self.nodes.get(child_degrees)
                    if existing is _DONE:
                        continue
                    if existing is not None:
                        if not existing.complete:
                            existing.parents.append(node)
                            node.pending += 1
                        continue
                    child = _Node(child_degrees)
                    self.nodes[child_degrees] = child
                    if len(self.nodes) > cfg.memo_capacity:
                        raise MemoryBudgetExceeded(
                            f"settled map exceeded memo_capacity={cfg.memo_capacity}"
                        )
            else:
                child = _Node(child_degrees)

            product = self.engine.multiply_by_divisor(vector, i)
            min_coeff = self.engine.min_coefficient(product)
            mf = min_coeff == 1
            child.record = (min_coeff, mf)

            with self.lock:
                self.stats.products_computed += 1
                if mf:
                    self._note_mf(child_degrees)
                expandable = (
                    mf
                    and sum(child_degrees) < self.cap
                    and (not self.sym or self._canonical(child_degrees))
                )
                if expandable:
                    child.vector = product
                    child.parents.append(node)
                    node.pending += 1
                    self.tasks.append(child)
                    self.cond.notify()
                else:
                    child.expanded = True
                    if child.pending == 0:
                        self._complete_locked(child)

        with self.lock:
            node.expanded = True
            if node.pending == 0:
                self._complete_locked(node)

        now = time.monotonic()
        if self.checkpoint_handle is not None and (
            now - self.last_flush > cfg.checkpoint_interval
        ):
            self._flush_records()
        if cfg.progress is not None and now - self.last_progress > cfg.progress_interval:
            self.last_progress = now
            with self.lock:
                message = (
                    f"nodes={self.stats.nodes_expanded} best={self.best_total} "
                    f"elements={self.engine.element_count}"
                )
            cfg.progress(message)

    def _worker(self) -> None:
        try:
            while True:
                with self.cond:
                    while not self.tasks and not self.done and self.stop_reason is None:
                        self.cond.wait(0.05)
                    if self.done or self.stop_reason is not None:
                        return
                    node = self.tasks.pop()
                self._expand(node)
        except BaseException as exc:  # propagate to run()
            with self.lock:
                self.error = exc
                self.stop_reason = "error"
                self.cond.notify_all()

    def run(self) -> SearchResult:
        started = time.monotonic()
        self._open_checkpoint()
        try:
            if self.root_degrees in self.replayed:
                self.done = True
            else:
                root = _Node(self.root_degrees)
                root.vector = self.engine.unit()
                root.record = (1, True)
                self._note_mf(self.root_degrees)
                if self.sym:
                    self.nodes[self.root_degrees] = root
                self.tasks.append(root)

                workers = [
                    threading.Thread(target=self._worker, daemon=True)
                    for _ in range(self.cfg.thread_count - 1)
                ]
                for thread in workers:
                    thread.start()
                self._worker()
                for thread in workers:
                    thread.join()

            if self.error is not None:
                raise self.error
            self._flush_records()
            if self.stop_reason == "interrupt":
                raise Interrupted(
                    "search interrupted"
                    + (
                        f"; checkpoint written to {self.cfg.checkpoint_path}"
                        if self.cfg.checkpoint_path
                        else ""
                    )
                )

            self.stats.seconds = time.monotonic() - started
            assert self.best_degrees is not None
            witness = verify_multidegree(
                self.rs, self.best_degrees, self.cfg.coefficient_backend
            )
            assert witness is not None, "best multidegree failed re-verification"
            solutions = frozenset(self.solutions) if self.solutions is not None else None
            return SearchResult(
                n=self.best_total,
                witness=witness,
                exhaustive=True,
                stats=self.stats,
                solutions=solutions,
            )
        finally:
            if self.checkpoint_handle is not None:
                self._flush_records()
                self.checkpoint_handle.close()
                self.checkpoint_handle = None


def max_multiplicity_free_degree(
    rs: RootSystem, cfg: SearchConfig | None = None
) -> SearchResult:
    """Maximize sum(n) over multiplicity-free divisor monomials [D]^n.

    Returns the maximum total degree, a re-verified witness, and an
    exhaustiveness flag (always true for a run that completes; interrupted
    runs raise instead). The result is independent of thread count.
    """
    driver = _Driver(rs, cfg or SearchConfig())
    return driver.run()


def run_search(
    rs: RootSystem, cfg: SearchConfig | None = None, handle_sigint: bool = False
) -> SearchResult:
    """Run the search, optionally turning Ctrl-C into a clean checkpointed stop."""
    driver = _Driver(rs, cfg or SearchConfig())
    if not handle_sigint:
        return driver.run()
    previous = None
    try:
        previous = signal.signal(signal.SIGINT, lambda *_: driver.request_interrupt())
    except ValueError:
        pass  # not the main thread; interrupts stay default
    try:
        return driver.run()
    finally:
        if previous is not None:
            signal.signal(signal.SIGINT, previous)
