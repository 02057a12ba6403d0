"""Sparse exact arithmetic in the Schubert basis of CH(G/B).

Classes are indexed by Weyl elements with codim Z_w = l(w); Z_e is the
fundamental class and Z_{w0} the point. Multiplication by the Schubert divisor
indexed by the simple root ``i`` follows the Chevalley rule

    [D_i] * [Z_w] = sum over positive alpha with l(w s_alpha) = l(w) + 1
                    of <omega_i, alpha^vee> * [Z_{w s_alpha}],

all coefficients exact nonnegative integers.

The engine interns Weyl matrices into integer ids and keeps, per element, the
list of Bruhat covers ``(w s_alpha, alpha)`` in a flat append-only store, so a
divisor multiplication is one vectorized gather / sort / segmented-sum pass.
Coefficients ride in int64 while a conservative bound proves that no merge can
overflow; past that bound the same multiplication reruns with Python integers,
so results are exact regardless of magnitude. The ``checked-fixed`` backend
raises instead of switching over.
"""

from __future__ import annotations

import threading
from functools import lru_cache

import numpy as np

from . import weyl
from .errors import CoefficientOverflow, UsageError, WrongGrade
from .rootsys import RootSystem
from .weyl import WeylElement

DEFAULT_COVER_CAPACITY = 2**22  # elements with cached cover lists

_BACKENDS = ("arbitrary-precision", "checked-fixed")
_INT64_MAX = 2**63 - 1


class ChowVector:
    """A grade-homogeneous nonnegative combination of Schubert classes.

    ``ids`` are intern ids sorted ascending; ``coeffs`` is either an int64
    array or a list of Python ints when entries outgrow int64. The zero vector
    has empty support and compares equal regardless of nominal grade.
    """

    __slots__ = ("engine", "grade", "ids", "coeffs")

    def __init__(self, engine: "ChowEngine", grade: int, ids, coeffs):
        self.engine = engine
        self.grade = grade
        self.ids = ids
        self.coeffs = coeffs

    @property
    def is_zero(self) -> bool:
        return len(self.ids) == 0

    def support_size(self) -> int:
        return len(self.ids)

    def coefficient_list(self) -> list[int]:
        if isinstance(self.coeffs, np.ndarray):
            return [int(c) for c in self.coeffs]
        return list(self.coeffs)

    def coefficient(self, element: WeylElement) -> int:
        wid = self.engine.id_of(element)
        if wid is None:
            return 0
        pos = int(np.searchsorted(self.ids, wid))
        if pos < len(self.ids) and int(self.ids[pos]) == wid:
            return int(self.coeffs[pos])
        return 0

    def items(self) -> list[tuple[WeylElement, int]]:
        """(element, coefficient) pairs in the fixed element order."""
        order = self.engine.canonical_order(self.ids)
        coeffs = self.coefficient_list()
        return [
            (self.engine.element(int(self.ids[pos])), coeffs[pos]) for pos in order
        ]

    def as_dict(self) -> dict[WeylElement, int]:
        return dict(self.items())

    def word_terms(self) -> list[tuple[int, str]]:
        """(coefficient, reduced word) pairs in the fixed element order."""
        return [
            (coeff, weyl.word_to_string(weyl.reduced_word(element)))
            for element, coeff in self.items()
        ]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, ChowVector):
            return NotImplemented
        if self.is_zero and other.is_zero:
            return True
        return (
            self.grade == other.grade
            and len(self.ids) == len(other.ids)
            and bool(np.array_equal(self.ids, other.ids))
            and self.coefficient_list() == other.coefficient_list()
        )

    def __repr__(self) -> str:
        return f"ChowVector(grade={self.grade}, terms={len(self.ids)})"


class ChowEngine:
    """Interned-element engine for divisor multiplication over one root system."""

    def __init__(
        self,
        rs: RootSystem,
        coefficient_backend: str = "arbitrary-precision",
        cover_capacity: int = DEFAULT_COVER_CAPACITY,
    ):
        if coefficient_backend not in _BACKENDS:
            raise UsageError(f"unknown coefficient backend: {coefficient_backend!r}")
        self.rs = rs
        self.backend = coefficient_backend
        self.cover_capacity = max(int(cover_capacity), 1)

        r = rs.rank
        p = rs.dim_flag
        self._R = np.array([root.coords for root in rs.positive_roots], dtype=np.int64)
        self._RT = np.ascontiguousarray(self._R.T)
        self._K = np.array(rs.coroot_table, dtype=np.int64)
        self._Kcols = [np.ascontiguousarray(self._K[:, i]) for i in range(r)]
        self._kmax = int(self._K.max())

        # Reflection matrix per positive root: S = I - alpha (k^T C).
        c = np.array(rs.datum.matrix, dtype=np.int64)
        pairings = self._K @ c  # row alpha: <alpha_j, alpha^vee> over j
        eye = np.eye(r, dtype=np.int64)
        self._SA = eye[None, :, :] - self._R[:, :, None] * pairings[:, None, :]

        if int(np.abs(self._R).max()) > 127:
            raise UsageError("root coordinates exceed the int8 matrix store")

        # Any single merged coefficient is a sum of at most dim_flag products
        # c * k, so staying under this bound keeps int64 arithmetic exact.
        self._int64_safe = _INT64_MAX // (self._kmax * p * 2)

        self._lock = threading.Lock()
        self._index: dict[bytes, int] = {}
        cap = 1024
        self._mats = np.zeros((cap, r, r), dtype=np.int8)
        self._lens = np.zeros(cap, dtype=np.int32)
        self._cov_start = np.full(cap, -1, dtype=np.int64)
        self._cov_cnt = np.zeros(cap, dtype=np.int32)
        self._n_elements = 0
        self._cov_succ = np.zeros(4096, dtype=np.int64)
        self._cov_root = np.zeros(4096, dtype=np.int32)
        self._cov_used = 0
        self._covers_capped = False
        self._w0_id: int | None = None

        ident = np.eye(r, dtype=np.int8)
        self._intern(ident, 0)

    # -- interning ---------------------------------------------------------

    def _grow_elements(self, need: int) -> None:
        cap = len(self._lens)
        if need <= cap:
            return
        new_cap = max(need, cap * 2)
        r = self.rs.rank
        mats = np.zeros((new_cap, r, r), dtype=np.int8)
        mats[:cap] = self._mats
        lens = np.zeros(new_cap, dtype=np.int32)
        lens[:cap] = self._lens
        start = np.full(new_cap, -1, dtype=np.int64)
        start[:cap] = self._cov_start
        cnt = np.zeros(new_cap, dtype=np.int32)
        cnt[:cap] = self._cov_cnt
        self._mats, self._lens, self._cov_start, self._cov_cnt = mats, lens, start, cnt

    def _intern(self, mat_int8: np.ndarray, length: int) -> int:
        """Register a matrix (lock must be held by the caller after init)."""
        key = mat_int8.tobytes()
        wid = self._index.get(key)
        if wid is not None:
            return wid
        wid = self._n_elements
        self._grow_elements(wid + 1)
        self._mats[wid] = mat_int8
        self._lens[wid] = length
        self._index[key] = wid
        self._n_elements = wid + 1
        return wid

    def id_of(self, element: WeylElement) -> int | None:
        mat = np.array(element.mat, dtype=np.int8)
        return self._index.get(mat.tobytes())

    def intern_element(self, element: WeylElement) -> int:
        mat = np.array(element.mat, dtype=np.int8)
        key = mat.tobytes()
        wid = self._index.get(key)
        if wid is not None:
            return wid
        with self._lock:
            return self._intern(mat, weyl.length(element))

    def element(self, wid: int) -> WeylElement:
        mat = tuple(tuple(int(x) for x in row) for row in self._mats[wid])
        element = WeylElement(self.rs, mat)
        element._length = int(self._lens[wid])
        return element

    def element_length(self, wid: int) -> int:
        return int(self._lens[wid])

    def canonical_order(self, ids) -> list[int]:
        """Positions of ``ids`` sorted by the fixed element order.

        The order is lexicographic on the signed matrix entries; flipping the
        sign bit makes unsigned byte comparison agree with it.
        """
        mats = self._mats[np.asarray(ids, dtype=np.int64)]
        shifted = mats.astype(np.uint8) ^ 0x80
        keys = [m.tobytes() for m in shifted]
        return sorted(range(len(keys)), key=keys.__getitem__)

    def w0_id(self) -> int:
        if self._w0_id is None:
            self._w0_id = self.intern_element(weyl.longest_element(self.rs))
        return self._w0_id

    @property
    def element_count(self) -> int:
        return self._n_elements

    # -- covers ------------------------------------------------------------

    def _grow_cover_store(self, need: int) -> None:
        cap = len(self._cov_succ)
        if need <= cap:
            return
        new_cap = max(need, cap * 2)
        succ = np.zeros(new_cap, dtype=np.int64)
        succ[: self._cov_used] = self._cov_succ[: self._cov_used]
        root = np.zeros(new_cap, dtype=np.int32)
        root[: self._cov_used] = self._cov_root[: self._cov_used]
        self._cov_succ, self._cov_root = succ, root

    def _compute_covers_batch(self, ids: list[int]):
        """Covers for a batch of interned ids: lists of (successor ids, root indices).

        Successor lengths come out of the same pass, so new elements are
        interned with their lengths for free.
        """
        mats = self._mats[ids].astype(np.int64)  # (B, r, r)
        images = np.einsum("bij,pjk->bpik", mats, self._SA)  # w * s_alpha, all alpha
        # entries of Weyl matrices are coordinates of roots, so int8 always fits
        assert int(np.abs(images).max(initial=0)) <= 127
        col_heights = images.sum(axis=2)  # (B, P, r)
        root_heights = col_heights @ self._RT  # (B, P, P)
        lengths = (root_heights < 0).sum(axis=2)  # (B, P)
        targets = self._lens[ids].astype(np.int64) + 1
        out = []
        for b, wid in enumerate(ids):
            hits = np.flatnonzero(lengths[b] == targets[b])
            mats8 = images[b, hits].astype(np.int8)
            succ = [self._intern(mats8[n], int(targets[b])) for n in range(len(hits))]
            out.append((np.array(succ, dtype=np.int64), hits.astype(np.int32)))
        return out

    def _ensure_covers(self, ids: np.ndarray) -> bool:
        """Cache covers for every id; returns False when past capacity."""
        missing = ids[self._cov_start[ids] < 0]
        if missing.size == 0:
            return True
        with self._lock:
            todo = [int(w) for w in missing if self._cov_start[w] < 0]
            if self._covers_capped or self._n_elements > self.cover_capacity:
                self._covers_capped = True
                return False
            for chunk_start in range(0, len(todo), 128):
                chunk = todo[chunk_start : chunk_start + 128]
                for wid, (succ, roots) in zip(chunk, self._compute_covers_batch(chunk)):
                    need = self._cov_used + len(succ)
                    self._grow_cover_store(need)
                    self._cov_succ[self._cov_used : need] = succ
                    self._cov_root[self._cov_used : need] = roots
                    self._cov_cnt[wid] = len(succ)
                    self._cov_start[wid] = self._cov_used
                    self._cov_used = need
        return True

    def covers_of(self, wid: int) -> tuple[np.ndarray, np.ndarray]:
        """(successor ids, root indices) for one element, root order."""
        arr = np.array([wid], dtype=np.int64)
        if self._ensure_covers(arr):
            start = int(self._cov_start[wid])
            cnt = int(self._cov_cnt[wid])
            return (
                self._cov_succ[start : start + cnt].copy(),
                self._cov_root[start : start + cnt].copy(),
            )
        with self._lock:
            succ, roots = self._compute_covers_batch([wid])[0]
        return succ, roots

    def _gather_covers(self, ids: np.ndarray):
        """Flattened (source positions, successor ids, root indices) for a support."""
        if self._ensure_covers(ids):
            starts = self._cov_start[ids]
            cnts = self._cov_cnt[ids].astype(np.int64)
            total = int(cnts.sum())
            if total == 0:
                return None
            cum = np.cumsum(cnts)
            offsets = np.repeat(starts - (cum - cnts), cnts)
            pos = offsets + np.arange(total, dtype=np.int64)
            src = np.repeat(np.arange(len(ids), dtype=np.int64), cnts)
            return src, self._cov_succ[pos], self._cov_root[pos]
        # Past the cover-store capacity: cached entries are reused, the rest
        # are recomputed for this call only.
        src_parts, succ_parts, root_parts = [], [], []
        uncached: list[tuple[int, int]] = []
        for n, wid in enumerate(int(w) for w in ids):
            start = int(self._cov_start[wid])
            if start >= 0:
                cnt = int(self._cov_cnt[wid])
                src_parts.append(np.full(cnt, n, dtype=np.int64))
                succ_parts.append(self._cov_succ[start : start + cnt])
                root_parts.append(self._cov_root[start : start + cnt])
            else:
                uncached.append((n, wid))
        if uncached:
            with self._lock:
                computed = self._compute_covers_batch([wid for _, wid in uncached])
            for (n, _), (succ, roots) in zip(uncached, computed):
                src_parts.append(np.full(len(succ), n, dtype=np.int64))
                succ_parts.append(succ)
                root_parts.append(roots)
        if not src_parts:
            return None
        src = np.concatenate(src_parts)
        succ = np.concatenate(succ_parts)
        roots = np.concatenate(root_parts)
        if src.size == 0:
            return None
        return src, succ, roots

    # -- vectors -----------------------------------------------------------

    def zero(self, grade: int) -> ChowVector:
        return ChowVector(
            self, grade, np.zeros(0, dtype=np.int64), np.zeros(0, dtype=np.int64)
        )

    def unit(self) -> ChowVector:
        return ChowVector(
            self, 0, np.zeros(1, dtype=np.int64), np.ones(1, dtype=np.int64)
        )

    def vector_from_items(self, items) -> ChowVector:
        """Build a vector from (element, coefficient) pairs; test/service helper."""
        pairs = [(self.intern_element(el), int(c)) for el, c in items if int(c) != 0]
        if not pairs:
            return self.zero(0)
        grades = {self.element_length(wid) for wid, _ in pairs}
        if len(grades) != 1:
            raise WrongGrade("support elements have mixed lengths")
        if any(c < 0 for _, c in pairs):
            raise UsageError("coefficients must be positive")
        pairs.sort()
        ids = np.array([wid for wid, _ in pairs], dtype=np.int64)
        coeffs = [c for _, c in pairs]
        if max(coeffs) <= _INT64_MAX:
            return ChowVector(self, grades.pop(), ids, np.array(coeffs, dtype=np.int64))
        return ChowVector(self, grades.pop(), ids, coeffs)

    def multiply_by_divisor(self, v: ChowVector, i: int) -> ChowVector:
        """One Chevalley step; exact for arbitrarily large coefficients."""
        if not 0 <= i < self.rs.rank:
            raise UsageError(f"divisor index {i} out of range")
        grade = v.grade + 1
        if v.is_zero:
            return self.zero(grade)
        gathered = self._gather_covers(v.ids)
        if gathered is None:
            return self.zero(grade)
        src, succ, roots = gathered
        k = self._Kcols[i][roots]
        mask = k > 0
        if not mask.any():
            return self.zero(grade)
        src = src[mask]
        succ = succ[mask]
        k = k[mask]

        use_fast = isinstance(v.coeffs, np.ndarray) and (
            int(v.coeffs.max()) <= self._int64_safe
        )
        if use_fast:
            contrib = v.coeffs[src] * k
            order = np.argsort(succ, kind="stable")
            s = succ[order]
            c = contrib[order]
            cuts = np.empty(len(s), dtype=bool)
            cuts[0] = True
            np.not_equal(s[1:], s[:-1], out=cuts[1:])
            starts = np.flatnonzero(cuts)
            out_ids = s[starts]
            out_coeffs = np.add.reduceat(c, starts)
            return ChowVector(self, grade, out_ids, out_coeffs)

        # Exact big-integer path.
        coeff_list = v.coefficient_list()
        acc: dict[int, int] = {}
        for sidx, wid, kk in zip(src.tolist(), succ.tolist(), k.tolist()):
            acc[wid] = acc.get(wid, 0) + coeff_list[sidx] * kk
        out_pairs = sorted(acc.items())
        out_ids = np.array([wid for wid, _ in out_pairs], dtype=np.int64)
        out_list = [c for _, c in out_pairs]
        if max(out_list) <= _INT64_MAX:
            return ChowVector(self, grade, out_ids, np.array(out_list, dtype=np.int64))
        if self.backend == "checked-fixed":
            raise CoefficientOverflow(
                "coefficient exceeds the checked fixed-width range; "
                "use the arbitrary-precision backend"
            )
        return ChowVector(self, grade, out_ids, out_list)

    def product_of_divisors(self, degrees) -> ChowVector:
        """Expansion of prod_i [D_i]^{n_i}, multiplied in ascending index order."""
        degrees = tuple(int(n) for n in degrees)
        if len(degrees) != self.rs.rank:
            raise UsageError(f"expected {self.rs.rank} exponents, got {len(degrees)}")
        if any(n < 0 for n in degrees):
            raise UsageError("exponents must be nonnegative")
        v = self.unit()
        for i, n in enumerate(degrees):
            for _ in range(n):
                v = self.multiply_by_divisor(v, i)
                if v.is_zero:
                    return self.zero(sum(degrees))
        return v

    def min_coefficient(self, v: ChowVector) -> int | None:
        if v.is_zero:
            return None
        if isinstance(v.coeffs, np.ndarray):
            return int(v.coeffs.min())
        return min(v.coeffs)

    def multiplicity_free_witness(self, v: ChowVector) -> int | None:
        """Intern id of the smallest coefficient-1 element, None if there is none."""
        if v.is_zero:
            return None
        if isinstance(v.coeffs, np.ndarray):
            hits = v.ids[v.coeffs == 1]
        else:
            hits = np.array(
                [int(wid) for wid, c in zip(v.ids, v.coeffs) if c == 1], dtype=np.int64
            )
        if len(hits) == 0:
            return None
        order = self.canonical_order(hits)
        return int(hits[order[0]])

    def point_degree(self, v: ChowVector) -> int:
        if v.is_zero:
            return 0
        if v.grade != self.rs.dim_flag:
            raise WrongGrade(
                f"point degree needs grade {self.rs.dim_flag}, vector has grade {v.grade}"
            )
        w0 = self.w0_id()
        pos = int(np.searchsorted(v.ids, w0))
        if pos < len(v.ids) and int(v.ids[pos]) == w0:
            return int(v.coeffs[pos])
        return 0


@lru_cache(maxsize=8)
def _default_engine(rs: RootSystem) -> ChowEngine:
    return ChowEngine(rs)


def unit(rs: RootSystem) -> ChowVector:
    """The class of Z_e = [G/B]."""
    return _default_engine(rs).unit()


def multiply_by_divisor(v: ChowVector, i: int) -> ChowVector:
    """[D_i] * v for the 0-based simple index i."""
    return v.engine.multiply_by_divisor(v, i)


def product_of_divisors(rs: RootSystem, degrees) -> ChowVector:
    return _default_engine(rs).product_of_divisors(degrees)


def is_multiplicity_free(v: ChowVector) -> tuple[bool, WeylElement | None]:
    """Whether some coefficient equals 1, with the smallest witnessing element."""
    wid = v.engine.multiplicity_free_witness(v)
    if wid is None:
        return False, None
    return True, v.engine.element(wid)


def min_nonzero_coefficient(v: ChowVector) -> int | None:
    return v.engine.min_coefficient(v)


def point_degree(v: ChowVector) -> int:
    """Coefficient of the point class [Z_{w0}] in a top-grade vector."""
    return v.engine.point_degree(v)
