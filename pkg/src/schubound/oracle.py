"""Independent brute-force verification at small rank.

Everything here deliberately avoids the engine's representations: Weyl
elements are stored as signed permutations of the positive-root list instead
of matrices, lengths come from breadth-first search depth in the Cayley graph
instead of inversion counts, and divisor multiplication acts through dense
|W| x |W| matrices instead of sparse cover lists. Only the root-system data is
shared. Agreement between the two implementations on every divisor monomial is
the package's primary correctness evidence.

The dense table also supports degree computations against an arbitrary
Schubert class: the class is expressed as a rational combination of divisor
monomials of the same grade (always possible over Q), and the degree of a
product is then a rational combination of point coefficients of monomials.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

import numpy as np

from .errors import RankTooLarge, UnknownRoot
from .rootsys import Root, RootSystem, root_system_from_label

_MAX_ORACLE_RANK = 4

# |W| for the labeled types the oracle accepts.
_GROUP_ORDERS = {
    "A": lambda r: factorial(r + 1),
    "B": lambda r: 2**r * factorial(r),
    "C": lambda r: 2**r * factorial(r),
    "D": lambda r: 2 ** (r - 1) * factorial(r),
    "F": lambda r: 1152,
    "G": lambda r: 12,
}

SignedPerm = tuple[int, ...]  # entry p holds +-(q+1): w(alpha_p) = +-alpha_q


def _reflection_perm(rs: RootSystem, root_index: int) -> SignedPerm:
    """s_alpha as a signed permutation of the positive roots."""
    alpha = rs.positive_roots[root_index]
    k = rs.coroot_table[root_index]
    r = rs.rank
    image = []
    for beta in rs.positive_roots:
        pairing = sum(
            k[i] * rs.pairing_with_simple_coroot(beta, i) for i in range(r)
        )
        coords = tuple(
            b - pairing * a for b, a in zip(beta.coords, alpha.coords)
        )
        if all(c >= 0 for c in coords):
            image.append(rs.root_index(Root(coords)) + 1)
        else:
            neg = tuple(-c for c in coords)
            image.append(-(rs.root_index(Root(neg)) + 1))
    return tuple(image)


def _compose_perm(u: SignedPerm, w: SignedPerm) -> SignedPerm:
    """u after w on signed root indices."""
    out = []
    for value in w:
        if value > 0:
            out.append(u[value - 1])
        else:
            out.append(-u[-value - 1])
    return tuple(out)


@dataclass
class DenseChowTable:
    """Full Weyl-group enumeration with dense divisor-multiplication matrices."""

    rs: RootSystem
    elements: list[SignedPerm]
    lengths: np.ndarray  # BFS depth from the identity
    mult_matrices: list[np.ndarray]  # per divisor, (|W|, |W|) int64
    w0_index: int
    matrix_key_to_index: dict[bytes, int]

    @property
    def size(self) -> int:
        return len(self.elements)

    def length_counts(self) -> list[int]:
        """Poincare coefficients by brute enumeration."""
        top = int(self.lengths.max())
        counts = [0] * (top + 1)
        for depth in self.lengths:
            counts[int(depth)] += 1
        return counts

    def index_of_matrix_key(self, key: bytes) -> int:
        try:
            return self.matrix_key_to_index[key]
        except KeyError:
            raise UnknownRoot("element does not belong to this table") from None


def build_dense_table(label: str) -> DenseChowTable:
    rs = root_system_from_label(label)
    if rs.rank > _MAX_ORACLE_RANK:
        raise RankTooLarge(f"oracle supports rank <= {_MAX_ORACLE_RANK}, got {rs.rank}")
    r = rs.rank
    p = rs.dim_flag

    simple_indices = [rs.root_index(rs.simple_root(i)) for i in range(r)]
    generators = [_reflection_perm(rs, idx) for idx in simple_indices]

    identity = tuple(range(1, p + 1))
    index: dict[SignedPerm, int] = {identity: 0}
    elements: list[SignedPerm] = [identity]
    depths: list[int] = [0]
    frontier = [identity]
    while frontier:
        next_frontier = []
        for element in frontier:
            base = depths[index[element]]
            for gen in generators:
                product = _compose_perm(element, gen)
                if product not in index:
                    index[product] = len(elements)
                    elements.append(product)
                    depths.append(base + 1)
                    next_frontier.append(product)
        frontier = next_frontier

    expected = _GROUP_ORDERS[label[0].upper()](r)
    if len(elements) != expected:
        raise RuntimeError(
            f"{label}: enumerated {len(elements)} elements, expected {expected}"
        )
    lengths = np.array(depths, dtype=np.int64)
    w0_index = int(np.flatnonzero(lengths == p)[0])

    reflections = [_reflection_perm(rs, idx) for idx in range(p)]
    coroots = rs.coroot_table
    mult = [np.zeros((len(elements), len(elements)), dtype=np.int64) for _ in range(r)]
    for w_idx, element in enumerate(elements):
        for root_idx, refl in enumerate(reflections):
            successor = index[_compose_perm(element, refl)]
            if lengths[successor] == lengths[w_idx] + 1:
                for i in range(r):
                    k = coroots[root_idx][i]
                    if k:
                        mult[i][successor, w_idx] += k

    key_map: dict[bytes, int] = {}
    for w_idx, element in enumerate(elements):
        cols = []
        for i in simple_indices:
            value = element[i]
            root = rs.positive_roots[abs(value) - 1]
            sign = 1 if value > 0 else -1
            cols.append([sign * c for c in root.coords])
        mat = np.array(cols, dtype=np.int8).T  # column j = image of alpha_j
        key_map[mat.tobytes()] = w_idx

    return DenseChowTable(
        rs=rs,
        elements=elements,
        lengths=lengths,
        mult_matrices=mult,
        w0_index=w0_index,
        matrix_key_to_index=key_map,
    )


_INT_GUARD = 2**55


def _apply_divisor(table: DenseChowTable, vec: np.ndarray, i: int) -> np.ndarray:
    if vec.dtype == object or int(vec.max()) > _INT_GUARD:
        return table.mult_matrices[i].astype(object) @ vec.astype(object)
    return table.mult_matrices[i] @ vec


def oracle_product(table: DenseChowTable, degrees) -> np.ndarray:
    """Dense Schubert expansion of the divisor monomial, straight matmuls."""
    degrees = tuple(int(n) for n in degrees)
    if len(degrees) != table.rs.rank:
        raise ValueError(f"expected {table.rs.rank} exponents")
    vec = np.zeros(table.size, dtype=np.int64)
    vec[0] = 1
    for i, n in enumerate(degrees):
        for _ in range(n):
            vec = _apply_divisor(table, vec, i)
    return vec


def oracle_point_degree(table: DenseChowTable, degrees) -> int:
    return int(oracle_product(table, degrees)[table.w0_index])


def multidegrees_of_total(rank: int, total: int):
    """All exponent vectors with the given total, lexicographic order."""
    for combo in combinations_with_replacement(range(rank), total):
        degrees = [0] * rank
        for i in combo:
            degrees[i] += 1
        yield tuple(degrees)


def _solve_rational(rows: list[list[Fraction]], rhs: list[Fraction]):
    """One exact solution of A x = rhs, or None when inconsistent."""
    m = len(rows)
    n = len(rows[0]) if m else 0
    aug = [rows[i][:] + [rhs[i]] for i in range(m)]
    pivots: list[tuple[int, int]] = []
    row = 0
    for col in range(n):
        sel = next((i for i in range(row, m) if aug[i][col] != 0), None)
        if sel is None:
            continue
        aug[row], aug[sel] = aug[sel], aug[row]
        pivot = aug[row][col]
        aug[row] = [x / pivot for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col] != 0:
                factor = aug[i][col]
                aug[i] = [a - factor * b for a, b in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][n] != 0:
            return None
    solution = [Fraction(0)] * n
    for r_idx, col in pivots:
        solution[col] = aug[r_idx][n]
    return solution


def class_as_monomial_combination(table: DenseChowTable, element_index: int):
    """Write [Z_x] as a rational combination of divisor monomials of its grade."""
    grade = int(table.lengths[element_index])
    basis_rows = np.flatnonzero(table.lengths == grade)
    monomials = list(multidegrees_of_total(table.rs.rank, grade))
    columns = [oracle_product(table, m)[basis_rows] for m in monomials]
    rows = [
        [Fraction(int(columns[j][i])) for j in range(len(monomials))]
        for i in range(len(basis_rows))
    ]
    rhs = [
        Fraction(1) if int(basis_rows[i]) == element_index else Fraction(0)
        for i in range(len(basis_rows))
    ]
    solution = _solve_rational(rows, rhs)
    if solution is None:
        raise RuntimeError("Schubert class not in the rational span of divisor monomials")
    return [(m, q) for m, q in zip(monomials, solution) if q != 0]


def oracle_degree_against_class(table: DenseChowTable, degrees, element_index: int) -> int:
    """deg(monomial * [Z_x]) via the rational monomial expression of [Z_x]."""
    degrees = tuple(int(n) for n in degrees)
    combo = class_as_monomial_combination(table, element_index)
    total = Fraction(0)
    for extra, q in combo:
        joint = tuple(a + b for a, b in zip(degrees, extra))
        total += q * oracle_point_degree(table, joint)
    if total.denominator != 1:
        raise RuntimeError(f"degree came out non-integral: {total}")
    return int(total)


@dataclass
class Mismatch:
    degrees: tuple[int, ...]
    detail: str


@dataclass
class ComparisonReport:
    label: str
    monomials_checked: int = 0
    mismatches: list[Mismatch] = field(default_factory=list)
    seconds: float = 0.0

    @property
    def passed(self) -> bool:
        return not self.mismatches


def compare_all(label: str, max_total: int | None = None) -> ComparisonReport:
    """Engine vs oracle on every divisor monomial with total <= dim(G/B).

    Both sides walk the same nondecreasing-index tree so prefixes are shared;
    expansions are compared term by term at every node.
    """
    from .chow import ChowEngine  # local import: engine is the subject under test

    table = build_dense_table(label)
    rs = table.rs
    engine = ChowEngine(rs)
    cap = rs.dim_flag if max_total is None else min(max_total, rs.dim_flag)
    report = ComparisonReport(label=label)
    started = time.time()

    def engine_terms_to_dense(vector) -> np.ndarray:
        dense = np.zeros(table.size, dtype=object)
        for wid, coeff in zip(vector.ids.tolist(), vector.coefficient_list()):
            key = engine._mats[wid].tobytes()
            dense[table.index_of_matrix_key(key)] = coeff
        return dense

    def check(degrees, engine_vec, oracle_vec) -> None:
        report.monomials_checked += 1
        dense = engine_terms_to_dense(engine_vec)
        if not all(int(a) == int(b) for a, b in zip(dense, oracle_vec)):
            bad = [
                (idx, int(oracle_vec[idx]), int(dense[idx]))
                for idx in range(table.size)
                if int(dense[idx]) != int(oracle_vec[idx])
            ][:5]
            report.mismatches.append(
                Mismatch(degrees, f"(index, oracle, engine) samples: {bad}")
            )

    stack = [(engine.unit(), oracle_product(table, (0,) * rs.rank), (0,) * rs.rank, 0)]
    check((0,) * rs.rank, stack[0][0], stack[0][1])
    while stack:
        engine_vec, oracle_vec, degrees, first = stack.pop()
        if sum(degrees) == cap:
            continue
        for i in range(first, rs.rank):
            child = degrees[:i] + (degrees[i] + 1,) + degrees[i + 1 :]
            engine_child = engine.multiply_by_divisor(engine_vec, i)
            oracle_child = _apply_divisor(table, oracle_vec, i)
            check(child, engine_child, oracle_child)
            if engine_child.is_zero and not oracle_child.any():
                continue
            stack.append((engine_child, oracle_child, child, i))
    report.seconds = time.time() - started
    return report
