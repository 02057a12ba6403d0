"""Cartan data for finite-type root systems.

Convention, fixed once for the whole package: the Cartan matrix is stored as

    C[i][j] = <alpha_j, alpha_i^vee> = 2 (alpha_i, alpha_j) / (alpha_i, alpha_i),

so row ``i`` lists the pairings of every simple root against the ``i``-th
simple coroot, and the simple reflection acts on simple roots by

    s_i(alpha_j) = alpha_j - C[i][j] * alpha_i.

The symmetrizer ``d`` consists of the minimal positive integers with
``d[i] * C[i][j] == d[j] * C[j][i]``; then ``(alpha_i, alpha_j) = d[i] * C[i][j]``
and ``(alpha_i, alpha_i) = 2 * d[i]``.

Built-in labels ship with the Bourbaki numbering of simple roots:

    A_r   1 - 2 - ... - r
    B_r   1 - 2 - ... - (r-1) => r        (r short)
    C_r   1 - 2 - ... - (r-1) <= r        (r long)
    D_r   1 - ... - (r-2) < (r-1), r      (fork at r-2)
    E_r   1 - 3 - 4 - 5 - ... - r,  2 attached to 4
    F_4   1 - 2 => 3 - 4                  (3, 4 short)
    G_2   1 <= 2                          (1 short)
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd, lcm

from .errors import NotFiniteType, UsageError

Matrix = tuple[tuple[int, ...], ...]

_LABEL_RE = re.compile(r"^([A-Ga-g])[_ ]?(\d+)$")

# Minimal ranks for which each family is defined here.
_MIN_RANK = {"A": 1, "B": 2, "C": 2, "D": 3, "E": 6, "F": 4, "G": 2}
_MAX_RANK = {"E": 8, "F": 4, "G": 2}


def parse_label(label: str) -> tuple[str, int]:
    """Split a type label such as ``"E6"`` or ``"A12"`` into family and rank."""
    m = _LABEL_RE.match(label.strip())
    if not m:
        raise UsageError(f"unrecognized type label: {label!r}")
    family, rank = m.group(1).upper(), int(m.group(2))
    if rank < _MIN_RANK[family] or rank > _MAX_RANK.get(family, 10**9):
        raise UsageError(f"no finite type {family}{rank}")
    return family, rank


def standard_cartan_matrix(label: str) -> Matrix:
    """Cartan matrix of a labeled finite type, Bourbaki numbering, row convention above."""
    family, r = parse_label(label)
    c = [[2 if i == j else 0 for j in range(r)] for i in range(r)]

    def bond(i: int, j: int, cij: int = -1, cji: int = -1) -> None:
        c[i][j] = cij
        c[j][i] = cji

    if family in "ABC":
        for i in range(r - 1):
            bond(i, i + 1)
        if family == "B" and r >= 2:
            # alpha_r short: its row carries the -2 toward the long neighbour.
            bond(r - 2, r - 1, -1, -2)
        if family == "C" and r >= 2:
            bond(r - 2, r - 1, -2, -1)
    elif family == "D":
        for i in range(r - 2):
            bond(i, i + 1)
        bond(r - 3, r - 1)
    elif family == "E":
        chain = [0] + list(range(2, r))
        for a, b in zip(chain, chain[1:]):
            bond(a, b)
        bond(1, 3)
    elif family == "F":
        bond(0, 1)
        bond(1, 2, -1, -2)
        bond(2, 3)
    elif family == "G":
        bond(0, 1, -3, -1)
    return tuple(tuple(row) for row in c)


def _bareiss_det(rows: list[list[int]]) -> int:
    """Exact integer determinant (fraction-free Gaussian elimination)."""
    a = [row[:] for row in rows]
    n = len(a)
    if n == 0:
        return 1
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for i in range(k + 1, n):
                if a[i][k] != 0:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[-1][-1]


def _minimal_symmetrizer(matrix: Matrix) -> tuple[int, ...]:
    """Minimal positive integers d with d[i]*C[i][j] == d[j]*C[j][i].

    Ratios propagate along edges of the diagram; each connected component is
    scaled independently to the least common integer form.
    """
    r = len(matrix)
    ratio: list[Fraction | None] = [None] * r
    for start in range(r):
        if ratio[start] is not None:
            continue
        component = [start]
        ratio[start] = Fraction(1)
        stack = [start]
        while stack:
            i = stack.pop()
            for j in range(r):
                if i == j or matrix[i][j] == 0:
                    continue
                # d_j / d_i = C[i][j] / C[j][i]
                rel = ratio[i] * Fraction(matrix[i][j], matrix[j][i])
                if ratio[j] is None:
                    ratio[j] = rel
                    component.append(j)
                    stack.append(j)
                elif ratio[j] != rel:
                    raise NotFiniteType("inconsistent symmetrizer ratios")
        denom = lcm(*(ratio[i].denominator for i in component))
        nums = [ratio[i].numerator * denom // ratio[i].denominator for i in component]
        g = gcd(*nums)
        for i, value in zip(component, nums):
            ratio[i] = Fraction(value // g)
    return tuple(int(x) for x in ratio)


@dataclass(frozen=True)
class CartanDatum:
    """A validated finite-type Cartan matrix with its minimal symmetrizer."""

    rank: int
    matrix: Matrix
    symmetrizer: tuple[int, ...]
    label: str | None = None

    @staticmethod
    def from_label(label: str) -> "CartanDatum":
        family, rank = parse_label(label)
        normalized = f"{family}{rank}"
        return CartanDatum.make(standard_cartan_matrix(normalized), label=normalized)

    @staticmethod
    def make(
        matrix,
        symmetrizer=None,
        label: str | None = None,
    ) -> "CartanDatum":
        """Validate a Cartan matrix and build the datum.

        Raises NotFiniteType when the symmetrized matrix is not positive
        definite, and UsageError for structurally malformed input.
        """
        rows = tuple(tuple(int(x) for x in row) for row in matrix)
        r = len(rows)
        if r == 0 or any(len(row) != r for row in rows):
            raise UsageError("Cartan matrix must be square and nonempty")
        for i in range(r):
            if rows[i][i] != 2:
                raise UsageError(f"C[{i}][{i}] must be 2")
            for j in range(r):
                if i != j and rows[i][j] > 0:
                    raise UsageError(f"C[{i}][{j}] must be <= 0 off the diagonal")
                if (rows[i][j] == 0) != (rows[j][i] == 0):
                    raise UsageError(f"C[{i}][{j}] and C[{j}][{i}] must vanish together")

        if symmetrizer is None:
            d = _minimal_symmetrizer(rows)
        else:
            d = tuple(int(x) for x in symmetrizer)
            if len(d) != r or any(x <= 0 for x in d):
                raise UsageError("symmetrizer must consist of r positive integers")
            for i in range(r):
                for j in range(r):
                    if d[i] * rows[i][j] != d[j] * rows[j][i]:
                        raise UsageError("symmetrizer does not symmetrize the matrix")
            minimal = _minimal_symmetrizer(rows)
            if d != minimal:
                d = minimal

        sym = [[d[i] * rows[i][j] for j in range(r)] for i in range(r)]
        for k in range(1, r + 1):
            minor = [row[:k] for row in sym[:k]]
            if _bareiss_det(minor) <= 0:
                raise NotFiniteType("symmetrized Cartan matrix is not positive definite")

        if label is not None:
            family, rank = parse_label(label)
            label = f"{family}{rank}"
            if rank != r:
                raise UsageError(f"label {label} has rank {rank}, matrix has rank {r}")
            if rows != standard_cartan_matrix(label):
                raise UsageError(f"matrix does not match the standard {label} Cartan matrix")

        return CartanDatum(rank=r, matrix=rows, symmetrizer=d, label=label)

    def bilinear_form(self) -> Matrix:
        """The symmetrized matrix B[i][j] = (alpha_i, alpha_j) = d[i] * C[i][j]."""
        return tuple(
            tuple(self.symmetrizer[i] * self.matrix[i][j] for j in range(self.rank))
            for i in range(self.rank)
        )

    def diagram_automorphisms(self) -> tuple[tuple[int, ...], ...]:
        """All permutations p of the node indices with C[p(i)][p(j)] == C[i][j].

        Returned as tuples mapping old index -> new index, identity included.
        """
        return _diagram_automorphisms(self.matrix)


@lru_cache(maxsize=None)
def _diagram_automorphisms(matrix: Matrix) -> tuple[tuple[int, ...], ...]:
    r = len(matrix)
    # Candidate images must preserve the multiset of row and column entries.
    signature = [
        (tuple(sorted(matrix[i])), tuple(sorted(row[i] for row in matrix)))
        for i in range(r)
    ]
    candidates = [
        [j for j in range(r) if signature[j] == signature[i]] for i in range(r)
    ]
    found: list[tuple[int, ...]] = []

    def extend(image: list[int], used: set[int]) -> None:
        i = len(image)
        if i == r:
            found.append(tuple(image))
            return
        for j in candidates[i]:
            if j in used:
                continue
            if any(
                matrix[k][i] != matrix[image[k]][j] or matrix[i][k] != matrix[j][image[k]]
                for k in range(i)
            ):
                continue
            image.append(j)
            used.add(j)
            extend(image, used)
            image.pop()
            used.remove(j)

    extend([], set())
    return tuple(sorted(found))


def parse_cartan_file(text: str, label: str | None = None) -> CartanDatum:
    """Parse the plain-text matrix format.

    First line: the rank ``r``. Then ``r`` lines of ``r`` integers. An optional
    final line ``d: d1 ... dr`` supplies the symmetrizer (computed minimally
    when absent).
    """
    lines = [line.strip() for line in text.splitlines() if line.strip()]
    if not lines:
        raise UsageError("empty Cartan matrix file")
    try:
        r = int(lines[0])
    except ValueError as exc:
        raise UsageError(f"first line must be the rank, got {lines[0]!r}") from exc
    if r <= 0 or len(lines) < 1 + r:
        raise UsageError(f"expected {r} matrix rows")
    rows = []
    for line in lines[1 : 1 + r]:
        entries = line.split()
        if len(entries) != r:
            raise UsageError(f"matrix row {line!r} does not have {r} entries")
        rows.append([int(x) for x in entries])
    symmetrizer = None
    rest = lines[1 + r :]
    if rest:
        if len(rest) > 1 or not rest[0].startswith("d:"):
            raise UsageError("unexpected trailing content in Cartan matrix file")
        symmetrizer = [int(x) for x in rest[0][2:].split()]
    return CartanDatum.make(rows, symmetrizer=symmetrizer, label=label)


def load_cartan_file(path: str) -> CartanDatum:
    with open(path, "r", encoding="utf-8") as handle:
        return parse_cartan_file(handle.read())
