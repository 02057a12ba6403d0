"""Positive roots, coroots, and reflection data in exact integer arithmetic.

Roots live in simple-root coordinates: ``alpha = sum(m[j] * alpha_j)`` with
integer ``m``. The positive roots are generated by closing the simple roots
under all simple reflections and keeping the positive images; for a finite
type this terminates with the full set.

For a positive root ``alpha`` with coordinates ``m`` the squared length is
``(alpha, alpha) = sum_{i,j} m[i] m[j] d[i] C[i][j]`` and the coroot expands as

    alpha^vee = sum_j k[j] * alpha_j^vee,   k[j] = 2 * m[j] * d[j] / (alpha, alpha),

with every division exact. The Chevalley structure constant of the divisor
indexed by ``i`` against ``alpha`` is ``<omega_i, alpha^vee> = k[i]``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .cartan import CartanDatum
from .errors import NonIntegralCoroot, NotFiniteType, UnknownRoot

# Positive-root counts for each labeled family, used as validation data.
POSITIVE_ROOT_COUNTS = {
    "A": lambda r: r * (r + 1) // 2,
    "B": lambda r: r * r,
    "C": lambda r: r * r,
    "D": lambda r: r * (r - 1),
    "E": lambda r: {6: 36, 7: 63, 8: 120}[r],
    "F": lambda r: 24,
    "G": lambda r: 6,
}


@dataclass(frozen=True)
class Root:
    """A root in simple-root coordinates."""

    coords: tuple[int, ...]

    @property
    def height(self) -> int:
        return sum(self.coords)

    @property
    def is_positive(self) -> bool:
        return all(c >= 0 for c in self.coords) and any(c > 0 for c in self.coords)

    def __neg__(self) -> "Root":
        return Root(tuple(-c for c in self.coords))


class RootSystem:
    """Immutable container for the positive roots and derived pairing data."""

    def __init__(
        self,
        datum: CartanDatum,
        positive_roots: tuple[Root, ...],
        coroot_table: tuple[tuple[int, ...], ...],
    ):
        self.datum = datum
        self.positive_roots = positive_roots
        self.coroot_table = coroot_table
        self._index = {root.coords: i for i, root in enumerate(positive_roots)}
        self.simple_reflections = tuple(
            _simple_reflection_matrix(datum, i) for i in range(datum.rank)
        )

    @property
    def rank(self) -> int:
        return self.datum.rank

    @property
    def dim_flag(self) -> int:
        """dim(G/B): the number of positive roots."""
        return len(self.positive_roots)

    @property
    def label(self) -> str | None:
        return self.datum.label

    def root_index(self, root: Root) -> int:
        try:
            return self._index[root.coords]
        except KeyError:
            raise UnknownRoot(f"not a positive root: {root.coords}") from None

    def is_positive_root(self, root: Root) -> bool:
        return root.coords in self._index

    def simple_root(self, i: int) -> Root:
        coords = [0] * self.rank
        coords[i] = 1
        return Root(tuple(coords))

    def pairing_with_simple_coroot(self, root: Root, i: int) -> int:
        """<root, alpha_i^vee> = sum_j C[i][j] * m[j]."""
        row = self.datum.matrix[i]
        return sum(row[j] * root.coords[j] for j in range(self.rank))

    def squared_length(self, root: Root) -> int:
        b = self.datum.bilinear_form()
        m = root.coords
        return sum(m[i] * m[j] * b[i][j] for i in range(self.rank) for j in range(self.rank))

    def __eq__(self, other: object) -> bool:
        return isinstance(other, RootSystem) and self.datum == other.datum

    def __hash__(self) -> int:
        return hash(self.datum)

    def __repr__(self) -> str:
        name = self.label or f"custom rank {self.rank}"
        return f"RootSystem({name}, {self.dim_flag} positive roots)"


def _simple_reflection_matrix(datum: CartanDatum, i: int) -> tuple[tuple[int, ...], ...]:
    """Matrix of s_i on root coordinates; column j is the image of alpha_j."""
    r = datum.rank
    rows = [[1 if a == b else 0 for b in range(r)] for a in range(r)]
    for j in range(r):
        rows[i][j] -= datum.matrix[i][j]
    return tuple(tuple(row) for row in rows)


def _reflect_coords(datum: CartanDatum, i: int, coords: tuple[int, ...]) -> tuple[int, ...]:
    pairing = sum(datum.matrix[i][j] * coords[j] for j in range(datum.rank))
    out = list(coords)
    out[i] -= pairing
    return tuple(out)


@lru_cache(maxsize=None)
def build_root_system(datum: CartanDatum) -> RootSystem:
    """Close the simple roots under simple reflections and derive coroot data."""
    r = datum.rank
    # Any finite type of rank k has at most k*k + 56 positive roots (the +56
    # absorbs the exceptional types), so a decomposable rank-r system stays
    # under r*r + 56*r; exceeding this means the closure is not finite.
    ceiling = r * r + 56 * r

    seen: set[tuple[int, ...]] = set()
    frontier: list[tuple[int, ...]] = []
    for i in range(r):
        coords = tuple(1 if j == i else 0 for j in range(r))
        seen.add(coords)
        frontier.append(coords)
    while frontier:
        new = []
        for coords in frontier:
            for i in range(r):
                image = _reflect_coords(datum, i, coords)
                if all(c >= 0 for c in image) and image not in seen:
                    seen.add(image)
                    new.append(image)
        if len(seen) > ceiling:
            raise NotFiniteType("positive-root closure exceeded the finite-type ceiling")
        frontier = new

    ordered = sorted(seen, key=lambda c: (sum(c), c))
    roots = tuple(Root(c) for c in ordered)

    b = datum.bilinear_form()
    coroot_rows = []
    for root in roots:
        m = root.coords
        norm = sum(m[i] * m[j] * b[i][j] for i in range(r) for j in range(r))
        if norm <= 0:
            raise NotFiniteType(f"root {m} has nonpositive squared length")
        k = []
        for j in range(r):
            num = 2 * m[j] * datum.symmetrizer[j]
            if num % norm != 0:
                raise NonIntegralCoroot(
                    f"coroot coefficient {num}/{norm} for root {m} is not integral"
                )
            k.append(num // norm)
        coroot_rows.append(tuple(k))

    rs = RootSystem(datum, roots, tuple(coroot_rows))

    if datum.label is not None:
        family = datum.label[0]
        expected = POSITIVE_ROOT_COUNTS[family](datum.rank)
        if rs.dim_flag != expected:
            raise NotFiniteType(
                f"{datum.label}: found {rs.dim_flag} positive roots, expected {expected}"
            )
    for root, k in zip(rs.positive_roots, rs.coroot_table):
        pair = sum(
            k[j] * rs.pairing_with_simple_coroot(root, j) for j in range(r)
        )
        if pair != 2:
            raise NonIntegralCoroot(f"<alpha, alpha^vee> = {pair} != 2 for root {root.coords}")
    return rs


def root_system_from_label(label: str) -> RootSystem:
    return build_root_system(CartanDatum.from_label(label))


def coroot_expansion(rs: RootSystem, root: Root) -> tuple[int, ...]:
    """Coefficients k with alpha^vee = sum_j k[j] * alpha_j^vee."""
    return rs.coroot_table[rs.root_index(root)]


def chevalley_coefficient(rs: RootSystem, i: int, root: Root) -> int:
    """<omega_i, alpha^vee>: the coefficient of alpha_i^vee in alpha^vee."""
    return rs.coroot_table[rs.root_index(root)][i]


def highest_short_root(rs: RootSystem) -> Root:
    """The short root of maximal height; its coroot dominates all coroots."""
    min_norm = min(rs.squared_length(root) for root in rs.positive_roots)
    shorts = [root for root in rs.positive_roots if rs.squared_length(root) == min_norm]
    return max(shorts, key=lambda root: (root.height, root.coords))
