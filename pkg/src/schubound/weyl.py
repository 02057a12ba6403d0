"""Weyl group elements as exact integer matrices acting on root coordinates.

An element ``w`` is stored as the r x r matrix whose column ``j`` holds the
coordinates of ``w(alpha_j)``. The matrix is a canonical key: two elements are
equal iff their matrices agree entrywise. Lengths are inversion counts,

    l(w) = #{ alpha > 0 : w(alpha) < 0 },

and reduced words are recovered on demand by greedy descent. Everything here
is pure and immutable; the fast interned representation used for Chow-ring
arithmetic lives in :mod:`schubound.chow`.
"""

from __future__ import annotations

from .rootsys import Root, RootSystem

Mat = tuple[tuple[int, ...], ...]


class WeylElement:
    """An element of the Weyl group of a fixed root system."""

    __slots__ = ("rs", "mat", "_length")

    def __init__(self, rs: RootSystem, mat: Mat):
        self.rs = rs
        self.mat = mat
        self._length: int | None = None

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, WeylElement)
            and self.mat == other.mat
            and self.rs.datum == other.rs.datum
        )

    def __hash__(self) -> int:
        return hash(self.mat)

    def __repr__(self) -> str:
        word = word_to_string(reduced_word(self))
        return f"WeylElement({word or 'e'})"

    @property
    def length(self) -> int:
        return length(self)

    def sort_key(self) -> tuple:
        """Fixed element order: by length, then matrix entries."""
        return (length(self), self.mat)


def identity(rs: RootSystem) -> WeylElement:
    r = rs.rank
    return WeylElement(rs, tuple(tuple(1 if i == j else 0 for j in range(r)) for i in range(r)))


def simple_reflection(rs: RootSystem, i: int) -> WeylElement:
    """The generator s_i (0-based index)."""
    return WeylElement(rs, rs.simple_reflections[i])


def _mat_mul(a: Mat, b: Mat) -> Mat:
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n)) for i in range(n)
    )


def compose(u: WeylElement, w: WeylElement) -> WeylElement:
    """u composed after w (apply w first)."""
    if u.rs.datum != w.rs.datum:
        raise ValueError("elements belong to different root systems")
    return WeylElement(u.rs, _mat_mul(u.mat, w.mat))


def apply(w: WeylElement, root: Root) -> Root:
    """The image w(root), possibly a negative root."""
    m = root.coords
    r = len(m)
    return Root(tuple(sum(w.mat[i][j] * m[j] for j in range(r)) for i in range(r)))


def length(w: WeylElement) -> int:
    """Inversion count; cached on the element."""
    if w._length is None:
        count = 0
        for root in w.rs.positive_roots:
            if apply(w, root).height < 0:
                count += 1
        w._length = count
    return w._length


def reflection(rs: RootSystem, root: Root) -> WeylElement:
    """The reflection s_alpha(beta) = beta - <beta, alpha^vee> * alpha."""
    index = rs.root_index(root)
    k = rs.coroot_table[index]
    r = rs.rank
    # <alpha_j, alpha^vee> = sum_i k[i] * C[i][j]
    pairings = [sum(k[i] * rs.datum.matrix[i][j] for i in range(r)) for j in range(r)]
    a = root.coords
    mat = tuple(
        tuple((1 if i == j else 0) - a[i] * pairings[j] for j in range(r)) for i in range(r)
    )
    return WeylElement(rs, mat)


def chevalley_covers(rs: RootSystem, w: WeylElement) -> list[tuple[Root, WeylElement]]:
    """All (alpha, w * s_alpha) with l(w * s_alpha) = l(w) + 1, in root order."""
    base = length(w)
    out = []
    for root in rs.positive_roots:
        if apply(w, root).height < 0:
            continue  # l(w s_alpha) < l(w)
        successor = compose(w, reflection(rs, root))
        if length(successor) == base + 1:
            out.append((root, successor))
    return out


def longest_element(rs: RootSystem) -> WeylElement:
    """Greedy ascent: repeatedly multiply by a generator that raises the length."""
    w = identity(rs)
    while True:
        for i in range(rs.rank):
            if apply(w, rs.simple_root(i)).height > 0:
                w = compose(w, simple_reflection(rs, i))
                break
        else:
            return w


def reduced_word(w: WeylElement) -> tuple[int, ...]:
    """A reduced word for w, 1-based generator indices, greedy smallest descent."""
    rs = w.rs
    letters: list[int] = []
    current = w
    while True:
        for i in range(rs.rank):
            if apply(current, rs.simple_root(i)).height < 0:
                current = compose(current, simple_reflection(rs, i))
                letters.append(i + 1)
                break
        else:
            break
    letters.reverse()
    return tuple(letters)


def from_word(rs: RootSystem, word) -> WeylElement:
    """Product of generators given by 1-based indices."""
    w = identity(rs)
    for letter in word:
        if not 1 <= letter <= rs.rank:
            raise ValueError(f"generator index {letter} out of range")
        w = compose(w, simple_reflection(rs, letter - 1))
    return w


def word_to_string(word) -> str:
    return " ".join(str(letter) for letter in word)


def parse_word(text: str) -> tuple[int, ...]:
    text = text.strip()
    if not text:
        return ()
    return tuple(int(token) for token in text.split())


def poincare_polynomial(rs: RootSystem) -> tuple[int, ...]:
    """Coefficients of sum_w q^{l(w)}.

    The number of positive roots of height k is non-increasing in k, and the
    conjugate of that partition is the exponent sequence of the Weyl group, so
    the polynomial factors as prod_i (1 + q + ... + q^{e_i}).
    """
    heights = [root.height for root in rs.positive_roots]
    max_height = max(heights)
    by_height = [0] * (max_height + 1)
    for h in heights:
        by_height[h] += 1
    counts = by_height[1:]
    assert all(a >= b for a, b in zip(counts, counts[1:])), "height counts not a partition"
    exponents = [sum(1 for c in counts if c >= j) for j in range(1, counts[0] + 1)]

    poly = [1]
    for e in exponents:
        out = [0] * (len(poly) + e)
        for i, coeff in enumerate(poly):
            for j in range(e + 1):
                out[i + j] += coeff
        poly = out
    assert len(poly) - 1 == rs.dim_flag
    return tuple(poly)


def weyl_order(rs: RootSystem) -> int:
    return sum(poincare_polynomial(rs))
