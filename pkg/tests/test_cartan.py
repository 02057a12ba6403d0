import pytest

from schubound.cartan import (
    CartanDatum,
    parse_cartan_file,
    parse_label,
    standard_cartan_matrix,
)
from schubound.errors import NotFiniteType, UsageError


def test_parse_label_variants():
    assert parse_label("E6") == ("E", 6)
    assert parse_label("a12") == ("A", 12)
    assert parse_label("G_2") == ("G", 2)
    with pytest.raises(UsageError):
        parse_label("H4")
    with pytest.raises(UsageError):
        parse_label("E9")
    with pytest.raises(UsageError):
        parse_label("D2")


def test_g2_convention_short_root_first():
    datum = CartanDatum.from_label("G2")
    assert datum.matrix == ((2, -3), (-1, 2))
    assert datum.symmetrizer == (1, 3)


def test_b_and_c_transposed_tails():
    b3 = CartanDatum.from_label("B3")
    # row of the short root alpha_3 carries the -2
    assert b3.matrix[2][1] == -2 and b3.matrix[1][2] == -1
    assert b3.symmetrizer == (2, 2, 1)
    c3 = CartanDatum.from_label("C3")
    assert c3.matrix[1][2] == -2 and c3.matrix[2][1] == -1
    assert c3.symmetrizer == (1, 1, 2)


def test_f4_matrix():
    f4 = CartanDatum.from_label("F4")
    assert f4.matrix == (
        (2, -1, 0, 0),
        (-1, 2, -1, 0),
        (0, -2, 2, -1),
        (0, 0, -1, 2),
    )
    assert f4.symmetrizer == (2, 2, 1, 1)


def test_e_series_shape():
    for rank in (6, 7, 8):
        datum = CartanDatum.from_label(f"E{rank}")
        m = datum.matrix
        assert m[1][3] == m[3][1] == -1  # node 2 hangs off node 4
        assert m[0][2] == m[2][0] == -1  # 1 -- 3
        assert all(d == 1 for d in datum.symmetrizer)


def test_symmetrized_matrix_is_symmetric():
    for label in ("A3", "B4", "C4", "D5", "E7", "F4", "G2"):
        datum = CartanDatum.from_label(label)
        b = datum.bilinear_form()
        assert all(b[i][j] == b[j][i] for i in range(datum.rank) for j in range(datum.rank))


def test_invalid_matrices_rejected():
    with pytest.raises(UsageError):
        CartanDatum.make([[1]])
    with pytest.raises(UsageError):
        CartanDatum.make([[2, 1], [1, 2]])
    with pytest.raises(UsageError):
        CartanDatum.make([[2, -1], [0, 2]])
    # affine A1 tilde: symmetric but not positive definite
    with pytest.raises(NotFiniteType):
        CartanDatum.make([[2, -2], [-2, 2]])
    with pytest.raises(NotFiniteType):
        CartanDatum.make([[2, -4], [-1, 2]])


def test_label_must_match_standard_matrix():
    with pytest.raises(UsageError):
        CartanDatum.make(standard_cartan_matrix("A2"), label="B2")
    datum = CartanDatum.make(standard_cartan_matrix("B2"), label="B2")
    assert datum.label == "B2"


def test_explicit_symmetrizer_validated_and_minimized():
    matrix = standard_cartan_matrix("B2")
    datum = CartanDatum.make(matrix, symmetrizer=[4, 2])
    assert datum.symmetrizer == (2, 1)
    with pytest.raises(UsageError):
        CartanDatum.make(matrix, symmetrizer=[1, 1])
    with pytest.raises(UsageError):
        CartanDatum.make(matrix, symmetrizer=[2, -1])


def test_file_parsing():
    text = "2\n2 -1\n-3 2\n"
    datum = parse_cartan_file(text)
    assert datum.rank == 2 and datum.matrix == ((2, -1), (-3, 2))
    text_d = "2\n2 -1\n-3 2\nd: 3 1\n"
    assert parse_cartan_file(text_d).symmetrizer == (3, 1)
    with pytest.raises(UsageError):
        parse_cartan_file("")
    with pytest.raises(UsageError):
        parse_cartan_file("2\n2 -1\n")
    with pytest.raises(UsageError):
        parse_cartan_file("2\n2 -1\n-3 2\nextra junk\n")


def test_diagram_automorphisms():
    assert len(CartanDatum.from_label("A2").diagram_automorphisms()) == 2
    assert len(CartanDatum.from_label("A3").diagram_automorphisms()) == 2
    assert len(CartanDatum.from_label("A1").diagram_automorphisms()) == 1
    assert len(CartanDatum.from_label("B3").diagram_automorphisms()) == 1
    assert len(CartanDatum.from_label("G2").diagram_automorphisms()) == 1
    assert len(CartanDatum.from_label("F4").diagram_automorphisms()) == 1
    assert len(CartanDatum.from_label("D4").diagram_automorphisms()) == 6
    assert len(CartanDatum.from_label("D5").diagram_automorphisms()) == 2
    e6_autos = CartanDatum.from_label("E6").diagram_automorphisms()
    assert len(e6_autos) == 2
    nontrivial = next(p for p in e6_autos if p != tuple(range(6)))
    assert nontrivial == (5, 1, 4, 3, 2, 0)  # 1<->6, 3<->5 in 1-based labels
    assert len(CartanDatum.from_label("E7").diagram_automorphisms()) == 1
    assert len(CartanDatum.from_label("E8").diagram_automorphisms()) == 1


def test_automorphisms_preserve_matrix():
    datum = CartanDatum.from_label("D4")
    m = datum.matrix
    for p in datum.diagram_automorphisms():
        for i in range(4):
            for j in range(4):
                assert m[p[i]][p[j]] == m[i][j]
