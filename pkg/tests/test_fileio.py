import pytest

from conftest import K4
from matroidiso import PrimeFieldMatrix, triconnected_decompose, uniform_matroid
from matroidiso import fileio
from matroidiso.fileio import FormatError


def test_graph_round_trip():
    assert fileio.parse_graph(fileio.format_graph(K4)) == K4
    col = K4.with_colors([1, 2, 1, 2, 1, 2])
    assert fileio.parse_graph(fileio.format_graph(col)) == col


def test_matrix_round_trip():
    A = PrimeFieldMatrix(5, [[1, 2, 3], [4, 0, 1]])
    assert fileio.parse_matrix(fileio.format_matrix(A)) == A


def test_matroid_round_trip():
    M = uniform_matroid(2, 4)
    back = fileio.parse_matroid(fileio.format_matroid(M))
    assert back.bases == M.bases
    empty = fileio.parse_matroid("matroid 2\n-\n")
    assert empty.full_rank() == 0


def test_perm_colors_oplog_manifest():
    assert fileio.parse_perm(fileio.format_perm([2, 0, 1])).bijection == (2, 0, 1)
    assert fileio.parse_colors(fileio.format_colors([1, 1, 3])) == [1, 1, 3]
    log = ["twist 0 1 2,3", "skip cleave"]
    assert fileio.parse_oplog(fileio.format_oplog(log)) == log
    facts = {"kind": "x", "n": "4"}
    assert fileio.parse_manifest(fileio.format_manifest(facts)) == facts
    gens, order = fileio.parse_generators(fileio.format_generators([(1, 0, 2), (0, 2, 1)], 6))
    assert order == 6 and [g.bijection for g in gens] == [(1, 0, 2), (0, 2, 1)]


def test_tree_round_trip():
    T = triconnected_decompose(K4)
    back = fileio.parse_tree(fileio.format_tree(T))
    assert back.kinds == T.kinds


@pytest.mark.parametrize("text,lineno,fragment", [
    ("graph 3 1\ne 1 1\n", 2, "self-loop"),
    ("graph 3 2\ne 0 1\n", 2, "expected 2 edge"),
    ("graph 3 1\n# note\ne 0 7\n", 3, "out of range"),
    ("graph 3 1\ne 0 x\n", 2, "expected integers"),
    ("matrix 1 2 4\n1 1\n", 1, "not a prime"),
    ("matrix 2 2 5\n1 1\n1\n", 3, "row has 1"),
    ("perm 3\n0 0 1\n", 2, "not a permutation"),
    ("colors 2\n1\nz\n", 3, "colour label"),
    ("manifest\nnovalue\n", 2, "key=value"),
])
def test_errors_carry_line_numbers(text, lineno, fragment):
    with pytest.raises(FormatError) as info:
        fileio.parse(text, "in.txt")
    assert info.value.lineno == lineno
    assert str(info.value).startswith(f"in.txt:{lineno}:")
    assert fragment in str(info.value)


def test_dispatch_and_read(tmp_path):
    path = tmp_path / "k4.g"
    fileio.write(path, fileio.format_graph(K4))
    kind, obj = fileio.read(path, "graph")
    assert kind == "graph" and obj == K4
    with pytest.raises(FormatError):
        fileio.read(path, "matrix")
    with pytest.raises(FormatError):
        fileio.read(tmp_path / "missing.g")
    with pytest.raises(FormatError):
        fileio.parse("bogus 1\n")
