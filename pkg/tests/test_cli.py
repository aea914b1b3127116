import pytest

from conftest import C4, K4, P4
from matroidiso import PrimeFieldMatrix, fileio, uniform_matroid
from matroidiso.cli import main


@pytest.fixture
def files(tmp_path):
    def put(name, text):
        p = tmp_path / name
        p.write_text(text)
        return str(p)
    return put


def test_gmi_iso_with_witness_and_stats(files, tmp_path, capsys):
    a = files("a.g", fileio.format_graph(K4))
    b = files("b.g", fileio.format_graph(K4))
    w = str(tmp_path / "w.perm")
    assert main(["gmi", a, b, "--witness", w, "--stats"]) == 0
    out, err = capsys.readouterr()
    assert out.strip() == "ISO" and "iterations=" in err
    assert fileio.read(w, "perm")[1].bijection is not None


def test_gmi_noniso(files, capsys):
    assert main(["gmi", files("a.g", fileio.format_graph(C4)), files("b.g", fileio.format_graph(P4))]) == 1
    assert capsys.readouterr().out.strip() == "NONISO"


def test_input_error_exit_code(files, capsys):
    bad = files("bad.g", "graph 2 1\ne 0 0\n")
    assert main(["gmi", bad, bad]) == 2
    assert "bad.g:2:" in capsys.readouterr().err


def test_lmi_methods(files):
    A = PrimeFieldMatrix(5, [[1, 0, 1], [0, 1, 1]])
    B = PrimeFieldMatrix(5, [[1, 1, 0], [1, 0, 1]])
    a, b = files("a.mat", fileio.format_matrix(A)), files("b.mat", fileio.format_matrix(B))
    for method in ("auto", "direct", "basis"):
        assert main(["lmi", a, b, "--method", method]) == 0
    ca = files("ca.col", fileio.format_colors([1, 1, 2]))
    cb = files("cb.col", fileio.format_colors([2, 1, 1]))
    assert main(["lmi", a, b, "--colors-a", ca, "--colors-b", cb, "--method", "gadget"]) == 0


def test_mi_and_gi(files):
    m = files("m.mat", fileio.format_matroid(uniform_matroid(2, 4)))
    assert main(["mi", m, m]) == 0
    assert main(["mi", m, m, "--via-gmi"]) == 0
    g = files("g.g", fileio.format_graph(K4))
    assert main(["gi", g, g]) == 0
    c1 = files("c1.col", fileio.format_colors([0, 0, 0, 1]))
    c2 = files("c2.col", fileio.format_colors([0, 0, 1, 1]))
    assert main(["gi", g, g, "--colors1", c1, "--colors2", c2]) == 1


def test_aut_and_member(files, tmp_path, capsys):
    g = files("c4.g", fileio.format_graph(C4))
    out = str(tmp_path / "gens.txt")
    assert main(["aut", g, "--out", out]) == 0
    gens, order = fileio.parse_generators(open(out).read())
    assert order == 24
    p = files("p.perm", fileio.format_perm([1, 0, 2, 3]))
    assert main(["aut-member", g, p]) == 0
    assert main(["aut-member", g, p, "--method", "system"]) == 0
    k4 = files("k4.g", fileio.format_graph(K4))
    bad = files("q.perm", fileio.format_perm([1, 0, 2, 3, 4, 5]))
    assert main(["aut-member", k4, bad]) == 1


def test_gen_and_verify(tmp_path):
    out = tmp_path / "w"
    assert main(["gen", "whitney-pair", "--out", str(out), "--n", "7", "--seed", "3"]) == 0
    facts = fileio.read(out / "manifest.txt", "manifest")[1]
    assert facts["two_isomorphic"] == "true"
    assert main(["gmi", str(out / "g1.g"), str(out / "g2.g")]) == 0
    out = tmp_path / "x"
    assert main(["gen", "modk-gadget", "--out", str(out), "--k", "3"]) == 0
    assert main(["aut-member", str(out / "x3.g"), str(out / "shift_1_2.perm")]) == 0
    assert main(["gen", "uniform-rep", "--out", str(tmp_path / "u"), "--k", "2", "--m", "4", "--p", "4"]) == 2
    assert main(["gen", "whitney-pair", "--out", str(tmp_path / "z"), "--n", "5", "--ops", "9"]) == 2


def test_reduce(files, tmp_path):
    g = files("k4.g", fileio.format_graph(K4))
    assert main(["reduce", "gi-lmi", g, g, "--out", str(tmp_path / "r")]) == 0
    a1 = str(tmp_path / "r" / "a1.mat")
    assert main(["lmi", a1, a1]) == 0
    m = files("u.mat", fileio.format_matroid(uniform_matroid(2, 3)))
    assert main(["reduce", "mib-gmi", m, m, "--out", str(tmp_path / "s"), "--fold"]) == 0
    assert main(["gmi", str(tmp_path / "s" / "x1.g"), str(tmp_path / "s" / "x2.g")]) == 0
    A = files("a.mat", fileio.format_matrix(PrimeFieldMatrix(3, [[1, 0, 1], [0, 1, 1]])))
    assert main(["reduce", "lmi-gi", A, A, "--out", str(tmp_path / "t")]) == 0


def test_selfcheck_rejects_unknown(capsys):
    assert main(["selfcheck", "--only", "A99"]) == 2
    assert main(["selfcheck", "--only", "A5", "--inject-fault", "nope"]) == 2


def test_selfcheck_single(capsys):
    assert main(["selfcheck", "--only", "A5"]) == 0
    assert "A5 PASS" in capsys.readouterr().out
