import random
from collections import Counter

import pytest
from hypothesis import given, strategies as st

from conftest import BOWTIE, K4, graph
from matroidiso import (InputError, IntegrityError, excised_surgery, recompose,
                        triconnected_decompose, validate_tree)
from matroidiso.decompose import BOND, POLYGON, TRICONNECTED, DecompositionTree, biconnected_components, load_tree
from matroidiso.generators import corpus, random_two_sum, relabel
from matroidiso.multigraph import is_two_connected


def labels(T):
    return Counter((k, len(es)) for k, es in zip(T.kinds, T.edges))


def test_blocks_examples():
    bl, cut = biconnected_components(BOWTIE)
    assert sorted(map(sorted, bl)) == [[0, 1, 2], [3, 4, 5]] and cut == [0]
    tree = graph(4, [(0, 1), (1, 2), (1, 3)])
    bl, _ = biconnected_components(tree)
    assert sorted(map(list, bl)) == [[0], [1], [2]]


def test_decompose_examples():
    T = triconnected_decompose(K4)
    assert T.kinds == [TRICONNECTED] and T.links() == []
    C5 = graph(5, [(i, (i + 1) % 5) for i in range(5)])
    T = triconnected_decompose(C5)
    assert T.kinds == [POLYGON]
    # two K4s sharing the edge (0, 1)
    X = graph(6, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3), (0, 4), (0, 5), (1, 4), (1, 5), (4, 5)])
    T = triconnected_decompose(X)
    assert sorted(T.kinds) == [BOND, TRICONNECTED, TRICONNECTED]
    assert validate_tree(T, X) == []
    Xp, Tp = excised_surgery(X, T)
    assert recompose(Tp) == Xp


def test_not_two_connected():
    with pytest.raises(InputError):
        triconnected_decompose(BOWTIE)


def test_surgery_examples():
    Xp, T = excised_surgery(K4, triconnected_decompose(K4))
    assert Xp == K4 and T.excised == []
    theta = graph(5, [(0, 2), (2, 1), (0, 3), (3, 1), (0, 4), (4, 1)])
    Xp, T = excised_surgery(theta, triconnected_decompose(theta))
    assert T.excised == [(0, 1)] and Xp.m == theta.m + 1
    assert recompose(T) == Xp


def test_polygon_bond_polygon_chain():
    # two 4-cycles glued through the pair {0, 1}, plus a real edge 0-1
    X = graph(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 1)])
    T = triconnected_decompose(X)
    assert sorted(T.kinds) == [BOND, POLYGON, POLYGON]
    assert recompose(T) == X


def test_single_node_recompose():
    assert recompose(triconnected_decompose(K4)) == K4


def test_recompose_detects_twin_mismatch():
    X = graph(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 1)])
    T = triconnected_decompose(X)
    bad = DecompositionTree(T.n, T.m, list(T.kinds), [list(es) for es in T.edges], dict(T.twin), dict(T.owner))
    i, es = next((i, es) for i, es in enumerate(bad.edges) if any(e < 0 for _, _, e in es))
    j = next(k for k, e in enumerate(es) if e[2] < 0)
    es[j] = (es[j][0], 5 if es[j][1] != 5 else 4, es[j][2])
    with pytest.raises(IntegrityError):
        recompose(bad)


def test_dump_round_trip():
    X = graph(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1), (0, 1)])
    T = triconnected_decompose(X)
    back = load_tree(T.dump(), T.n, T.m)
    assert back.kinds == T.kinds and back.links() == T.links() and recompose(back) == X


def _two_connected(rng, count):
    out = [g for g in corpus(7) if is_two_connected(g) and g.m >= 2]
    while len(out) < count:
        out.append(random_two_sum(rng, rng.randint(1, 5)))
    return out


def test_round_trip_and_validity_on_corpus():
    rng = random.Random(11)
    for X in _two_connected(rng, 500):
        T = triconnected_decompose(X)
        assert validate_tree(T, X) == []
        Xp, Tp = excised_surgery(X, T)
        assert recompose(Tp) == Xp
        assert validate_tree(Tp, Xp) == []


@given(st.integers(0, 10 ** 6), st.integers(1, 6))
def test_canonical_labels_under_relabeling(seed, pieces):
    rng = random.Random(seed)
    X = random_two_sum(rng, pieces)
    Y = relabel(rng, X)
    assert labels(triconnected_decompose(X)) == labels(triconnected_decompose(Y))
