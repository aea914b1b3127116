import random

import networkx as nx
from hypothesis import given, strategies as st

from conftest import BOWTIE, K4, graph
from matroidiso import (ColoredGraph, GMIStats, brute_force_iso, gen_modk_gadget, gmi_canonical_code, gmi_test,
                        graph_isomorphism, graphic_oracle, random_2iso_pair)
from matroidiso.generators import corpus, random_three_connected, random_two_sum, relabel
from matroidiso.gmi import _Tree, block_2iso, refine_and_decide
from matroidiso.multigraph import is_2isomorphism


def valid(X, Y, w):
    if w is None:
        return False
    if X.m <= 16:
        return w.validate(graphic_oracle(X), graphic_oracle(Y))
    return is_2isomorphism(X, Y, w.bijection)


def test_self_and_trees():
    for X in (K4, BOWTIE, gen_modk_gadget(3)):
        assert valid(X, X, gmi_test(X, X))
    t1 = graph(5, [(0, 1), (1, 2), (2, 3), (3, 4)])
    t2 = graph(5, [(0, 1), (0, 2), (0, 3), (0, 4)])
    assert valid(t1, t2, gmi_test(t1, t2))


def test_random_pairs_and_perturbations():
    rng = random.Random(3)
    pool = [g for g in corpus(8) if g.m >= 3]
    for _ in range(200):
        X = rng.choice(pool)
        Y, _ = random_2iso_pair(X, seed=rng.randrange(10 ** 6), relabel=True)
        assert valid(X, Y, gmi_test(X, Y))
        drop = rng.randrange(X.m)
        Z = graph(X.n, [e for i, e in enumerate(X.edges) if i != drop] + [X.edges[rng.randrange(X.m)]])
        truth = brute_force_iso(graphic_oracle(X), graphic_oracle(Z)) is not None
        w = gmi_test(X, Z)
        assert (w is not None) == truth
        if w is not None:
            assert valid(X, Z, w)


def test_three_connected_single_class():
    stats = GMIStats()
    assert gmi_test(K4, K4, stats=stats) is not None
    assert stats.iterations == [1]


def test_modk_stabilises_in_one_iteration():
    X = gen_modk_gadget(3)
    stats = GMIStats()
    assert gmi_test(X, X, stats=stats) is not None
    assert stats.iterations == [1]


def _chain(order):
    """K4 and W5 glued through one shared edge that is then removed; order
    picks which one comes first in the edge list."""
    K = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
    W = [(0, 1)] + [(0, v) for v in (4, 5, 6)] + [(1, 4), (4, 5), (5, 6), (6, 1), (1, 7), (7, 0)]
    parts = [K[1:], W[1:]] if order == 0 else [W[1:], K[1:]]
    return graph(8, parts[0] + parts[1])


def test_chain_reversed():
    A, B = _chain(0), _chain(1)
    assert valid(A, B, gmi_test(A, B))


def test_two_polygons_sharing_pair():
    A = graph(6, [(0, 2), (2, 3), (3, 1), (0, 4), (4, 5), (5, 1)])
    B = graph(6, [(0, 2), (2, 3), (3, 1), (1, 4), (4, 5), (5, 0)])
    assert valid(A, B, gmi_test(A, B))


def test_bicentred_trees():
    rng = random.Random(8)
    seen = 0
    for _ in range(200):
        X = random_two_sum(rng, rng.randint(2, 6))
        t = _Tree(X)
        from matroidiso.gi import tree_centers
        if len(tree_centers(t.k, t.tree_edges())) != 2:
            continue
        seen += 1
        Y, _ = random_2iso_pair(X, ops=4, seed=rng.randrange(10 ** 6), relabel=True)
        assert valid(X, Y, gmi_test(X, Y))
    assert seen > 5


def test_strict_mode_agrees():
    rng = random.Random(12)
    for _ in range(60):
        X = random_two_sum(rng, rng.randint(1, 4))
        Y, _ = random_2iso_pair(X, seed=rng.randrange(10 ** 6), relabel=True)
        assert valid(X, Y, gmi_test(X, Y, strict=True))


def test_coloured_blocks():
    X = K4.with_colors([1, 1, 1, 2, 2, 2])
    # the star at vertex 3 is edges 2, 4, 5; a triangle is never the image of a star
    Y = K4.with_colors([2, 2, 1, 2, 1, 1])
    w = gmi_test(X, Y)
    assert w is not None and all(X.colors[e] == Y.colors[w.bijection[e]] for e in range(6))
    assert gmi_test(X, K4.with_colors([2, 2, 2, 1, 1, 1])) is None


def test_whitney_three_connected_consistency():
    rng = random.Random(21)
    for _ in range(60):
        n = rng.randint(4, 7)
        X = random_three_connected(rng, n)
        Y = relabel(rng, X) if rng.random() < 0.5 else random_three_connected(rng, n, X.m)
        same = graph_isomorphism(ColoredGraph(X), ColoredGraph(Y)) is not None
        assert (gmi_test(X, Y) is not None) == same


def test_monotone_refinement_and_bound():
    rng = random.Random(5)
    for _ in range(80):
        X = random_two_sum(rng, rng.randint(1, 6))
        Y, _ = random_2iso_pair(X, seed=rng.randrange(10 ** 6), relabel=True)
        stats = GMIStats()
        gmi_test(X, Y, stats=stats)
        for h, bound in zip(stats.q_history, stats.vertex_bound):
            assert h == sorted(h)
            assert len(h) <= bound


def test_planar_inputs_stay_planar():
    rng = random.Random(6)
    for _ in range(40):
        X = random_two_sum(rng, rng.randint(1, 5))
        if not nx.check_planarity(nx.MultiGraph(X.edges))[0]:
            continue
        graphs = []
        gmi_test(X, X, strict=True, trace=lambda tag, g: graphs.append(g))
        assert graphs
        for g in graphs:
            assert nx.check_planarity(nx.MultiGraph(g.edges))[0]


@given(st.integers(0, 10 ** 6))
def test_canonical_code_matches_gmi(seed):
    rng = random.Random(seed)
    pool = [g for g in corpus(6)]
    X = rng.choice(pool)
    Y = rng.choice([g for g in pool if g.m == X.m])
    Y = relabel(rng, Y)
    assert (gmi_canonical_code(X) == gmi_canonical_code(Y)) == (gmi_test(X, Y) is not None)


def test_refine_returns_history():
    t1, t2 = _Tree(_chain(0)), _Tree(_chain(1))
    ok, colors, history = refine_and_decide(t1, t2)
    assert ok and history[-1] == history[-2] if len(history) > 1 else ok
    assert block_2iso(_chain(0), _chain(1)) is not None
