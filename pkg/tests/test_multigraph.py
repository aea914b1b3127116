import random
from itertools import combinations, product

import pytest
from hypothesis import given, strategies as st

from conftest import BOWTIE, C4, K4, TRIANGLE, graph
from matroidiso import (InputError, Multigraph, brute_force_iso, check_axioms, color_gadget_graphic,
                        cycle_basis, gen_modk_gadget, gmi_test, graphic_oracle, is_matroid_automorphism,
                        random_2iso_pair)
from matroidiso._accel import gf2_rank_ints
from matroidiso.core import IsoWitness, family_iso
from matroidiso.generators import corpus, random_multigraph
from matroidiso.multigraph import (brute_force_automorphism_check, in_cycle_space, induced_edge_permutation,
                                   is_three_connected, log_edge_map, modk_shift, replay, separating_pairs,
                                   whitney_cleave, whitney_identify, whitney_twist)


def test_self_loop_rejected():
    with pytest.raises(InputError):
        Multigraph(2, [(1, 1)])


def test_graphic_oracle_examples():
    M = graphic_oracle(TRIANGLE)
    assert all(M.is_independent(p) for p in combinations(range(3), 2))
    assert not M.is_independent([0, 1, 2])
    assert not graphic_oracle(graph(2, [(0, 1), (0, 1)])).is_independent([0, 1])
    assert check_axioms(graphic_oracle(K4))


def test_cycle_basis_examples():
    assert len(cycle_basis(K4)) == 3
    assert len(cycle_basis(graph(4, [(0, 1), (1, 2), (1, 3)]))) == 0
    for v in cycle_basis(K4).vectors:
        assert in_cycle_space(K4, v)


def test_membership_c4_all_perms():
    from itertools import permutations
    for p in permutations(range(4)):
        assert is_matroid_automorphism(C4, p)
        assert brute_force_automorphism_check(C4, p)


def test_membership_k4():
    from itertools import permutations
    for vmap in permutations(range(4)):
        assert is_matroid_automorphism(K4, induced_edge_permutation(K4, vmap))
    # edges 0=(0,1) and 1=(0,2) share vertex 0
    swap = [1, 0, 2, 3, 4, 5]
    assert is_matroid_automorphism(K4, swap) == brute_force_automorphism_check(K4, swap)
    for method in ("cycle-space", "system"):
        assert is_matroid_automorphism(K4, swap, method=method) == brute_force_automorphism_check(K4, swap)


def test_membership_length_mismatch():
    with pytest.raises(InputError):
        is_matroid_automorphism(K4, [0, 1, 2])


def test_twist_triangle():
    t = whitney_twist(TRIANGLE, 0, 1, [2])
    assert brute_force_iso(graphic_oracle(t), graphic_oracle(TRIANGLE)) is not None


def test_identify_and_cleave():
    two = graph(6, [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)])
    bow = whitney_identify(two, 0, 3)
    assert bow.n == 5
    assert sorted(graphic_oracle(bow).circuit_masks()) == sorted(graphic_oracle(two).circuit_masks())
    back = whitney_cleave(bow, 0, [3, 4, 5])
    assert len(back.vertex_components()) == 2
    assert sorted(graphic_oracle(back).circuit_masks()) == sorted(graphic_oracle(two).circuit_masks())


def test_whitney_errors():
    with pytest.raises(InputError):
        whitney_identify(TRIANGLE, 0, 1)
    with pytest.raises(InputError):
        whitney_cleave(TRIANGLE, 0, [0])
    with pytest.raises(InputError):
        whitney_twist(K4, 0, 1, [2])


def test_random_2iso_pair_examples():
    Y, log = random_2iso_pair(BOWTIE, ops=0)
    assert Y == BOWTIE and log == []
    Y, log = random_2iso_pair(K4, ops=5, seed=1)
    assert all(line.startswith(("twist", "skip")) for line in log)
    X = graph(8, [(0, 1), (1, 2), (2, 3), (3, 0), (0, 2), (4, 5), (5, 6), (6, 4), (6, 7)])
    for seed in range(20):
        Y, log = random_2iso_pair(X, ops=6, seed=seed, relabel=True)
        assert replay(X, log) == Y
        w = gmi_test(X, Y)
        assert w is not None and w.validate(graphic_oracle(X), graphic_oracle(Y))
        assert IsoWitness.of(log_edge_map(X.m, log)).validate(graphic_oracle(X), graphic_oracle(Y))


def test_graphic_gadget_examples():
    X = graph(4, [(0, 1), (1, 2), (2, 3)], [1, 0, 0])
    with pytest.raises(InputError):
        color_gadget_graphic(X)
    X = graph(4, [(0, 1), (1, 2), (2, 3), (3, 0)], [1, 1, 1, 1])
    G = color_gadget_graphic(X)
    assert G.m == 4 + 4 * 5
    sizes = sorted(bin(c).count("1") for c in graphic_oracle(color_gadget_graphic(graph(4, [(0, 1)], [1]))).circuit_masks())
    assert sizes == [6]
    Y = X.with_colors([1, 2, 1, 1])
    Z = X.with_colors([1, 1, 1, 2])
    assert gmi_test(color_gadget_graphic(X), color_gadget_graphic(X)) is not None
    assert gmi_test(color_gadget_graphic(X), color_gadget_graphic(Y, 4)) is None
    assert gmi_test(color_gadget_graphic(Y, 4), color_gadget_graphic(Z, 4)) is not None


def test_modk_gadget():
    X = gen_modk_gadget(3)
    assert (X.n, X.m) == (18, 27)
    assert is_three_connected(X) and is_three_connected(gen_modk_gadget(4))
    assert separating_pairs(X) == []
    for a, b in product(range(3), repeat=2):
        assert is_matroid_automorphism(X, modk_shift(3, a, b))
    with pytest.raises(InputError):
        gen_modk_gadget(2)


# ------------------------------------------------------------- properties

@st.composite
def multigraphs(draw, max_n=6, max_m=8):
    n = draw(st.integers(2, max_n))
    m = draw(st.integers(0, max_m))
    edges = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
                          min_size=m, max_size=m))
    return Multigraph(n, edges)


@given(multigraphs(), st.randoms(use_true_random=False))
def test_membership_matches_brute_force(X, rnd):
    for _ in range(10):
        p = list(range(X.m))
        rnd.shuffle(p)
        truth = brute_force_automorphism_check(X, p)
        assert is_matroid_automorphism(X, p) == truth
        assert is_matroid_automorphism(X, p, method="system") == truth


@given(multigraphs(max_n=9, max_m=14))
def test_cycle_basis_rank(X):
    B = cycle_basis(X)
    comps = len(X.vertex_components())
    assert len(B) == X.m - X.n + comps
    assert gf2_rank_ints(list(B.vectors)) == len(B)
    assert all(in_cycle_space(X, v) for v in B.vectors)


@given(multigraphs(max_n=7, max_m=9), st.integers(0, 10 ** 6))
def test_random_2iso_replay(X, seed):
    Y, log = random_2iso_pair(X, ops=4, seed=seed, relabel=True)
    assert replay(X, log) == Y
    w = gmi_test(X, Y)
    assert w is not None and w.validate(graphic_oracle(X), graphic_oracle(Y))


def test_graphic_gadget_verdicts_small():
    rng = random.Random(5)
    graphs = [g for g in corpus(4)]
    for g in graphs:
        for c1 in product((1, 2), repeat=g.m):
            c2 = list(c1)
            rng.shuffle(c2)
            a, b = g.with_colors(list(c1)), g.with_colors(c2)
            truth = family_iso(graphic_oracle(g).circuit_masks(), graphic_oracle(g).circuit_masks(),
                               g.m, list(c1), c2) is not None
            base = g.n
            assert (gmi_test(color_gadget_graphic(a, base), color_gadget_graphic(b, base)) is not None) == truth


def test_random_multigraph_guard():
    with pytest.raises(InputError):
        random_multigraph(random.Random(0), 5, 2, connected=True)
