import random
from itertools import combinations

import pytest
from hypothesis import given, strategies as st

from conftest import C4, K4, TRIANGLE, graph
from matroidiso import (InputError, PrimeFieldMatrix, brute_force_iso, count_automorphisms, gen_modk_gadget,
                        gma_generators, gmi_test, graphic_oracle, is_matroid_automorphism, iso_from_auto,
                        linear_oracle, lma_generators, mib_to_gmi, uniform_matroid, uniform_representation)
from matroidiso.core import ListMatroid
from matroidiso.generators import corpus, relabel
from matroidiso.multigraph import modk_shift
from matroidiso.reductions import (BLUE, RED, auto_from_iso, closure_order, oracle_generators,
                                   orbit_partition)


def test_mib_u23():
    X, _ = mib_to_gmi(uniform_matroid(2, 3), uniform_matroid(2, 3), 2)
    blue = [e for e, c in zip(X.edges, X.colors) if c == BLUE]
    red = [e for e, c in zip(X.edges, X.colors) if c == RED]
    assert len(blue) == 3 and len(red) == 3
    assert X.n == 3
    assert gmi_test(*mib_to_gmi(uniform_matroid(2, 3), uniform_matroid(2, 3), 2)) is not None


def test_mib_u23_vs_free():
    M1, M2 = uniform_matroid(2, 3), uniform_matroid(3, 3)
    assert brute_force_iso(M1, M2) is None
    assert gmi_test(*mib_to_gmi(M1, M2, 3)) is None


def test_mib_rank_bound_and_loops():
    with pytest.raises(InputError):
        mib_to_gmi(uniform_matroid(3, 4), uniform_matroid(3, 4), 2)
    with pytest.raises(InputError):
        mib_to_gmi(ListMatroid(2, [[0]]), ListMatroid(2, [[0]]), 2)


def _rank2_loopless(m):
    """Loopless rank <= 2 matroids on m elements from parallel class sizes."""
    out = []

    def parts(n, top):
        if n == 0:
            yield []
        for k in range(min(n, top), 0, -1):
            for rest in parts(n - k, k):
                yield [k] + rest

    for sizes in parts(m, m):
        classes, start = [], 0
        for s in sizes:
            classes.append(list(range(start, start + s)))
            start += s
        if len(classes) == 1:
            out.append(ListMatroid(m, [[c] for c in classes[0]]))
        else:
            out.append(ListMatroid(m, [[a, b] for c1, c2 in combinations(classes, 2) for a in c1 for b in c2]))
    return out


def _shuffle(M, rng):
    p = list(range(M.m))
    rng.shuffle(p)
    return ListMatroid(M.m, [[p[x] for x in range(M.m) if (b >> x) & 1] for b in M.bases])


def test_mib_verdicts_rank_two():
    rng = random.Random(0)
    for m in range(1, 6):
        ms = _rank2_loopless(m)
        for a in ms:
            for b in ms:
                b = _shuffle(b, rng)
                truth = brute_force_iso(a, b) is not None
                assert (gmi_test(*mib_to_gmi(a, b, 2)) is not None) == truth
                if m <= 3:
                    assert (gmi_test(*mib_to_gmi(a, b, 2, fold=True)) is not None) == truth


def test_iso_from_auto_examples():
    M = graphic_oracle(K4)
    N = graphic_oracle(relabel(random.Random(1), K4))
    w = iso_from_auto(M, N)
    assert w is not None and w.validate(M, N)
    path3 = graph(4, [(0, 1), (1, 2), (2, 3)])
    assert iso_from_auto(graphic_oracle(TRIANGLE), graphic_oracle(path3)) is None


def test_iso_from_auto_random():
    rng = random.Random(2)
    pool = [g for g in corpus(6)]
    for _ in range(60):
        X = rng.choice(pool)
        Y = rng.choice([g for g in pool if g.m == X.m])
        Y = relabel(rng, Y)
        truth = brute_force_iso(graphic_oracle(X), graphic_oracle(Y)) is not None
        w = iso_from_auto(graphic_oracle(X), graphic_oracle(Y))
        assert (w is not None) == truth == (gmi_test(X, Y) is not None)
        if w is not None:
            assert w.validate(graphic_oracle(X), graphic_oracle(Y))


def test_iso_from_auto_linear():
    A = uniform_representation(2, 4, 5)
    B = PrimeFieldMatrix.from_columns(5, [(1, 3), (0, 1), (1, 1), (1, 0)])
    C = PrimeFieldMatrix.from_columns(5, [(1, 0), (2, 0), (0, 1), (1, 1)])
    w = iso_from_auto(linear_oracle(A), linear_oracle(B))
    assert w is not None and w.validate(linear_oracle(A), linear_oracle(B))
    assert iso_from_auto(linear_oracle(A), linear_oracle(C)) is None


def test_auto_examples():
    gs = gma_generators(C4)
    assert gs.order() == 24 and closure_order(gs.generators, 4) == 24
    assert orbit_partition(gs.generators, 4).blocks == ((0, 1, 2, 3),)
    gk = gma_generators(K4)
    assert gk.orbits().blocks == (tuple(range(6)),)
    gu = lma_generators(uniform_representation(2, 3, 5))
    assert gu.orbits().blocks == ((0, 1, 2),)
    gi = lma_generators(PrimeFieldMatrix(5, [[1, 0, 0], [0, 1, 0], [0, 0, 1]]))
    assert gi.order() == 6


def test_modk_shifts_in_group():
    X = gen_modk_gadget(3)
    gs = gma_generators(X)
    assert all(is_matroid_automorphism(X, g) for g in gs.generators)
    for a in range(3):
        for b in range(3):
            assert gs.contains(modk_shift(3, a, b))


@given(st.integers(0, 10 ** 6))
def test_generator_orders_match_brute_force(seed):
    rng = random.Random(seed)
    X = rng.choice([g for g in corpus(7) if g.m <= 7])
    gs = gma_generators(X)
    assert all(is_matroid_automorphism(X, g) for g in gs.generators)
    assert gs.order() == count_automorphisms(graphic_oracle(X))


def test_linear_generator_orders():
    rng = random.Random(4)
    for _ in range(25):
        cols = rng.randint(2, 6)
        A = PrimeFieldMatrix(3, [[rng.randrange(3) for _ in range(cols)] for _ in range(rng.randint(1, 3))])
        gs = lma_generators(A)
        assert gs.order() == count_automorphisms(linear_oracle(A))


def test_oracle_generators():
    gs = oracle_generators(uniform_matroid(2, 4))
    assert gs.order() == 24


def test_auto_from_iso_rejects_bad_solver():
    from matroidiso import IsoWitness
    with pytest.raises(InputError):
        auto_from_iso(3, lambda c1, c2: IsoWitness.of([0, 1, 2]))
