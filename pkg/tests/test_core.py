from itertools import combinations, permutations

import pytest
from hypothesis import given, strategies as st

from conftest import C4, K4, P4, TRIANGLE, graph
from matroidiso import (CapacityError, InputError, IsoWitness, ListMatroid, brute_force_iso, check_axioms,
                        circuits, closure, direct_sum, graphic_oracle, hyperplanes, is_uniform, linear_oracle,
                        rank, uniform_matroid, uniform_representation)
from matroidiso.core import family_iso, popcount, to_mask


def test_rank_examples():
    assert rank(graphic_oracle(K4), range(6)) == 3
    assert rank(uniform_matroid(2, 4), []) == 0
    assert rank(graphic_oracle(TRIANGLE), [0, 1, 2]) == 2


def test_rank_out_of_range():
    with pytest.raises(InputError):
        rank(uniform_matroid(2, 4), [5])


def test_closure_examples():
    assert closure(graphic_oracle(TRIANGLE), [0, 1]) == (0, 1, 2)
    assert closure(uniform_matroid(2, 4), [0]) == (0,)
    M = graphic_oracle(K4)
    once = closure(M, [0, 3])
    assert closure(M, once) == once


def test_circuit_examples():
    cs = circuits(graphic_oracle(K4))
    assert len(cs) == 7
    assert sorted(len(c) for c in cs) == [3, 3, 3, 3, 4, 4, 4]
    assert circuits(uniform_matroid(3, 3)) == []
    parallel = graph(2, [(0, 1)] * 3)
    assert circuits(graphic_oracle(parallel)) == [(0, 1), (0, 2), (1, 2)]


def test_circuits_capacity():
    big = graph(2, [(0, 1)] * 17)
    with pytest.raises(CapacityError):
        circuits(graphic_oracle(big))


def test_hyperplane_examples():
    assert hyperplanes(uniform_matroid(2, 4)) == [(0,), (1,), (2,), (3,)]
    assert hyperplanes(graphic_oracle(TRIANGLE)) == [(0,), (1,), (2,)]
    assert hyperplanes(uniform_matroid(0, 3)) == []


def test_is_uniform_examples():
    assert is_uniform(linear_oracle(uniform_representation(2, 4, 5)), 2)
    assert not is_uniform(graphic_oracle(K4), 3)
    assert is_uniform(uniform_matroid(0, 4), 0)


def test_direct_sum_examples():
    free2 = direct_sum(uniform_matroid(1, 1), uniform_matroid(1, 1))
    assert rank(free2) == 2 and circuits(free2) == []
    tri2 = direct_sum(graphic_oracle(TRIANGLE), graphic_oracle(TRIANGLE))
    assert circuits(tri2) == [(0, 1, 2), (3, 4, 5)]


def test_brute_force_iso_examples():
    M = graphic_oracle(K4)
    assert brute_force_iso(M, M).bijection == tuple(range(6))
    assert brute_force_iso(graphic_oracle(C4), graphic_oracle(P4)) is None
    relabeled = graph(4, [(2, 3), (1, 3), (0, 3), (1, 2), (0, 2), (0, 1)][::-1])
    w = brute_force_iso(M, graphic_oracle(relabeled))
    assert w is not None and w.validate(M, graphic_oracle(relabeled))


def test_brute_force_capacity():
    M = uniform_matroid(2, 9)
    with pytest.raises(CapacityError):
        brute_force_iso(M, M)


def test_witness_rejects_non_permutation():
    with pytest.raises(InputError):
        IsoWitness.of([0, 0, 1])


def test_list_matroid_needs_equal_bases():
    with pytest.raises(InputError):
        ListMatroid(3, [[0], [1, 2]])


def test_family_iso_with_empty_set():
    assert family_iso([0, 0b011], [0b110, 0], 3) is not None
    assert family_iso([0, 0b011], [0b110], 3) is None


# ------------------------------------------------------------- properties

@st.composite
def small_matroids(draw):
    """Random linear matroids over GF(3) or GF(5), or uniform ones."""
    if draw(st.booleans()):
        m = draw(st.integers(0, 6))
        return uniform_matroid(draw(st.integers(0, m)), m)
    p = draw(st.sampled_from([2, 3, 5]))
    rows = draw(st.integers(1, 3))
    cols = draw(st.integers(1, 6))
    data = draw(st.lists(st.lists(st.integers(0, p - 1), min_size=cols, max_size=cols),
                         min_size=rows, max_size=rows))
    from matroidiso import PrimeFieldMatrix
    return linear_oracle(PrimeFieldMatrix(p, data))


@given(small_matroids())
def test_axioms_hold(M):
    assert check_axioms(M)


@given(small_matroids())
def test_circuit_family_is_antichain_of_minimal_dependents(M):
    cs = [to_mask(c, M.m) for c in circuits(M)]
    assert len(set(cs)) == len(cs)
    for a, b in combinations(cs, 2):
        assert a & b != a and a & b != b
    for c in cs:
        assert not M._independent_mask(c)
        x = c
        while x:
            low = x & -x
            assert M._independent_mask(c ^ low)
            x ^= low


@given(small_matroids(), st.data())
def test_closure_idempotent_and_rank_preserving(M, data):
    F = data.draw(st.sets(st.integers(0, max(M.m - 1, 0)), max_size=M.m)) if M.m else set()
    c = closure(M, F)
    assert set(F) <= set(c)
    assert closure(M, c) == c
    assert rank(M, c) == rank(M, F)


@given(small_matroids())
def test_hyperplanes_are_maximal_rank_deficient(M):
    r = rank(M)
    for h in hyperplanes(M):
        assert rank(M, h) == r - 1
        for x in set(range(M.m)) - set(h):
            assert rank(M, set(h) | {x}) == r


@given(small_matroids(), small_matroids())
def test_direct_sum_rank_and_circuits(M1, M2):
    S = direct_sum(M1, M2)
    assert rank(S) == rank(M1) + rank(M2)
    expect = {to_mask(c, M1.m) for c in circuits(M1)}
    expect |= {to_mask(c, M2.m) << M1.m for c in circuits(M2)}
    assert {to_mask(c, S.m) for c in circuits(S)} == expect


@given(small_matroids(), st.randoms(use_true_random=False))
def test_brute_force_iso_finds_relabeling(M, rnd):
    perm = list(range(M.m))
    rnd.shuffle(perm)
    bases = []
    r = rank(M)
    for s in combinations(range(M.m), r):
        if M.is_independent(s):
            bases.append([perm[x] for x in s])
    N = ListMatroid(M.m, bases)
    w = brute_force_iso(M, N)
    assert w is not None and w.validate(M, N)


def test_brute_force_iso_is_lexicographically_least():
    M = graphic_oracle(C4)
    assert brute_force_iso(M, M).bijection == (0, 1, 2, 3)
    T = graphic_oracle(graph(4, [(0, 1), (1, 2), (2, 0), (2, 3)]))
    U = graphic_oracle(graph(4, [(2, 3), (0, 1), (1, 2), (2, 0)]))
    w = brute_force_iso(T, U)
    least = min(p for p in permutations(range(4)) if IsoWitness.of(p).validate(T, U))
    assert w.bijection == least
    assert popcount(0b1011) == 3
