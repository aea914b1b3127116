"""The numba kernels and the numpy fallback must agree exactly."""
from itertools import combinations

import numpy as np
import pytest
from hypothesis import given, strategies as st

from matroidiso import _accel


def both(fn, *args, **kw):
    if not _accel.HAVE_NUMBA:
        pytest.skip("numba not available")
    out = []
    for flag in (True, False):
        prev = _accel.set_backend(flag)
        try:
            out.append(fn(*args, **kw))
        finally:
            _accel.set_backend(prev)
    return out


def same(a, b):
    if isinstance(a, tuple):
        return len(a) == len(b) and all(same(x, y) for x, y in zip(a, b))
    if isinstance(a, list) and a and isinstance(a[0], (np.ndarray, list)):
        return all(same(x, y) for x, y in zip(a, b))
    return np.array_equal(np.asarray(a), np.asarray(b))


mats = st.sampled_from([2, 3, 5, 7, 65537]).flatmap(
    lambda p: st.tuples(st.just(p), st.integers(1, 4), st.integers(1, 8)).flatmap(
        lambda t: st.tuples(st.just(t[0]), st.lists(st.lists(st.integers(0, t[0] - 1), min_size=t[2],
                                                             max_size=t[2]), min_size=t[1], max_size=t[1]))))


@given(mats)
def test_gfp_rank_and_table(pm):
    p, rows = pm
    a = np.array(rows, dtype=np.int64)
    r1, r2 = both(_accel.gfp_rank, a, p)
    assert r1 == r2
    t1, t2 = both(_accel.gfp_rank_table, a, p)
    assert np.array_equal(t1, t2)


@given(mats)
def test_rref(pm):
    p, rows = pm
    (a1, p1), (a2, p2) = both(_accel.gfp_rref, np.array(rows), p)
    assert np.array_equal(a1, a2) and p1 == p2


@given(mats, st.integers(1, 3))
def test_span_flags(pm, k):
    p, rows = pm
    pts = np.array(rows, dtype=np.int64)
    n = pts.shape[1]
    if k > n:
        return
    subs = np.array(list(combinations(range(n), k)), dtype=np.int64)
    f1, f2 = both(_accel.span_flags, pts, p, subs)
    assert np.array_equal(f1, f2)


@st.composite
def edge_lists(draw):
    n = draw(st.integers(2, 6))
    m = draw(st.integers(0, 10))
    es = draw(st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)).filter(lambda e: e[0] != e[1]),
                       min_size=m, max_size=m))
    return n, es


@given(edge_lists())
def test_graphic_rank_table_and_circuits(g):
    n, es = g
    us = [u for u, _ in es]
    vs = [v for _, v in es]
    t1, t2 = both(_accel.graphic_rank_table, us, vs, n)
    assert np.array_equal(t1, t2)
    c1, c2 = both(_accel.circuit_flags, t1, len(es))
    assert np.array_equal(c1, c2)


@given(edge_lists(), st.randoms(use_true_random=False))
def test_perm_search(g, rnd):
    n, es = g
    if len(es) > 7:
        es = es[:7]
    m = len(es)
    table = _accel.graphic_rank_table([u for u, _ in es], [v for _, v in es], n)
    flags = _accel.circuit_flags(table, m)
    circ = [int(x) for x in np.nonzero(flags)[0]]
    perm = list(range(m))
    rnd.shuffle(perm)
    moved = []
    for c in circ:
        out = 0
        for e in range(m):
            if (c >> e) & 1:
                out |= 1 << perm[e]
        moved.append(out)
    r1, r2 = both(_accel.perm_search, circ, moved, m, find_all=True)
    assert r1 == r2 and r1[0] >= 1


@given(st.lists(st.lists(st.integers(0, 1), min_size=6, max_size=6), min_size=1, max_size=6))
def test_gf2_rank(rows):
    r1, r2 = both(_accel.gf2_rank, np.array(rows, dtype=np.uint8))
    assert r1 == r2
    ints = [sum(b << i for i, b in enumerate(r)) for r in rows]
    assert _accel.gf2_rank_ints(ints) == r1


def test_large_prime_fallback():
    p = 2 ** 31 - 1
    a = np.array([[1, 2, 3], [p - 1, 5, 7]], dtype=np.int64)
    r1, r2 = both(_accel.gfp_rank, a, p)
    assert r1 == r2 == 2
    subs = np.array([[0], [1], [2]], dtype=np.int64)
    f1, f2 = both(_accel.span_flags, a, p, subs)
    assert np.array_equal(f1, f2)


def test_end_to_end_under_each_backend(backend):
    from matroidiso import gmi_test, linear_iso, uniform_representation
    from matroidiso.multigraph import gen_modk_gadget
    X = gen_modk_gadget(3)
    assert gmi_test(X, X) is not None
    A = uniform_representation(3, 6, 7)
    assert linear_iso(A, A.select([5, 4, 3, 2, 1, 0])) is not None


def test_env_flag_selects_fallback():
    import os
    import subprocess
    import sys
    env = dict(os.environ, MATROIDISO_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", "from matroidiso import _accel; print(_accel.USE_NUMBA)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "False"
