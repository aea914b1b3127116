"""Instance generators: exhaustive small corpora and seeded random families."""
import random
from functools import lru_cache
from itertools import combinations

import numpy as np

from .core import InputError
from .gi import ColoredGraph, certificate
from .linear import PrimeFieldMatrix
from .multigraph import Multigraph, is_three_connected, is_two_connected


def _canon(g):
    return certificate(ColoredGraph(g))


@lru_cache(maxsize=None)
def connected_multigraphs(m):
    """All connected loopless multigraphs with exactly m edges, one per
    isomorphism class (no isolated vertices)."""
    if m == 0:
        return (Multigraph(1, []),)
    if m == 1:
        return (Multigraph(2, [(0, 1)]),)
    seen = {}
    for g in connected_multigraphs(m - 1):
        cands = [(u, v) for u, v in combinations(range(g.n), 2)]
        for u, v in cands:
            h = Multigraph(g.n, list(g.edges) + [(u, v)])
            seen.setdefault(_canon(h), h)
        for u in range(g.n):
            h = Multigraph(g.n + 1, list(g.edges) + [(u, g.n)])
            seen.setdefault(_canon(h), h)
    return tuple(seen[k] for k in sorted(seen))


def corpus(max_m):
    out = []
    for m in range(1, max_m + 1):
        out.extend(connected_multigraphs(m))
    return out


def random_multigraph(rng, n, m, simple=False, connected=False):
    """Uniform random endpoints; retries until the requested properties hold."""
    if connected and m < n - 1:
        raise InputError(f"a connected graph on {n} vertices needs at least {n - 1} edges")
    for _ in range(10_000):
        if simple:
            pairs = list(combinations(range(n), 2))
            if m > len(pairs):
                raise InputError("too many edges for a simple graph")
            edges = rng.sample(pairs, m)
        else:
            edges = [tuple(rng.sample(range(n), 2)) for _ in range(m)]
        g = Multigraph(n, edges)
        if connected and len(g.vertex_components()) != 1:
            continue
        return g
    raise RuntimeError("could not sample a graph with the requested properties")


def random_three_connected(rng, n, extra=None):
    """Random simple 3-connected graph on n >= 4 vertices."""
    while True:
        m = rng.randint((3 * n + 1) // 2, n * (n - 1) // 2) if extra is None else extra
        g = random_multigraph(rng, n, min(m, n * (n - 1) // 2), simple=True)
        if is_three_connected(g):
            return g


def relabel(rng, g):
    """Random vertex and edge relabelling (an isomorphic copy)."""
    vp = list(range(g.n))
    rng.shuffle(vp)
    ep = list(range(g.m))
    rng.shuffle(ep)
    edges = [None] * g.m
    colors = None if g.colors is None else [None] * g.m
    for i, (u, v) in enumerate(g.edges):
        edges[ep[i]] = (vp[u], vp[v])
        if colors is not None:
            colors[ep[i]] = g.colors[i]
    return Multigraph(g.n, edges, colors)


PIECES = (
    ((0, 1), (1, 2), (2, 0)),
    ((0, 1), (1, 2), (2, 3), (3, 0)),
    ((0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)),
    ((0, 1), (0, 1), (0, 1)),
    ((0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (2, 3), (3, 4), (4, 1)),
)


def random_two_sum(rng, pieces):
    """2-connected graph grown by gluing small pieces along edges; gives deep
    trees of 3-connected components."""
    edges = list(rng.choice(PIECES))
    n = 1 + max(max(e) for e in edges)
    for _ in range(pieces):
        i = rng.randrange(len(edges))
        u, v = edges[i]
        p = rng.choice(PIECES)
        pn = 1 + max(max(e) for e in p)
        j = rng.randrange(len(p))
        a, b = p[j]
        mp = {a: u, b: v}
        for x in range(pn):
            if x not in mp:
                mp[x] = n
                n += 1
        new = [(mp[x], mp[y]) for t, (x, y) in enumerate(p) if t != j]
        if rng.random() < 0.5 and len(edges) > 1:
            edges.pop(i)
        edges.extend(new)
    g = Multigraph(n, edges)
    assert is_two_connected(g)
    return g


def random_matrix(rng, rows, cols, p):
    return PrimeFieldMatrix(p, np.array([[rng.randrange(p) for _ in range(cols)] for _ in range(rows)],
                                        dtype=np.int64).reshape(rows, cols))


def make_rng(seed):
    return random.Random(seed)
