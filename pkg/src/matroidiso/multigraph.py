"""Multigraphs, graphic matroids, the cycle space and Whitney's operations."""
import random
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _accel
from .core import InputError, IsoWitness, MatroidOracle, popcount


class Multigraph:
    """Loopless multigraph on vertices ``0..n-1``; edge ``i`` is ``edges[i]``.

    ``colors`` is either None or one integer per edge.  Instances are
    immutable and hashable so derived structures can be cached per graph.
    """

    __slots__ = ("n", "edges", "colors", "_hash")

    def __init__(self, n, edges, colors=None):
        n = int(n)
        edges = tuple((int(u), int(v)) for u, v in edges)
        for i, (u, v) in enumerate(edges):
            if u == v:
                raise InputError(f"edge {i} is a self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise InputError(f"edge {i} = ({u}, {v}) has an endpoint outside 0..{n - 1}")
        if colors is not None:
            colors = tuple(int(c) for c in colors)
            if len(colors) != len(edges):
                raise InputError("need exactly one colour per edge")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "colors", colors)
        object.__setattr__(self, "_hash", hash((n, edges, colors)))

    def __setattr__(self, key, value):
        raise AttributeError("Multigraph is immutable")

    @property
    def m(self):
        return len(self.edges)

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, Multigraph) and self.n == other.n
                and self.edges == other.edges and self.colors == other.colors)

    def __repr__(self):
        return f"Multigraph(n={self.n}, m={self.m}{', coloured' if self.colors else ''})"

    def color(self, e):
        return 0 if self.colors is None else self.colors[e]

    def with_colors(self, colors):
        return Multigraph(self.n, self.edges, colors)

    def incidence(self):
        """vertex -> list of (edge id, other endpoint)."""
        inc = [[] for _ in range(self.n)]
        for i, (u, v) in enumerate(self.edges):
            inc[u].append((i, v))
            inc[v].append((i, u))
        return inc

    def degree(self, v):
        return sum(1 for u, w in self.edges if u == v or w == v)

    def degrees(self):
        deg = [0] * self.n
        for u, v in self.edges:
            deg[u] += 1
            deg[v] += 1
        return deg

    def vertex_components(self, removed=()):
        """Connected components (vertex lists) of the graph minus ``removed``."""
        removed = set(removed)
        inc = self.incidence()
        seen = set(removed)
        comps = []
        for s in range(self.n):
            if s in seen:
                continue
            seen.add(s)
            comp = [s]
            stack = [s]
            while stack:
                x = stack.pop()
                for _, y in inc[x]:
                    if y not in seen:
                        seen.add(y)
                        comp.append(y)
                        stack.append(y)
            comps.append(sorted(comp))
        return comps

    def edge_subgraph(self, edge_ids):
        """Subgraph on the given edges, vertices relabelled densely.

        Returns (graph, vertex map old->new, list of original edge ids).
        """
        edge_ids = list(edge_ids)
        verts = sorted({x for e in edge_ids for x in self.edges[e]})
        vmap = {v: i for i, v in enumerate(verts)}
        colors = None if self.colors is None else [self.colors[e] for e in edge_ids]
        g = Multigraph(len(verts), [(vmap[self.edges[e][0]], vmap[self.edges[e][1]]) for e in edge_ids], colors)
        return g, vmap, edge_ids


def _find(parent, a):
    while parent[a] != a:
        parent[a] = parent[parent[a]]
        a = parent[a]
    return a


class GraphicMatroid(MatroidOracle):
    """M(X): forests are the independent sets."""

    def __init__(self, graph):
        self.graph = graph
        self.m = graph.m

    def _independent_mask(self, mask):
        parent = list(range(self.graph.n))
        e = 0
        while mask:
            if mask & 1:
                u, v = self.graph.edges[e]
                a, b = _find(parent, u), _find(parent, v)
                if a == b:
                    return False
                parent[a] = b
            mask >>= 1
            e += 1
        return True

    def rank_mask(self, mask):
        parent = list(range(self.graph.n))
        r = 0
        e = 0
        while mask:
            if mask & 1:
                u, v = self.graph.edges[e]
                a, b = _find(parent, u), _find(parent, v)
                if a != b:
                    parent[a] = b
                    r += 1
            mask >>= 1
            e += 1
        return r

    def _compute_rank_table(self):
        us = [u for u, _ in self.graph.edges]
        vs = [v for _, v in self.graph.edges]
        return _accel.graphic_rank_table(us, vs, self.graph.n)


def graphic_oracle(X):
    return GraphicMatroid(X)


# ------------------------------------------------------------ connectivity

def blocks(X):
    """Biconnected components as lists of edge ids, plus the cut vertices.

    Iterative Tarjan lowpoint search keyed on edge ids, so parallel edges
    form 2-connected blocks and bridges come out as single-edge blocks.
    """
    inc = X.incidence()
    disc = [-1] * X.n
    low = [0] * X.n
    out = []
    cut = set()
    timer = 0
    for root in range(X.n):
        if disc[root] >= 0 or not inc[root]:
            continue
        disc[root] = low[root] = timer
        timer += 1
        edge_stack = []
        stack = [(root, -1, iter(inc[root]))]
        root_children = 0
        while stack:
            v, pe, it = stack[-1]
            advanced = False
            for eid, w in it:
                if eid == pe:
                    continue
                if disc[w] < 0:
                    edge_stack.append(eid)
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, eid, iter(inc[w])))
                    if v == root:
                        root_children += 1
                    advanced = True
                    break
                if disc[w] < disc[v]:
                    edge_stack.append(eid)
                    low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                p = stack[-1][0]
                low[p] = min(low[p], low[v])
                if low[v] >= disc[p]:
                    comp = []
                    while True:
                        e = edge_stack.pop()
                        comp.append(e)
                        if e == pe:
                            break
                    out.append(sorted(comp))
                    if p != root:
                        cut.add(p)
        if root_children > 1:
            cut.add(root)
    return out, sorted(cut)


def is_two_connected(X):
    """Connected on its non-isolated vertices, at least two edges, no cut vertex."""
    if X.m < 2:
        return False
    bl, _ = blocks(X)
    return len(bl) == 1


def separation_classes(X, a, b):
    """Edge classes of {a, b}: each a-b edge alone, plus one class per
    component of X - {a, b} (edges touching that component)."""
    classes = []
    comp_of = {}
    for idx, comp in enumerate(X.vertex_components(removed=(a, b))):
        for v in comp:
            comp_of[v] = idx
    grouped = {}
    for i, (u, v) in enumerate(X.edges):
        if {u, v} == {a, b}:
            classes.append([i])
            continue
        w = u if u not in (a, b) else v
        grouped.setdefault(comp_of[w], []).append(i)
    classes.extend(grouped[k] for k in sorted(grouped))
    return classes


def is_three_connected(X):
    """Simple, at least 4 vertices, connected, and no vertex pair separates it."""
    verts = {x for e in X.edges for x in e}
    if len(verts) < 4 or len(verts) != X.n:
        return False
    if len({frozenset(e) for e in X.edges}) != X.m:
        return False
    if len(X.vertex_components()) != 1:
        return False
    for a, b in combinations(range(X.n), 2):
        if len(X.vertex_components(removed=(a, b))) > 1:
            return False
    return True


def separating_pairs(X):
    """Vertex pairs whose removal disconnects the component that holds them."""
    out = []
    for comp in X.vertex_components():
        for a, b in combinations(comp, 2):
            rest = [c for c in X.vertex_components(removed=(a, b)) if set(c) <= set(comp)]
            if len(rest) > 1:
                out.append((a, b))
    return out


# -------------------------------------------------------------- cycle space

@dataclass(frozen=True)
class CycleBasis:
    vectors: tuple  # GF(2) vectors as int bitmasks over edge ids
    m: int

    def __len__(self):
        return len(self.vectors)

    def as_array(self):
        arr = np.zeros((len(self.vectors), self.m), dtype=np.uint8)
        for i, v in enumerate(self.vectors):
            for j in range(self.m):
                arr[i, j] = (v >> j) & 1
        return arr


def cycle_basis(X):
    """Fundamental cycles of a DFS spanning forest, one per non-tree edge."""
    inc = X.incidence()
    parent_edge = [-1] * X.n
    parent = [-1] * X.n
    depth = [-1] * X.n
    tree = set()
    for root in range(X.n):
        if depth[root] >= 0:
            continue
        depth[root] = 0
        stack = [root]
        while stack:
            v = stack.pop()
            for eid, w in inc[v]:
                if depth[w] < 0:
                    depth[w] = depth[v] + 1
                    parent[w] = v
                    parent_edge[w] = eid
                    tree.add(eid)
                    stack.append(w)
    vectors = []
    for eid, (u, v) in enumerate(X.edges):
        if eid in tree:
            continue
        vec = 1 << eid
        a, b = u, v
        while a != b:
            if depth[a] < depth[b]:
                a, b = b, a
            vec ^= 1 << parent_edge[a]
            a = parent[a]
        vectors.append(vec)
    return CycleBasis(tuple(vectors), X.m)


def in_cycle_space(X, vec):
    """Every vertex has even degree in the edge set ``vec``."""
    parity = [0] * X.n
    e = 0
    while vec:
        if vec & 1:
            u, v = X.edges[e]
            parity[u] ^= 1
            parity[v] ^= 1
        vec >>= 1
        e += 1
    return not any(parity)


def permute_vector(vec, perm):
    out = 0
    e = 0
    while vec:
        if vec & 1:
            out |= 1 << perm[e]
        vec >>= 1
        e += 1
    return out


def is_matroid_automorphism(X, perm, method="cycle-space"):
    """Membership test for Aut(M(X)) through one cycle basis.

    ``perm[e]`` is the image of edge ``e``.  The default method checks that
    every permuted basis vector lies in the cycle space (rank is preserved
    by a coordinate permutation).  ``method="system"`` instead builds the
    full GF(2) system b'_ij = sum_k x_ik b_kj in l*l unknowns and tests
    solvability.
    """
    perm = [int(p) for p in perm]
    if len(perm) != X.m:
        raise InputError(f"permutation has length {len(perm)}, graph has {X.m} edges")
    if sorted(perm) != list(range(X.m)):
        raise InputError("not a permutation of the edge ids")
    basis = cycle_basis(X)
    images = [permute_vector(b, perm) for b in basis.vectors]
    if method == "cycle-space":
        return all(in_cycle_space(X, v) for v in images)
    if method != "system":
        raise InputError(f"unknown method {method!r}")
    ell, m = len(basis), X.m
    if ell == 0:
        return True
    a = np.zeros((ell * m, ell * ell + 1), dtype=np.uint8)
    for i in range(ell):
        for j in range(m):
            row = i * m + j
            for k in range(ell):
                a[row, i * ell + k] = (basis.vectors[k] >> j) & 1
            a[row, -1] = (images[i] >> j) & 1
    return _accel.gf2_rank(a[:, :-1]) == _accel.gf2_rank(a)


def induced_edge_permutation(X, vertex_map):
    """Edge permutation induced by a vertex automorphism (parallel classes
    matched in id order)."""
    buckets = {}
    for i, (u, v) in enumerate(X.edges):
        buckets.setdefault(frozenset((u, v)), []).append(i)
    perm = [None] * X.m
    for key, ids in buckets.items():
        u, v = tuple(key)
        target = buckets.get(frozenset((vertex_map[u], vertex_map[v])))
        if target is None or len(target) != len(ids):
            raise InputError("vertex map is not an automorphism")
        for a, b in zip(ids, target):
            perm[a] = b
    return perm


# --------------------------------------------------------- Whitney operations

def whitney_identify(X, v, w):
    """Merge vertex ``w`` into ``v`` (they must lie in distinct components)."""
    comps = X.vertex_components()
    comp_of = {x: i for i, c in enumerate(comps) for x in c}
    if v == w or comp_of[v] == comp_of[w]:
        raise InputError(f"vertices {v} and {w} are not in distinct components")
    relabel = {}
    for x in range(X.n):
        if x == w:
            relabel[x] = v if v < w else v - 1
        else:
            relabel[x] = x if x < w else x - 1
    return Multigraph(X.n - 1, [(relabel[a], relabel[b]) for a, b in X.edges], X.colors)


def whitney_cleave(X, v, part):
    """Split cut vertex ``v``: edges of the blocks in ``part`` move to a new vertex.

    ``part`` must be the union of a nonempty proper subset of the blocks
    through ``v`` (given as edge ids).
    """
    part = set(int(e) for e in part)
    bl, _ = blocks(X)
    at_v = [set(b) for b in bl if any(v in X.edges[e] for e in b)]
    if len(at_v) < 2:
        raise InputError(f"vertex {v} is not a cut vertex")
    chosen = [b for b in at_v if b & part]
    if not chosen or any(not b <= part for b in chosen) or set().union(*chosen) != part:
        raise InputError("part must be a union of whole blocks through the vertex")
    if len(chosen) == len(at_v):
        raise InputError("part must leave at least one block at the vertex")
    new = X.n
    edges = []
    for i, (a, b) in enumerate(X.edges):
        if i in part:
            a = new if a == v else a
            b = new if b == v else b
        edges.append((a, b))
    return Multigraph(X.n + 1, edges, X.colors)


def whitney_twist(X, u, v, side):
    """Twist about {u, v}: swap u and v on every edge touching ``side``.

    ``side`` must be a nonempty union of components of X - {u, v}, and some
    edge must remain outside it.
    """
    side = set(int(x) for x in side)
    if u == v or u in side or v in side or not side:
        raise InputError("side must be a nonempty vertex set avoiding u and v")
    comps = [set(c) for c in X.vertex_components(removed=(u, v))]
    chosen = [c for c in comps if c & side]
    if any(not c <= side for c in chosen):
        raise InputError("side is not a union of components of X - {u, v}")
    touching = [i for i, (a, b) in enumerate(X.edges) if a in side or b in side]
    if len(touching) == X.m or not touching:
        raise InputError(f"{{{u}, {v}}} does not separate the given side")
    swap = {u: v, v: u}
    edges = []
    for a, b in X.edges:
        if a in side or b in side:
            a = swap.get(a, a)
            b = swap.get(b, b)
        edges.append((a, b))
    return Multigraph(X.n, edges, X.colors)


def _twist_candidates(X):
    out = []
    for a, b in combinations(range(X.n), 2):
        comps = [c for c in X.vertex_components(removed=(a, b))
                 if any((x in c and (y in (a, b))) or (y in c and x in (a, b)) for x, y in X.edges)]
        if len(comps) >= 2 or (len(comps) == 1 and any({x, y} == {a, b} for x, y in X.edges)):
            out.append((a, b, comps))
    return out


def apply_op(X, line):
    """Apply one operation-log line and return the new graph."""
    parts = line.split()
    kind = parts[0]
    if kind == "skip":
        return X
    if kind == "twist":
        return whitney_twist(X, int(parts[1]), int(parts[2]), [int(t) for t in parts[3].split(",")])
    if kind == "cleave":
        return whitney_cleave(X, int(parts[1]), [int(t) for t in parts[2].split(",")])
    if kind == "identify":
        return whitney_identify(X, int(parts[1]), int(parts[2]))
    if kind == "permute-vertices":
        labels = [int(t) for t in parts[1:]]
        return Multigraph(X.n, [(labels[a], labels[b]) for a, b in X.edges], X.colors)
    if kind == "permute-edges":
        labels = [int(t) for t in parts[1:]]
        edges = [None] * X.m
        colors = None if X.colors is None else [None] * X.m
        for i, e in enumerate(X.edges):
            edges[labels[i]] = e
            if colors is not None:
                colors[labels[i]] = X.colors[i]
        return Multigraph(X.n, edges, colors)
    raise InputError(f"unknown operation {kind!r}")


def replay(X, log):
    for line in log:
        X = apply_op(X, line)
    return X


def random_2iso_pair(X, ops=None, seed=0, relabel=False):
    """Apply ``ops`` random Whitney operations; returns (graph, log lines).

    The default budget is n - 2 operations.  With ``relabel`` the result is
    finally shuffled by a random vertex and edge relabelling (also logged),
    so the identity edge map stops being the witness.
    """
    rng = random.Random(seed)
    ops = max(X.n - 2, 0) if ops is None else ops
    log = []
    for _ in range(ops):
        kind = rng.choice(("twist", "cleave", "identify"))
        line = None
        if kind == "twist":
            cands = _twist_candidates(X)
            if cands:
                a, b, comps = rng.choice(cands)
                k = rng.randint(1, max(1, len(comps) - 1)) if len(comps) > 1 else 1
                chosen = rng.sample(comps, k)
                side = sorted(x for c in chosen for x in c)
                line = f"twist {a} {b} {','.join(map(str, side))}"
        elif kind == "cleave":
            bl, cut = blocks(X)
            if cut:
                v = rng.choice(cut)
                at_v = [b for b in bl if any(v in X.edges[e] for e in b)]
                k = rng.randint(1, len(at_v) - 1)
                part = sorted(e for b in rng.sample(at_v, k) for e in b)
                line = f"cleave {v} {','.join(map(str, part))}"
        else:
            comps = [c for c in X.vertex_components() if any(X.degree(x) for x in c)]
            if len(comps) >= 2:
                c1, c2 = rng.sample(comps, 2)
                v = rng.choice([x for x in c1 if X.degree(x)])
                w = rng.choice([x for x in c2 if X.degree(x)])
                line = f"identify {v} {w}"
        if line is None:
            line = f"skip {kind}"
        else:
            try:
                X = apply_op(X, line)
            except InputError:
                line = f"skip {kind}"
        log.append(line)
    if relabel:
        vperm = list(range(X.n))
        rng.shuffle(vperm)
        eperm = list(range(X.m))
        rng.shuffle(eperm)
        for line in (f"permute-vertices {' '.join(map(str, vperm))}",
                     f"permute-edges {' '.join(map(str, eperm))}"):
            X = apply_op(X, line)
            log.append(line)
    return X, log


def log_edge_map(m, log):
    """Edge map from the original ids to the ids after replaying ``log``."""
    cur = list(range(m))
    for line in log:
        if line.startswith("permute-edges"):
            labels = [int(t) for t in line.split()[1:]]
            cur = [labels[c] for c in cur]
    return cur


# ------------------------------------------------------------------ gadgets

def color_gadget_graphic(X, base=None):
    """Encode edge colours by parallel paths.

    Every edge ``e = (u, v)`` with colour ``c`` gets a fresh u-v path of
    length ``base + c``; ``base`` defaults to the vertex count and must be
    at least the longest cycle of every graph being compared.  The result
    is uncoloured; original edges keep their ids.
    """
    if X.colors is None:
        return Multigraph(X.n, X.edges)
    if any(c <= 0 for c in X.colors):
        raise InputError("gadget colours must be positive integers")
    base = X.n if base is None else int(base)
    n = X.n
    edges = list(X.edges)
    for (u, v), c in zip(X.edges, X.colors):
        length = base + c
        prev = u
        for _ in range(length - 1):
            edges.append((prev, n))
            prev = n
            n += 1
        edges.append((prev, v))
    return Multigraph(n, edges)


def gen_modk_gadget(k):
    """X(k): vertices x_i, y_j, z_t, u_{i,j}; edges x_i-u_ij, y_j-u_ij, u_ij-z_{i+j mod k}.

    Vertex ids: x_i = i, y_j = k + j, z_t = 2k + t, u_{i,j} = 3k + i*k + j.
    Edge ids: all x-edges (i-major), then y-edges, then z-edges.
    """
    if k < 3:
        raise InputError("X(k) needs k >= 3")
    u = lambda i, j: 3 * k + i * k + j
    edges = [(i, u(i, j)) for i in range(k) for j in range(k)]
    edges += [(k + j, u(i, j)) for i in range(k) for j in range(k)]
    edges += [(u(i, j), 2 * k + (i + j) % k) for i in range(k) for j in range(k)]
    return Multigraph(3 * k + k * k, edges)


def modk_shift(k, a, b):
    """Edge permutation of X(k) induced by x_i->x_{i+a}, y_j->y_{j+b}, z_t->z_{t+a+b}."""
    vmap = {}
    for i in range(k):
        vmap[i] = (i + a) % k
        vmap[k + i] = k + (i + b) % k
        vmap[2 * k + i] = 2 * k + (i + a + b) % k
        for j in range(k):
            vmap[3 * k + i * k + j] = 3 * k + ((i + a) % k) * k + (j + b) % k
    return induced_edge_permutation(gen_modk_gadget(k), vmap)


def brute_force_automorphism_check(X, perm):
    """Reference check: does ``perm`` map the circuit family onto itself?"""
    M = GraphicMatroid(X)
    return IsoWitness.of(perm).validate(M, M)


def circuit_count_by_size(X):
    M = GraphicMatroid(X)
    out = {}
    for c in M.circuit_masks():
        out[popcount(c)] = out.get(popcount(c), 0) + 1
    return out


def is_2isomorphism(X1, X2, perm):
    """Does edge map ``perm`` carry the cycle space of X1 onto that of X2?

    Equal cycle-space dimension plus every permuted basis cycle being a
    cycle of X2 is equivalent to circuit preservation.
    """
    if X1.m != X2.m or len(perm) != X1.m or sorted(perm) != list(range(X2.m)):
        return False
    b1 = cycle_basis(X1)
    if len(b1) != len(cycle_basis(X2)):
        return False
    return all(in_cycle_space(X2, permute_vector(b, perm)) for b in b1.vectors)
