"""Reductions: bounded-rank matroids to coloured 2-isomorphism, and the
isomorphism/automorphism equivalences for graphic and linear matroids."""
from dataclasses import dataclass, field
from itertools import combinations

import numpy as np

from .core import (ENUM_LIMIT, CapacityError, InputError, IsoWitness, TableMatroid, direct_sum,
                   family_iso, from_mask, popcount)
from .gmi import gmi_test
from .linear import (LinearMatroid, PrimeFieldMatrix, colored_lmi_test, linear_circuit_masks,
                     linear_is_isomorphism, parallel_classes, zero_columns)
from .multigraph import GraphicMatroid, Multigraph, blocks, color_gadget_graphic, is_matroid_automorphism

BLUE, RED = 1, 2


# -------------------------------------------------------------- MI_b -> GMI

def _circuit_graph(M, b):
    if M.full_rank() > b:
        raise InputError(f"rank {M.full_rank()} exceeds the bound {b}")
    circ = [from_mask(c) for c in M.circuit_masks()]
    if any(len(c) == 1 for c in circ):
        raise InputError("loops have no cycle encoding; remove them first")
    edges, colors = [], []
    ends = {s: set() for s in range(M.m)}
    n = 0
    for c in circ:
        k = len(c)
        for j, s in enumerate(c):
            u, v = n + j, n + (j + 1) % k
            edges.append((u, v))
            colors.append(BLUE)
            ends[s].update((u, v))
        n += k
    for s in range(M.m):
        if not ends[s]:
            # coloop: lies in no circuit, so a lone bridge
            edges.append((n, n + 1))
            colors.append(BLUE)
            n += 2
            continue
        for u, v in combinations(sorted(ends[s]), 2):
            edges.append((u, v))
            colors.append(RED)
    return Multigraph(n, edges, colors)


def mib_to_gmi(M1, M2, b, fold=False):
    """Red/blue graphs X1, X2 with M1 ~= M2 iff X1, X2 are colour-2-isomorphic.

    Every circuit becomes a blue cycle with one edge per element, and the
    endpoints of all edges of one element are joined pairwise by red edges.
    With ``fold`` the colours are replaced by the path gadget.
    """
    X1, X2 = _circuit_graph(M1, b), _circuit_graph(M2, b)
    if fold:
        base = max(X1.n, X2.n)
        X1, X2 = color_gadget_graphic(X1, base), color_gadget_graphic(X2, base)
    return X1, X2


# ------------------------------------------------------------- group plumbing

def compose(g, h):
    """Apply h, then g."""
    return tuple(g[x] for x in h)


def inverse(g):
    out = [0] * len(g)
    for i, x in enumerate(g):
        out[x] = i
    return tuple(out)


@dataclass(frozen=True)
class OrbitPartition:
    blocks: tuple

    def block_of(self, e):
        for b in self.blocks:
            if e in b:
                return b
        raise KeyError(e)


def orbit_partition(gens, m):
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for g in gens:
        for a in range(m):
            ra, rb = find(a), find(g[a])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups = {}
    for a in range(m):
        groups.setdefault(find(a), []).append(a)
    return OrbitPartition(tuple(tuple(v) for _, v in sorted(groups.items())))


def orbit_with_words(point, gens, m):
    """Orbit of ``point`` plus, for each member f, a group element sending point to f."""
    ident = tuple(range(m))
    words = {point: ident}
    queue = [point]
    while queue:
        x = queue.pop(0)
        for g in gens:
            y = g[x]
            if y not in words:
                words[y] = compose(g, words[x])
                queue.append(y)
    return words


@dataclass
class GeneratorSet:
    """Generators of Aut(M) with the stabilizer tower that produced them."""

    m: int
    generators: list = field(default_factory=list)
    base: list = field(default_factory=list)
    transversals: list = field(default_factory=list)  # per level: {image: element}

    def order(self):
        out = 1
        for t in self.transversals:
            out *= len(t)
        return out

    def contains(self, perm):
        h = tuple(perm)
        for b, trans in zip(self.base, self.transversals):
            f = h[b]
            if f not in trans:
                return False
            h = compose(inverse(trans[f]), h)
        return h == tuple(range(self.m))

    def orbits(self):
        return orbit_partition(self.generators, self.m)

    def __iter__(self):
        return iter(self.generators)

    def __len__(self):
        return len(self.generators)


def closure_order(gens, m, limit=500_000):
    """Group order by breadth-first closure (test helper for small groups)."""
    ident = tuple(range(m))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for h in frontier:
            for g in gens:
                x = compose(g, h)
                if x not in seen:
                    seen.add(x)
                    nxt.append(x)
                    if len(seen) > limit:
                        raise CapacityError("group closure exceeds limit")
        frontier = nxt
    return len(seen)


# -------------------------------------------------------------- Auto from Iso

def _element_profiles(M, colors):
    """Colour plus sorted sizes of circuits through each element (when enumerable)."""
    if M is None or M.m > ENUM_LIMIT:
        return None
    circ = M.circuit_masks()
    out = []
    for e in range(M.m):
        out.append((colors[e], tuple(sorted(popcount(c) for c in circ if (c >> e) & 1))))
    return out


def auto_from_iso(m, iso_solver, colors=None, oracle=None):
    """Generating set of the colour-preserving automorphism group.

    ``iso_solver(c1, c2)`` answers coloured isomorphism queries between two
    colourings of the same matroid and returns an IsoWitness or None.  Base
    points are fixed one at a time by giving them unique marks; at each level
    the orbit of the base point is found by querying (base marked) against
    (candidate marked), keeping one witness per orbit point not already
    reached from earlier witnesses.
    """
    colors = [0] * m if colors is None else list(colors)
    gs = GeneratorSet(m)
    marks = [0] * m
    for level in range(m):
        free = [e for e in range(m) if marks[e] == 0]
        if not free:
            break
        b = free[0]
        cur = [(colors[e], marks[e]) for e in range(m)]
        prof = _element_profiles(oracle, cur)
        level_gens = []
        words = {b: tuple(range(m))}
        for f in free[1:]:
            if f in words:
                continue
            if prof is not None and prof[f] != prof[b]:
                continue
            c1 = list(cur)
            c2 = list(cur)
            c1[b] = (colors[b], level + 1)
            c2[f] = (colors[f], level + 1)
            w = iso_solver(c1, c2)
            if w is None:
                continue
            g = tuple(w.bijection)
            if g[b] != f:
                raise InputError("solver returned a witness that ignores the marks")
            level_gens.append(g)
            words = orbit_with_words(b, level_gens, m)
        gs.base.append(b)
        gs.transversals.append(words)
        gs.generators.extend(level_gens)
        marks[b] = level + 1
    return gs


def gma_generators(X):
    """Automorphism group generators of M(X) through coloured 2-isomorphism."""
    base_colors = list(X.colors) if X.colors is not None else [0] * X.m

    def solver(c1, c2):
        k1, k2 = _pack(c1, c2)
        return gmi_test(Multigraph(X.n, X.edges, k1), Multigraph(X.n, X.edges, k2))

    oracle = GraphicMatroid(X) if X.m <= ENUM_LIMIT else None
    gs = auto_from_iso(X.m, solver, base_colors, oracle)
    for g in gs.generators:
        if not is_matroid_automorphism(X, g):
            raise InputError("harvested generator is not an automorphism")
    return gs


def _pack(c1, c2):
    """Two colourings with arbitrary comparable labels as shared integer ranks."""
    rank = {c: i for i, c in enumerate(sorted(set(c1) | set(c2)))}
    return [rank[c] for c in c1], [rank[c] for c in c2]


def lma_generators(A, method=None):
    """Automorphism group generators of M(A) through coloured linear isomorphism.

    Uses the block-matrix colour gadget when the columns are pairwise
    non-parallel and nonzero, and coloured circuit search otherwise.
    """
    if method is None:
        method = "gadget" if not parallel_classes(A) and not zero_columns(A) else "direct"

    def solver(c1, c2):
        k1, k2 = _pack(c1, c2)
        return colored_lmi_test(A, k1, A, k2, method=method)

    oracle = LinearMatroid(A) if A.cols <= ENUM_LIMIT else None
    gs = auto_from_iso(A.cols, solver, None, oracle)
    for g in gs.generators:
        if not linear_is_isomorphism(A, A, g):
            raise InputError("harvested generator is not an automorphism")
    return gs


def oracle_generators(M):
    """Generators for an enumerable oracle (coloured circuit-family search)."""
    circ = M.circuit_masks()

    def solver(c1, c2):
        k1, k2 = _pack(c1, c2)
        return family_iso(circ, circ, M.m, k1, k2)

    return auto_from_iso(M.m, solver, None, M)


# -------------------------------------------------------------- Iso from Auto

def _components_from_circuits(m, circuits):
    parent = list(range(m))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c in circuits:
        els = from_mask(c)
        for x in els[1:]:
            ra, rb = find(els[0]), find(x)
            if ra != rb:
                parent[ra] = rb
    groups = {}
    for a in range(m):
        groups.setdefault(find(a), []).append(a)
    return sorted(tuple(v) for v in groups.values())


def connected_components(M):
    """Connected components of a matroid (element tuples)."""
    if isinstance(M, GraphicMatroid):
        return sorted(tuple(b) for b in blocks(M.graph)[0])
    if isinstance(M, LinearMatroid):
        return _components_from_circuits(M.m, linear_circuit_masks(M.A))
    return _components_from_circuits(M.m, M.circuit_masks())


def _sum_of(M1, M2):
    if isinstance(M1, GraphicMatroid) and isinstance(M2, GraphicMatroid):
        X1, X2 = M1.graph, M2.graph
        shift = X1.n
        g = Multigraph(X1.n + X2.n, list(X1.edges) + [(u + shift, v + shift) for u, v in X2.edges])
        return GraphicMatroid(g)
    if isinstance(M1, LinearMatroid) and isinstance(M2, LinearMatroid):
        if M1.A.field != M2.A.field:
            raise InputError("matrices over different fields")
        a, b = M1.A.data, M2.A.data
        data = np.zeros((a.shape[0] + b.shape[0], a.shape[1] + b.shape[1]), dtype=np.int64)
        data[:a.shape[0], :a.shape[1]] = a
        data[a.shape[0]:, a.shape[1]:] = b
        return LinearMatroid(PrimeFieldMatrix(M1.A.field, data))
    return direct_sum(M1, M2)


def default_auto_solver(M):
    if isinstance(M, GraphicMatroid):
        return gma_generators(M.graph)
    if isinstance(M, LinearMatroid):
        return lma_generators(M.A)
    if M.m > ENUM_LIMIT:
        raise CapacityError("oracle automorphisms need an enumerable ground set")
    return oracle_generators(TableMatroid(M.m, M.rank_table()))


def iso_from_auto(M1, M2, auto_solver=None):
    """Isomorphism M1 -> M2 read off Aut(M1 + M2), or None.

    The automorphism group permutes the connected components of the sum;
    M1 ~= M2 iff every component orbit holds as many components of M1 as of
    M2.  Orbit words then give, component by component, a group element
    carrying an M1 component onto an M2 component, and the cross map is
    the union of those restrictions.
    """
    if M1.m != M2.m:
        return None
    m1 = M1.m
    if m1 == 0:
        return IsoWitness.of([])
    S = _sum_of(M1, M2)
    solver = default_auto_solver if auto_solver is None else auto_solver
    gens = [tuple(g) for g in solver(S)]
    comps = connected_components(S)
    comp_of = {}
    for i, c in enumerate(comps):
        for e in c:
            comp_of[e] = i
    # induced action on components
    acts = [tuple(comp_of[g[c[0]]] for c in comps) for g in gens]
    ident = tuple(range(S.m))
    unused2 = {i for i, c in enumerate(comps) if c[0] >= m1}
    perm = [None] * m1
    done = set()
    for i, c in enumerate(comps):
        if c[0] >= m1 or i in done:
            continue
        words = {i: ident}
        queue = [i]
        while queue:
            x = queue.pop(0)
            for g, act in zip(gens, acts):
                y = act[x]
                if y not in words:
                    words[y] = compose(g, words[x])
                    queue.append(y)
        left = sorted(j for j in words if comps[j][0] < m1)
        right = sorted(j for j in words if j in unused2)
        if len(left) != len(right):
            return None
        for a, b in zip(left, right):
            # element carrying comp a to comp b: word(b) * word(a)^-1
            g = compose(words[b], inverse(words[a]))
            for e in comps[a]:
                perm[e] = g[e] - m1
            unused2.discard(b)
            done.add(a)
    if any(p is None for p in perm):
        return None
    return IsoWitness.of(perm)
