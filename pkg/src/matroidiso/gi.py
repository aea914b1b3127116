"""Coloured graph isomorphism, tree codes and 2-isomorphism of 3-connected graphs."""
from functools import lru_cache

from .core import InputError, IsoWitness
from .multigraph import Multigraph, color_gadget_graphic, is_three_connected


class ColoredGraph:
    """A multigraph with integer (or tuple) vertex and edge colours.

    Colour labels only need to be mutually comparable.
    """

    __slots__ = ("graph", "vcolors", "ecolors", "_hash")

    def __init__(self, graph, vcolors=None, ecolors=None):
        self.graph = graph
        self.vcolors = tuple([0] * graph.n if vcolors is None else vcolors)
        if ecolors is None:
            ecolors = graph.colors if graph.colors is not None else [0] * graph.m
        self.ecolors = tuple(ecolors)
        if len(self.vcolors) != graph.n or len(self.ecolors) != graph.m:
            raise InputError("colour arrays must match vertex and edge counts")
        self._hash = hash((graph.n, graph.edges, self.vcolors, self.ecolors))

    @property
    def n(self):
        return self.graph.n

    @property
    def m(self):
        return self.graph.m

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (isinstance(other, ColoredGraph) and self.graph.n == other.graph.n
                and self.graph.edges == other.graph.edges
                and self.vcolors == other.vcolors and self.ecolors == other.ecolors)

    def __repr__(self):
        return f"ColoredGraph(n={self.n}, m={self.m})"


# ---------------------------------------------------------------- refinement

def _adjacency(G):
    """Per vertex: list of (neighbour, sorted tuple of parallel edge colours)."""
    nb = [dict() for _ in range(G.n)]
    for (u, v), c in zip(G.graph.edges, G.ecolors):
        nb[u].setdefault(v, []).append(c)
        nb[v].setdefault(u, []).append(c)
    return [[(w, tuple(sorted(cs))) for w, cs in d.items()] for d in nb]


def _ranks(keys):
    order = {k: i for i, k in enumerate(sorted(set(keys)))}
    return [order[k] for k in keys]


def _refine(adj, cells, edge_rank):
    """Equitable refinement; ``cells`` is a list of vertex cell indices."""
    count = len(set(cells))
    while True:
        sig = [(cells[v], tuple(sorted((cells[w], edge_rank[c]) for w, c in adj[v])))
               for v in range(len(adj))]
        new = _ranks(sig)
        new_count = len(set(new))
        cells = new
        if new_count == count:
            return cells
        count = new_count


def _target_cell(cells):
    sizes = {}
    for v, c in enumerate(cells):
        sizes.setdefault(c, []).append(v)
    best = None
    for c in sorted(sizes):
        if len(sizes[c]) > 1 and (best is None or len(sizes[c]) < len(sizes[best])):
            best = c
    return None if best is None else sizes[best]


def _individualize(cells, v):
    # v gets a cell just below its old one; ranks stay canonical
    return [2 * c + (0 if w == v else 1) if c == cells[v] else 2 * c for w, c in enumerate(cells)]


class _Orbits:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        a, b = self.find(a), self.find(b)
        if a != b:
            self.parent[max(a, b)] = min(a, b)


def _certificate(G, labeling):
    inv = [0] * G.n
    for v, lab in enumerate(labeling):
        inv[lab] = v
    vc = tuple(G.vcolors[inv[i]] for i in range(G.n))
    edges = sorted(
        (min(labeling[u], labeling[v]), max(labeling[u], labeling[v]), c)
        for (u, v), c in zip(G.graph.edges, G.ecolors)
    )
    return (G.n, vc, tuple(edges))


@lru_cache(maxsize=8192)
def canonical_form(G):
    """(certificate, labeling) with labeling[v] the canonical position of v.

    Two coloured graphs are isomorphic iff their certificates are equal.
    """
    n = G.n
    if n == 0:
        return (0, (), ()), ()
    adj = _adjacency(G)
    all_keys = sorted({c for row in adj for _, c in row})
    edge_rank = {k: i for i, k in enumerate(all_keys)}
    start = _refine(adj, _ranks(list(G.vcolors)), edge_rank)
    best = [None, None]
    autos = []

    def perm_from(lab_a, lab_b):
        # automorphism sending the vertex at position i of leaf a to that of leaf b
        inv_b = [0] * n
        for v, lab in enumerate(lab_b):
            inv_b[lab] = v
        return [inv_b[lab_a[v]] for v in range(n)]

    def search(cells, prefix):
        target = _target_cell(cells)
        if target is None:
            cert = _certificate(G, cells)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, list(cells)
            elif cert == best[0]:
                autos.append(perm_from(best[1], cells))
            return
        done = []
        for v in target:
            if done:
                orb = _Orbits(n)
                for g in autos:
                    if all(g[p] == p for p in prefix):
                        for a in range(n):
                            orb.union(a, g[a])
                if any(orb.find(v) == orb.find(w) for w in done):
                    continue
            search(_refine(adj, _individualize(cells, v), edge_rank), prefix + [v])
            done.append(v)

    search(start, [])
    return best[0], tuple(best[1])


def certificate(G):
    return canonical_form(G)[0]


def graph_isomorphism(G1, G2):
    """Colour-preserving vertex bijection (list, G1 vertex -> G2 vertex) or None."""
    if G1.n != G2.n or G1.m != G2.m:
        return None
    if sorted(G1.vcolors) != sorted(G2.vcolors) or sorted(G1.ecolors) != sorted(G2.ecolors):
        return None
    c1, l1 = canonical_form(G1)
    c2, l2 = canonical_form(G2)
    if c1 != c2:
        return None
    inv2 = [0] * G2.n
    for v, lab in enumerate(l2):
        inv2[lab] = v
    return [inv2[l1[v]] for v in range(G1.n)]


def is_graph_isomorphism(G1, G2, vmap):
    """Post-hoc witness check: colours and edge multisets match exactly."""
    if G1.n != G2.n or sorted(vmap) != list(range(G2.n)):
        return False
    if any(G1.vcolors[v] != G2.vcolors[vmap[v]] for v in range(G1.n)):
        return False
    e1 = sorted((min(vmap[u], vmap[v]), max(vmap[u], vmap[v]), c)
                for (u, v), c in zip(G1.graph.edges, G1.ecolors))
    e2 = sorted((min(u, v), max(u, v), c) for (u, v), c in zip(G2.graph.edges, G2.ecolors))
    return e1 == e2


def edge_map(G1, G2, vmap):
    """Edge bijection induced by a vertex isomorphism; parallel edges of equal
    colour are paired in id order."""
    buckets = {}
    for i, ((u, v), c) in enumerate(zip(G2.graph.edges, G2.ecolors)):
        buckets.setdefault((frozenset((u, v)), c), []).append(i)
    out = []
    taken = {}
    for (u, v), c in zip(G1.graph.edges, G1.ecolors):
        key = (frozenset((vmap[u], vmap[v])), c)
        idx = taken.get(key, 0)
        out.append(buckets[key][idx])
        taken[key] = idx + 1
    return out


# ---------------------------------------------------------------- tree codes

def _tree_adj(n, edges):
    if len(edges) != max(n - 1, 0):
        raise InputError("not a tree: wrong edge count")
    adj = [[] for _ in range(n)]
    for u, v in edges:
        adj[u].append(v)
        adj[v].append(u)
    seen = {0} if n else set()
    stack = [0] if n else []
    while stack:
        x = stack.pop()
        for y in adj[x]:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    if len(seen) != n:
        raise InputError("not a tree: disconnected")
    return adj


def tree_centers(n, edges):
    adj = _tree_adj(n, edges)
    if n <= 2:
        return list(range(n))
    deg = [len(a) for a in adj]
    layer = [v for v in range(n) if deg[v] == 1]
    left = n
    while left > 2:
        left -= len(layer)
        nxt = []
        for v in layer:
            for w in adj[v]:
                deg[w] -= 1
                if deg[w] == 1:
                    nxt.append(w)
        layer = nxt
    return sorted(layer)


def _color_bytes(c):
    b = repr(c).encode()
    return str(len(b)).encode() + b"#" + b


def rooted_tree_code(n, edges, colors, root, avoid=None):
    """AHU code of the subtree at ``root`` (not entering ``avoid``)."""
    adj = _tree_adj(n, edges)
    order = []
    parent = {root: avoid}
    stack = [root]
    while stack:
        x = stack.pop()
        order.append(x)
        for y in adj[x]:
            if y != parent[x]:
                parent[y] = x
                stack.append(y)
    code = {}
    for x in reversed(order):
        kids = sorted(code[y] for y in adj[x] if y != parent[x])
        code[x] = b"(" + _color_bytes(colors[x]) + b"".join(kids) + b")"
    return code[root]


def tree_code(n, edges, colors=None):
    """Centre-rooted AHU code with node colours; equal codes iff the coloured
    trees are isomorphic."""
    colors = [0] * n if colors is None else list(colors)
    if n == 0:
        return b"()"
    centers = tree_centers(n, edges)
    if len(centers) == 1:
        return rooted_tree_code(n, edges, colors, centers[0])
    a, b = centers
    ca = rooted_tree_code(n, edges, colors, a, avoid=b)
    cb = rooted_tree_code(n, edges, colors, b, avoid=a)
    return b"[" + b"".join(sorted((ca, cb))) + b"]"


# ---------------------------------------------------- 3-connected 2-isomorphism

def normalize_edge_colors(*graphs):
    """Map the union of edge colour labels onto 1..k."""
    labels = sorted({c for g in graphs for c in g.ecolors})
    rank = {c: i + 1 for i, c in enumerate(labels)}
    return [[rank[c] for c in g.ecolors] for g in graphs]


def gadget_graph(G, colors, base):
    g = Multigraph(G.n, G.graph.edges, colors)
    return ColoredGraph(color_gadget_graphic(g, base))


def colored_3conn_2iso(C1, C2, check=True):
    """Colour-preserving 2-isomorphism of 3-connected coloured graphs.

    Edge colours are encoded by the path gadget and the question is handed
    to graph isomorphism (for 3-connected graphs 2-isomorphism is
    isomorphism).  Returns an IsoWitness on edge ids or None.
    """
    if check:
        for C in (C1, C2):
            if not is_three_connected(C.graph):
                raise InputError("colored_3conn_2iso needs 3-connected inputs")
    if C1.m != C2.m or C1.n != C2.n:
        return None
    k1, k2 = normalize_edge_colors(C1, C2)
    base = max(C1.n, C2.n)
    g1 = gadget_graph(C1, k1, base)
    g2 = gadget_graph(C2, k2, base)
    vmap = graph_isomorphism(g1, g2)
    if vmap is None:
        return None
    n = C1.n
    lookup = {}
    for i, ((u, v), c) in enumerate(zip(C2.graph.edges, k2)):
        lookup[(frozenset((u, v)), c)] = i
    perm = []
    for (u, v), c in zip(C1.graph.edges, k1):
        if vmap[u] >= n or vmap[v] >= n:
            return None
        j = lookup.get((frozenset((vmap[u], vmap[v])), c))
        if j is None:
            return None
        perm.append(j)
    return IsoWitness.of(perm)


def family_certificate(m, circuits, colors=None):
    """Canonical certificate of a (coloured) circuit family on ground set
    0..m-1: equal exactly when the families are isomorphic by a
    colour-preserving bijection.

    Elements with the same colour and the same circuits are interchangeable,
    so each such twin class becomes one vertex weighted by its size; the
    certificate is taken on the class/circuit incidence graph.
    """
    colors = [0] * m if colors is None else list(colors)
    circuits = list(circuits)
    incidence = [[] for _ in range(m)]
    for i, c in enumerate(circuits):
        e = 0
        while c:
            if c & 1:
                incidence[e].append(i)
            c >>= 1
            e += 1
    classes = {}
    for e in range(m):
        key = (colors[e], tuple(incidence[e]))
        classes[key] = classes.get(key, 0) + 1
    keys = sorted(classes, key=repr)
    edges = [(j, len(keys) + i) for j, k in enumerate(keys) for i in k[1]]
    g = Multigraph(len(keys) + len(circuits), edges)
    vcol = [(0, repr(k[0]), classes[k]) for k in keys] + [(1, "", 0)] * len(circuits)
    return certificate(ColoredGraph(g, vcol))
