"""Blocks, the tree of 3-connected components, and excised-pair surgery.

Components keep the vertex ids of the input graph.  Real edges keep their
ids; virtual edges get negative ids and come in twin pairs, one in each
of two adjacent components.
"""
from dataclasses import dataclass, field
from functools import lru_cache

from .core import InputError, IntegrityError
from .multigraph import Multigraph, blocks, is_three_connected, is_two_connected

TRICONNECTED = "triconnected"
BOND = "bond"
POLYGON = "polygon"


def biconnected_components(X):
    """(blocks as sorted edge-id lists, cut vertices)."""
    return blocks(X)


@dataclass
class DecompositionTree:
    n: int
    m: int
    kinds: list
    edges: list  # per node: list of (u, v, id)
    twin: dict
    owner: dict
    excised: list = field(default_factory=list)
    surgery_edges: list = field(default_factory=list)

    def __len__(self):
        return len(self.kinds)

    def links(self):
        out = []
        for v, w in sorted(self.twin.items(), reverse=True):
            if v > w:  # each pair once; ids are negative
                out.append((self.owner[v], v, self.owner[w], w))
        return sorted(out)

    def neighbours(self):
        adj = [[] for _ in self.kinds]
        for a, va, b, vb in self.links():
            adj[a].append((b, va, vb))
            adj[b].append((a, vb, va))
        return adj

    def real_edges(self, i):
        return [e for e in self.edges[i] if e[2] >= 0]

    def virtual_edges(self, i):
        return [e for e in self.edges[i] if e[2] < 0]

    def component_graph(self, i):
        """Node ``i`` as a standalone multigraph.

        Returns (graph, vertex list, edge id list) where the graph's vertex j
        is ``vertex list[j]`` and its edge k is edge id ``edge id list[k]``.
        """
        es = self.edges[i]
        verts = sorted({x for u, v, _ in es for x in (u, v)})
        vmap = {v: j for j, v in enumerate(verts)}
        g = Multigraph(len(verts), [(vmap[u], vmap[v]) for u, v, _ in es])
        return g, verts, [e for _, _, e in es]

    def node_signature(self):
        return sorted((k, len(es)) for k, es in zip(self.kinds, self.edges))

    def dump(self):
        lines = []
        for i, (k, es) in enumerate(zip(self.kinds, self.edges)):
            toks = [f"{_edge_token(e)}={u}-{v}" for u, v, e in es]
            lines.append(f"node {i} {k} {' '.join(toks)}")
        for a, va, b, vb in self.links():
            lines.append(f"link {a} {_edge_token(va)} {b} {_edge_token(vb)}")
        return "\n".join(lines) + "\n"


def _edge_token(e):
    return f"v{-e - 1}" if e < 0 else str(e)


def _parse_edge_token(tok):
    return -int(tok[1:]) - 1 if tok.startswith("v") else int(tok)


def load_tree(text, n, m):
    """Inverse of :meth:`DecompositionTree.dump`."""
    kinds, edges, twin = [], [], {}
    for lineno, line in enumerate(text.splitlines(), 1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] == "node":
            kinds.append(parts[2])
            es = []
            for tok in parts[3:]:
                name, ends = tok.split("=")
                u, v = ends.split("-")
                es.append((int(u), int(v), _parse_edge_token(name)))
            edges.append(es)
        elif parts[0] == "link":
            va, vb = _parse_edge_token(parts[2]), _parse_edge_token(parts[4])
            twin[va], twin[vb] = vb, va
        else:
            raise InputError(f"line {lineno}: unknown record {parts[0]!r}")
    owner = {e: i for i, es in enumerate(edges) for _, _, e in es if e < 0}
    return DecompositionTree(n, m, kinds, edges, twin, owner)


# ------------------------------------------------------------------ splitting

def _vertices(es):
    return sorted({x for u, v, _ in es for x in (u, v)})


def _is_cycle(es):
    deg = {}
    for u, v, _ in es:
        deg[u] = deg.get(u, 0) + 1
        deg[v] = deg.get(v, 0) + 1
    return all(d == 2 for d in deg.values())


def _classes_at(es, a, b):
    """Separation classes of {a, b} in the component ``es`` (edge index lists)."""
    verts = [x for x in _vertices(es) if x not in (a, b)]
    parent = {x: x for x in verts}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v, _ in es:
        if u in parent and v in parent:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[ru] = rv
    direct, grouped = [], {}
    for idx, (u, v, _) in enumerate(es):
        if {u, v} == {a, b}:
            direct.append([idx])
        else:
            w = u if u in parent else v
            grouped.setdefault(find(w), []).append(idx)
    return direct, [grouped[k] for k in sorted(grouped, key=lambda k: grouped[k][0])]


def _find_split(es):
    """A split (a, b, edge indices of one side) or None if ``es`` is final."""
    verts = _vertices(es)
    if len(verts) == 2 or _is_cycle(es):
        return None
    pairs = {}
    for idx, (u, v, _) in enumerate(es):
        pairs.setdefault(frozenset((u, v)), []).append(idx)
    for key in sorted(pairs, key=lambda k: pairs[k][0]):
        if len(pairs[key]) >= 2:
            a, b = sorted(key)
            return a, b, pairs[key]
    inc = {}
    for idx, (u, v, _) in enumerate(es):
        inc.setdefault(u, []).append(idx)
        inc.setdefault(v, []).append(idx)
    for w in verts:
        if len(inc[w]) == 2:
            i, j = inc[w]
            a = es[i][0] if es[i][1] == w else es[i][1]
            b = es[j][0] if es[j][1] == w else es[j][1]
            if a != b and len(es) - 2 >= 2:
                return min(a, b), max(a, b), [i, j]
    vmap = {v: k for k, v in enumerate(verts)}
    for a in verts:
        rest = [(vmap[u], vmap[v]) for u, v, _ in es if a not in (u, v)]
        _, cut = blocks(Multigraph(len(verts), rest))
        for bv in cut:
            b = verts[bv]
            _, comps = _classes_at(es, a, b)
            if len(comps) >= 2:
                return min(a, b), max(a, b), comps[0]
    return None


def _kind(es):
    if len(_vertices(es)) == 2:
        return BOND
    if _is_cycle(es):
        return POLYGON
    return TRICONNECTED


@lru_cache(maxsize=4096)
def triconnected_decompose(X):
    """Unique tree of 3-connected components, bonds and polygons of a
    2-connected multigraph (quadratic splitting, then bond/polygon merging)."""
    if not is_two_connected(X) or X.n and len([v for v in X.degrees() if v]) < 2:
        raise InputError("triconnected decomposition needs a 2-connected graph")
    next_virtual = [-1]
    twin = {}
    work = [[(u, v, i) for i, (u, v) in enumerate(X.edges)]]
    final = []
    while work:
        es = work.pop()
        s = _find_split(es)
        if s is None:
            final.append(es)
            continue
        a, b, side = s
        x, y = next_virtual[0], next_virtual[0] - 1
        next_virtual[0] -= 2
        twin[x], twin[y] = y, x
        side_set = set(side)
        work.append([es[i] for i in sorted(side_set)] + [(a, b, x)])
        work.append([e for i, e in enumerate(es) if i not in side_set] + [(a, b, y)])
    kinds = [_kind(es) for es in final]
    owner = {e: i for i, es in enumerate(final) for _, _, e in es if e < 0}
    tree = DecompositionTree(X.n, X.m, kinds, final, twin, owner)
    return _merge_same_kind(tree)


def _merge_same_kind(tree):
    kinds = list(tree.kinds)
    edges = [list(es) for es in tree.edges]
    twin = dict(tree.twin)
    owner = dict(tree.owner)
    alive = [True] * len(kinds)
    changed = True
    while changed:
        changed = False
        for x in sorted(twin):
            y = twin.get(x)
            if y is None:
                continue
            i, j = owner[x], owner[y]
            if kinds[i] != kinds[j] or kinds[i] == TRICONNECTED:
                continue
            edges[i] = [e for e in edges[i] if e[2] != x] + [e for e in edges[j] if e[2] != y]
            for _, _, e in edges[j]:
                if e < 0 and e != y:
                    owner[e] = i
            edges[j] = []
            alive[j] = False
            del twin[x], twin[y], owner[x], owner[y]
            changed = True
    index = {}
    for i in range(len(kinds)):
        if alive[i]:
            index[i] = len(index)
    new_edges = [sorted(edges[i], key=lambda e: (e[2] < 0, abs(e[2]))) for i in index]
    new_kinds = [kinds[i] for i in index]
    new_owner = {e: index[i] for e, i in owner.items()}
    return DecompositionTree(tree.n, tree.m, new_kinds, new_edges, twin, new_owner,
                             list(tree.excised), list(tree.surgery_edges))


def excised_surgery(X, D):
    """Give every excised pair a real edge.

    An excised pair is a bond made only of virtual edges (three or more
    pieces meet at the pair and none of them is a single edge).  The new
    edges get ids m, m+1, ... in node order; X' is X plus those edges.
    """
    edges = [list(es) for es in D.edges]
    pairs, new_ids = [], []
    m = X.m
    for i, (kind, es) in enumerate(zip(D.kinds, edges)):
        if kind == BOND and all(e < 0 for _, _, e in es):
            a, b = es[0][0], es[0][1]
            eid = m + len(new_ids)
            es.append((min(a, b), max(a, b), eid))
            pairs.append((min(a, b), max(a, b)))
            new_ids.append(eid)
    colors = None
    if X.colors is not None:
        colors = list(X.colors) + [0] * len(new_ids)
    Xp = Multigraph(X.n, list(X.edges) + pairs, colors)
    T = DecompositionTree(X.n, Xp.m, list(D.kinds), edges, dict(D.twin), dict(D.owner),
                          pairs, new_ids)
    return Xp, T


def recompose(T):
    """Glue components along twin virtual edges; returns X' (edges by id)."""
    real = {}
    for i, es in enumerate(T.edges):
        for u, v, e in es:
            if e < 0:
                w = T.twin.get(e)
                if w is None or T.owner.get(w) is None or T.owner[e] != i:
                    raise IntegrityError(f"virtual edge v{-e - 1} has no twin")
                tu, tv, _ = next(x for x in T.edges[T.owner[w]] if x[2] == w)
                if {tu, tv} != {u, v}:
                    raise IntegrityError(f"twins v{-e - 1}/v{-w - 1} join different pairs")
            else:
                if e in real:
                    raise IntegrityError(f"real edge {e} appears twice")
                real[e] = (u, v)
    if sorted(real) != list(range(T.m)):
        raise IntegrityError("real edges do not cover 0..m-1")
    return Multigraph(T.n, [real[e] for e in range(T.m)])


def validate_tree(T, X=None):
    """List of violated structural invariants (empty when the tree is valid)."""
    problems = []
    k = len(T.kinds)
    links = T.links()
    if len(links) != max(k - 1, 0):
        problems.append("node graph does not have k-1 links")
    parent = list(range(k))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for a, _, b, _ in links:
        ra, rb = find(a), find(b)
        if ra == rb:
            problems.append("node graph has a cycle")
        parent[ra] = rb
    if k and len({find(i) for i in range(k)}) != 1:
        problems.append("node graph is disconnected")
    for i, (kind, es) in enumerate(zip(T.kinds, T.edges)):
        g, _, _ = T.component_graph(i)
        if len(es) < 3 and k > 1:
            problems.append(f"node {i} has fewer than 3 edges")
        if kind == BOND and g.n != 2:
            problems.append(f"node {i} is not a bond")
        elif kind == POLYGON and not (_is_cycle(es) and len(g.vertex_components()) == 1):
            problems.append(f"node {i} is not a polygon")
        elif kind == TRICONNECTED and not is_three_connected(g):
            problems.append(f"node {i} is not 3-connected")
    for a, va, b, vb in links:
        if T.kinds[a] == T.kinds[b] and T.kinds[a] != TRICONNECTED:
            problems.append(f"adjacent nodes {a}, {b} of kind {T.kinds[a]} not merged")
    try:
        Y = recompose(T)
        if X is not None and (Y.edges != X.edges or Y.n != X.n):
            problems.append("recomposition differs from the input")
    except IntegrityError as exc:
        problems.append(str(exc))
    return problems
