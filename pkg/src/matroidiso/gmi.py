"""2-isomorphism of arbitrary multigraphs (graphic matroid isomorphism).

Blocks are matched first.  Each pair of 2-connected blocks is decided by
iterated colour refinement over their trees of 3-connected components:
virtual edges are coloured by the codes of the two sides of their tree
edge, all components of both trees are sorted into classes, tree nodes
are recoloured by class, and this repeats until the number of classes
stops growing.  The coloured trees are then compared by tree codes and
an explicit edge bijection is assembled from the tree centre outwards.
"""
from dataclasses import dataclass, field

from .core import IntegrityError, IsoWitness
from .decompose import BOND, POLYGON, TRICONNECTED, excised_surgery, triconnected_decompose
from .gi import ColoredGraph, canonical_form, edge_map, graph_isomorphism, tree_code, tree_centers
from .multigraph import Multigraph, blocks, color_gadget_graphic, is_2isomorphism

KIND_RANK = {BOND: 0, POLYGON: 1, TRICONNECTED: 2}
REAL, SURGERY, VIRTUAL, CHILD, PARENT = 0, 1, 2, 3, 4


@dataclass
class GMIStats:
    iterations: list = field(default_factory=list)
    q_history: list = field(default_factory=list)
    gi_queries: int = 0
    block_pairs: int = 0
    vertex_bound: list = field(default_factory=list)

    def line(self):
        qs = ";".join(",".join(map(str, h)) for h in self.q_history)
        its = ",".join(map(str, self.iterations))
        return f"iterations={its or 0} q={qs or '-'} gi_queries={self.gi_queries} block_pairs={self.block_pairs}"


def _uncolored(X):
    return Multigraph(X.n, X.edges)


class _Tree:
    """One side of a block comparison: the surgered tree plus edge colours."""

    def __init__(self, G, trace=None):
        self.G = G
        D = triconnected_decompose(_uncolored(G))
        self.Xp, self.T = excised_surgery(_uncolored(G), D)
        if trace:
            trace("surgered", self.Xp)
        self.base_color = {}
        for e in range(self.Xp.m):
            self.base_color[e] = (REAL, G.color(e)) if e < G.m else (SURGERY, 0)
        self.nbrs = self.T.neighbours()
        self.k = len(self.T.kinds)
        self.comp = [self.T.component_graph(i) for i in range(self.k)]
        if trace:
            for g, _, _ in self.comp:
                trace("component", g)

    def tree_edges(self):
        return [(a, b) for a, _, b, _ in self.T.links()]

    def side_codes(self, colors):
        """code[(a, b)] = rooted code of the side containing a when the tree
        edge a-b is removed."""
        memo = {}

        def code(a, b):
            key = (a, b)
            if key not in memo:
                kids = sorted(code(c, a) for c, _, _ in self.nbrs[a] if c != b)
                memo[key] = (colors[a], tuple(kids))
            return memo[key]

        for a, _, b, _ in self.T.links():
            code(a, b)
            code(b, a)
        return memo


def _intern(values):
    order = {v: i for i, v in enumerate(sorted(set(values)))}
    return order


def _edge_colors(tree, i, vcolor):
    return [tree.base_color[e] if e >= 0 else vcolor[e] for _, _, e in tree.T.edges[i]]


def _class_keys(trees, colors, vcolors, strict, stats, trace):
    """Class key for every node of every tree (same order as the trees)."""
    out = []
    gadget_norm = None
    base = 0
    if strict:
        labels = set()
        for tree, vc in zip(trees, vcolors):
            for i in range(tree.k):
                labels.update(_edge_colors(tree, i, vc))
                base = max(base, tree.comp[i][0].n)
        gadget_norm = {c: j + 1 for j, c in enumerate(sorted(labels))}
    for tree, col, vc in zip(trees, colors, vcolors):
        keys = []
        for i in range(tree.k):
            kind = tree.T.kinds[i]
            ecols = _edge_colors(tree, i, vc)
            g = tree.comp[i][0]
            if strict:
                if kind == POLYGON:
                    # any arrangement of a cycle is 2-isomorphic; use the sorted one
                    ordered = sorted(ecols)
                    g = Multigraph(len(ordered), [(j, (j + 1) % len(ordered)) for j in range(len(ordered))])
                    ecols = ordered
                gg = color_gadget_graphic(Multigraph(g.n, g.edges, [gadget_norm[c] for c in ecols]), base)
                if trace:
                    trace("gadget", gg)
                stats.gi_queries += 1
                payload = canonical_form(ColoredGraph(gg))[0]
            elif kind == TRICONNECTED:
                stats.gi_queries += 1
                payload = canonical_form(ColoredGraph(g, None, ecols))[0]
            else:
                payload = tuple(sorted(ecols))
            keys.append((col[i], KIND_RANK[kind], payload))
        out.append(keys)
    return out


def refine_and_decide(tree1, tree2, strict=False, stats=None, trace=None):
    """Run the refinement loop; returns (verdict, final node colours, q history)."""
    stats = GMIStats() if stats is None else stats
    trees = (tree1, tree2)
    colors = [[0] * t.k for t in trees]
    bound = 2 * max(tree1.G.n, tree2.G.n)
    q_prev = 1
    history = []
    iterations = 0
    while True:
        iterations += 1
        if iterations > bound:
            raise IntegrityError(f"refinement exceeded {bound} iterations")
        codes = [t.side_codes(c) for t, c in zip(trees, colors)]
        ids = _intern([v for cd in codes for v in cd.values()])
        vcolors = []
        for t, cd in zip(trees, codes):
            vc = {}
            for a, va, b, vb in t.T.links():
                pair = tuple(sorted((ids[cd[(a, b)]], ids[cd[(b, a)]])))
                vc[va] = vc[vb] = (VIRTUAL,) + pair
            vcolors.append(vc)
        keys = _class_keys(trees, colors, vcolors, strict, stats, trace)
        rank = _intern([k for ks in keys for k in ks])
        colors = [[rank[k] for k in ks] for ks in keys]
        q = len(rank)
        history.append(q)
        if q == q_prev:
            break
        q_prev = q
    stats.iterations.append(iterations)
    stats.q_history.append(history)
    stats.vertex_bound.append(bound)
    c1 = tree_code(tree1.k, tree1.tree_edges(), colors[0])
    c2 = tree_code(tree2.k, tree2.tree_edges(), colors[1])
    return c1 == c2, colors, history


# ------------------------------------------------------------ witness assembly

class _Assembler:
    """Exact rooted matching of two trees of coloured components."""

    def __init__(self, tree1, tree2, stats, ids=None):
        self.trees = (tree1, tree2)
        self.ids = {} if ids is None else ids
        self.memo = {}
        self.stats = stats

    def _colored(self, side, node, parent_v):
        tree = self.trees[side]
        cols = []
        for _, _, e in tree.T.edges[node]:
            if e >= 0:
                cols.append(tree.base_color[e])
            elif e == parent_v:
                cols.append((PARENT,))
            else:
                w = tree.T.twin[e]
                cols.append((CHILD, self.code(side, tree.T.owner[w], w)))
        return cols

    def code(self, side, node, parent_v):
        key = (side, node, parent_v)
        if key not in self.memo:
            tree = self.trees[side]
            kind = tree.T.kinds[node]
            cols = self._colored(side, node, parent_v)
            if kind == TRICONNECTED:
                payload = canonical_form(ColoredGraph(tree.comp[node][0], None, cols))[0]
            else:
                payload = tuple(sorted(cols))
            cert = (KIND_RANK[kind], payload)
            if cert not in self.ids:
                self.ids[cert] = len(self.ids)
            self.memo[key] = self.ids[cert]
        return self.memo[key]

    def match(self, n1, p1, n2, p2, sigma):
        if self.code(0, n1, p1) != self.code(1, n2, p2):
            return False
        t1, t2 = self.trees
        c1 = self._colored(0, n1, p1)
        c2 = self._colored(1, n2, p2)
        e1 = [e for _, _, e in t1.T.edges[n1]]
        e2 = [e for _, _, e in t2.T.edges[n2]]
        if t1.T.kinds[n1] == TRICONNECTED:
            g1 = ColoredGraph(t1.comp[n1][0], None, c1)
            g2 = ColoredGraph(t2.comp[n2][0], None, c2)
            self.stats.gi_queries += 1
            vmap = graph_isomorphism(g1, g2)
            if vmap is None:
                return False
            pairing = list(enumerate(edge_map(g1, g2, vmap)))
        else:
            o1 = sorted(range(len(c1)), key=lambda j: c1[j])
            o2 = sorted(range(len(c2)), key=lambda j: c2[j])
            pairing = list(zip(o1, o2))
        for a, b in pairing:
            x, y = e1[a], e2[b]
            if x >= 0:
                if y < 0:
                    return False
                sigma[x] = y
            elif x != p1:
                wx, wy = t1.T.twin[x], t2.T.twin[y]
                if not self.match(t1.T.owner[wx], wx, t2.T.owner[wy], wy, sigma):
                    raise IntegrityError("child components with equal codes failed to match")
        return True

    def assemble(self):
        t1, t2 = self.trees
        cen1 = tree_centers(t1.k, t1.tree_edges())
        cen2 = tree_centers(t2.k, t2.tree_edges())
        if len(cen1) != len(cen2):
            return None
        sigma = {}
        if len(cen1) == 1:
            return sigma if self.match(cen1[0], None, cen2[0], None, sigma) else None
        a1, b1 = cen1
        a2, b2 = cen2
        va1 = next(v for c, v, _ in t1.nbrs[a1] if c == b1)
        vb1 = t1.T.twin[va1]
        for x2, y2 in ((a2, b2), (b2, a2)):
            vx2 = next(v for c, v, _ in t2.nbrs[x2] if c == y2)
            vy2 = t2.T.twin[vx2]
            sigma = {}
            if self.match(a1, va1, x2, vx2, sigma) and self.match(b1, vb1, y2, vy2, sigma):
                return sigma
        return None


def assemble_witness(tree1, tree2, stats=None):
    """Edge map between the surgered graphs (surgery edges onto surgery edges)."""
    stats = GMIStats() if stats is None else stats
    return _Assembler(tree1, tree2, stats).assemble()


# ------------------------------------------------------------------ blocks

def block_2iso(G1, G2, strict=False, stats=None, trace=None):
    """Colour-preserving 2-isomorphism of two 2-connected blocks (edge list or None)."""
    stats = GMIStats() if stats is None else stats
    if G1.m != G2.m or G1.n != G2.n:
        return None
    stats.block_pairs += 1
    t1, t2 = _Tree(G1, trace), _Tree(G2, trace)
    if t1.Xp.m != t2.Xp.m:
        return None
    verdict, _, _ = refine_and_decide(t1, t2, strict, stats, trace)
    if not verdict:
        return None
    sigma = assemble_witness(t1, t2, stats)
    if sigma is None:
        raise IntegrityError("refinement accepted but no witness could be assembled")
    return [sigma[e] for e in range(G1.m)]


def _block_signature(G):
    return (G.m, G.n, tuple(sorted(G.colors or [0] * G.m)))


def gmi_test(X1, X2, strict=False, stats=None, trace=None, validate=True):
    """Decide whether the (optionally edge-coloured) graphic matroids of X1
    and X2 are isomorphic; returns an IsoWitness on edge ids or None."""
    stats = GMIStats() if stats is None else stats
    if X1.m != X2.m:
        return None
    col1 = list(X1.colors or [0] * X1.m)
    col2 = list(X2.colors or [0] * X2.m)
    if sorted(col1) != sorted(col2):
        return None
    bl1, _ = blocks(X1)
    bl2, _ = blocks(X2)
    perm = [None] * X1.m
    br1 = sorted((col1[b[0]], b[0]) for b in bl1 if len(b) == 1)
    br2 = sorted((col2[b[0]], b[0]) for b in bl2 if len(b) == 1)
    if [c for c, _ in br1] != [c for c, _ in br2]:
        return None
    for (_, a), (_, b) in zip(br1, br2):
        perm[a] = b
    entries = []
    for side, (X, bl, col) in enumerate(((X1, bl1, col1), (X2, bl2, col2))):
        for b in bl:
            if len(b) > 1:
                g, _, eids = X.edge_subgraph(b)
                g = g.with_colors([col[e] for e in eids])
                entries.append((side, g, eids))
    if sum(1 for e in entries if e[0] == 0) != sum(1 for e in entries if e[0] == 1):
        return None
    # group blocks of both graphs into 2-isomorphism classes
    classes = []  # (signature, rep graph, members [(side, eids, map member->rep)])
    for side, g, eids in entries:
        sig = _block_signature(g)
        for csig, rep, members in classes:
            if csig != sig:
                continue
            w = block_2iso(g, rep, strict, stats, trace)
            if w is not None:
                members.append((side, eids, w))
                break
        else:
            classes.append((sig, g, [(side, eids, list(range(g.m)))]))
    for _, _, members in classes:
        left = [m for m in members if m[0] == 0]
        right = [m for m in members if m[0] == 1]
        if len(left) != len(right):
            return None
        for (_, e1, w1), (_, e2, w2) in zip(left, right):
            inv2 = {r: j for j, r in enumerate(w2)}
            for j, e in enumerate(e1):
                perm[e] = e2[inv2[w1[j]]]
    witness = IsoWitness.of(perm)
    if validate:
        if not is_2isomorphism(_uncolored(X1), _uncolored(X2), witness.bijection) or any(
                col1[e] != col2[witness.bijection[e]] for e in range(X1.m)):
            raise IntegrityError("assembled edge map does not preserve circuits")
    return witness


# ------------------------------------------------------------ canonical codes

_CODE_IDS = {}


def block_code(G):
    """Invariant of a coloured 2-connected block that is equal for two blocks
    exactly when they are colour-preservingly 2-isomorphic."""
    t = _Tree(G)
    asm = _Assembler(t, t, GMIStats(), _CODE_IDS)
    cen = tree_centers(t.k, t.tree_edges())
    if len(cen) == 1:
        return (asm.code(0, cen[0], None),)
    a, b = cen
    va = next(v for c, v, _ in t.nbrs[a] if c == b)
    return tuple(sorted((asm.code(0, a, va), asm.code(0, b, t.T.twin[va]))))


def gmi_canonical_code(X):
    """Complete invariant of the coloured graphic matroid of X: bridge
    colours plus the multiset of block codes."""
    col = list(X.colors or [0] * X.m)
    bl, _ = blocks(X)
    bridges = sorted(col[b[0]] for b in bl if len(b) == 1)
    codes = []
    for b in bl:
        if len(b) > 1:
            g, _, eids = X.edge_subgraph(b)
            codes.append(block_code(g.with_colors([col[e] for e in eids])))
    return tuple(bridges), tuple(sorted(codes))
