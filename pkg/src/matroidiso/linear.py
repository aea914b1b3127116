"""Linear matroids over prime fields."""
from itertools import combinations
from math import comb

import numpy as np

from . import _accel
from .core import (ENUM_LIMIT, CapacityError, InputError, IntegrityError, IsoWitness,
                   MatroidOracle, canonical_order, family_iso, from_mask, popcount)
from .multigraph import Multigraph

FIELD_MAX = 2 ** 31


def is_prime(p):
    if p < 2:
        return False
    if p % 2 == 0:
        return p == 2
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def next_prime(n):
    n = max(2, int(n))
    while not is_prime(n):
        n += 1
    return n


class PrimeField:
    __slots__ = ("p",)

    def __init__(self, p):
        p = int(p)
        if not 2 <= p < FIELD_MAX or not is_prime(p):
            raise InputError(f"{p} is not a prime below 2^31")
        self.p = p

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(self.p)

    def __repr__(self):
        return f"GF({self.p})"

    def inv(self, a):
        return pow(int(a) % self.p, self.p - 2, self.p)


def _field(f):
    return f if isinstance(f, PrimeField) else PrimeField(f)


class PrimeFieldMatrix:
    """r x m matrix over GF(p); the columns are the ground set."""

    def __init__(self, field, data):
        self.field = _field(field)
        arr = np.array(data, dtype=np.int64)
        if arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != 2:
            raise InputError("matrix data must be two-dimensional")
        self.data = np.mod(arr, self.field.p)
        self.data.setflags(write=False)

    @classmethod
    def from_columns(cls, field, columns, rows=None):
        columns = [list(c) for c in columns]
        if not columns:
            return cls(field, np.zeros((rows or 0, 0), dtype=np.int64))
        return cls(field, np.array(columns, dtype=np.int64).T)

    @property
    def p(self):
        return self.field.p

    @property
    def rows(self):
        return self.data.shape[0]

    @property
    def cols(self):
        return self.data.shape[1]

    def column(self, j):
        return tuple(int(x) for x in self.data[:, j])

    def select(self, cols):
        return PrimeFieldMatrix(self.field, self.data[:, list(cols)])

    def __eq__(self, other):
        return (isinstance(other, PrimeFieldMatrix) and self.field == other.field
                and self.data.shape == other.data.shape and bool(np.all(self.data == other.data)))

    def __hash__(self):
        return hash((self.p, self.data.shape, self.data.tobytes()))

    def __repr__(self):
        return f"PrimeFieldMatrix({self.rows}x{self.cols} over GF({self.p}))"


def rank_mod_p(A):
    return _accel.gfp_rank(A.data, A.p)


def columns_independent(A, cols):
    cols = [int(c) for c in cols]
    for c in cols:
        if not 0 <= c < A.cols:
            raise InputError(f"column {c} out of range")
    if len(set(cols)) != len(cols):
        return False
    if not cols:
        return True
    return _accel.gfp_rank(A.data[:, cols], A.p) == len(cols)


class LinearMatroid(MatroidOracle):
    def __init__(self, A):
        self.A = A
        self.m = A.cols

    def _independent_mask(self, mask):
        cols = from_mask(mask)
        if not cols:
            return True
        return _accel.gfp_rank(self.A.data[:, list(cols)], self.A.p) == len(cols)

    def rank_mask(self, mask):
        cols = from_mask(mask)
        if not cols:
            return 0
        return _accel.gfp_rank(self.A.data[:, list(cols)], self.A.p)

    def _compute_rank_table(self):
        return _accel.gfp_rank_table(self.A.data, self.A.p)

    def circuit_masks(self):
        cached = getattr(self, "_circuit_cache", None)
        if cached is None:
            if self.m <= ENUM_LIMIT:
                cached = MatroidOracle.circuit_masks(self)
            else:
                cached = tuple(linear_circuit_masks(self.A))
            self._circuit_cache = cached
        return cached


def linear_oracle(A):
    return LinearMatroid(A)


# ------------------------------------------------------------ elimination

def rref(data, p):
    """Reduced row echelon form mod p; returns (matrix, pivot columns)."""
    return _accel.gfp_rref(np.asarray(data, dtype=np.int64), p)


def nullspace(data, p):
    """Basis of {x : data x = 0} as rows of a (m - rank) x m array."""
    data = np.asarray(data, dtype=np.int64)
    m = data.shape[1]
    if data.shape[0] == 0:
        return np.eye(m, dtype=np.int64)
    r, pivots = rref(data, p)
    free = [c for c in range(m) if c not in pivots]
    out = np.zeros((len(free), m), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for row, pc in enumerate(pivots):
            out[i, pc] = (-r[row, f]) % p
    return out


def dual_matrix(A):
    """A representation of the dual matroid (kernel basis as rows)."""
    return PrimeFieldMatrix(A.field, nullspace(A.data, A.p).reshape(-1, A.cols))


def projective_key(col, p):
    """Column scaled so its first nonzero entry is 1; None for zero."""
    col = [int(x) % p for x in col]
    for x in col:
        if x:
            inv = pow(x, p - 2, p)
            return tuple(v * inv % p for v in col)
    return None


def parallel_classes(A):
    """Groups of columns that are nonzero scalar multiples of each other."""
    groups = {}
    for j in range(A.cols):
        key = projective_key(A.data[:, j], A.p)
        if key is not None:
            groups.setdefault(key, []).append(j)
    return [g for g in sorted(groups.values()) if len(g) > 1]


def zero_columns(A):
    return [j for j in range(A.cols) if not np.any(A.data[:, j])]


def check_simple(A):
    if zero_columns(A):
        raise InputError(f"zero columns present: {zero_columns(A)}")
    par = parallel_classes(A)
    if par:
        raise InputError(f"columns that are scalar multiples of each other: {par}")


def simplify(A):
    """Drop zero columns and keep one column per parallel class.

    Returns the reduced matrix and, for each kept column, the original
    columns it stands for.
    """
    groups = {}
    for j in range(A.cols):
        key = projective_key(A.data[:, j], A.p)
        if key is not None:
            groups.setdefault(key, []).append(j)
    kept = sorted(groups.values())
    return A.select([g[0] for g in kept]), kept


def row_reduce(A):
    """Same matroid with independent rows only."""
    r, _ = rref(A.data, A.p)
    return PrimeFieldMatrix(A.field, r.reshape(-1, A.cols))


# --------------------------------------------------------------- circuits

def _flats_of_rank(data, p, k):
    """All flats of rank k of the column matroid of ``data`` (as masks),
    enumerated from k-subsets of pairwise non-parallel representatives."""
    m = data.shape[1]
    reps = {}
    members = {}
    loops = 0
    for j in range(m):
        key = projective_key(data[:, j], p)
        if key is None:
            loops |= 1 << j
            continue
        if key not in reps:
            reps[key] = j
            members[j] = 0
        members[reps[key]] |= 1 << j
    points = sorted(members)
    if k == 0:
        return [loops]
    count = comb(len(points), k)
    if count > 3_000_000:
        raise CapacityError(f"{count} candidate spans exceeds the flat enumeration bound")
    flats = set()
    pts = data[:, points]
    subs = np.array(list(combinations(range(len(points)), k)), dtype=np.int64).reshape(-1, k)
    for chunk in range(0, len(subs), 50_000):
        flags = _accel.span_flags(pts, p, subs[chunk:chunk + 50_000])
        for row in flags[flags[:, -1] == 1]:
            flat = loops
            for i in np.nonzero(row[:-1])[0]:
                flat |= members[points[i]]
            flats.add(flat)
    return sorted(flats)


def linear_circuit_masks(A):
    """Exact circuit family of M(A), sorted canonically.

    Circuits of M are the complements of the hyperplanes of the dual, which
    is cheap when the nullity is small; otherwise the rank table is used.
    """
    m = A.cols
    if m == 0:
        return []
    K = nullspace(A.data, A.p) if A.rows else np.eye(m, dtype=np.int64)
    k = K.shape[0]
    if k == 0:
        return []
    if m <= ENUM_LIMIT and comb(m, max(k - 1, 0)) > (1 << m):
        M = LinearMatroid(A)
        return list(MatroidOracle.circuit_masks(M))
    full = (1 << m) - 1
    out = [full & ~h for h in _flats_of_rank(K, A.p, k - 1)]
    return sorted(out, key=lambda c: (popcount(c), from_mask(c)))


def linear_circuits(A):
    return [from_mask(c) for c in linear_circuit_masks(A)]


def linear_hyperplane_masks(A):
    """Hyperplanes of M(A) (flats of rank r - 1), sorted canonically."""
    r = rank_mod_p(A)
    if r == 0:
        return []
    return sorted(_flats_of_rank(A.data, A.p, r - 1), key=lambda h: (popcount(h), from_mask(h)))


def _points(A):
    return len({projective_key(A.data[:, j], A.p) for j in range(A.cols)} - {None})


def linear_iso(A, B, colors_a=None, colors_b=None):
    """Exact (coloured) isomorphism of column matroids.

    A bijection is an isomorphism iff it preserves circuits, and equally iff
    it preserves hyperplanes; whichever family is cheaper to enumerate is
    compared.
    """
    if A.cols != B.cols:
        return None
    r = rank_mod_p(A)
    if r != rank_mod_p(B):
        return None
    m = A.cols
    if 0 < r and comb(max(_points(A), _points(B)), r - 1) < comb(m, max(m - r - 1, 0)):
        return family_iso(linear_hyperplane_masks(A), linear_hyperplane_masks(B), m, colors_a, colors_b)
    return family_iso(linear_circuit_masks(A), linear_circuit_masks(B), m, colors_a, colors_b)


def linear_is_isomorphism(A, B, perm):
    """Does column ``j`` of A -> column ``perm[j]`` of B preserve circuits?"""
    w = IsoWitness.of(perm)
    if len(perm) != A.cols or A.cols != B.cols:
        return False
    c1 = linear_circuit_masks(A)
    c2 = set(linear_circuit_masks(B))
    return len(c1) == len(c2) and all(w.image_mask(c) in c2 for c in c1)


# ---------------------------------------------------------- constructions

def uniform_representation(k, m, field):
    """Vandermonde columns (1, a, a^2, ..., a^(k-1)) with a = i + 1."""
    F = _field(field)
    if not 0 <= k <= m:
        raise InputError("need 0 <= k <= m")
    if F.p <= m:
        raise InputError(f"field GF({F.p}) too small for {m} distinct evaluation points")
    data = np.zeros((k, m), dtype=np.int64)
    for i in range(m):
        a = i + 1
        for r in range(k):
            data[r, i] = pow(a, r, F.p)
    return PrimeFieldMatrix(F, data)


def normalize_colorings(*colorings):
    """Map the union of nonzero labels onto 1..k (0 stays uncoloured)."""
    labels = sorted({c for col in colorings for c in col if c != 0})
    rank = {c: i + 1 for i, c in enumerate(labels)}
    return [[rank.get(c, 0) for c in col] for col in colorings]


def color_gadget_linear(A, coloring, m_prime=None):
    """Encode column colours into an uncoloured matrix.

    Column ``e`` of class ``i`` (1-based; 0 means uncoloured) receives
    ``l_i = m + m' + i`` new columns in ``l_i`` fresh dimensions: e's entries
    on the diagonal of the top block and a +1/-1 circulant below, so that
    ``{e} + gadget(e)`` is a circuit of length ``l_i + 1``.  Returns the
    matrix and a role per output column: ``("orig", j)`` or
    ``("gadget", j, t)``.
    """
    coloring = [int(c) for c in coloring]
    m = A.cols
    if len(coloring) != m:
        raise InputError("need one colour per column")
    if any(c < 0 for c in coloring):
        raise InputError("colours must be non-negative")
    roles = [("orig", j) for j in range(m)]
    if not any(coloring):
        return A, roles
    check_simple(A)
    m_prime = m + 1 if m_prime is None else int(m_prime)
    if m_prime <= m:
        raise InputError("m' must exceed m")
    lengths = [m + m_prime + c if c else 0 for c in coloring]
    base = A if A.rows <= min(x for x in lengths if x) else row_reduce(A)
    n = base.rows
    p = A.p
    total_rows = n + sum(lengths)
    total_cols = m + sum(lengths)
    out = np.zeros((total_rows, total_cols), dtype=np.int64)
    out[:n, :m] = base.data
    r0, c0 = n, m
    for e in range(m):
        L = lengths[e]
        if not L:
            continue
        for t in range(L):
            col = c0 + t
            if t < n:
                out[t, col] = base.data[t, e]
            out[r0 + t, col] = 1
            out[r0 + (t - 1) % L, col] = (out[r0 + (t - 1) % L, col] - 1) % p
            roles.append(("gadget", e, t))
        r0 += L
        c0 += L
    return PrimeFieldMatrix(A.field, out), roles


def colored_lmi_test(A, colors_a, B, colors_b, method="gadget"):
    """Colour-preserving isomorphism of column matroids.

    ``method="direct"`` searches coloured circuit families; ``"gadget"``
    reduces to the uncoloured problem and reads the colour-preserving map
    off the original columns.
    """
    if A.cols != B.cols:
        return None
    ca, cb = normalize_colorings(colors_a, colors_b)
    if method == "direct":
        return linear_iso(A, B, ca, cb)
    if sorted(ca) != sorted(cb):
        return None
    ga, ra = color_gadget_linear(A, ca)
    gb, rb = color_gadget_linear(B, cb)
    w = linear_iso(ga, gb)
    if w is None:
        return None
    orig_b = {i: r[1] for i, r in enumerate(rb) if r[0] == "orig"}
    perm = []
    for j in range(A.cols):
        img = w.bijection[j]
        if img not in orig_b:
            raise IntegrityError("gadget isomorphism moved an original column onto a gadget column")
        perm.append(orig_b[img])
    return IsoWitness.of(perm)


# ------------------------------------------------------------------- St_k

def _det3_mod(rows, p):
    """Determinants of a stack of 3x3 matrices mod p (int64 safe for p < 2^31)."""
    a = rows % p

    def mul(x, y):
        return (x * y) % p

    d = mul(a[:, 0, 0], (mul(a[:, 1, 1], a[:, 2, 2]) - mul(a[:, 1, 2], a[:, 2, 1])) % p)
    d -= mul(a[:, 0, 1], (mul(a[:, 1, 0], a[:, 2, 2]) - mul(a[:, 1, 2], a[:, 2, 0])) % p)
    d += mul(a[:, 0, 2], (mul(a[:, 1, 0], a[:, 2, 1]) - mul(a[:, 1, 1], a[:, 2, 0])) % p)
    return d % p


def _is_star(X, subset):
    common = set(X.edges[subset[0]])
    for e in subset[1:]:
        common &= set(X.edges[e])
    return bool(common)


def stk_field(X, k=3):
    """Smallest prime >= |V|^(2k-1)."""
    bound = max(X.n, 2) ** (2 * k - 1)
    if bound >= FIELD_MAX:
        raise InputError(f"|V|^(2k-1) = {bound} does not fit a field below 2^31")
    return PrimeField(next_prime(bound))


def stk_construct(X, k=3, field=None):
    """Representation of St_k(X): k-subsets are dependent exactly when they are stars.

    Columns are b_e = (1, x_u + x_v, x_u x_v, y_e1, ..., y_e(k-3)).  Unknowns
    are fixed greedily (x by vertex index, then y by edge index), each
    taking the least field value that keeps the x values distinct and every
    fully determined non-star minor nonzero.
    """
    if k < 3:
        raise InputError("St_k needs k >= 3")
    if len({frozenset(e) for e in X.edges}) != X.m:
        raise InputError("St_k needs a simple graph")
    deg = X.degrees()
    if X.n and min(deg) < k:
        raise InputError(f"minimum degree {min(deg)} is below k = {k}")
    F = stk_field(X, k) if field is None else _field(field)
    p = F.p
    if p < max(X.n, 2) ** (2 * k - 1):
        raise InputError(f"field GF({p}) smaller than |V|^(2k-1)")
    us = np.array([min(e) for e in X.edges], dtype=np.int64)
    vs = np.array([max(e) for e in X.edges], dtype=np.int64)
    x = np.zeros(X.n, dtype=np.int64)

    if k == 3 and X.m >= 3:
        triples = np.array(list(combinations(range(X.m), 3)), dtype=np.int64)
        ends = np.stack([us[triples], vs[triples]], axis=2).reshape(len(triples), 6)
        # a triple is a star iff some vertex lies on all three edges
        star = np.zeros(len(triples), dtype=bool)
        for col in (0, 1):
            v = ends[:, col]
            star |= ((ends[:, 2] == v) | (ends[:, 3] == v)) & ((ends[:, 4] == v) | (ends[:, 5] == v))
        triples = triples[~star]
        ready = np.max(ends[~star], axis=1)
        by_vertex = [triples[ready == v] for v in range(X.n)]
    else:
        by_vertex = [np.zeros((0, 3), dtype=np.int64) for _ in range(X.n)]

    used = set()
    for v in range(X.n):
        tri = by_vertex[v]
        for val in range(p):
            if val in used:
                continue
            x[v] = val
            if len(tri):
                a = x[us[tri]]
                b = x[vs[tri]]
                rows = np.stack([np.ones_like(a), (a + b) % p, (a * b) % p], axis=2)
                if np.any(_det3_mod(rows, p) == 0):
                    continue
            used.add(val)
            break
        else:
            raise IntegrityError(f"no admissible value for x_{v} in GF({p})")

    data = np.zeros((k, X.m), dtype=np.int64)
    data[0] = 1
    data[1] = (x[us] + x[vs]) % p
    data[2] = (x[us] * x[vs]) % p
    if k > 3:
        _assign_y(X, data, k, p)
    return PrimeFieldMatrix(F, data)


def _assign_y(X, data, k, p):
    """Greedy y values for k > 3, edge by edge, checking every determined
    (k-1)-subset and non-star k-subset through the new edge."""
    for e in range(X.m):
        for j in range(3, k):
            for val in range(p):
                data[j, e] = val
                if j < k - 1:
                    break  # column not determined until its last coordinate
                ok = True
                for size in (k - 1, k):
                    for rest in combinations(range(e), size - 1):
                        sub = rest + (e,)
                        if size == k and _is_star(X, sub):
                            continue
                        if _accel.gfp_rank(data[:, list(sub)], p) != size:
                            ok = False
                            break
                    if not ok:
                        break
                if ok:
                    break
            else:
                raise IntegrityError(f"no admissible value for y_{e},{j - 2}")


def dependent_hyperplanes(A):
    """Hyperplanes (rank r-1 flats) with more than r-1 elements, as column tuples."""
    r = rank_mod_p(A)
    if r == 0:
        return []
    out = []
    for h in _flats_of_rank(A.data, A.p, r - 1):
        if popcount(h) > r - 1:
            out.append(from_mask(h))
    return canonical_order(out)


def st_recover_graph(A):
    """Rebuild X from St_k(X): vertices are the dependent hyperplanes (stars)
    and each column joins the two stars containing it."""
    stars = dependent_hyperplanes(A)
    ends = [[] for _ in range(A.cols)]
    for i, s in enumerate(stars):
        for e in s:
            ends[e].append(i)
    if any(len(x) != 2 for x in ends):
        raise InputError("columns do not each lie in exactly two stars")
    return Multigraph(len(stars), [tuple(x) for x in ends])


def pad_graph(X, size=None):
    """Attach a clique K_s (s = max(n + 1, 4)) at every vertex."""
    s = max(X.n + 1, 4) if size is None else size
    edges = list(X.edges)
    n = X.n
    for v in range(X.n):
        clique = [v] + list(range(n, n + s - 1))
        n += s - 1
        edges.extend(combinations(clique, 2))
    return Multigraph(n, edges)


def gi_to_lmib(X1, X2, field=None):
    """St_3 representations whose matroid isomorphism matches X1 ~= X2.

    Both graphs are padded with cliques when either has minimum degree
    below 3; both use the same field.
    """
    if X1.n != X2.n or X1.m != X2.m:
        raise InputError("graphs differ in vertex or edge count; no reduction needed")
    for X in (X1, X2):
        if len({frozenset(e) for e in X.edges}) != X.m:
            raise InputError("graph isomorphism reduction expects simple graphs")
    if min(X1.degrees() + X2.degrees(), default=3) < 3:
        X1, X2 = pad_graph(X1), pad_graph(X2)
    F = stk_field(X1, 3) if field is None else _field(field)
    return stk_construct(X1, 3, F), stk_construct(X2, 3, F)


# ----------------------------------------------------------- LMI_b <-> GI

def bases(A, limit=2_000_000):
    """All maximal independent column sets of A (as sorted tuples)."""
    r = rank_mod_p(A)
    if comb(A.cols, r) > limit:
        raise CapacityError(f"C({A.cols}, {r}) candidate bases exceeds {limit}")
    out = []
    for sub in combinations(range(A.cols), r):
        if not sub or _accel.gfp_rank(A.data[:, list(sub)], A.p) == r:
            out.append(sub)
    return out


def basis_graph(m, base_list):
    """Bipartite column/basis incidence graph; columns get colour 0, bases 1."""
    from .gi import ColoredGraph

    edges = []
    for i, b in enumerate(base_list):
        for e in b:
            edges.append((e, m + i))
    g = Multigraph(m + len(base_list), edges)
    return ColoredGraph(g, [0] * m + [1] * len(base_list))


def lmib_to_gi(A, B, b):
    """Basis incidence graphs X_A, X_B (column side coloured 0, basis side 1)."""
    for M in (A, B):
        if rank_mod_p(M) > b:
            raise InputError(f"rank {rank_mod_p(M)} exceeds the bound {b}")
    return basis_graph(A.cols, bases(A)), basis_graph(B.cols, bases(B))


def lmi_test(A, B, b=None):
    """Decide M(A) ~= M(B) through graph isomorphism of basis graphs.

    Uses the primal or the dual, whichever has the smaller rank, since a
    bijection is an isomorphism iff it is one of the duals.
    """
    from .gi import graph_isomorphism

    if A.cols != B.cols:
        return None
    ra, rb = rank_mod_p(A), rank_mod_p(B)
    if ra != rb:
        return None
    if ra > A.cols - ra:
        A, B = dual_matrix(A), dual_matrix(B)
    bound = rank_mod_p(A) if b is None else b
    ga, gb = lmib_to_gi(A, B, bound)
    vmap = graph_isomorphism(ga, gb)
    if vmap is None:
        return None
    return IsoWitness.of([vmap[j] for j in range(A.cols)])
