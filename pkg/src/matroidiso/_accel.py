"""Hot subset/permutation kernels.

Every kernel exists twice: a numba ``@njit`` build and a plain numpy/Python
build.  Set ``MATROIDISO_NUMBA=0`` to force the fallback (also used
automatically when numba cannot be imported).  Both builds are exported so
the benchmark and the tests can compare them directly.
"""
import os

import numpy as np

_WANT_NUMBA = os.environ.get("MATROIDISO_NUMBA", "1").strip().lower() not in ("0", "false", "no", "off")

try:
    if not _WANT_NUMBA:
        raise ImportError
    import numba

    def _jit(fn):
        return numba.njit(cache=True)(fn)

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on environment
    HAVE_NUMBA = False

    def _jit(fn):
        return fn


USE_NUMBA = HAVE_NUMBA


# ---------------------------------------------------------------- loop sources
# These bodies are numba-compatible; the njit build compiles them and the
# fallback build below replaces the slow ones with numpy / int-bitmask code.

def _graphic_rank_table_loop(us, vs, n):
    m = us.shape[0]
    size = 1 << m
    out = np.zeros(size, dtype=np.int8)
    parent = np.empty(max(n, 1), dtype=np.int64)
    for mask in range(1, size):
        for i in range(n):
            parent[i] = i
        r = 0
        for e in range(m):
            if (mask >> e) & 1:
                a = us[e]
                while parent[a] != a:
                    parent[a] = parent[parent[a]]
                    a = parent[a]
                b = vs[e]
                while parent[b] != b:
                    parent[b] = parent[parent[b]]
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    r += 1
        out[mask] = r
    return out


def _gfp_rank_loop(mat, p):
    a = mat.copy() % p
    rows, cols = a.shape
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _k_modinv(a[r, c], p)
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        r += 1
    return r


def _modinv(x, p):
    # p prime; Fermat
    result = 1
    base = x % p
    e = p - 2
    while e > 0:
        if e & 1:
            result = (result * base) % p
        base = (base * base) % p
        e >>= 1
    return result


def _gfp_rank_table_loop(mat, p):
    rows, m = mat.shape
    size = 1 << m
    out = np.zeros(size, dtype=np.int8)
    sub = np.zeros((rows, m), dtype=np.int64)
    for mask in range(1, size):
        k = 0
        for e in range(m):
            if (mask >> e) & 1:
                for i in range(rows):
                    sub[i, k] = mat[i, e]
                k += 1
        out[mask] = _k_gfp_rank(sub[:, :k], p)
    return out


def _span_flags_loop(pts, p, subs):
    # For each k-subset of the columns of pts: row s of the output has a 1 at
    # every column lying in the span of the subset, and a last entry of 1 when
    # the subset is independent.
    rows, n = pts.shape
    S, k = subs.shape
    out = np.zeros((S, n + 1), dtype=np.int8)
    a = np.zeros((rows, k + n), dtype=np.int64)
    for s in range(S):
        for i in range(rows):
            for j in range(k):
                a[i, j] = pts[i, subs[s, j]]
            for j in range(n):
                a[i, k + j] = pts[i, j]
        r = 0
        for c in range(k):
            piv = -1
            for i in range(r, rows):
                if a[i, c] != 0:
                    piv = i
                    break
            if piv < 0:
                break
            if piv != r:
                for j in range(k + n):
                    t = a[r, j]
                    a[r, j] = a[piv, j]
                    a[piv, j] = t
            inv = _k_modinv(a[r, c], p)
            for j in range(k + n):
                a[r, j] = (a[r, j] * inv) % p
            for i in range(rows):
                if i != r and a[i, c] != 0:
                    f = a[i, c]
                    for j in range(k + n):
                        a[i, j] = (a[i, j] - f * a[r, j]) % p
            r += 1
        if r < k:
            continue
        out[s, n] = 1
        for j in range(n):
            inside = 1
            for i in range(k, rows):
                if a[i, k + j] != 0:
                    inside = 0
                    break
            out[s, j] = inside
    return out


def _rref_loop(mat, p):
    a = mat.copy() % p
    rows, cols = a.shape
    pivots = np.full(cols, -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = -1
        for i in range(r, rows):
            if a[i, c] != 0:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(cols):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        inv = _k_modinv(a[r, c], p)
        for j in range(cols):
            a[r, j] = (a[r, j] * inv) % p
        for i in range(rows):
            if i != r and a[i, c] != 0:
                f = a[i, c]
                for j in range(cols):
                    a[i, j] = (a[i, j] - f * a[r, j]) % p
        pivots[r] = c
        r += 1
    return a, pivots, r


def _circuit_flags_loop(rank_table, m):
    size = 1 << m
    out = np.zeros(size, dtype=np.bool_)
    for mask in range(1, size):
        k = 0
        x = mask
        while x:
            x &= x - 1
            k += 1
        if rank_table[mask] == k:
            continue
        ok = True
        for e in range(m):
            if (mask >> e) & 1:
                sub = mask ^ (1 << e)
                if rank_table[sub] != k - 1:
                    ok = False
                    break
        out[mask] = ok
    return out


def _perm_search_loop(c1, c2_sorted, m, find_all):
    """Backtracking over bijections {0..m-1} -> {0..m-1} in lexicographic order.

    c1: circuit masks of the source.  c2_sorted: sorted circuit masks of the
    target.  A bijection is accepted iff it maps each source circuit onto a
    target circuit; equal family sizes then make it a family bijection.
    Returns (count, first) where count is the number of accepted bijections
    (only when find_all) and first the lexicographically least one.
    """
    nc = c1.shape[0]
    # circuits grouped by their largest element, so they are checked as soon
    # as the prefix covers them
    top = np.empty(nc, dtype=np.int64)
    for i in range(nc):
        x = c1[i]
        t = 0
        while x > 1:
            x >>= 1
            t += 1
        top[i] = t
    perm = np.full(m, -1, dtype=np.int64)
    used = np.zeros(m, dtype=np.bool_)
    first = np.full(m, -1, dtype=np.int64)
    count = 0
    found = False
    nxt = np.zeros(m + 1, dtype=np.int64)
    depth = 0
    if m == 0:
        return 1, first
    nxt[0] = 0
    while depth >= 0:
        if depth == m:
            if not found:
                for i in range(m):
                    first[i] = perm[i]
                found = True
            count += 1
            if not find_all:
                return count, first
            depth -= 1
            used[perm[depth]] = False
            perm[depth] = -1
            continue
        t = nxt[depth]
        placed = False
        while t < m:
            if not used[t]:
                perm[depth] = t
                ok = True
                for i in range(nc):
                    if top[i] == depth:
                        img = 0
                        x = c1[i]
                        e = 0
                        while x:
                            if x & 1:
                                img |= np.int64(1) << perm[e]
                            x >>= 1
                            e += 1
                        lo = 0
                        hi = c2_sorted.shape[0]
                        while lo < hi:
                            mid = (lo + hi) // 2
                            if c2_sorted[mid] < img:
                                lo = mid + 1
                            else:
                                hi = mid
                        if lo == c2_sorted.shape[0] or c2_sorted[lo] != img:
                            ok = False
                            break
                if ok:
                    used[t] = True
                    nxt[depth] = t + 1
                    depth += 1
                    nxt[depth] = 0
                    placed = True
                    break
                perm[depth] = -1
            t += 1
        if not placed:
            perm[depth] = -1
            depth -= 1
            if depth >= 0:
                used[perm[depth]] = False
                perm[depth] = -1
    return count, first


def _gf2_rank_loop(rows):
    a = rows.copy()
    nr, nc = a.shape
    r = 0
    for c in range(nc):
        piv = -1
        for i in range(r, nr):
            if a[i, c]:
                piv = i
                break
        if piv < 0:
            continue
        if piv != r:
            for j in range(nc):
                t = a[r, j]
                a[r, j] = a[piv, j]
                a[piv, j] = t
        for i in range(nr):
            if i != r and a[i, c]:
                for j in range(nc):
                    a[i, j] ^= a[r, j]
        r += 1
        if r == nr:
            break
    return r


# ------------------------------------------------------------ numpy fallbacks

def _graphic_rank_table_py(us, vs, n):
    m = len(us)
    us = [int(x) for x in us]
    vs = [int(x) for x in vs]
    size = 1 << m
    out = np.zeros(size, dtype=np.int8)
    # rank(mask) = rank(mask - top) + [top edge joins two components]; keep
    # a component labelling per mask would cost 2^m * n memory, so recompute
    for mask in range(1, size):
        parent = list(range(n))
        r = 0
        x = mask
        e = 0
        while x:
            if x & 1:
                a = us[e]
                while parent[a] != a:
                    a = parent[a]
                b = vs[e]
                while parent[b] != b:
                    b = parent[b]
                if a != b:
                    parent[a] = b
                    r += 1
            x >>= 1
            e += 1
        out[mask] = r
    return out


def _gfp_rank_py(mat, p):
    a = [[int(v) % p for v in row] for row in np.asarray(mat)]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    r = 0
    for c in range(cols):
        if r == rows:
            break
        piv = next((i for i in range(r, rows) if a[i][c]), -1)
        if piv < 0:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(v * inv) % p for v in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        r += 1
    return r


def _gfp_rank_table_py(mat, p):
    mat = np.asarray(mat)
    rows, m = mat.shape
    cols = [[int(v) % p for v in mat[:, e]] for e in range(m)]
    size = 1 << m
    out = np.zeros(size, dtype=np.int8)
    # incremental: basis in echelon form keyed by pivot row, per mask prefix
    for mask in range(1, size):
        basis = {}
        r = 0
        x = mask
        e = 0
        while x:
            if x & 1:
                v = list(cols[e])
                for piv in range(rows):
                    if v[piv] and piv in basis:
                        b = basis[piv]
                        f = v[piv]
                        v = [(s - f * t) % p for s, t in zip(v, b)]
                lead = next((i for i in range(rows) if v[i]), -1)
                if lead >= 0:
                    inv = pow(v[lead], p - 2, p)
                    basis[lead] = [(s * inv) % p for s in v]
                    r += 1
            x >>= 1
            e += 1
        out[mask] = r
    return out


def _span_flags_np(pts, p, subs):
    rows, n = pts.shape
    S, k = subs.shape
    out = np.zeros((S, n + 1), dtype=np.int8)
    for s in range(S):
        ann = _annihilator(pts[:, subs[s]], p)
        if ann is None:
            continue
        prod = ann @ pts if p < 1 << 20 else (ann.astype(object) @ pts.astype(object))
        out[s, :n] = np.all(prod % p == 0, axis=0)
        out[s, n] = 1
    return out


def _annihilator(sub, p):
    """Rows spanning the vectors orthogonal to the columns of ``sub``;
    None when those columns are dependent."""
    a = [[int(v) % p for v in row] for row in sub.T]
    k = len(a)
    rows = sub.shape[0]
    pivots = []
    r = 0
    for c in range(rows):
        if r == k:
            break
        piv = next((i for i in range(r, k) if a[i][c]), -1)
        if piv < 0:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], p - 2, p)
        a[r] = [(v * inv) % p for v in a[r]]
        for i in range(k):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
    if r < k:
        return None
    free = [c for c in range(rows) if c not in pivots]
    out = np.zeros((len(free), rows), dtype=np.int64)
    for i, f in enumerate(free):
        out[i, f] = 1
        for row, pc in enumerate(pivots):
            out[i, pc] = (-a[row][f]) % p
    return out


def _rref_py(mat, p):
    a = mat % p
    rows, cols = a.shape
    pivots = np.full(cols, -1, dtype=np.int64)
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.nonzero(a[r:, c])[0]
        if nz.size == 0:
            continue
        piv = r + int(nz[0])
        if piv != r:
            a[[r, piv]] = a[[piv, r]]
        a[r] = (a[r] * pow(int(a[r, c]), p - 2, p)) % p
        col = a[:, c].copy()
        col[r] = 0
        hit = np.nonzero(col)[0]
        if hit.size:
            a[hit] = (a[hit] - np.outer(col[hit], a[r]) % p) % p
        pivots[r] = c
        r += 1
    return a, pivots, r


def _circuit_flags_np(rank_table, m):
    size = 1 << m
    masks = np.arange(size, dtype=np.int64)
    pop = np.zeros(size, dtype=np.int64)
    for e in range(m):
        pop += (masks >> e) & 1
    rt = rank_table.astype(np.int64)
    flags = rt < pop
    for e in range(m):
        has = ((masks >> e) & 1).astype(bool)
        sub = masks ^ (1 << e)
        flags &= ~has | (rt[sub] == pop - 1)
    flags[0] = False
    return flags


def _perm_search_py(c1, c2_sorted, m, find_all):
    c1 = [int(x) for x in c1]
    target = set(int(x) for x in c2_sorted)
    by_top = [[] for _ in range(m)]
    for c in c1:
        by_top[c.bit_length() - 1].append([e for e in range(m) if (c >> e) & 1])
    perm = [-1] * m
    used = [False] * m
    state = {"count": 0, "first": None}

    def rec(depth):
        if depth == m:
            if state["first"] is None:
                state["first"] = list(perm)
            state["count"] += 1
            return not find_all
        for t in range(m):
            if used[t]:
                continue
            perm[depth] = t
            ok = True
            for elems in by_top[depth]:
                img = 0
                for e in elems:
                    img |= 1 << perm[e]
                if img not in target:
                    ok = False
                    break
            if ok:
                used[t] = True
                if rec(depth + 1):
                    return True
                used[t] = False
            perm[depth] = -1
        return False

    if m == 0:
        return 1, np.zeros(0, dtype=np.int64)
    rec(0)
    first = np.full(m, -1, dtype=np.int64) if state["first"] is None else np.array(state["first"], dtype=np.int64)
    return state["count"], first


def _gf2_rank_py(rows):
    ints = []
    for row in np.asarray(rows):
        v = 0
        for j, bit in enumerate(row):
            if bit:
                v |= 1 << j
        ints.append(v)
    return gf2_rank_ints(ints)


def gf2_rank_ints(vectors):
    """Rank over GF(2) of vectors encoded as Python int bitmasks."""
    basis = {}
    r = 0
    for v in vectors:
        while v:
            top = v.bit_length() - 1
            if top in basis:
                v ^= basis[top]
            else:
                basis[top] = v
                r += 1
                break
    return r


# --------------------------------------------------------------- exports

_k_modinv = _jit(_modinv)
_k_gfp_rank = _jit(_gfp_rank_loop)

graphic_rank_table_nb = _jit(_graphic_rank_table_loop) if HAVE_NUMBA else None
gfp_rank_nb = _k_gfp_rank if HAVE_NUMBA else None
gfp_rank_table_nb = _jit(_gfp_rank_table_loop) if HAVE_NUMBA else None
circuit_flags_nb = _jit(_circuit_flags_loop) if HAVE_NUMBA else None
perm_search_nb = _jit(_perm_search_loop) if HAVE_NUMBA else None
gf2_rank_nb = _jit(_gf2_rank_loop) if HAVE_NUMBA else None
span_flags_nb = _jit(_span_flags_loop) if HAVE_NUMBA else None
rref_nb = _jit(_rref_loop) if HAVE_NUMBA else None


def set_backend(use_numba):
    """Switch kernels at runtime (tests and benchmarks); returns previous value."""
    global USE_NUMBA
    prev = USE_NUMBA
    USE_NUMBA = bool(use_numba) and HAVE_NUMBA
    return prev


def graphic_rank_table(us, vs, n):
    us = np.asarray(us, dtype=np.int64)
    vs = np.asarray(vs, dtype=np.int64)
    if USE_NUMBA:
        return graphic_rank_table_nb(us, vs, int(n))
    return _graphic_rank_table_py(us, vs, int(n))


def gfp_rank(mat, p):
    mat = np.asarray(mat, dtype=np.int64)
    if mat.size == 0:
        return 0
    if USE_NUMBA:
        return int(gfp_rank_nb(mat, np.int64(p)))
    return _gfp_rank_py(mat, p)


def gfp_rank_table(mat, p):
    mat = np.asarray(mat, dtype=np.int64)
    if mat.shape[0] == 0:
        return np.zeros(1 << mat.shape[1], dtype=np.int8)
    if USE_NUMBA:
        return gfp_rank_table_nb(mat, np.int64(p))
    return _gfp_rank_table_py(mat, p)


def circuit_flags(rank_table, m):
    rank_table = np.asarray(rank_table, dtype=np.int8)
    if USE_NUMBA:
        return circuit_flags_nb(rank_table, int(m))
    return _circuit_flags_np(rank_table, m)


def perm_search(c1, c2, m, find_all=False):
    """Return (count, lexicographically least bijection or None)."""
    c1 = np.asarray(sorted(int(x) for x in c1), dtype=np.int64)
    c2 = np.asarray(sorted(int(x) for x in c2), dtype=np.int64)
    if c1.shape[0] != c2.shape[0]:
        return 0, None
    if USE_NUMBA:
        count, first = perm_search_nb(c1, c2, int(m), bool(find_all))
    else:
        count, first = _perm_search_py(c1, c2, int(m), bool(find_all))
    if count == 0:
        return 0, None
    return int(count), tuple(int(x) for x in first)


def gf2_rank(rows):
    rows = np.asarray(rows, dtype=np.uint8)
    if rows.size == 0:
        return 0
    if USE_NUMBA:
        return int(gf2_rank_nb(rows))
    return _gf2_rank_py(rows)


def span_flags(pts, p, subs):
    """Membership of every column of ``pts`` in the span of each column
    subset listed in ``subs``; the last column flags independent subsets."""
    pts = np.asarray(pts, dtype=np.int64) % p
    subs = np.asarray(subs, dtype=np.int64).reshape(-1, subs.shape[1] if np.ndim(subs) == 2 else 0)
    if USE_NUMBA:
        return span_flags_nb(pts, np.int64(p), subs)
    return _span_flags_np(pts, p, subs)


def gfp_rref(mat, p):
    """Reduced row echelon form mod p; returns (nonzero rows, pivot columns)."""
    mat = np.array(mat, dtype=np.int64)
    if mat.size == 0:
        return mat.reshape(0, mat.shape[1] if mat.ndim == 2 else 0), []
    if USE_NUMBA:
        a, pivots, r = rref_nb(mat, np.int64(p))
    else:
        a, pivots, r = _rref_py(mat, p)
    return a[:r], [int(c) for c in pivots[:r]]
