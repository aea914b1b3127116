"""Representation-independent matroid semantics.

Subsets are passed around as iterables of element indices at the public
surface and as integer bitmasks internally.  Exhaustive operations are
bounded by :data:`ENUM_LIMIT` (subset enumeration) and
:data:`FACTORIAL_LIMIT` (bijection search); both are module-level knobs.
"""
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from . import _accel

ENUM_LIMIT = 16
FACTORIAL_LIMIT = 8


class MatroidError(Exception):
    """Base class for all library errors."""


class InputError(MatroidError, ValueError):
    pass


class CapacityError(MatroidError):
    """Raised when an exhaustive routine is asked to exceed its size bound."""


class IntegrityError(MatroidError):
    """An internal invariant was violated (a bug, not a user error)."""


def to_mask(subset, m):
    mask = 0
    for e in subset:
        e = int(e)
        if e < 0 or e >= m:
            raise InputError(f"element {e} outside ground set of size {m}")
        mask |= 1 << e
    return mask


def from_mask(mask):
    out = []
    e = 0
    while mask:
        if mask & 1:
            out.append(e)
        mask >>= 1
        e += 1
    return tuple(out)


def popcount(x):
    return bin(x).count("1")


def canonical_order(family):
    """Sort subsets by size, then lexicographically."""
    return sorted((tuple(sorted(s)) for s in family), key=lambda s: (len(s), s))


class MatroidOracle:
    """Independence oracle over the ground set ``0..m-1``.

    Subclasses implement ``_independent_mask``; the rank table used by the
    exhaustive routines may be overridden with a vectorised kernel.
    """

    m = 0

    def _independent_mask(self, mask):
        raise NotImplementedError

    def is_independent(self, subset):
        return self._independent_mask(to_mask(subset, self.m))

    def rank_mask(self, mask):
        # greedy augmentation in index order
        basis = 0
        e = 0
        x = mask
        while x:
            if x & 1 and self._independent_mask(basis | (1 << e)):
                basis |= 1 << e
            x >>= 1
            e += 1
        return popcount(basis)

    def rank_table(self):
        if self.m > ENUM_LIMIT:
            raise CapacityError(f"ground set of size {self.m} exceeds enumeration bound {ENUM_LIMIT}")
        cached = getattr(self, "_rank_table_cache", None)
        if cached is None:
            cached = self._compute_rank_table()
            self._rank_table_cache = cached
        return cached

    def _compute_rank_table(self):
        out = np.zeros(1 << self.m, dtype=np.int8)
        for mask in range(1, 1 << self.m):
            out[mask] = self.rank_mask(mask)
        return out

    def full_rank(self):
        return self.rank_mask((1 << self.m) - 1)

    def circuit_masks(self):
        cached = getattr(self, "_circuit_cache", None)
        if cached is None:
            flags = _accel.circuit_flags(self.rank_table(), self.m)
            masks = [int(x) for x in np.nonzero(flags)[0]]
            cached = tuple(sorted(masks, key=lambda c: (popcount(c), from_mask(c))))
            self._circuit_cache = cached
        return cached


class ListMatroid(MatroidOracle):
    """Matroid given by its list of bases (independent = contained in a base)."""

    def __init__(self, m, bases):
        self.m = int(m)
        self.bases = tuple(sorted({to_mask(b, self.m) for b in bases}))
        if not self.bases:
            raise InputError("a matroid needs at least one base")
        sizes = {popcount(b) for b in self.bases}
        if len(sizes) != 1:
            raise InputError("bases must all have the same size")

    def _independent_mask(self, mask):
        return any(mask & b == mask for b in self.bases)

    def __repr__(self):
        return f"ListMatroid(m={self.m}, bases={len(self.bases)})"


class TableMatroid(MatroidOracle):
    """Matroid backed by a precomputed rank table (used for derived matroids)."""

    def __init__(self, m, rank_table):
        self.m = int(m)
        self._rank_table_cache = np.asarray(rank_table, dtype=np.int8)

    def _independent_mask(self, mask):
        return int(self._rank_table_cache[mask]) == popcount(mask)

    def rank_mask(self, mask):
        return int(self._rank_table_cache[mask])


class DirectSum(MatroidOracle):
    def __init__(self, first, second):
        self.first = first
        self.second = second
        self.m = first.m + second.m

    def _independent_mask(self, mask):
        lo = mask & ((1 << self.first.m) - 1)
        hi = mask >> self.first.m
        return self.first._independent_mask(lo) and self.second._independent_mask(hi)

    def rank_mask(self, mask):
        lo = mask & ((1 << self.first.m) - 1)
        return self.first.rank_mask(lo) + self.second.rank_mask(mask >> self.first.m)


def uniform_matroid(k, m):
    """U_{k,m} as a list-backed oracle."""
    if not 0 <= k <= m:
        raise InputError("need 0 <= k <= m")
    return ListMatroid(m, combinations(range(m), k))


@dataclass(frozen=True)
class IsoWitness:
    """Ground-set bijection ``source element i -> target element bijection[i]``."""

    bijection: tuple
    source_size: int
    target_size: int

    def __post_init__(self):
        if self.source_size != self.target_size or len(self.bijection) != self.source_size:
            raise InputError("witness must pair equal-size ground sets")
        if sorted(self.bijection) != list(range(self.source_size)):
            raise InputError("witness is not a permutation")

    @classmethod
    def of(cls, bijection):
        b = tuple(int(x) for x in bijection)
        return cls(b, len(b), len(b))

    def image_mask(self, mask):
        out = 0
        e = 0
        while mask:
            if mask & 1:
                out |= 1 << self.bijection[e]
            mask >>= 1
            e += 1
        return out

    def inverse(self):
        inv = [0] * self.source_size
        for i, j in enumerate(self.bijection):
            inv[j] = i
        return IsoWitness.of(inv)

    def validate(self, source, target):
        """True iff the bijection maps the circuit family onto the circuit family."""
        if source.m != self.source_size or target.m != self.target_size:
            return False
        c1 = source.circuit_masks()
        c2 = set(target.circuit_masks())
        if len(c1) != len(c2):
            return False
        return all(self.image_mask(c) in c2 for c in c1)


def _check_ground(M, T):
    mask = to_mask(T, M.m)
    return mask


def rank(M, T=None):
    if T is None:
        return M.full_rank()
    return M.rank_mask(_check_ground(M, T))


def closure(M, F):
    mask = _check_ground(M, F)
    r = M.rank_mask(mask)
    out = [x for x in range(M.m) if (mask >> x) & 1 or M.rank_mask(mask | (1 << x)) == r]
    return tuple(out)


def circuits(M):
    """All circuits in canonical order (size, then lexicographic)."""
    return [from_mask(c) for c in M.circuit_masks()]


def hyperplanes(M):
    """Maximal non-spanning sets, i.e. flats of rank r-1."""
    table = M.rank_table()
    m = M.m
    r = int(table[(1 << m) - 1])
    if r == 0:
        return []
    out = []
    for mask in range(1 << m):
        if table[mask] != r - 1:
            continue
        if all((mask >> x) & 1 or table[mask | (1 << x)] == r for x in range(m)):
            out.append(from_mask(mask))
    return canonical_order(out)


def is_uniform(M, k):
    """Every <=k subset independent and every (k+1)-subset dependent."""
    m = M.m
    if m > ENUM_LIMIT:
        raise CapacityError(f"ground set of size {m} exceeds enumeration bound {ENUM_LIMIT}")
    if k < 0 or k > m:
        return False
    # downward closure: checking the k-subsets and (k+1)-subsets suffices
    for s in combinations(range(m), k):
        if not M.is_independent(s):
            return False
    if k + 1 <= m:
        for s in combinations(range(m), k + 1):
            if M.is_independent(s):
                return False
    return True


def direct_sum(M1, M2):
    return DirectSum(M1, M2)


def check_axioms(M):
    """Exhaustively verify the three independence axioms (small m only)."""
    m = M.m
    if m > ENUM_LIMIT:
        raise CapacityError("axiom check is exhaustive")
    indep = [M._independent_mask(mask) for mask in range(1 << m)]
    if not indep[0]:
        return False
    for mask in range(1, 1 << m):
        if indep[mask]:
            x = mask
            while x:
                low = x & -x
                if not indep[mask ^ low]:
                    return False
                x ^= low
    independents = [mask for mask in range(1 << m) if indep[mask]]
    by_size = {}
    for mask in independents:
        by_size.setdefault(popcount(mask), []).append(mask)
    # exchange: enough to check |I2| = |I1| + 1 given downward closure
    for size, small in by_size.items():
        for i1 in small:
            for i2 in by_size.get(size + 1, ()):
                diff = i2 & ~i1
                ok = False
                while diff:
                    low = diff & -diff
                    if indep[i1 | low]:
                        ok = True
                        break
                    diff ^= low
                if not ok:
                    return False
    return True


def brute_force_iso(M1, M2, limit=None):
    """Lexicographically least circuit-preserving bijection, or None."""
    limit = FACTORIAL_LIMIT if limit is None else limit
    if M1.m != M2.m:
        return None
    if M1.m > limit:
        raise CapacityError(f"factorial search capped at m={limit}")
    c1 = M1.circuit_masks()
    c2 = M2.circuit_masks()
    if sorted(map(popcount, c1)) != sorted(map(popcount, c2)):
        return None
    _, first = _accel.perm_search(c1, c2, M1.m)
    if first is None:
        return None
    return IsoWitness.of(first)


def count_automorphisms(M, limit=None):
    """Number of circuit-preserving permutations (exhaustive)."""
    limit = FACTORIAL_LIMIT if limit is None else limit
    if M.m > limit:
        raise CapacityError(f"factorial search capped at m={limit}")
    c = M.circuit_masks()
    count, _ = _accel.perm_search(c, c, M.m, find_all=True)
    return count


def family_iso(c1, c2, m, colors1=None, colors2=None):
    """Bijection mapping set family c1 onto c2 (masks), honouring colours.

    Used where the ground set exceeds the factorial bound but the families
    are small.  Elements lying in exactly the same circuits (series classes,
    coloops) are interchangeable, so each such class is collapsed to one
    weighted element before backtracking.
    """
    c1 = set(c1)
    c2 = set(c2)
    if len(c1) != len(c2) or (0 in c1) != (0 in c2):
        return None
    c1 = sorted(c1 - {0})
    c2 = sorted(c2 - {0})
    colors1 = [0] * m if colors1 is None else list(colors1)
    colors2 = [0] * m if colors2 is None else list(colors2)

    def collapse(fam, colors):
        inc = [0] * m
        for idx, c in enumerate(fam):
            for e in from_mask(c):
                inc[e] |= 1 << idx
        groups = {}
        for e in range(m):
            groups.setdefault((inc[e], colors[e]), []).append(e)
        keys = sorted(groups, key=lambda k: groups[k][0])
        where = {}
        for i, k in enumerate(keys):
            for e in groups[k]:
                where[e] = i
        fam2 = []
        for c in fam:
            mask = 0
            for e in from_mask(c):
                mask |= 1 << where[e]
            fam2.append(mask)
        labels = [(k[1], len(groups[k])) for k in keys]
        return fam2, labels, [groups[k] for k in keys]

    r1, l1, g1 = collapse(c1, colors1)
    r2, l2, g2 = collapse(c2, colors2)
    if len(g1) != len(g2):
        return None
    sub = _family_iso_raw(r1, r2, len(g1), l1, l2)
    if sub is None:
        return None
    perm = [0] * m
    for i, j in enumerate(sub):
        for a, b in zip(g1[i], g2[j]):
            perm[a] = b
    return IsoWitness.of(perm)


def _family_iso_raw(c1, c2, m, colors1, colors2):
    c2set = set(c2)

    def profile(fam, colors):
        prof = []
        for e in range(m):
            sizes = sorted(popcount(c) for c in fam if (c >> e) & 1)
            prof.append((colors[e], tuple(sizes)))
        return prof

    p1 = profile(c1, colors1)
    p2 = profile(c2set, colors2)
    if sorted(p1) != sorted(p2):
        return None
    order = sorted(range(m), key=lambda e: (sum(1 for c in c1 if (c >> e) & 1) == 0, p1[e]))
    # put elements sharing circuits with already placed ones early
    placed = []
    rest = list(order)
    while rest:
        best = max(rest, key=lambda e: (sum(1 for c in c1 if (c >> e) & 1 and any((c >> x) & 1 for x in placed)), -order.index(e)))
        placed.append(best)
        rest.remove(best)
    order = placed
    pos = {e: i for i, e in enumerate(order)}
    checks = [[] for _ in range(m)]
    for c in c1:
        last = max(pos[e] for e in from_mask(c))
        checks[last].append(from_mask(c))
    perm = {}
    used = set()

    def rec(i):
        if i == m:
            return True
        e = order[i]
        for t in range(m):
            if t in used or p2[t] != p1[e]:
                continue
            perm[e] = t
            ok = True
            for elems in checks[i]:
                img = 0
                for x in elems:
                    img |= 1 << perm[x]
                if img not in c2set:
                    ok = False
                    break
            if ok:
                used.add(t)
                if rec(i + 1):
                    return True
                used.discard(t)
            del perm[e]
        return False

    if not rec(0):
        return None
    return [perm[e] for e in range(m)]
