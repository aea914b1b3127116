"""Time each kernel under the numba build and the numpy fallback.

    python benchmarks/bench_kernels.py [--repeat 5] [--seed 0]

Numba compilation happens in a warm-up call before timing.
"""
import argparse
import timeit
from itertools import combinations

import numpy as np

from matroidiso import _accel, gen_modk_gadget
from matroidiso.multigraph import cycle_basis


def cases(rng):
    mat = rng.integers(0, 7, size=(6, 14))
    big = rng.integers(0, 2 ** 31 - 1, size=(8, 8))
    X = gen_modk_gadget(4)
    us = [u for u, _ in X.edges[:14]]
    vs = [v for _, v in X.edges[:14]]
    table = _accel.graphic_rank_table(us, vs, X.n)
    pts = rng.integers(0, 101, size=(4, 40))
    subs = np.array(list(combinations(range(40), 3)), dtype=np.int64)
    cyc = cycle_basis(gen_modk_gadget(5))
    basis = cyc.as_array()
    c4 = [int(x) for x in np.nonzero(_accel.circuit_flags(
        _accel.graphic_rank_table([0, 1, 2, 3, 0, 1, 0, 2], [1, 2, 3, 0, 2, 3, 3, 1], 4), 8))[0]]
    return {
        "gfp_rank 8x8 p~2^31": lambda: _accel.gfp_rank(big, 2 ** 31 - 1),
        "gfp_rank_table 6x14 GF(7)": lambda: _accel.gfp_rank_table(mat, 7),
        "graphic_rank_table m=14": lambda: _accel.graphic_rank_table(us, vs, X.n),
        "circuit_flags m=14": lambda: _accel.circuit_flags(table, 14),
        "span_flags 4x40, all 3-subsets": lambda: _accel.span_flags(pts, 101, subs),
        "rref 6x14 GF(7)": lambda: _accel.gfp_rref(mat, 7),
        "gf2_rank cycle basis of X(5)": lambda: _accel.gf2_rank(basis),
        "perm_search Aut, K4 plus 2 parallels": lambda: _accel.perm_search(c4, c4, 8, find_all=True),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--repeat", type=int, default=5)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args(argv)
    if not _accel.HAVE_NUMBA:
        raise SystemExit("numba is not importable (or MATROIDISO_NUMBA=0); nothing to compare")
    rng = np.random.default_rng(args.seed)
    print(f"{'kernel':36s} {'numba ms':>10s} {'numpy ms':>10s} {'speedup':>8s}")
    for name, fn in cases(rng).items():
        row = []
        for flag in (True, False):
            _accel.set_backend(flag)
            fn()  # warm-up / compile
            t = min(timeit.repeat(fn, number=1, repeat=args.repeat))
            row.append(t * 1e3)
        _accel.set_backend(True)
        print(f"{name:36s} {row[0]:10.3f} {row[1]:10.3f} {row[1] / max(row[0], 1e-9):7.1f}x")


if __name__ == "__main__":
    main()
