"""Command-line front end.

Exit codes: 0 isomorphic / true, 1 non-isomorphic / false (or a failed
selfcheck), 2 usage or input error, 3 internal integrity error.  The
verdict line (``ISO`` / ``NONISO``) and requested data go to stdout;
diagnostics and stats go to stderr.
"""
import argparse
import sys
from pathlib import Path

from . import fileio
from .core import (CapacityError, FACTORIAL_LIMIT, InputError, IntegrityError, IsoWitness, brute_force_iso,
                   family_iso)
from .generators import make_rng, random_matrix, random_multigraph
from .gi import ColoredGraph, graph_isomorphism
from .gmi import GMIStats, gmi_test
from .linear import (LinearMatroid, colored_lmi_test, gi_to_lmib, is_prime, linear_iso, lmi_test,
                     lmib_to_gi, uniform_representation)
from .multigraph import (gen_modk_gadget, is_matroid_automorphism, log_edge_map,
                         modk_shift, random_2iso_pair)
from .reductions import gma_generators, lma_generators, mib_to_gmi, oracle_generators

ISO, NONISO, USAGE, INTEGRITY = 0, 1, 2, 3


def _verdict(ok):
    print("ISO" if ok else "NONISO")
    return ISO if ok else NONISO


def _write_witness(path, witness):
    if path and witness is not None:
        fileio.write(path, fileio.format_perm(witness))


def _load(path, expect):
    return fileio.read(path, expect)[1]


# ---------------------------------------------------------------- verdicts

def cmd_gmi(args):
    X1, X2 = _load(args.g1, "graph"), _load(args.g2, "graph")
    stats = GMIStats()
    w = gmi_test(X1, X2, strict=args.strict, stats=stats)
    if args.stats:
        print(stats.line(), file=sys.stderr)
    _write_witness(args.witness, w)
    return _verdict(w is not None)


def cmd_lmi(args):
    A, B = _load(args.a, "matrix"), _load(args.b, "matrix")
    if A.p != B.p:
        raise InputError(f"matrices over different fields: GF({A.p}) and GF({B.p})")
    ca = _load(args.colors_a, "colors") if args.colors_a else None
    cb = _load(args.colors_b, "colors") if args.colors_b else None
    if (ca is None) != (cb is None):
        raise InputError("give colourings for both matrices or for neither")
    if ca is not None:
        if len(ca) != A.cols or len(cb) != B.cols:
            raise InputError("colouring length differs from the column count")
        method = "direct" if args.method in ("auto", "direct") else "gadget"
        w = colored_lmi_test(A, ca, B, cb, method=method)
    elif args.method == "basis":
        w = lmi_test(A, B)
    else:
        w = linear_iso(A, B)
    _write_witness(args.witness, w)
    return _verdict(w is not None)


def cmd_mi(args):
    M1, M2 = _load(args.m1, "matroid"), _load(args.m2, "matroid")
    if M1.m != M2.m:
        return _verdict(False)
    if args.via_gmi:
        b = max(M1.full_rank(), M2.full_rank())
        X1, X2 = mib_to_gmi(M1, M2, b)
        ok = gmi_test(X1, X2) is not None
        return _verdict(ok)
    if M1.m <= FACTORIAL_LIMIT:
        w = brute_force_iso(M1, M2)
    else:
        w = family_iso(M1.circuit_masks(), M2.circuit_masks(), M1.m)
    _write_witness(args.witness, w)
    return _verdict(w is not None)


def cmd_gi(args):
    X1, X2 = _load(args.g1, "graph"), _load(args.g2, "graph")
    v1 = _load(args.colors1, "colors") if args.colors1 else None
    v2 = _load(args.colors2, "colors") if args.colors2 else None
    for X, v in ((X1, v1), (X2, v2)):
        if v is not None and len(v) != X.n:
            raise InputError("vertex colouring length differs from the vertex count")
    vmap = graph_isomorphism(ColoredGraph(X1, v1), ColoredGraph(X2, v2))
    if vmap is not None:
        _write_witness(args.witness, IsoWitness.of(vmap))
    return _verdict(vmap is not None)


# ------------------------------------------------------------ automorphisms

def _ground_object(path):
    kind, obj = fileio.read(path, ("graph", "matrix", "matroid"))
    return kind, obj


def cmd_aut(args):
    kind, obj = _ground_object(args.input)
    if kind == "graph":
        gs = gma_generators(obj)
    elif kind == "matrix":
        gs = lma_generators(obj)
    else:
        gs = oracle_generators(obj)
    text = fileio.format_generators(gs.generators, gs.order())
    if args.out:
        fileio.write(args.out, text)
        print(f"order {gs.order()}")
    else:
        sys.stdout.write(text)
    return ISO


def cmd_aut_member(args):
    kind, obj = _ground_object(args.input)
    perm = _load(args.perm, "perm")
    m = obj.m if kind != "matrix" else obj.cols
    if len(perm.bijection) != m:
        raise InputError(f"permutation has {len(perm.bijection)} entries, ground set has {m}")
    if kind == "graph":
        ok = is_matroid_automorphism(obj, perm.bijection, method=args.method)
    elif kind == "matrix":
        M = LinearMatroid(obj)
        ok = perm.validate(M, M)
    else:
        ok = perm.validate(obj, obj)
    return _verdict(ok)


# ----------------------------------------------------------------- gen

def _out_dir(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    return out


def cmd_gen(args):
    out = _out_dir(args)
    rng = make_rng(args.seed)
    facts = {"kind": args.kind, "seed": args.seed}
    if args.kind == "whitney-pair":
        n = args.n
        m = args.m if args.m is not None else n + n // 2
        X1 = random_multigraph(rng, n, m, connected=True)
        ops = args.ops if args.ops is not None else max(n - 2, 0)
        if ops > max(n - 2, 0):
            raise InputError(f"at most n-2 = {max(n - 2, 0)} operations are needed; got {ops}")
        X2, oplog = random_2iso_pair(X1, ops=ops, seed=args.seed, relabel=True)
        fileio.write(out / "g1.g", fileio.format_graph(X1))
        fileio.write(out / "g2.g", fileio.format_graph(X2))
        fileio.write(out / "ops.log", fileio.format_oplog(oplog))
        fileio.write(out / "map.perm", fileio.format_perm(log_edge_map(X1.m, oplog)))
        facts.update(two_isomorphic="true", ops=ops, n=n, m=m, edge_map="map.perm")
    elif args.kind == "modk-gadget":
        X = gen_modk_gadget(args.k)
        fileio.write(out / f"x{args.k}.g", fileio.format_graph(X))
        for a in range(args.k):
            for b in range(args.k):
                fileio.write(out / f"shift_{a}_{b}.perm", fileio.format_perm(modk_shift(args.k, a, b)))
        facts.update(vertices=X.n, edges=X.m, shift_automorphisms=args.k * args.k)
    elif args.kind == "uniform-rep":
        if not is_prime(args.p):
            raise InputError(f"{args.p} is not prime")
        A = uniform_representation(args.k, args.m, args.p)
        fileio.write(out / f"u{args.k}_{args.m}.mat", fileio.format_matrix(A))
        facts.update(uniform="true", rank=args.k, columns=args.m, p=args.p)
    elif args.kind == "random-graph":
        m = args.m if args.m is not None else args.n
        X = random_multigraph(rng, args.n, m, connected=args.connected)
        if args.colors:
            X = X.with_colors([rng.randint(1, args.colors) for _ in range(m)])
        fileio.write(out / "graph.g", fileio.format_graph(X))
        facts.update(n=args.n, m=m)
    elif args.kind == "random-matrix":
        if not is_prime(args.p):
            raise InputError(f"{args.p} is not prime")
        A = random_matrix(rng, args.rows, args.cols, args.p)
        fileio.write(out / "matrix.mat", fileio.format_matrix(A))
        facts.update(rows=args.rows, cols=args.cols, p=args.p)
    fileio.write(out / "manifest.txt", fileio.format_manifest(facts))
    print(f"wrote {out}", file=sys.stderr)
    return ISO


# --------------------------------------------------------------- reduce

def cmd_reduce(args):
    out = _out_dir(args)
    if args.kind == "mib-gmi":
        M1, M2 = _load(args.inputs[0], "matroid"), _load(args.inputs[1], "matroid")
        b = args.b if args.b is not None else max(M1.full_rank(), M2.full_rank())
        X1, X2 = mib_to_gmi(M1, M2, b, fold=args.fold)
        fileio.write(out / "x1.g", fileio.format_graph(X1))
        fileio.write(out / "x2.g", fileio.format_graph(X2))
    elif args.kind == "gi-lmi":
        X1, X2 = _load(args.inputs[0], "graph"), _load(args.inputs[1], "graph")
        A1, A2 = gi_to_lmib(X1, X2)
        fileio.write(out / "a1.mat", fileio.format_matrix(A1))
        fileio.write(out / "a2.mat", fileio.format_matrix(A2))
    else:
        A, B = _load(args.inputs[0], "matrix"), _load(args.inputs[1], "matrix")
        b = args.b if args.b is not None else max(A.rows, B.rows)
        G1, G2 = lmib_to_gi(A, B, b)
        for name, G in (("x1", G1), ("x2", G2)):
            fileio.write(out / f"{name}.g", fileio.format_graph(G.graph))
            fileio.write(out / f"{name}.sides", fileio.format_colors(list(G.vcolors)))
    print(f"wrote {out}", file=sys.stderr)
    return ISO


# ------------------------------------------------------------- selfcheck

def cmd_selfcheck(args):
    from .acceptance import CRITERIA, FAULTS, run

    keys = args.only.split(",") if args.only else None
    for k in keys or ():
        if k not in CRITERIA:
            raise InputError(f"unknown criterion {k!r}")
    faults = args.inject_fault or ()
    for f in faults:
        if f not in FAULTS:
            raise InputError(f"unknown fault {f!r}")
    results = run(keys, seed=args.seed, faults=faults)
    failed = [r.key for r in results if not r.passed]
    print(f"selfcheck: {len(results) - len(failed)}/{len(results)} passed", file=sys.stderr)
    return ISO if not failed else NONISO


# --------------------------------------------------------------- parser

def build_parser():
    p = argparse.ArgumentParser(prog="matroidiso", description="Matroid isomorphism toolkit.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("gmi", help="2-isomorphism of two graph files")
    s.add_argument("g1")
    s.add_argument("g2")
    s.add_argument("--witness", help="write the edge map as a perm file")
    s.add_argument("--stats", action="store_true", help="print refinement stats to stderr")
    s.add_argument("--strict", action="store_true", help="classify components through colour gadgets")
    s.set_defaults(func=cmd_gmi)

    s = sub.add_parser("lmi", help="isomorphism of two matrix files")
    s.add_argument("a")
    s.add_argument("b")
    s.add_argument("--colors-a")
    s.add_argument("--colors-b")
    s.add_argument("--method", choices=("auto", "direct", "gadget", "basis"), default="auto")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_lmi)

    s = sub.add_parser("mi", help="isomorphism of two list-backed matroid files")
    s.add_argument("m1")
    s.add_argument("m2")
    s.add_argument("--via-gmi", action="store_true", help="decide through the red/blue graph reduction")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_mi)

    s = sub.add_parser("gi", help="isomorphism of two graph files (vertex maps)")
    s.add_argument("g1")
    s.add_argument("g2")
    s.add_argument("--colors1", help="vertex colouring of g1 (colors file)")
    s.add_argument("--colors2")
    s.add_argument("--witness")
    s.set_defaults(func=cmd_gi)

    s = sub.add_parser("aut", help="automorphism group generators and order")
    s.add_argument("input", help="graph, matrix or matroid file")
    s.add_argument("--out")
    s.set_defaults(func=cmd_aut)

    s = sub.add_parser("aut-member", help="is a permutation an automorphism?")
    s.add_argument("input")
    s.add_argument("perm")
    s.add_argument("--method", choices=("cycle-space", "system"), default="cycle-space")
    s.set_defaults(func=cmd_aut_member)

    s = sub.add_parser("gen", help="generate instances plus a ground-truth manifest")
    s.add_argument("kind", choices=("whitney-pair", "modk-gadget", "uniform-rep", "random-graph",
                                     "random-matrix"))
    s.add_argument("--out", default=".")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--n", type=int, default=8)
    s.add_argument("--m", type=int)
    s.add_argument("--ops", type=int)
    s.add_argument("--k", type=int, default=3)
    s.add_argument("--p", type=int, default=5)
    s.add_argument("--rows", type=int, default=3)
    s.add_argument("--cols", type=int, default=5)
    s.add_argument("--colors", type=int, default=0, help="random edge colours 1..C")
    s.add_argument("--connected", action="store_true")
    s.set_defaults(func=cmd_gen)

    s = sub.add_parser("reduce", help="emit the instance produced by a reduction")
    s.add_argument("kind", choices=("mib-gmi", "gi-lmi", "lmi-gi"))
    s.add_argument("inputs", nargs=2)
    s.add_argument("--out", default=".")
    s.add_argument("--b", type=int, help="rank bound")
    s.add_argument("--fold", action="store_true", help="replace colours by path gadgets")
    s.set_defaults(func=cmd_reduce)

    s = sub.add_parser("selfcheck", help="run the acceptance suite")
    s.add_argument("--only", help="comma-separated criteria, e.g. A1,A4")
    s.add_argument("--seed", type=int, default=0)
    s.add_argument("--inject-fault", action="append", help="fault to inject (gadget-length)")
    s.set_defaults(func=cmd_selfcheck)
    return p


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except IntegrityError as exc:
        print(f"integrity error: {exc}", file=sys.stderr)
        return INTEGRITY
    except (InputError, CapacityError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return USAGE


if __name__ == "__main__":
    sys.exit(main())
