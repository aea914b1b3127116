"""Text file formats.

Every file starts with a header line naming its kind and sizes.  Lines
starting with ``#`` and blank lines are ignored, so writers put a
``# matroidiso <kind> v1`` version line on top.  Parse errors raise
:class:`FormatError` carrying the file name and line number.

    graph <n> <m>            then m lines  e <u> <v> [color]
    matrix <rows> <cols> <p> then rows lines of integers
    matroid <m>              then one base per line (space-separated indices)
    colors <m>               then one label per line
    perm <m>                 then the image list (any line breaks)
    oplog <k>                then k replayable operation lines
    tree <n> <m>             then node/link lines of a decomposition dump
    manifest                 then key=value lines
"""
from pathlib import Path

import numpy as np

from .core import InputError, IsoWitness, ListMatroid, from_mask, popcount
from .decompose import load_tree
from .linear import PrimeFieldMatrix
from .multigraph import Multigraph

VERSION = 1
KINDS = ("graph", "matrix", "matroid", "colors", "perm", "oplog", "tree", "manifest")


class FormatError(InputError):
    def __init__(self, source, lineno, message):
        self.source = source
        self.lineno = lineno
        where = f"{source}:{lineno}" if lineno else str(source)
        super().__init__(f"{where}: {message}")


def _lines(text):
    """(line number, stripped text) of the meaningful lines."""
    for i, raw in enumerate(text.splitlines(), 1):
        line = raw.strip()
        if line and not line.startswith("#"):
            yield i, line


def _ints(tokens, source, lineno, what="integer"):
    try:
        return [int(t) for t in tokens]
    except ValueError:
        raise FormatError(source, lineno, f"expected {what}s, got {' '.join(tokens)!r}") from None


def _header(lines, kind, nargs, source):
    if not lines:
        raise FormatError(source, 0, f"empty file, expected a '{kind}' header")
    lineno, line = lines[0]
    parts = line.split()
    if parts[0] != kind:
        raise FormatError(source, lineno, f"expected a '{kind}' header, got {parts[0]!r}")
    if len(parts) != nargs + 1:
        raise FormatError(source, lineno, f"'{kind}' header takes {nargs} values")
    vals = _ints(parts[1:], source, lineno)
    if any(v < 0 for v in vals):
        raise FormatError(source, lineno, "header values must be non-negative")
    return vals


def _count(lines, expected, source, what):
    if len(lines) != expected:
        at = lines[-1][0] if lines else 0
        raise FormatError(source, at, f"expected {expected} {what} lines, found {len(lines)}")


def _version_line(kind):
    return f"# matroidiso {kind} v{VERSION}\n"


# ---------------------------------------------------------------- graphs

def parse_graph(text, source="<graph>"):
    lines = list(_lines(text))
    n, m = _header(lines, "graph", 2, source)
    body = lines[1:]
    _count(body, m, source, "edge")
    edges, colors = [], []
    for lineno, line in body:
        parts = line.split()
        if parts[0] != "e" or len(parts) not in (3, 4):
            raise FormatError(source, lineno, "edge lines look like 'e <u> <v> [color]'")
        vals = _ints(parts[1:], source, lineno)
        u, v = vals[0], vals[1]
        if not (0 <= u < n and 0 <= v < n):
            raise FormatError(source, lineno, f"vertex out of range 0..{n - 1}")
        if u == v:
            raise FormatError(source, lineno, f"self-loop at vertex {u} is not allowed")
        edges.append((u, v))
        colors.append(vals[2] if len(vals) == 3 else None)
    if all(c is None for c in colors):
        colors = None
    elif any(c is None for c in colors):
        raise FormatError(source, body[colors.index(None)][0], "either all edges carry a colour or none")
    return Multigraph(n, edges, colors)


def format_graph(X):
    out = [_version_line("graph"), f"graph {X.n} {X.m}\n"]
    for i, (u, v) in enumerate(X.edges):
        out.append(f"e {u} {v}" + (f" {X.colors[i]}" if X.colors is not None else "") + "\n")
    return "".join(out)


# --------------------------------------------------------------- matrices

def parse_matrix(text, source="<matrix>"):
    lines = list(_lines(text))
    rows, cols, p = _header(lines, "matrix", 3, source)
    body = lines[1:]
    _count(body, rows, source, "row")
    data = []
    for lineno, line in body:
        vals = _ints(line.split(), source, lineno)
        if len(vals) != cols:
            raise FormatError(source, lineno, f"row has {len(vals)} entries, expected {cols}")
        data.append(vals)
    try:
        return PrimeFieldMatrix(p, np.array(data, dtype=np.int64).reshape(rows, cols))
    except InputError as exc:
        raise FormatError(source, lines[0][0], str(exc)) from None


def format_matrix(A):
    out = [_version_line("matrix"), f"matrix {A.rows} {A.cols} {A.p}\n"]
    for r in range(A.rows):
        out.append(" ".join(str(int(x)) for x in A.data[r]) + "\n")
    return "".join(out)


# --------------------------------------------------------------- matroids

def parse_matroid(text, source="<matroid>"):
    lines = list(_lines(text))
    (m,) = _header(lines, "matroid", 1, source)
    bases = []
    for lineno, line in lines[1:]:
        base = [] if line == "-" else _ints(line.split(), source, lineno, "element index")
        if any(not 0 <= e < m for e in base):
            raise FormatError(source, lineno, f"element out of range 0..{m - 1}")
        bases.append(base)
    if not bases:
        raise FormatError(source, lines[0][0], "no bases listed ('-' is the empty base)")
    try:
        return ListMatroid(m, bases)
    except InputError as exc:
        raise FormatError(source, lines[1][0], str(exc)) from None


def format_matroid(M):
    out = [_version_line("matroid"), f"matroid {M.m}\n"]
    bases = getattr(M, "bases", None)
    if bases is None:
        r = M.full_rank()
        table = M.rank_table()
        bases = [mask for mask in range(1 << M.m) if popcount(mask) == r and table[mask] == r]
    for b in sorted(bases):
        els = from_mask(b)
        out.append((" ".join(map(str, els)) if els else "-") + "\n")
    return "".join(out)


# -------------------------------------------------------- colours / perms

def parse_colors(text, source="<colors>"):
    lines = list(_lines(text))
    (m,) = _header(lines, "colors", 1, source)
    body = lines[1:]
    _count(body, m, source, "label")
    out = []
    for lineno, line in body:
        (c,) = _ints([line], source, lineno, "colour label")
        out.append(c)
    return out


def format_colors(colors):
    return _version_line("colors") + f"colors {len(colors)}\n" + "".join(f"{c}\n" for c in colors)


def parse_perm(text, source="<perm>"):
    return _perm_from_lines(list(_lines(text)), source)


def _perm_from_lines(lines, source):
    (m,) = _header(lines, "perm", 1, source)
    images = []
    for lineno, line in lines[1:]:
        images.extend(_ints(line.split(), source, lineno))
    if len(images) != m:
        raise FormatError(source, lines[-1][0], f"expected {m} images, found {len(images)}")
    if sorted(images) != list(range(m)):
        raise FormatError(source, lines[-1][0], "image list is not a permutation of 0..m-1")
    return IsoWitness.of(images)


def format_perm(perm):
    images = perm.bijection if isinstance(perm, IsoWitness) else tuple(perm)
    return _version_line("perm") + f"perm {len(images)}\n" + " ".join(map(str, images)) + "\n"


def format_generators(gens, order):
    """Output of ``aut``: an ``order`` line followed by one perm block per generator."""
    return f"order {order}\n" + "".join(format_perm(g) for g in gens)


def parse_generators(text, source="<generators>"):
    """Inverse of :func:`format_generators`; returns (generators, order)."""
    lines = list(_lines(text))
    if not lines or lines[0][1].split()[0] != "order":
        raise FormatError(source, lines[0][0] if lines else 0, "expected an 'order' line")
    parts = lines[0][1].split()
    if len(parts) != 2:
        raise FormatError(source, lines[0][0], "'order' line takes one value")
    (order,) = _ints(parts[1:], source, lines[0][0])
    blocks, cur = [], None
    for lineno, line in lines[1:]:
        if line.startswith("perm"):
            cur = [(lineno, line)]
            blocks.append(cur)
        elif cur is None:
            raise FormatError(source, lineno, "image list before any 'perm' header")
        else:
            cur.append((lineno, line))
    gens = [_perm_from_lines(b, source) for b in blocks]
    return gens, order


# ------------------------------------------------------------ op logs / trees

def parse_oplog(text, source="<oplog>"):
    lines = list(_lines(text))
    (k,) = _header(lines, "oplog", 1, source)
    body = lines[1:]
    _count(body, k, source, "operation")
    return [line for _, line in body]


def format_oplog(log):
    return _version_line("oplog") + f"oplog {len(log)}\n" + "".join(f"{line}\n" for line in log)


def parse_tree(text, source="<tree>"):
    lines = list(_lines(text))
    n, m = _header(lines, "tree", 2, source)
    try:
        return load_tree("\n".join(line for _, line in lines[1:]), n, m)
    except (InputError, ValueError, IndexError) as exc:
        raise FormatError(source, lines[0][0], f"bad tree record: {exc}") from None


def format_tree(T):
    return _version_line("tree") + f"tree {T.n} {T.m}\n" + T.dump()


# ------------------------------------------------------------- manifests

def parse_manifest(text, source="<manifest>"):
    lines = list(_lines(text))
    if not lines or lines[0][1] != "manifest":
        raise FormatError(source, lines[0][0] if lines else 0, "expected a 'manifest' header")
    out = {}
    for lineno, line in lines[1:]:
        if "=" not in line:
            raise FormatError(source, lineno, "manifest lines look like key=value")
        key, value = line.split("=", 1)
        out[key.strip()] = value.strip()
    return out


def format_manifest(facts):
    return _version_line("manifest") + "manifest\n" + "".join(f"{k}={v}\n" for k, v in facts.items())


# ----------------------------------------------------------------- dispatch

_PARSERS = {
    "graph": parse_graph,
    "matrix": parse_matrix,
    "matroid": parse_matroid,
    "colors": parse_colors,
    "perm": parse_perm,
    "oplog": parse_oplog,
    "tree": parse_tree,
    "manifest": parse_manifest,
}


def sniff(text):
    """Kind named by the first header line, or None."""
    for _, line in _lines(text):
        return line.split()[0]
    return None


def parse(text, source="<input>", expect=None):
    kind = sniff(text)
    if kind not in _PARSERS:
        raise FormatError(source, 0, f"unknown file kind {kind!r}")
    if expect is not None and kind not in (expect if isinstance(expect, tuple) else (expect,)):
        raise FormatError(source, 0, f"expected a {expect} file, got {kind}")
    return kind, _PARSERS[kind](text, source)


def read(path, expect=None):
    path = Path(path)
    try:
        text = path.read_text()
    except OSError as exc:
        raise FormatError(path, 0, f"cannot read: {exc.strerror}") from None
    return parse(text, str(path), expect)


def write(path, text):
    Path(path).write_text(text)
