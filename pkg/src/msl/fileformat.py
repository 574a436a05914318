"""Text formats for matroids and tree-decompositions.

Matroid definitions, one per header line ``<name> = <kind> <args>``::

    # comment
    U = uniform 2 4
    G = graphic 4          # vertex count; one "u v" edge per line, then "end"
      0 1
      1 2
    end
    A = linear 3 2 4       # field order p, rows r, columns n; r rows, then "end"
      1 0 1 1
      0 1 1 2
    end
    S = sparsepaving 3 6   # one circuit-hyperplane (r elements) per line, then "end"
      1 2 3
    end
    K = complete 4
    R = r10
    F = fano
    D = dual G
    T = truncate G
    P = directsum U K
    N = minor G contract 1 delete 2 3
    Q = restrict G 1 2 3

Decomposition lines, after the definitions::

    decompose <name>                # matroid being decomposed (default: last defined)
    vertex <id> [label] : e1 e2 ... # one per tree vertex; the part may be empty
    edge <id> <id>
    target e1 e2 ...                # optional: the restriction actually of interest

Elements are the integer labels of the matroid (``1..n`` for base kinds).
"""
from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from .connectivity import TreeDecomposition, edge_thickness
from .errors import MatroidError
from .matroid import (
    GraphicMatroid,
    LinearMatroid,
    Matroid,
    SparsePavingMatroid,
    UniformMatroid,
    complete_graph,
    direct_sum,
    dual,
    fano,
    r10,
    truncate,
)

BLOCK_KINDS = {"graphic", "linear", "sparsepaving"}
LINE_KINDS = {"uniform", "complete", "r10", "fano", "dual", "truncate", "directsum",
              "minor", "restrict"}


class ParseError(MatroidError):
    def __init__(self, lineno, msg):
        super().__init__(f"line {lineno}: {msg}")
        self.lineno = lineno


def _ints(tokens, lineno):
    try:
        return [int(t) for t in tokens]
    except ValueError as exc:
        raise ParseError(lineno, f"expected integers, got {' '.join(tokens)!r}") from exc


def _strip(line: str) -> str:
    return line.split("#", 1)[0].strip()


def parse_matroids(text: str) -> dict[str, Matroid]:
    """Parse all matroid definitions (decomposition lines are skipped)."""
    matroids: dict[str, Matroid] = {}
    lines = list(enumerate(text.splitlines(), start=1))
    i = 0
    while i < len(lines):
        lineno, raw = lines[i]
        i += 1
        line = _strip(raw)
        if not line or line.split()[0] in ("decompose", "vertex", "edge", "target"):
            continue
        if "=" not in line:
            raise ParseError(lineno, f"expected '<name> = <kind> ...', got {line!r}")
        name, rhs = (s.strip() for s in line.split("=", 1))
        if not name or len(name.split()) != 1:
            raise ParseError(lineno, "bad matroid name")
        tokens = rhs.split()
        if not tokens:
            raise ParseError(lineno, "missing kind")
        kind, args = tokens[0], tokens[1:]
        if kind in BLOCK_KINDS:
            body = []
            while True:
                if i >= len(lines):
                    raise ParseError(lineno, f"unterminated {kind} block")
                blineno, braw = lines[i]
                i += 1
                bline = _strip(braw)
                if bline == "end":
                    break
                if bline:
                    body.append((blineno, bline.split()))
            M = _build_block(kind, args, body, lineno)
        elif kind in LINE_KINDS:
            M = _build_line(kind, args, matroids, lineno)
        else:
            raise ParseError(lineno, f"unknown matroid kind {kind!r}")
        M.name = name
        matroids[name] = M
    return matroids


def _build_block(kind, args, body, lineno):
    a = _ints(args, lineno)
    try:
        if kind == "graphic":
            if len(a) != 1:
                raise ParseError(lineno, "graphic takes a vertex count")
            edges = []
            for bl, toks in body:
                e = _ints(toks, bl)
                if len(e) != 2:
                    raise ParseError(bl, "an edge line has two vertices")
                edges.append(tuple(e))
            return GraphicMatroid(a[0], edges)
        if kind == "linear":
            if len(a) != 3:
                raise ParseError(lineno, "linear takes p r n")
            p, r, n = a
            rows = [_ints(toks, bl) for bl, toks in body]
            if len(rows) != r or any(len(row) != n for row in rows):
                raise ParseError(lineno, f"expected {r} rows of {n} entries")
            return LinearMatroid(p, rows)
        if len(a) != 2:
            raise ParseError(lineno, "sparsepaving takes r n")
        return SparsePavingMatroid(a[0], a[1], [_ints(t, bl) for bl, t in body])
    except ParseError:
        raise
    except MatroidError as exc:
        raise ParseError(lineno, str(exc)) from exc


def _split_keywords(args, keywords, lineno):
    groups = {k: [] for k in keywords}
    current = None
    for tok in args:
        if tok in groups:
            current = tok
        elif current is None:
            raise ParseError(lineno, f"expected one of {keywords}, got {tok!r}")
        else:
            groups[current].append(tok)
    return {k: _ints(v, lineno) for k, v in groups.items()}


def _build_line(kind, args, matroids, lineno):
    def ref(tok):
        if tok not in matroids:
            raise ParseError(lineno, f"undefined matroid {tok!r}")
        return matroids[tok]

    try:
        if kind == "uniform":
            r, n = _ints(args, lineno)
            return UniformMatroid(r, n)
        if kind == "complete":
            (n,) = _ints(args, lineno)
            return complete_graph(n)
        if kind in ("r10", "fano"):
            if args:
                raise ParseError(lineno, f"{kind} takes no arguments")
            return r10() if kind == "r10" else fano()
        if kind in ("dual", "truncate"):
            (name,) = args
            return (dual if kind == "dual" else truncate)(ref(name))
        if kind == "directsum":
            a, b = args
            return direct_sum(ref(a), ref(b))
        if kind == "minor":
            base = ref(args[0])
            g = _split_keywords(args[1:], ("contract", "delete"), lineno)
            return base.minor(g["contract"], g["delete"])
        base = ref(args[0])
        return base.restrict(_ints(args[1:], lineno))
    except ParseError:
        raise
    except (ValueError, MatroidError) as exc:
        raise ParseError(lineno, f"bad {kind} definition: {exc}") from exc


@dataclass
class Decomposition:
    matroid: Matroid
    td: TreeDecomposition
    target: frozenset | None
    matroids: dict
    edge_thickness: dict


def parse_decomposition(text: str) -> Decomposition:
    matroids = parse_matroids(text)
    if not matroids:
        raise MatroidError("no matroid defined")
    name = list(matroids)[-1]
    vertices, labels, parts, edges = [], {}, {}, []
    target = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = _strip(raw)
        if not line:
            continue
        head, *rest = line.split()
        if head == "decompose":
            if len(rest) != 1 or rest[0] not in matroids:
                raise ParseError(lineno, "decompose needs a defined matroid name")
            name = rest[0]
        elif head == "vertex":
            if ":" not in line:
                raise ParseError(lineno, "vertex line needs ':' before its elements")
            left, right = line.split(":", 1)
            lt = left.split()[1:]
            if not 1 <= len(lt) <= 2:
                raise ParseError(lineno, "expected 'vertex <id> [label] : elements'")
            v = lt[0]
            if v in parts:
                raise ParseError(lineno, f"repeated vertex {v!r}")
            vertices.append(v)
            if len(lt) == 2:
                labels[v] = lt[1]
            parts[v] = frozenset(_ints(right.split(), lineno))
        elif head == "edge":
            if len(rest) != 2:
                raise ParseError(lineno, "edge needs two vertex ids")
            edges.append(tuple(rest))
        elif head == "target":
            target = frozenset(_ints(rest, lineno))
    if not vertices:
        raise MatroidError("no tree vertices given")
    M = matroids[name]
    td = TreeDecomposition(vertices, edges, parts, labels)
    td.validate(M)
    if target is not None and not target <= M.ground:
        raise MatroidError("target must be a subset of the decomposed matroid's ground set")
    thick = {e: edge_thickness(M, td, e) for e in td.edges}
    return Decomposition(M, td, target, matroids, thick)


def load_matroid(path) -> Matroid:
    """Last matroid defined in the file."""
    matroids = parse_matroids(Path(path).read_text())
    if not matroids:
        raise MatroidError(f"{path}: no matroid defined")
    return list(matroids.values())[-1]


def load_decomposition(path) -> Decomposition:
    return parse_decomposition(Path(path).read_text())
