"""Text formats, JSON and DOT export.

Tree files hold one record per line::

    n 5            # or "labels integer" for trees with integer loop labels
    loop 0 1
    loop 1 2
    edge 0 1 3

Decomposition files hold ``path v1 v2 ... vj`` lines and an optional
``r <value>`` line.  Blank lines and ``#`` comments are ignored everywhere.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

from .core import LiftVertex, VoltageTree, edge
from .errors import ParseError


@dataclass(frozen=True)
class TreeRecord:
    """A parsed tree file before any group is fixed."""

    n: int | None  # None for integer-labeled files
    loops: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]

    @property
    def integer(self) -> bool:
        return self.n is None


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            yield no, line.split()


def _ints(no: int, words, count: int) -> list[int]:
    if len(words) != count:
        raise ParseError(f"line {no}: expected {count} values, got {len(words)}")
    try:
        return [int(w) for w in words]
    except ValueError:
        raise ParseError(f"line {no}: expected integers, got {' '.join(words)!r}") from None


def parse_tree(text: str) -> TreeRecord:
    n = None
    header = False
    integer = False
    loops: dict[int, int] = {}
    edges = []
    for no, words in _lines(text):
        key, rest = words[0], words[1:]
        if key == "n":
            if header:
                raise ParseError(f"line {no}: duplicate header")
            (n,) = _ints(no, rest, 1)
            if n < 1:
                raise ParseError(f"line {no}: modulus must be positive")
            header = True
        elif key == "labels":
            if header:
                raise ParseError(f"line {no}: duplicate header")
            if rest != ["integer"]:
                raise ParseError(f"line {no}: expected 'labels integer'")
            header = integer = True
        elif key == "loop":
            v, lab = _ints(no, rest, 2)
            if v < 0:
                raise ParseError(f"line {no}: negative vertex id")
            if v in loops:
                raise ParseError(f"line {no}: second loop at vertex {v}")
            loops[v] = lab
        elif key == "edge":
            u, v, lab = _ints(no, rest, 3)
            if u < 0 or v < 0:
                raise ParseError(f"line {no}: negative vertex id")
            edges.append((u, v, lab))
        else:
            raise ParseError(f"line {no}: unknown record {key!r}")
    if not header:
        raise ParseError("missing 'n <modulus>' or 'labels integer' header")
    if not loops:
        raise ParseError("no loop records")
    m = max(loops) + 1
    missing = [v for v in range(m) if v not in loops]
    if missing:
        raise ParseError(f"vertices {missing} have no loop record")
    for u, v, _ in edges:
        if u >= m or v >= m:
            raise ParseError(f"edge ({u}, {v}) mentions a vertex without a loop")
    return TreeRecord(None if integer else n, tuple(loops[v] for v in range(m)), tuple(edges))


def voltage_tree(rec: TreeRecord, modulus: int | None = None) -> VoltageTree:
    """The Z_n tree of a record; ``modulus`` overrides (or supplies) ``n``."""
    n = modulus if modulus is not None else rec.n
    if n is None:
        raise ParseError("integer-labeled tree needs a modulus or a prime")
    return VoltageTree(n, rec.loops, rec.edges)


def integer_tree(rec: TreeRecord):
    from .prime_ham import IntegerLabeledTree

    return IntegerLabeledTree(rec.loops, rec.edges)


def parse_decomposition(text: str):
    """Return ``(paths, r)``; ``r`` is None when the file does not give it."""
    paths, r = [], None
    for no, words in _lines(text):
        if words[0] == "path":
            seq = _ints(no, words[1:], len(words) - 1)
            if len(seq) < 2:
                raise ParseError(f"line {no}: a path needs at least two vertices")
            paths.append(tuple(seq))
        elif words[0] == "r":
            (r,) = _ints(no, words[1:], 1)
        else:
            raise ParseError(f"line {no}: unknown record {words[0]!r}")
    if not paths:
        raise ParseError("no path records")
    return paths, r


def parse_cycle(text: str) -> dict:
    """Load a JSON cycle document (anything with a ``cycle`` array of pairs)."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"cycle file is not JSON: {exc}") from None
    if isinstance(doc, list):
        doc = {"cycle": doc}
    cyc = doc.get("cycle") if isinstance(doc, dict) else None
    if not isinstance(cyc, list) or not cyc:
        raise ParseError("cycle document has no non-empty 'cycle' array")
    try:
        doc["cycle"] = [LiftVertex(int(b), int(g)) for b, g in cyc]
    except (TypeError, ValueError):
        raise ParseError("cycle entries must be [base, group] pairs") from None
    return doc


# ---------------------------------------------------------------------------
# export


def vertex_json(x) -> list[int]:
    return [int(x[0]), int(x[1])]


def edges_json(edges) -> list:
    return [[vertex_json(a), vertex_json(b)] for a, b in sorted(edge(a, b) for a, b in edges)]


def cycle_json(cycle) -> list:
    return [vertex_json(x) for x in cycle]


def dumps(doc) -> str:
    return json.dumps(doc, sort_keys=True, default=_default) + "\n"


def _default(obj):
    if isinstance(obj, (set, frozenset)):
        return sorted(obj)
    if hasattr(obj, "numerator") and hasattr(obj, "denominator"):
        return str(obj)
    raise TypeError(f"cannot serialise {type(obj).__name__}")


def _name(x) -> str:
    return f'"{x[0]},{x[1]}"'


def to_dot(lift, cycle=None, removed=(), extra_edges=()) -> str:
    """DOT for a lift; cycle edges are red and removed edges dashed."""
    on = set()
    if cycle is not None:
        seq = list(cycle)
        on = {edge(a, b) for a, b in zip(seq, seq[1:] + seq[:1])} if len(seq) > 1 else set()
    on |= {edge(a, b) for a, b in extra_edges}
    gone = {edge(a, b) for a, b in removed}
    out = ["graph lift {", "  node [shape=circle, fontsize=10];"]
    for x in lift.vertices:
        out.append(f"  {_name(x)};")
    for a, b in sorted(set(lift.edges) | gone):
        attrs = []
        e = edge(a, b)
        if e in on:
            attrs.append("color=red, penwidth=2")
        if e in gone:
            attrs.append("style=dashed")
        suffix = f" [{', '.join(attrs)}]" if attrs else ""
        out.append(f"  {_name(a)} -- {_name(b)}{suffix};")
    out.append("}")
    return "\n".join(out) + "\n"
