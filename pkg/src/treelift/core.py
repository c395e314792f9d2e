"""Cyclic groups, voltage trees and their lifts.

A voltage tree is a reflexive tree (exactly one loop per vertex) whose arcs
carry elements of Z_n.  Only the canonical arc ``(u, v)`` with ``u < v`` and
the primary loop are stored; the reverse arc and the secondary loop carry the
negated label.  The lift has vertex set ``V(T) x Z_n`` with ``(u, a) ~ (v, b)``
whenever some arc ``(u, v)`` carries ``b - a``.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from math import gcd
from typing import Callable, Iterable, NamedTuple

from .errors import InvalidTree, NonUnit, NotAPath


@dataclass(frozen=True)
class CyclicGroup:
    """The additive group Z_n."""

    n: int

    def __post_init__(self):
        if self.n < 1:
            raise ValueError(f"modulus must be positive, got {self.n}")

    def __call__(self, value: int) -> GroupElement:
        return GroupElement(value % self.n, self.n)

    def elements(self):
        return [GroupElement(x, self.n) for x in range(self.n)]

    def is_unit(self, x: int) -> bool:
        return gcd(int(x), self.n) == 1

    def inverse(self, x: int) -> int:
        if not self.is_unit(x):
            raise NonUnit(f"{int(x)} is not a unit modulo {self.n}")
        return pow(int(x), -1, self.n) if self.n > 1 else 0


@dataclass(frozen=True, order=True)
class GroupElement:
    """An element of Z_n.  Behaves like an ``int`` in index positions."""

    value: int
    n: int

    def __post_init__(self):
        if not 0 <= self.value < self.n:
            raise ValueError(f"{self.value} is not reduced modulo {self.n}")

    @property
    def group(self) -> CyclicGroup:
        return CyclicGroup(self.n)

    def _coerce(self, other) -> int:
        if isinstance(other, GroupElement):
            if other.n != self.n:
                raise ValueError(f"cannot mix Z_{self.n} and Z_{other.n}")
            return other.value
        return int(other)

    def __add__(self, other):
        return GroupElement((self.value + self._coerce(other)) % self.n, self.n)

    __radd__ = __add__

    def __sub__(self, other):
        return GroupElement((self.value - self._coerce(other)) % self.n, self.n)

    def __rsub__(self, other):
        return GroupElement((self._coerce(other) - self.value) % self.n, self.n)

    def __neg__(self):
        return GroupElement(-self.value % self.n, self.n)

    def __mul__(self, k):
        return GroupElement((self.value * self._coerce(k)) % self.n, self.n)

    __rmul__ = __mul__

    def __int__(self):
        return self.value

    __index__ = __int__

    def distance(self) -> int:
        """Least number of +1/-1 steps from 0 to this element."""
        return distance(self.value, self.n)

    def __repr__(self):
        return f"{self.value} (mod {self.n})"


def distance(x: int, n: int) -> int:
    x %= n
    return min(x, n - x)


class LiftVertex(NamedTuple):
    base: int
    g: int


Edge = tuple  # (LiftVertex, LiftVertex) with the smaller vertex first


def edge(a, b) -> Edge:
    a, b = LiftVertex(*a), LiftVertex(*b)
    return (a, b) if a <= b else (b, a)


def _check_tree(m: int, pairs: list[tuple[int, int]]) -> None:
    if m < 1:
        raise InvalidTree("a tree needs at least one vertex")
    if len(pairs) != m - 1:
        raise InvalidTree(f"{m} vertices need {m - 1} edges, got {len(pairs)}")
    seen = set()
    adj: dict[int, list[int]] = {v: [] for v in range(m)}
    for u, v in pairs:
        if not (0 <= u < m and 0 <= v < m):
            raise InvalidTree(f"edge ({u}, {v}) has an endpoint outside 0..{m - 1}")
        if u == v:
            raise InvalidTree(f"edge ({u}, {v}) is a loop; loops are given separately")
        key = (min(u, v), max(u, v))
        if key in seen:
            raise InvalidTree(f"duplicate edge {key}")
        seen.add(key)
        adj[u].append(v)
        adj[v].append(u)
    reached = {0}
    queue = deque([0])
    while queue:
        x = queue.popleft()
        for y in adj[x]:
            if y not in reached:
                reached.add(y)
                queue.append(y)
    if len(reached) != m:
        raise InvalidTree("edges do not connect all vertices")


class TreeShape:
    """Adjacency helpers shared by the voltage and integer-labelled trees."""

    loops: tuple
    edges: tuple

    @property
    def m(self) -> int:
        return len(self.loops)

    @cached_property
    def adjacency(self) -> dict[int, tuple[int, ...]]:
        adj: dict[int, list[int]] = {v: [] for v in range(self.m)}
        for u, v, _ in self.edges:
            adj[u].append(v)
            adj[v].append(u)
        return {v: tuple(sorted(ns)) for v, ns in adj.items()}

    @cached_property
    def _labels(self) -> dict[tuple[int, int], int]:
        return {(u, v): lab for u, v, lab in self.edges}

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self.adjacency[v]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def max_degree(self) -> int:
        return max((self.degree(v) for v in range(self.m)), default=0)

    def loop(self, v: int) -> int:
        return self.loops[v]

    def path_order(self) -> tuple[int, ...]:
        """Vertices of a path in order, starting from the lower-id endpoint."""
        if self.m == 1:
            return (0,)
        ends = [v for v in range(self.m) if self.degree(v) == 1]
        if len(ends) != 2 or self.max_degree() > 2:
            raise NotAPath("base tree is not a path")
        order = [ends[0]]
        prev = None
        while len(order) < self.m:
            cur = order[-1]
            nxt = [w for w in self.neighbors(cur) if w != prev]
            prev = cur
            order.append(nxt[0])
        return tuple(order)

    def is_path(self) -> bool:
        try:
            self.path_order()
        except NotAPath:
            return False
        return True

    def components_without(self, v: int) -> list[tuple[int, tuple[int, ...]]]:
        """Components of T - v as ``(neighbor of v, sorted vertex tuple)``."""
        out = []
        for u in self.neighbors(v):
            seen = {v, u}
            stack = [u]
            while stack:
                x = stack.pop()
                for y in self.neighbors(x):
                    if y not in seen:
                        seen.add(y)
                        stack.append(y)
            seen.discard(v)
            out.append((u, tuple(sorted(seen))))
        return out


@dataclass(frozen=True)
class VoltageTree(TreeShape):
    """A reflexive tree with a Z_n voltage assignment.

    ``loops[v]`` is the primary-loop voltage of ``v``; ``edges`` holds
    ``(u, v, label)`` with ``u < v`` meaning the arc ``(u, v)`` carries
    ``label``.  All labels are reduced modulo ``n`` on construction.
    """

    n: int
    loops: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        if self.n < 1:
            raise InvalidTree(f"modulus must be positive, got {self.n}")
        n = self.n
        loops = tuple(int(x) % n for x in self.loops)
        canon = []
        for u, v, lab in self.edges:
            u, v, lab = int(u), int(v), int(lab)
            if u > v:
                u, v, lab = v, u, -lab
            canon.append((u, v, lab % n))
        _check_tree(len(loops), [(u, v) for u, v, _ in canon])
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def path(cls, n: int, loops, edge_labels=None) -> VoltageTree:
        """Path 0 - 1 - ... - (m-1); ``edge_labels[i]`` sits on arc (i, i+1)."""
        m = len(loops)
        labels = list(edge_labels) if edge_labels is not None else [0] * (m - 1)
        if len(labels) != m - 1:
            raise InvalidTree(f"a path on {m} vertices has {m - 1} edges")
        return cls(n, tuple(loops), tuple((i, i + 1, labels[i]) for i in range(m - 1)))

    @property
    def group(self) -> CyclicGroup:
        return CyclicGroup(self.n)

    def arc(self, u: int, v: int) -> int:
        """Voltage of the arc (u, v); the reverse arc carries the negation."""
        if u < v:
            return self._labels[(u, v)]
        return -self._labels[(v, u)] % self.n

    def subpath(self, seq) -> VoltageTree:
        """The path through ``seq`` relabelled 0..len(seq)-1, labels inherited."""
        seq = list(seq)
        for a, b in zip(seq, seq[1:]):
            if b not in self.adjacency[a]:
                raise NotAPath(f"{a} and {b} are not adjacent")
        if len(set(seq)) != len(seq):
            raise NotAPath("path repeats a vertex")
        return VoltageTree.path(
            self.n, [self.loops[v] for v in seq], [self.arc(a, b) for a, b in zip(seq, seq[1:])]
        )

    def with_labels(self, loops=None, edges=None) -> VoltageTree:
        return VoltageTree(
            self.n,
            self.loops if loops is None else tuple(loops),
            self.edges if edges is None else tuple(edges),
        )


@dataclass(frozen=True)
class LiftGraph:
    """The covering graph of a voltage tree.

    Stored as a simple graph: a zero loop voltage contributes nothing and a
    loop of voltage n/2 contributes a single edge per vertex pair.
    """

    tree: VoltageTree
    adj: dict = field(repr=False, compare=False)

    @property
    def n(self) -> int:
        return self.tree.n

    @cached_property
    def vertices(self) -> tuple[LiftVertex, ...]:
        return tuple(LiftVertex(v, g) for v in range(self.tree.m) for g in range(self.n))

    @cached_property
    def edges(self) -> tuple[Edge, ...]:
        return tuple(sorted({edge(a, b) for a in self.adj for b in self.adj[a]}))

    def __len__(self):
        return len(self.adj)

    def neighbors(self, x) -> frozenset:
        return self.adj[LiftVertex(*x)]

    def has_edge(self, a, b) -> bool:
        a, b = LiftVertex(*a), LiftVertex(*b)
        return a in self.adj and b in self.adj[a]

    def fiber(self, v: int) -> list[LiftVertex]:
        return [LiftVertex(v, g) for g in range(self.n)]

    def fiber_edges(self, v: int) -> list[Edge]:
        s = self.tree.loops[v]
        if s == 0:
            return []
        return sorted({edge((v, g), (v, (g + s) % self.n)) for g in range(self.n)})

    def to_networkx(self):
        import networkx as nx

        g = nx.Graph()
        g.add_nodes_from(self.vertices)
        g.add_edges_from(self.edges)
        return g


def build_lift(t: VoltageTree) -> LiftGraph:
    n = t.n
    adj: dict[LiftVertex, set] = {LiftVertex(v, g): set() for v in range(t.m) for g in range(n)}
    for v, s in enumerate(t.loops):
        if s == 0:
            continue
        for g in range(n):
            a, b = LiftVertex(v, g), LiftVertex(v, (g + s) % n)
            adj[a].add(b)
            adj[b].add(a)
    for u, v, lab in t.edges:
        for g in range(n):
            a, b = LiftVertex(u, g), LiftVertex(v, (g + lab) % n)
            adj[a].add(b)
            adj[b].add(a)
    return LiftGraph(t, {x: frozenset(ns) for x, ns in adj.items()})


def fiber_cycles(t: VoltageTree, v: int) -> list[list[LiftVertex]]:
    """Components of the fiber over ``v`` as vertex cycles in walking order."""
    n, s = t.n, t.loops[v]
    if s == 0:
        return [[LiftVertex(v, g)] for g in range(n)]
    k = gcd(n, s)
    length = n // k
    return [[LiftVertex(v, (c + j * s) % n) for j in range(length)] for c in range(k)]


# ---------------------------------------------------------------------------
# relabelling operations


def cut_edge_offsets(t: VoltageTree, root: int = 0) -> tuple[int, ...]:
    """Per-vertex offsets tau with tau(root) = 0 and tau(v) = tau(u) + sigma(u, v).

    ``(w, x) -> (w, x + tau(w))`` is an isomorphism from the lift of
    ``normalize_cut_edges(t)`` onto the lift of ``t``.
    """
    tau = [None] * t.m
    tau[root] = 0
    stack = [root]
    while stack:
        u = stack.pop()
        for v in t.neighbors(u):
            if tau[v] is None:
                tau[v] = (tau[u] + t.arc(u, v)) % t.n
                stack.append(v)
    return tuple(tau)


def normalize_cut_edges(t: VoltageTree) -> VoltageTree:
    return t.with_labels(edges=[(u, v, 0) for u, v, _ in t.edges])


def rescale_by_unit(t: VoltageTree, u) -> VoltageTree:
    """Multiply every label by the unit ``u``; ``(v, g) -> (v, u*g)`` maps lifts."""
    u = int(u)
    if gcd(u, t.n) != 1:
        raise NonUnit(f"{u} is not a unit modulo {t.n}")
    return t.with_labels(
        loops=[x * u for x in t.loops], edges=[(a, b, lab * u) for a, b, lab in t.edges]
    )


def map_vertices(obj, f: Callable[[LiftVertex], LiftVertex]):
    """Apply ``f`` to every lift vertex inside ``obj``.

    ``obj`` may be a single vertex, a collection of vertices (a cycle or a
    path) or a collection of edges; the container type is preserved and
    edges are re-normalised.
    """
    if isinstance(obj, LiftVertex):
        return f(obj)
    if isinstance(obj, dict):
        return {map_vertices(k, f): map_vertices(v, f) for k, v in obj.items()}
    items = list(obj)
    if items and _is_edge(items[0]):
        out = [edge(f(LiftVertex(*a)), f(LiftVertex(*b))) for a, b in items]
    else:
        out = [f(LiftVertex(*x)) for x in items]
    if isinstance(obj, (set, frozenset)):
        return type(obj)(out)
    if isinstance(obj, tuple):
        return tuple(out)
    return out


def _is_edge(x) -> bool:
    return isinstance(x, tuple) and not isinstance(x, LiftVertex) and len(x) == 2 and isinstance(x[0], tuple)


def shift_subgraph(obj, a, n: int | None = None):
    """Apply the automorphism ``(v, g) -> (v, g + a)`` to a vertex or edge set."""
    if n is None:
        if not isinstance(a, GroupElement):
            raise TypeError("pass n or a GroupElement shift")
        n = a.n
    a = int(a)
    return map_vertices(obj, lambda x: LiftVertex(x.base, (x.g + a) % n))


def offset_subgraph(obj, offsets, n: int):
    """Shift each fiber by its own amount: ``(v, g) -> (v, g + offsets[v])``."""
    return map_vertices(obj, lambda x: LiftVertex(x.base, (x.g + offsets[x.base]) % n))


def scale_subgraph(obj, u: int, n: int):
    return map_vertices(obj, lambda x: LiftVertex(x.base, (x.g * u) % n))


def relabel_bases(obj, mapping):
    """Rename base vertices, e.g. from a subpath's 0..k-1 back to tree ids."""
    return map_vertices(obj, lambda x: LiftVertex(mapping[x.base], x.g))


def cycle_from_edges(edges: Iterable[Edge]) -> tuple[LiftVertex, ...]:
    """Order the edge set of a single cycle, starting at its least vertex.

    Raises ``ValueError`` if the edges do not form exactly one cycle.
    """
    adj: dict[LiftVertex, list[LiftVertex]] = {}
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    if not adj:
        raise ValueError("empty edge set")
    for x, ns in adj.items():
        if len(ns) != 2:
            raise ValueError(f"vertex {x} has degree {len(ns)}")
    start = min(adj)
    order = [start]
    prev, cur = start, min(adj[start])
    while cur != start:
        order.append(cur)
        a, b = adj[cur]
        prev, cur = cur, (b if a == prev else a)
    if len(order) != len(adj):
        raise ValueError("edge set splits into several cycles")
    return tuple(order)


def cycle_edges(cycle) -> frozenset:
    cyc = list(cycle)
    return frozenset(edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1]))


def components(edges: Iterable[Edge]) -> list[frozenset]:
    """Connected components of an edge set, each as an edge set, sorted."""
    adj: dict[LiftVertex, list[LiftVertex]] = {}
    edges = list(edges)
    for a, b in edges:
        adj.setdefault(a, []).append(b)
        adj.setdefault(b, []).append(a)
    label: dict[LiftVertex, int] = {}
    count = 0
    for s in sorted(adj):
        if s in label:
            continue
        label[s] = s_id = count
        count += 1
        stack = [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in label:
                    label[y] = s_id
                    stack.append(y)
    groups: dict[int, set] = {}
    for a, b in edges:
        groups.setdefault(label[a], set()).add(edge(a, b))
    return [frozenset(groups[k]) for k in sorted(groups)]
