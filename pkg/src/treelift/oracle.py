"""Independent validators and brute-force oracles.

Nothing here reuses the constructions it checks: the validators only read
adjacency from the lift, and the search routines are plain backtracking.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd
from typing import Any

from .core import LiftGraph, LiftVertex, VoltageTree, edge
from .errors import TooLarge


@dataclass
class ValidationReport:
    violations: list[tuple[str, Any]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.violations

    def add(self, name: str, witness=None) -> None:
        self.violations.append((name, witness))

    def extend(self, other: ValidationReport, prefix: str = "") -> None:
        for name, witness in other.violations:
            self.add(prefix + name, witness)

    def names(self) -> set[str]:
        return {name for name, _ in self.violations}

    def __bool__(self):
        return self.passed

    def to_dict(self) -> dict:
        return {
            "passed": self.passed,
            "violations": [[name, repr(w)] for name, w in self.violations],
        }


def _adjacency(g) -> dict:
    if isinstance(g, LiftGraph):
        return g.adj
    if isinstance(g, dict):
        return {x: frozenset(ns) for x, ns in g.items()}
    # networkx-style graph
    return {x: frozenset(g.neighbors(x)) for x in g.nodes}


def _cycle_vertices(c) -> list:
    seq = list(getattr(c, "cycle", c))
    if len(seq) > 1 and seq[0] == seq[-1]:
        seq = seq[:-1]
    return [LiftVertex(*x) if isinstance(x, (tuple, list)) and len(x) == 2 else x for x in seq]


def is_simple_cycle(g, c) -> ValidationReport:
    adj = _adjacency(g)
    seq = _cycle_vertices(c)
    rep = ValidationReport()
    if len(seq) < 3:
        rep.add("length", len(seq))
        return rep
    seen = set()
    for x in seq:
        if x not in adj:
            rep.add("unknown_vertex", x)
        elif x in seen:
            rep.add("repeated_vertex", x)
        seen.add(x)
    for a, b in zip(seq, seq[1:] + seq[:1]):
        if a in adj and b not in adj[a]:
            rep.add("adjacency", (a, b))
    return rep


def is_hamiltonian_cycle(g, c) -> ValidationReport:
    rep = is_simple_cycle(g, c)
    adj = _adjacency(g)
    missing = set(adj) - set(_cycle_vertices(c))
    if missing:
        rep.add("coverage", sorted(missing)[:5])
    return rep


def is_two_factor(g, f) -> ValidationReport:
    adj = _adjacency(g)
    rep = ValidationReport()
    deg = {x: 0 for x in adj}
    seen = set()
    for a, b in f:
        e = edge(a, b) if isinstance(a, tuple) else (a, b)
        if e in seen:
            rep.add("duplicate_edge", e)
            continue
        seen.add(e)
        a, b = e
        if a not in adj or b not in adj[a]:
            rep.add("not_an_edge", e)
            continue
        deg[a] += 1
        deg[b] += 1
    bad = [x for x, k in deg.items() if k != 2]
    if bad:
        rep.add("degree", [(x, deg[x]) for x in bad[:5]])
    return rep


def cycle_components(f) -> list[set]:
    """Vertex sets of the components of an edge set."""
    adj: dict = {}
    for a, b in f:
        adj.setdefault(a, set()).add(b)
        adj.setdefault(b, set()).add(a)
    out, seen = [], set()
    for s in sorted(adj):
        if s in seen:
            continue
        comp, stack = {s}, [s]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in comp:
                    comp.add(y)
                    stack.append(y)
        seen |= comp
        out.append(comp)
    return out


def validate_path_family(lift: LiftGraph, family, params=None) -> ValidationReport:
    """Check the four billiard properties plus the offset formulas.

    Offsets are recomputed from the tree here rather than read from the
    family: ``i_1 = l`` and ``i_{t+1} = i_t - sigma(v_t) + label`` with no
    subtraction at the first fiber.
    """
    rep = ValidationReport()
    t_ = lift.tree
    n = t_.n
    params = params if params is not None else family.params
    l, r, d = params.l % n, params.r % n, params.d
    seq = list(family.order)
    m = len(seq)
    pos = {v: i for i, v in enumerate(seq)}
    paths = [list(p) for p in family.paths]
    if len(paths) != d:
        rep.add("path_count", len(paths))
        return rep

    owner: dict = {}
    for j, p in enumerate(paths):
        for x in p:
            if x in owner:
                rep.add("disjoint", (x, owner[x], j))
            owner[x] = j
        for a, b in zip(p, p[1:]):
            if not lift.has_edge(a, b):
                rep.add("adjacency", (j, a, b))
        if p[0] != LiftVertex(seq[0], (l + j * r) % n):
            rep.add("start", (j, p[0]))
        blocks = [pos.get(x.base, -1) for x in p]
        runs = [b for i, b in enumerate(blocks) if i == 0 or blocks[i - 1] != b]
        if runs != list(range(m)):
            rep.add("no_reentry", (j, runs))

    if rep.violations:
        return rep

    expected_i = [l]
    for t in range(1, m):
        prev = expected_i[-1] - (t_.loops[seq[t - 1]] if t - 1 > 0 else 0)
        expected_i.append((prev + t_.arc(seq[t - 1], seq[t])) % n)

    for t, v in enumerate(seq):
        arrivals = []
        lasts = []
        for j, p in enumerate(paths):
            in_fiber = [x for x in p if x.base == v]
            arrivals.append(in_fiber[0].g)
            lasts.append(in_fiber[-1].g)
            a = t_.loops[v]
            if 0 < t < m - 1:
                for x, y in zip(in_fiber, in_fiber[1:]):
                    if (x.g + a) % n != y.g:
                        rep.add("fiber_step", (j, x, y))
            elif len(in_fiber) != 1:
                rep.add("endpoint_extension", (j, v))
        want = {(expected_i[t] + k * r) % n for k in range(d)}
        if set(arrivals) != want:
            rep.add("arrivals", (t, sorted(arrivals)))
        if family.arrival[t] % n != expected_i[t]:
            rep.add("i_t_formula", (t, family.arrival[t], expected_i[t]))
        if 0 < t < m - 1:
            a = t_.loops[v]
            alpha = (expected_i[t] - a) % n
            if family.exit_offsets[t] is None or family.exit_offsets[t] % n != alpha:
                rep.add("alpha_formula", (t, family.exit_offsets[t], alpha))
            exit_slot = {(alpha + k * r) % n: k for k in range(d)}
            if set(lasts) != set(exit_slot):
                rep.add("exit_set", (t, sorted(lasts)))
            else:
                order = family.orders[t]
                for j, g in enumerate(lasts):
                    if order[exit_slot[g]] != j:
                        rep.add("order", (t, j))
                arrived = set(arrivals)
                for j, g in enumerate(lasts):
                    if (g + a) % n not in arrived:
                        rep.add("stopping_rule", (t, j, g))
            visited = {x.g for x in owner if x.base == v}
            step = gcd(n, a)
            for g in visited:
                comp = {(g + k * step) % n for k in range(n // step)} if a else {g}
                if not comp <= visited:
                    rep.add("component_coverage", (t, g))
                    break
    return rep


# ---------------------------------------------------------------------------
# brute force


def brute_force_hamiltonian(g, bound: int = 24):
    """Exact backtracking search; returns a Hamiltonian cycle tuple or None."""
    adj = _adjacency(g)
    N = len(adj)
    if N > bound:
        raise TooLarge(f"{N} vertices exceeds the oracle bound {bound}")
    if N < 3 or any(len(ns) < 2 for ns in adj.values()):
        return None
    start = min(adj, key=lambda x: (len(adj[x]), x))
    path = [start]
    on_path = {start}

    def viable() -> bool:
        # every unvisited vertex needs two usable neighbours
        end = path[-1]
        for x in adj:
            if x in on_path:
                continue
            free = sum(1 for y in adj[x] if y not in on_path or y == end or y == start)
            if free < 2:
                return False
        return True

    def extend() -> bool:
        cur = path[-1]
        if len(path) == N:
            return start in adj[cur]
        for y in sorted(adj[cur], key=lambda z: (len(adj[z]), z)):
            if y in on_path:
                continue
            path.append(y)
            on_path.add(y)
            if viable() and extend():
                return True
            path.pop()
            on_path.discard(y)
        return False

    return tuple(path) if extend() else None


def longest_cycle_brute(g, bound: int = 18) -> int:
    """Length of a longest cycle, or 0 for a forest."""
    adj = _adjacency(g)
    nodes = sorted(adj)
    N = len(nodes)
    if N > bound:
        raise TooLarge(f"{N} vertices exceeds the oracle bound {bound}")
    idx = {x: i for i, x in enumerate(nodes)}
    nb = [0] * N
    for x, ns in adj.items():
        for y in ns:
            if y != x:
                nb[idx[x]] |= 1 << idx[y]
    best = 0

    def dfs(s: int, cur: int, used: int, length: int):
        nonlocal best
        if length >= 3 and nb[cur] >> s & 1:
            best = max(best, length)
        if best == N:
            return
        cand = nb[cur] & ~used & ~((1 << (s + 1)) - 1)
        while cand:
            low = cand & -cand
            y = low.bit_length() - 1
            dfs(s, y, used | low, length + 1)
            cand ^= low

    for s in range(N):
        if N - s <= best:
            break
        dfs(s, s, 1 << s, 1)
    return best


def brute_force_decomposition_search(t: VoltageTree, bound: int = 8):
    """First odd shifting decomposition of ``t`` in a fixed enumeration order.

    Strict internal disjointness forces every pass-through vertex to have
    degree two, so a decomposition is determined by the set of degree-two
    vertices that are passed through.  Subsets are tried largest first.
    """
    from itertools import combinations

    from .billiard import is_odd_shifting
    from .errors import VoltageError
    from .tree_ham import OddShiftingDecomposition

    if t.m > bound:
        raise TooLarge(f"{t.m} vertices exceeds the decomposition search bound {bound}")
    if t.m < 2:
        return None
    deg2 = [v for v in range(t.m) if t.degree(v) == 2]
    for size in range(len(deg2), -1, -1):
        for through in combinations(deg2, size):
            paths = _paths_for(t, set(through))
            r = t.loops[paths[0][0]]
            if gcd(r, t.n) != 1:
                continue
            ok = True
            for p in paths:
                sub = t.subpath(p)
                try:
                    if is_odd_shifting(sub) is None:
                        ok = False
                except VoltageError:
                    ok = False
                if not ok or t.loops[p[0]] != r:
                    ok = False
                    break
            if ok:
                return OddShiftingDecomposition(tuple(tuple(p) for p in paths), r)
    return None


def _paths_for(t: VoltageTree, through: set) -> list[list[int]]:
    used = set()
    paths = []
    for u, v, _ in t.edges:
        if (u, v) in used:
            continue
        # walk both ways from the edge while passing through chosen vertices
        left, right = [u], [v]
        for seq, other in ((right, u), (left, v)):
            prev = other
            while seq[-1] in through:
                nxt = [w for w in t.neighbors(seq[-1]) if w != prev][0]
                prev = seq[-1]
                seq.append(nxt)
        p = left[::-1] + right
        if p[0] > p[-1]:
            p = p[::-1]
        for a, b in zip(p, p[1:]):
            used.add((min(a, b), max(a, b)))
        paths.append(p)
    paths.sort()
    return paths
