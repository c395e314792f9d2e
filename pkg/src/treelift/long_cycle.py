"""Long cycles in lifts of trees whose loop voltages are all units.

The cycle is built leaf by leaf.  Each new leaf ``l`` hangs off ``v``; a
short stretch of the cycle's path in ``v``'s fiber is cut out and replaced
by a detour through almost all of ``l``'s fiber.  The detour length comes
from a small multiple ``k`` of ``sigma(l) / sigma(v)`` that lands close to 0.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from math import ceil, gcd, isqrt

from .core import VoltageTree, cut_edge_offsets, cycle_from_edges, distance, edge, offset_subgraph
from .errors import (
    InternalInvariantBroken,
    InvalidParams,
    NonUnit,
    NotGenerator,
    ParamsRejected,
)
from .path_ham import CycleCertificate
from .tree_ham import fiber_runs


@dataclass(frozen=True)
class NearZeroMultiple:
    k: int
    h: int
    dist: int


def near_zero_multiple(g, m: int, n: int | None = None, bound: int | None = None) -> NearZeroMultiple:
    """Smallest ``1 <= k <= m`` with ``k g`` within ``bound`` of 0 (default ``n // m``)."""
    if n is None:
        n = g.n
    g = int(g) % n
    if gcd(g, n) != 1:
        raise NotGenerator(f"{g} does not generate Z_{n}")
    if not 1 <= m <= n:
        raise InvalidParams(f"need 1 <= m <= n, got m = {m}, n = {n}")
    if bound is None:
        bound = n // m
    for k in range(1, m + 1):
        h = k * g % n
        if distance(h, n) <= bound:
            return NearZeroMultiple(k, h, distance(h, n))
    raise InternalInvariantBroken(f"no multiple of {g} within {bound} of 0 for k <= {m} (n = {n})")


@dataclass(frozen=True)
class OrientedTree:
    tree: object
    root: int
    parent: tuple  # parent[v] is the head of v's out-arc, None at the root

    def out_degree(self, v: int) -> int:
        return 0 if self.parent[v] is None else 1

    def in_degree(self, v: int) -> int:
        return sum(1 for p in self.parent if p == v)

    def arcs(self) -> list[tuple[int, int]]:
        return [(v, p) for v, p in enumerate(self.parent) if p is not None]


def orient_tree(t, root: int = 0) -> OrientedTree:
    """Orient every edge towards ``root``; all out-degrees are at most 1."""
    parent: list = [None] * t.m
    seen = {root}
    stack = [root]
    while stack:
        x = stack.pop()
        for y in t.neighbors(x):
            if y not in seen:
                seen.add(y)
                parent[y] = x
                stack.append(y)
    return OrientedTree(t, root, tuple(parent))


def leaf_elimination_order(o: OrientedTree) -> list[int]:
    """Repeatedly strip the lowest-id non-root leaf of what remains."""
    t = o.tree
    alive = set(range(t.m))
    deg = {v: t.degree(v) for v in alive}
    out = []
    while len(alive) > 1:
        leaf = min(v for v in alive if v != o.root and deg[v] == 1)
        out.append(leaf)
        alive.discard(leaf)
        deg[o.parent[leaf]] -= 1
    return out


def ceil_sqrt(w: int) -> int:
    return isqrt(w - 1) + 1 if w > 0 else 0


@dataclass(frozen=True)
class LongCycleBudget:
    n: int
    omega: int

    @property
    def s(self) -> int:
        return ceil_sqrt(self.omega)

    @property
    def ratio(self) -> Fraction:
        """The guaranteed fraction ``1 - 1/s - s/omega``."""
        return 1 - Fraction(1, self.s) - Fraction(self.s, self.omega)

    def size_condition(self) -> bool:
        return self.n * self.ratio >= self.s

    def degree_condition(self, max_degree: int) -> bool:
        return max_degree * self.omega <= self.n

    def fiber_allowance(self, out_deg: int, in_deg: int) -> Fraction:
        return out_deg * Fraction(self.n, self.s) + in_deg * self.s


def _check_hypotheses(t: VoltageTree, omega: int) -> LongCycleBudget:
    if omega < 1:
        raise ParamsRejected(f"omega must be a positive integer, got {omega}")
    for v, x in enumerate(t.loops):
        if gcd(x, t.n) != 1:
            raise NonUnit(f"loop voltage {x} at vertex {v} is not coprime to {t.n}")
    b = LongCycleBudget(t.n, omega)
    if not b.size_condition():
        raise ParamsRejected(f"n (1 - 1/s - s/omega) >= s fails for n = {t.n}, omega = {omega}")
    if not b.degree_condition(t.max_degree()):
        raise ParamsRejected(f"max degree {t.max_degree()} exceeds n/omega = {t.n}/{omega}")
    return b


def long_cycle(t: VoltageTree, omega: int, root: int = 0) -> CycleCertificate:
    """A cycle missing only a bounded number of edges from every fiber."""
    b = _check_hypotheses(t, omega)
    n, s = t.n, b.s
    o = orient_tree(t, root)
    build = leaf_elimination_order(o)[::-1]
    sig = t.loops

    C = {edge((root, x), (root, (x + sig[root]) % n)) for x in range(n)}
    steps = []
    for leaf in build:
        v = o.parent[leaf]
        g_rel = sig[leaf] * pow(sig[v], -1, n) % n
        nz = near_zero_multiple(g_rel, n // s, n, bound=s)
        k, h, d = nz.k, nz.h, nz.dist
        runs = fiber_runs(C, v, n, sig[v])
        if len(runs) != 1:
            raise InternalInvariantBroken(f"cycle meets fiber {v} in {len(runs)} pieces")
        start, length = runs[0]
        if length < d:
            raise InternalInvariantBroken(f"fiber {v} keeps {length} edges, fewer than d = {d}")
        # walk +sigma(v) from the run's start when h = d, otherwise walk back from its end
        if h == d:
            step, v0 = sig[v], start
        else:
            step, v0 = -sig[v], (start + length * sig[v]) % n
        cut = [edge((v, (v0 + j * step) % n), (v, (v0 + (j + 1) * step) % n)) for j in range(d)]
        vd = (v0 + d * step) % n
        if (v0 + k * sig[leaf]) % n != vd:
            raise InternalInvariantBroken(f"leaf {leaf}: k sigma(l) does not reach v_d")
        # the long way round the leaf fiber: from l_d forwards n - k steps back to l_0
        detour = [edge((leaf, (vd + j * sig[leaf]) % n), (leaf, (vd + (j + 1) * sig[leaf]) % n)) for j in range(n - k)]
        for e in cut:
            if e not in C:
                raise InternalInvariantBroken(f"edge {e} to be cut is not on the cycle")
            C.remove(e)
        C.update(detour)
        C.add(edge((v, v0), (leaf, v0)))
        C.add(edge((v, vd), (leaf, vd)))
        steps.append({"leaf": leaf, "v": v, "k": k, "h": h, "d": d, "v0": v0})

    try:
        cyc = cycle_from_edges(C)
    except ValueError as exc:
        raise InternalInvariantBroken(f"result is not a single cycle: {exc}") from exc
    deficits = fiber_deficits(C, t.m, n)
    for w in range(t.m):
        allow = b.fiber_allowance(o.out_degree(w), o.in_degree(w))
        if deficits[w] > allow:
            raise InternalInvariantBroken(f"fiber {w} misses {deficits[w]} edges, allowance {allow}")
    tau = cut_edge_offsets(t)
    cyc = offset_subgraph(cyc, tau, n)
    cyc = cycle_from_edges({edge(a, c) for a, c in zip(cyc, cyc[1:] + cyc[:1])})
    info = {
        "omega": omega,
        "s": s,
        "root": root,
        "steps": steps,
        "deficits": deficits,
        "bound": b.ratio * t.m * n,
    }
    return CycleCertificate(cyc, None, None, (), info)


def fiber_deficits(edges, m: int, n: int) -> list[int]:
    """Number of fiber edges over each base vertex that the edge set misses."""
    have = [0] * m
    for a, c in edges:
        if a.base == c.base:
            have[a.base] += 1
    return [n - x for x in have]


def check_long_cycle(t: VoltageTree, cert: CycleCertificate, omega: int, root: int = 0) -> dict:
    """Recount the global and per-fiber guarantees from the cycle alone."""
    b = LongCycleBudget(t.n, omega)
    o = orient_tree(t, root)
    edges = {edge(a, c) for a, c in zip(cert.cycle, cert.cycle[1:] + cert.cycle[:1])}
    tau = cut_edge_offsets(t)
    back = offset_subgraph(edges, [-x for x in tau], t.n)
    deficits = fiber_deficits(back, t.m, t.n)
    per_fiber = all(
        deficits[w] <= b.fiber_allowance(o.out_degree(w), o.in_degree(w)) for w in range(t.m)
    )
    return {
        "length": len(cert.cycle),
        "global": len(cert.cycle) >= b.ratio * t.m * t.n,
        "per_fiber": per_fiber,
        "deficits": deficits,
    }


@dataclass(frozen=True)
class CircumferenceParams:
    delta: int
    epsilon: Fraction
    n: int
    omega: int
    s: int
    trivial: bool
    checks: dict = field(default_factory=dict)


def _as_fraction(x) -> Fraction:
    if isinstance(x, float):
        return Fraction(str(x))
    return Fraction(x)


def smallest_omega(eps) -> int:
    """Least ``omega`` with ``1/ceil(sqrt omega) + ceil(sqrt omega)/omega < eps``."""
    eps = _as_fraction(eps)
    if eps <= 0:
        raise ParamsRejected("epsilon must be positive")
    w = 1
    while Fraction(1, ceil_sqrt(w)) + Fraction(ceil_sqrt(w), w) >= eps:
        w += 1
    return w


def check_circumference_params(delta: int, eps, n: int) -> CircumferenceParams:
    """Accept ``n >= 5 delta / eps^2`` and derive the matching ``omega``."""
    eps = _as_fraction(eps)
    if delta < 0:
        raise ParamsRejected(f"delta must be non-negative, got {delta}")
    if not 0 < eps <= Fraction(1, 2):
        raise ParamsRejected(f"need 0 < epsilon <= 1/2, got {eps}")
    if n < 5 * delta / eps**2:
        raise ParamsRejected(f"n >= 5 delta / epsilon^2 fails: {n} < {float(5 * delta / eps ** 2):.4g}")
    omega = smallest_omega(eps)
    b = LongCycleBudget(n, omega)
    checks = {
        "n_bound": True,
        "size_condition": b.size_condition(),
        "degree_condition": b.degree_condition(delta),
    }
    if delta > 0 and not (checks["size_condition"] and checks["degree_condition"]):
        failed = [k for k, ok in checks.items() if not ok]
        raise ParamsRejected(f"derived omega = {omega} fails {failed}")
    return CircumferenceParams(delta, eps, n, omega, b.s, delta == 0, checks)


def required_n(delta: int, eps) -> int:
    eps = _as_fraction(eps)
    return ceil(5 * delta / eps**2)
