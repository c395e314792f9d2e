"""Hamiltonian cycles in lifts of trees split into odd shifting paths.

The cycle is grown one path at a time.  Each new path meets the tree built
so far in a single joint ``u``; its own cycle is opened along a run of
fiber edges that the current cycle uses at ``u`` and the two cycles are
spliced there.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .billiard import compute_c, is_odd_shifting
from .core import (
    VoltageTree,
    cut_edge_offsets,
    cycle_from_edges,
    edge,
    normalize_cut_edges,
    offset_subgraph,
)
from .errors import (
    EndpointVoltageMismatch,
    InternalInvariantBroken,
    NotAPartition,
    NotInternallyDisjoint,
    NotOddShifting,
    NotProperlyWeighted,
    PathNotOddShifting,
    VoltageError,
)
from .path_ham import CycleCertificate, ham_cycle_odd_shifting


@dataclass(frozen=True)
class OddShiftingDecomposition:
    paths: tuple[tuple[int, ...], ...]
    r: int

    def __post_init__(self):
        object.__setattr__(self, "paths", tuple(tuple(int(v) for v in p) for p in self.paths))

    def __len__(self):
        return len(self.paths)

    def joints(self) -> set[int]:
        return {v for p in self.paths for v in (p[0], p[-1])}


@dataclass(frozen=True)
class JointWeights:
    n: int
    omega: dict  # joint -> total weight
    path_weights: tuple[int, ...]  # 2 c(Q_i) for each path

    @property
    def properly_weighted(self) -> bool:
        return all(w <= self.n for w in self.omega.values())

    def worst_joint(self):
        return max(self.omega.items(), key=lambda kv: (kv[1], -kv[0]))


def verify_decomposition(t: VoltageTree, dec: OddShiftingDecomposition) -> JointWeights:
    """Check every decomposition invariant and return the joint weights."""
    covered: dict[tuple[int, int], int] = {}
    for i, p in enumerate(dec.paths):
        if len(p) < 2:
            raise NotAPartition(f"path {i} has fewer than two vertices")
        if len(set(p)) != len(p):
            raise NotAPartition(f"path {i} repeats a vertex")
        for a, b in zip(p, p[1:]):
            if not (0 <= a < t.m and 0 <= b < t.m) or b not in t.neighbors(a):
                raise NotAPartition(f"path {i} uses ({a}, {b}), which is not a tree edge")
            key = (min(a, b), max(a, b))
            if key in covered:
                raise NotAPartition(f"edge {key} lies on paths {covered[key]} and {i}")
            covered[key] = i
    missing = [(u, v) for u, v, _ in t.edges if (u, v) not in covered]
    if missing:
        raise NotAPartition(f"edges {missing[:5]} are not covered")

    for i, p in enumerate(dec.paths):
        for j in range(i + 1, len(dec.paths)):
            q = dec.paths[j]
            for v in set(p) & set(q):
                if v not in (p[0], p[-1]) or v not in (q[0], q[-1]):
                    raise NotInternallyDisjoint(f"paths {i} and {j} share internal vertex {v}")

    r = dec.r % t.n
    if gcd(r, t.n) != 1:
        raise EndpointVoltageMismatch(f"endpoint voltage {r} is not coprime to {t.n}")
    weights = []
    omega: dict[int, int] = {}
    for i, p in enumerate(dec.paths):
        for v in (p[0], p[-1]):
            if t.loops[v] != r:
                raise EndpointVoltageMismatch(f"path {i} has endpoint {v} with voltage {t.loops[v]} != {r}")
        sub = t.subpath(p)
        try:
            s = is_odd_shifting(sub)
        except VoltageError as exc:
            raise PathNotOddShifting(i, str(exc)) from exc
        if s is None:
            raise PathNotOddShifting(i, f"path {i} is not odd shifting")
        w = 2 * compute_c(sub)
        weights.append(w)
        for v in (p[0], p[-1]):
            omega[v] = omega.get(v, 0) + w
    return JointWeights(t.n, dict(sorted(omega.items())), tuple(weights))


def attachment_order(dec: OddShiftingDecomposition) -> list[tuple[int, int | None]]:
    """``(path index, joint)`` pairs; each path meets earlier ones in one endpoint."""
    order = [(0, None)]
    seen = set(dec.paths[0])
    left = set(range(1, len(dec.paths)))
    while left:
        for i in sorted(left):
            p = dec.paths[i]
            meet = seen & set(p)
            if len(meet) == 1 and next(iter(meet)) in (p[0], p[-1]):
                order.append((i, next(iter(meet))))
                seen |= set(p)
                left.discard(i)
                break
        else:
            raise NotAPartition("paths do not attach one joint at a time")
    return order


def fiber_runs(edges, v: int, n: int, r: int) -> list[tuple[int, int]]:
    """Maximal runs of fiber edges over ``v`` as ``(start group value, length)``.

    The fiber cycle is walked in steps of ``r`` and the edge from ``x`` to
    ``x + r`` is indexed by ``x``.  A run of length ``n`` means the whole cycle.
    """
    inv = pow(r, -1, n)
    present = set()
    for a, b in edges:
        if a.base == v and b.base == v:
            if (a.g + r) % n == b.g:
                present.add(a.g * inv % n)
            elif (b.g + r) % n == a.g:
                present.add(b.g * inv % n)
    if len(present) == n:
        return [(0, n)]
    runs = []
    for k in sorted(present):
        if (k - 1) % n in present:
            continue
        length = 1
        while (k + length) % n in present:
            length += 1
        runs.append(((k * r) % n, length))
    return runs


def longest_run(edges, v: int, n: int, r: int) -> tuple[int, int]:
    runs = fiber_runs(edges, v, n, r)
    if not runs:
        return (0, 0)
    return min(runs, key=lambda x: (-x[1], x[0]))


def _relabel(obj, seq):
    from .core import relabel_bases

    return relabel_bases(obj, dict(enumerate(seq)))


def ham_cycle_from_decomposition(t: VoltageTree, dec: OddShiftingDecomposition) -> CycleCertificate:
    """Glue odd shifting path cycles along the decomposition into one Hamiltonian cycle."""
    weights = verify_decomposition(t, dec)
    if not weights.properly_weighted:
        v, w = weights.worst_joint()
        raise NotProperlyWeighted(f"joint {v} has weight {w} > n = {t.n}")
    n, r = t.n, dec.r % t.n
    norm = normalize_cut_edges(t)
    order = attachment_order(dec)

    first = dec.paths[order[0][0]]
    base = ham_cycle_odd_shifting(norm.subpath(first), 0)
    C = set(_relabel(base.edges, first))
    omega = {first[0]: weights.path_weights[order[0][0]], first[-1]: weights.path_weights[order[0][0]]}
    steps = []
    _check_joint_runs(C, omega, n, r)

    for i, u in order[1:]:
        p = dec.paths[i]
        seq = p if p[0] == u else p[::-1]
        w = weights.path_weights[i]
        start, s = longest_run(C, u, n, r)
        need = max(w, n - omega[u])
        if s < need:
            raise InternalInvariantBroken(
                f"joint {u}: longest fiber run has {s} edges, need {need}"
            )
        try:
            ck = ham_cycle_odd_shifting(norm.subpath(seq), start)
        except NotOddShifting as exc:
            raise PathNotOddShifting(i, f"path {i} read from joint {u}: {exc}") from exc
        ck_edges = set(_relabel(ck.edges, seq))
        removed = frozenset(_relabel(ck.left.edges, seq))
        # (C_0 - P) + (C_k - (E(u) - P)) == (C_0 - E^L) + (C_k - E(u))
        C = (C - removed) | {e for e in ck_edges if not (e[0].base == u and e[1].base == u)}
        omega[u] = omega[u] + w
        omega[seq[-1]] = omega.get(seq[-1], 0) + w
        steps.append({"path": i, "joint": u, "l": start, "run": s, "removed": tuple(sorted(removed))})
        _check_joint_runs(C, omega, n, r)

    try:
        cyc = cycle_from_edges(C)
    except ValueError as exc:
        raise InternalInvariantBroken(f"glued edge set is not a single cycle: {exc}") from exc
    if len(cyc) != t.m * n:
        raise InternalInvariantBroken("glued cycle does not cover the lift")
    tau = cut_edge_offsets(t)
    cyc = offset_subgraph(cyc, tau, n)
    cyc = cycle_from_edges(_cycle_edge_set(cyc))
    for st in steps:
        st["removed"] = tuple(sorted(offset_subgraph(list(st["removed"]), tau, n)))
    removed = tuple(e for st in steps for e in st["removed"])
    info = {"order": [i for i, _ in order], "steps": steps, "omega": dict(sorted(omega.items()))}
    return CycleCertificate(cyc, None, None, removed, info)


def _cycle_edge_set(cyc):
    cyc = list(cyc)
    return {edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])}


def _check_joint_runs(C, omega, n, r):
    for v, w in omega.items():
        _, s = longest_run(C, v, n, r)
        if s < n - w:
            raise InternalInvariantBroken(f"joint {v}: fiber run of {s} edges is below n - Omega = {n - w}")


def joint_runs(t: VoltageTree, cert: CycleCertificate, r: int) -> dict[int, int]:
    """Longest run of cycle edges in each joint fiber, measured in the original labels."""
    tau = cut_edge_offsets(t)
    back = offset_subgraph(list(cert.cycle), [-x for x in tau], t.n)
    edges = _cycle_edge_set(back)
    joints = sorted(cert.info.get("omega", {}))
    return {v: longest_run(edges, v, t.n, r)[1] for v in joints}
