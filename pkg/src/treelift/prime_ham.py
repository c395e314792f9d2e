"""Integer-labelled trees reduced modulo a large prime.

Every loop label ``phi(v)`` is a positive integer; modulo a prime ``p`` above
all labels each fiber is a single ``p``-cycle with step ``phi(v)``.  The
constructions here work with integer positions ``0 <= x < p`` inside each
fiber and splice 2-factors together along the matchings ``M_v(N)``.

``n_prime`` selects how the recursive 2-factor sizes its blocks:
``"product"`` uses ``2 phi(v) N_1 ... N_r``; ``"compact"`` (the default) uses
the least integer that is at least every ``N_i`` and keeps all matchings
aligned.  Both give valid 2-factors once ``p`` exceeds the resulting block
sizes, but only the compact sizes stay below ``sufficient_prime`` in general.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product
from math import gcd, lcm, prod

from sympy import isprime, nextprime

from .core import (
    TreeShape,
    VoltageTree,
    _check_tree,
    cut_edge_offsets,
    cycle_from_edges,
    edge,
    offset_subgraph,
)
from .errors import (
    Collision,
    ConditionNotMet,
    EmptySupport,
    InvalidParams,
    InvalidTree,
    NotDivisible,
    NotPrime,
    PrimeTooSmall,
)
from .oracle import ValidationReport, cycle_components, is_hamiltonian_cycle, is_two_factor
from .path_ham import CycleCertificate

N_PRIME_MODES = ("product", "compact")


@dataclass(frozen=True)
class IntegerLabeledTree(TreeShape):
    """A reflexive tree with positive integer loop labels and integer edge labels."""

    loops: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...] = ()

    def __post_init__(self):
        loops = tuple(int(x) for x in self.loops)
        if any(x <= 0 for x in loops):
            raise InvalidTree("loop labels must be positive integers")
        canon = []
        for u, v, lab in self.edges:
            u, v, lab = int(u), int(v), int(lab)
            if u > v:
                u, v, lab = v, u, -lab
            canon.append((u, v, lab))
        _check_tree(len(loops), [(u, v) for u, v, _ in canon])
        object.__setattr__(self, "loops", loops)
        object.__setattr__(self, "edges", tuple(sorted(canon)))

    @classmethod
    def from_shape(cls, shape: TreeShape, loops) -> IntegerLabeledTree:
        return cls(tuple(loops), tuple((u, v, 0) for u, v, _ in shape.edges))

    def phi(self, v: int) -> int:
        return self.loops[v]


def reduce_mod_prime(t: IntegerLabeledTree, p: int) -> VoltageTree:
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p <= max(t.loops):
        raise PrimeTooSmall(f"p = {p} must exceed every loop label (max {max(t.loops)})")
    return VoltageTree(p, t.loops, t.edges)


def sufficient_prime(t: IntegerLabeledTree) -> int:
    """Smallest prime above ``2^|V| * prod(phi)``."""
    return int(nextprime(2 ** t.m * prod(t.loops)))


# ---------------------------------------------------------------------------
# matchings


@dataclass(frozen=True)
class FiberMatching:
    v: int
    N: int
    shift: int
    edges: frozenset

    def __len__(self):
        return len(self.edges)


def _matching_edges(v: int, phi: int, N: int, shift: int, p: int) -> list:
    out = []
    for a in range(N // (2 * phi)):
        for i in range(phi):
            x = 2 * a * phi + i + shift
            out.append(edge((v, x % p), (v, (x + phi) % p)))
    return out


def matching_Mv(t: IntegerLabeledTree, p: int, v: int, N: int, shift: int = 0) -> FiberMatching:
    """``{(v, 2a phi + i), (v, (2a + 1) phi + i)}`` shifted by ``shift``."""
    phi = t.loops[v]
    if N <= 0 or N % (2 * phi):
        raise NotDivisible(f"N = {N} is not a positive multiple of 2 phi(v) = {2 * phi}")
    edges = _matching_edges(v, phi, N, shift, p)
    ends = [x for e in edges for x in e]
    if len(set(ends)) != len(ends):
        raise Collision(f"M_{v}({N}) overlaps itself modulo p = {p}")
    return FiberMatching(v, N, shift % p, frozenset(edges))


# ---------------------------------------------------------------------------
# anchored 2-factors


@dataclass(frozen=True)
class AnchoredTwoFactor:
    factor: frozenset
    anchor: FiberMatching
    N: int
    v: int
    p: int
    report: ValidationReport | None = field(default=None, compare=False)
    trace: tuple = field(default=(), compare=False)


class _Ctx:
    def __init__(self, t: IntegerLabeledTree, p: int, n_prime: str):
        if n_prime not in N_PRIME_MODES and not (isinstance(n_prime, int) and n_prime > 0):
            raise InvalidParams(f"n_prime must be one of {N_PRIME_MODES} or a positive integer")
        self.t = t
        self.p = p
        self.mode = n_prime
        self.phi = t.loops

    def fiber(self, v: int) -> set:
        p, s = self.p, self.phi[v]
        return {edge((v, x), (v, (x + s) % p)) for x in range(p)}

    def shift(self, edges, s: int) -> set:
        p = self.p
        return {edge((a.base, (a.g + s) % p), (b.base, (b.g + s) % p)) for a, b in edges}

    def matching(self, v: int, N: int, shift: int) -> list:
        return _matching_edges(v, self.phi[v], N, shift, self.p)

    def remove(self, H: set, edges, what: str) -> None:
        for e in edges:
            if e not in H:
                raise PrimeTooSmall(f"{what}: edge {e} is not present (p = {self.p} is too small)")
            H.remove(e)

    def add(self, H: set, edges, what: str) -> None:
        for e in edges:
            if e in H:
                raise PrimeTooSmall(f"{what}: edge {e} is already present (p = {self.p} is too small)")
            H.add(e)

    def children(self, verts: frozenset, v: int) -> list[tuple[int, frozenset]]:
        out = []
        for u in self.t.neighbors(v):
            if u not in verts:
                continue
            comp, stack = {u}, [u]
            while stack:
                x = stack.pop()
                for y in self.t.neighbors(x):
                    if y in verts and y != v and y not in comp:
                        comp.add(y)
                        stack.append(y)
            out.append((u, frozenset(comp)))
        out.sort(key=lambda c: (len(c[1]), min(c[1])))
        return out

    def block(self, v: int, kids: list[tuple[int, int]]) -> int:
        """N' for vertex ``v`` given ``(u_i, N_i)`` for its children."""
        phi_v = self.phi[v]
        if self.mode == "product":
            return 2 * phi_v * prod(N for _, N in kids)
        r = len(kids)
        step = lcm(*(2 * self.phi[u] for u, _ in kids))
        # r N' must be a multiple of 2 phi(v)
        need = 2 * phi_v // gcd(2 * phi_v, r)
        step = lcm(step, need)
        low = max(N for _, N in kids)
        if isinstance(self.mode, int):
            if self.mode < low or self.mode % step:
                raise InvalidParams(f"fixed N' = {self.mode} at vertex {v} must be a multiple of {step} and at least {low}")
            return self.mode
        return -(-low // step) * step

    def anchored(self, verts: frozenset, v: int, trace: list | None = None) -> tuple[set, int]:
        phi_v = self.phi[v]
        if len(verts) == 1:
            return self.fiber(v), 2 * phi_v
        kids = self.children(verts, v)
        parts = [(u, comp, *self.anchored(comp, u, trace)) for u, comp in kids]
        Np = self.block(v, [(u, N) for u, _, _, N in parts])
        r = len(parts)
        H = self.fiber(v)
        for i, (u, comp, F, N_i) in enumerate(parts):
            s = i * Np + phi_v
            self.add(H, self.shift(F, s), f"placing the 2-factor of child {u}")
        for i, (u, comp, F, N_i) in enumerate(parts):
            s = i * Np + phi_v
            rungs = [edge((v, (s + a) % self.p), (u, (s + a) % self.p)) for a in range(Np)]
            self.add(H, rungs, f"rungs to child {u}")
            self.remove(H, self.matching(u, Np, s), f"matching in fiber {u}")
        self.remove(H, self.matching(v, r * Np, phi_v), f"matching in fiber {v}")
        N = r * Np + 2 * phi_v
        if trace is not None:
            trace.append({"v": v, "children": [u for u, *_ in parts], "N_children": [x[3] for x in parts], "N_prime": Np, "N": N})
        return H, N


def _check_prime(t: IntegerLabeledTree, p, permissive: bool) -> int:
    if p is None or p == "auto":
        return sufficient_prime(t)
    p = int(p)
    if not isprime(p):
        raise NotPrime(f"{p} is not prime")
    if p <= max(t.loops):
        raise PrimeTooSmall(f"p = {p} must exceed every loop label")
    if not permissive and p < sufficient_prime(t):
        raise PrimeTooSmall(f"p = {p} is below the sufficient prime {sufficient_prime(t)}; use permissive mode to explore")
    return p


def validate_anchored(t: IntegerLabeledTree, p: int, v: int, H, N: int) -> ValidationReport:
    """The four anchored-2-factor invariants, checked on the lift."""
    from .core import build_lift

    rep = ValidationReport()
    vt = VoltageTree(p, t.loops, tuple((a, b, 0) for a, b, _ in t.edges))
    rep.extend(is_two_factor(build_lift(vt), H), "two_factor.")
    try:
        M = matching_Mv(t, p, v, N).edges
    except (Collision, NotDivisible) as exc:
        rep.add("anchor_matching", str(exc))
        return rep
    H = set(H)
    missing = M - H
    if missing:
        rep.add("anchor_contained", sorted(missing)[:3])
    for comp in cycle_components(H):
        if not any(a in comp and b in comp for a, b in M if (a, b) in H):
            rep.add("component_meets_anchor", min(comp))
            break
    phi = t.loops[v]
    tail = [edge((v, x), (v, x + phi)) for x in range(N, p - phi)]
    absent = [e for e in tail if e not in H]
    if absent:
        rep.add("tail_contained", absent[:3])
    return rep


def anchored_two_factor(
    t: IntegerLabeledTree, p=None, v: int = 0, permissive: bool = False, n_prime="compact"
) -> AnchoredTwoFactor:
    """A 2-factor with every component meeting ``M_v(N)`` (edge labels taken as 0)."""
    p = _check_prime(t, p, permissive)
    ctx = _Ctx(t, p, n_prime)
    trace: list = []
    H, N = ctx.anchored(frozenset(range(t.m)), v, trace)
    rep = validate_anchored(t, p, v, H, N)
    if not rep.passed:
        raise PrimeTooSmall(f"anchored 2-factor invalid at p = {p}: {sorted(rep.names())}", rep)
    return AnchoredTwoFactor(frozenset(H), matching_Mv(t, p, v, N), N, v, p, rep, tuple(trace))


# ---------------------------------------------------------------------------
# Hamiltonian cycles


def leaf_condition_vertices(t: IntegerLabeledTree) -> list[int]:
    return [v for v in range(t.m) if all(t.loops[u] == t.loops[v] for u in t.neighbors(v))]


def adjacent_one_pairs(t: IntegerLabeledTree) -> list[tuple[int, int]]:
    return [(u, v) for u, v, _ in t.edges if t.loops[u] == 1 and t.loops[v] == 1]


def _finish(t: IntegerLabeledTree, p: int, H: set, removed, info: dict) -> CycleCertificate:
    """Turn a normalized edge set into a validated certificate in the original labels."""
    from .core import build_lift

    try:
        cyc = cycle_from_edges(H)
    except ValueError as exc:
        raise PrimeTooSmall(f"result is not a single cycle at p = {p}: {exc}") from exc
    vt = VoltageTree(p, t.loops, t.edges)
    tau = cut_edge_offsets(vt)
    cyc = offset_subgraph(cyc, tau, p)
    cyc = cycle_from_edges({edge(a, b) for a, b in zip(cyc, cyc[1:] + cyc[:1])})
    removed = tuple(sorted(offset_subgraph(list(removed), tau, p)))
    rep = is_hamiltonian_cycle(build_lift(vt), cyc)
    if not rep.passed:
        raise PrimeTooSmall(f"cycle failed validation at p = {p}", rep)
    info = dict(info, p=p, validation=rep.to_dict())
    return CycleCertificate(cyc, None, None, removed, info)


def _component_of(H: set) -> dict:
    comp_of = {}
    for k, comp in enumerate(cycle_components(H)):
        for x in comp:
            comp_of[x] = k
    return comp_of


def ham_cycle_leaf_condition(
    t: IntegerLabeledTree, p=None, v: int | None = None, permissive: bool = False, n_prime="compact"
) -> CycleCertificate:
    """Hamiltonian cycle when every neighbour of ``v`` carries ``v``'s label."""
    good = leaf_condition_vertices(t)
    if v is None:
        if not good:
            raise ConditionNotMet("no vertex has all neighbours carrying its own label")
        v = good[0]
    elif v not in good:
        raise ConditionNotMet(f"vertex {v} has a neighbour with a different label")
    p = _check_prime(t, p, permissive)
    ctx = _Ctx(t, p, n_prime)
    phi = t.loops[v]
    if t.m == 1:
        return _finish(t, p, ctx.fiber(v), (), {"route": "leaf", "v": v, "N": 2 * phi})
    kids = ctx.children(frozenset(range(t.m)), v)
    parts = [(u, comp, *ctx.anchored(comp, u)) for u, comp in kids]
    if n_prime == "product":
        N = 2 * phi * prod(N_i for *_, N_i in parts)
    else:
        step = 2 * phi
        N = -(-max(N_i for *_, N_i in parts) // step) * step
    A = ctx.fiber(v)
    H = set(A)
    shifted = []
    for i, (u, comp, F, N_i) in enumerate(parts):
        Hi = ctx.shift(F, i * N)
        ctx.add(H, Hi, f"placing the 2-factor of child {u}")
        shifted.append((u, Hi, set(ctx.matching(u, N, i * N))))
    removed, swaps = [], []
    for u, Hi, M in shifted:
        for comp in cycle_components(Hi):
            cand = sorted(_start(e, phi, p) for e in M if e[0] in comp and e[1] in comp)
            if not cand:
                raise PrimeTooSmall(f"a component of child {u} misses its anchor at p = {p}")
            a = cand[0]
            ue = edge((u, a), (u, (a + phi) % p))
            ve = edge((v, a), (v, (a + phi) % p))
            ctx.remove(H, [ue, ve], f"swap at {a}")
            ctx.add(H, [edge((u, a), (v, a)), edge((u, (a + phi) % p), (v, (a + phi) % p))], f"swap at {a}")
            removed += [ue, ve]
            swaps.append({"child": u, "a": a})
    info = {"route": "leaf", "v": v, "N": N, "N_children": [x[3] for x in parts], "swaps": swaps}
    return _finish(t, p, H, removed, info)


def ham_cycle_adjacent_ones(
    t: IntegerLabeledTree,
    p=None,
    u: int | None = None,
    v: int | None = None,
    permissive: bool = False,
    n_prime="compact",
) -> CycleCertificate:
    """Hamiltonian cycle when adjacent ``u, v`` both carry label 1."""
    pairs = adjacent_one_pairs(t)
    if u is None or v is None:
        if not pairs:
            raise ConditionNotMet("no two adjacent vertices both carry label 1")
        u, v = pairs[0]
    elif (min(u, v), max(u, v)) not in pairs:
        raise ConditionNotMet(f"vertices {u} and {v} are not adjacent with label 1")
    p = _check_prime(t, p, permissive)
    ctx = _Ctx(t, p, n_prime)
    full = frozenset(range(t.m))
    side_u = _side(t, u, v)
    side_v = full - side_u
    F_u, N_u = ctx.anchored(side_u, u)
    F_v, N_v = ctx.anchored(side_v, v)
    F_v = ctx.shift(F_v, N_u)
    H = set()
    ctx.add(H, F_u, "placing F_u")
    ctx.add(H, F_v, "placing F_v")
    M_u = set(ctx.matching(u, N_u, 0))
    M_v = set(ctx.matching(v, N_v, N_u))
    tail_u = edge((u, N_u), (u, N_u + 1))
    tail_v = edge((v, (N_u + N_v) % p), (v, (N_u + N_v + 1) % p))
    removed, swaps = [], []

    def swap(i: int, tag: str):
        e1 = edge((u, i), (u, (i + 1) % p))
        e2 = edge((v, i), (v, (i + 1) % p))
        ctx.remove(H, [e1, e2], f"{tag} swap at {i}")
        ctx.add(H, [edge((u, i), (v, i)), edge((u, (i + 1) % p), (v, (i + 1) % p))], f"{tag} swap at {i}")
        removed.extend([e1, e2])
        swaps.append({"side": tag, "i": i})

    for side, F, M, tail, tag in ((u, F_u, M_u, tail_u, "u"), (v, F_v, M_v, tail_v, "v")):
        for comp in cycle_components(F):
            if tail[0] in comp and tail[1] in comp:
                continue  # the principal component
            cand = sorted(_start(e, 1, p) for e in M if e[0] in comp and e[1] in comp)
            if not cand:
                raise PrimeTooSmall(f"a component on the {tag} side misses its anchor at p = {p}")
            swap(cand[0], tag)
    # p > N_u + N_v + 1 keeps the join inside both tails; when p is smaller the
    # join index wraps and the two join edges are checked directly instead.
    swap((N_u + N_v) % p, "join")
    info = {
        "route": "adjacent_ones",
        "u": u,
        "v": v,
        "N_u": N_u,
        "N_v": N_v,
        "join_wraps": p <= N_u + N_v + 1,
        "swaps": swaps,
    }
    return _finish(t, p, H, removed, info)


def _start(e, step: int, p: int) -> int:
    """Group value ``a`` of the fiber edge ``e = [(w, a), (w, a + step)]``."""
    a, b = e
    return a.g if (a.g + step) % p == b.g else b.g


def _side(t: TreeShape, u: int, v: int) -> frozenset:
    """Vertices on ``u``'s side of the edge ``uv``."""
    comp, stack = {u}, [u]
    while stack:
        x = stack.pop()
        for y in t.neighbors(x):
            if y not in comp and not (x == u and y == v):
                comp.add(y)
                stack.append(y)
    return frozenset(comp)


def ham_cycle_prime(t: IntegerLabeledTree, p=None, permissive: bool = False, n_prime="compact") -> CycleCertificate:
    """Pick whichever sufficient condition applies; the leaf condition is tried first."""
    if leaf_condition_vertices(t):
        return ham_cycle_leaf_condition(t, p, None, permissive, n_prime)
    if adjacent_one_pairs(t):
        return ham_cycle_adjacent_ones(t, p, None, None, permissive, n_prime)
    raise ConditionNotMet("neither the equal-neighbour condition nor two adjacent unit labels hold")


# ---------------------------------------------------------------------------
# random labels


def _normalize_dist(dist) -> list[tuple[int, Fraction]]:
    if isinstance(dist, dict):
        items = [(int(k), Fraction(w)) for k, w in dist.items() if Fraction(w) > 0]
    else:
        vals = list(dist)
        items = [(int(k), Fraction(1, len(vals))) for k in vals] if vals else []
    if not items:
        raise EmptySupport("the label distribution has empty support")
    if any(k <= 0 for k, _ in items):
        raise EmptySupport("labels must be positive integers")
    total = sum(w for _, w in items)
    merged: dict[int, Fraction] = {}
    for k, w in items:
        merged[k] = merged.get(k, 0) + w / total
    return sorted(merged.items())


def detector(shape: TreeShape, labels) -> bool:
    """Whether some vertex carries the same label as all of its neighbours."""
    return any(all(labels[u] == labels[v] for u in shape.neighbors(v)) for v in range(shape.m))


def exact_detector_probability(shape: TreeShape, dist, max_vertices: int = 14) -> Fraction:
    items = _normalize_dist(dist)
    if shape.m > max_vertices:
        raise InvalidParams(f"exact enumeration is limited to {max_vertices} vertices")
    total = Fraction(0)
    for combo in product(items, repeat=shape.m):
        if detector(shape, [k for k, _ in combo]):
            total += prod((w for _, w in combo), start=Fraction(1))
    return total


@dataclass(frozen=True)
class ExperimentResult:
    trials: int
    hits: int
    seed: int
    constructed: int = 0
    construction_failures: int = 0

    @property
    def frequency(self) -> float:
        return self.hits / self.trials

    def to_dict(self) -> dict:
        return {
            "trials": self.trials,
            "hits": self.hits,
            "frequency": self.frequency,
            "seed": self.seed,
            "constructed": self.constructed,
            "construction_failures": self.construction_failures,
        }


def trial_rng(seed: int, trial: int) -> random.Random:
    """Independent generator per trial, so trials can run in any order."""
    return random.Random(f"{seed}:{trial}")


def random_label_experiment(
    shape: TreeShape, dist, trials: int, seed: int = 0, construct_up_to: int = 0
) -> ExperimentResult:
    """Monte-Carlo frequency of the equal-neighbour detector under i.i.d. labels.

    When ``construct_up_to`` is at least the vertex count, every detected
    labelling is also run through the leaf-condition construction at the
    sufficient prime.
    """
    items = _normalize_dist(dist)
    if trials < 1:
        raise InvalidParams("trials must be positive")
    values = [k for k, _ in items]
    weights = [float(w) for _, w in items]
    hits = built = failed = 0
    for i in range(trials):
        rng = trial_rng(seed, i)
        labels = rng.choices(values, weights, k=shape.m)
        if not detector(shape, labels):
            continue
        hits += 1
        if shape.m <= construct_up_to:
            built += 1
            try:
                ham_cycle_leaf_condition(IntegerLabeledTree.from_shape(shape, labels))
            except PrimeTooSmall:
                failed += 1
    return ExperimentResult(trials, hits, seed, built, failed)


class Shape(TreeShape):
    """A bare tree shape (no labels) used to drive experiments."""

    def __init__(self, m: int, edges):
        self.loops = tuple([1] * m)
        self.edges = tuple(sorted((min(u, v), max(u, v), 0) for u, v in edges))
        _check_tree(m, [(u, v) for u, v, _ in self.edges])

    @classmethod
    def path(cls, m: int) -> Shape:
        return cls(m, [(i, i + 1) for i in range(m - 1)])

    @classmethod
    def star(cls, leaves: int) -> Shape:
        return cls(leaves + 1, [(0, i) for i in range(1, leaves + 1)])
