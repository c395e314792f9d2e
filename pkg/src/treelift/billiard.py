"""The extended billiard strategy on lifts of reflexive paths.

A family of ``d`` disjoint paths starts in the first fiber at
``l, l + r, ..., l + (d-1) r``.  At every internal fiber each path walks in
steps of the loop voltage from its arrival vertex until the next vertex is
itself an arrival vertex, then crosses to the next fiber.

Orders are stored as position -> path maps: ``orders[t][k]`` is the index of
the path whose endpoint in fiber ``t`` sits at ``alpha_t + k r``.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import gcd

from .core import LiftVertex, VoltageTree
from .errors import (
    EmptyInput,
    EndpointVoltageMismatch,
    IndexOutOfRange,
    InvalidParams,
    NotAPath,
    NotOrderPreserving,
    OddCount,
    OddVertexCount,
)


@dataclass(frozen=True)
class Permutation:
    """A bijection of ``{0, ..., d-1}`` stored as its image tuple."""

    mapping: tuple[int, ...]

    def __post_init__(self):
        mapping = tuple(int(x) for x in self.mapping)
        if sorted(mapping) != list(range(len(mapping))):
            raise ValueError(f"{mapping} is not a permutation")
        object.__setattr__(self, "mapping", mapping)

    @classmethod
    def identity(cls, d: int) -> Permutation:
        return cls(tuple(range(d)))

    @classmethod
    def shift(cls, d: int, s: int) -> Permutation:
        """The order ``(d-s, ..., d-1, 0, ..., d-s-1)``, i.e. ``q -> q - s``."""
        return cls(tuple((q - s) % d for q in range(d)))

    def __len__(self):
        return len(self.mapping)

    def __getitem__(self, i):
        return self.mapping[i]

    def __iter__(self):
        return iter(self.mapping)

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def compose(self, other: Permutation) -> Permutation:
        """``(self o other)(x) = self(other(x))``."""
        if len(other) != len(self):
            raise ValueError("permutations of different sizes")
        return Permutation(tuple(self.mapping[x] for x in other.mapping))

    __matmul__ = compose

    def inverse(self) -> Permutation:
        inv = [0] * len(self)
        for i, x in enumerate(self.mapping):
            inv[x] = i
        return Permutation(tuple(inv))

    def is_identity(self) -> bool:
        return all(i == x for i, x in enumerate(self.mapping))

    def cyclic_shift(self) -> int | None:
        """Return ``s`` if this is ``q -> q - s (mod d)``, otherwise None."""
        d = len(self)
        if d == 0:
            return None
        s = -self.mapping[0] % d
        if all((q - s) % d == x for q, x in enumerate(self.mapping)):
            return s
        return None

    def __repr__(self):
        return f"Permutation{self.mapping}"


@dataclass(frozen=True)
class BilliardParams:
    l: int
    r: int
    d: int

    def reduced(self, n: int) -> BilliardParams:
        return BilliardParams(self.l % n, self.r % n, self.d)


@dataclass(frozen=True)
class PathFamily:
    """The output of the extended billiard strategy.

    ``arrival[t]`` and ``exit_offsets[t]`` are indexed by the 0-based position
    of the fiber along ``order``.  The first fiber's arrivals are the path
    starts; the last fiber has no exit offset (``None``).  ``orders`` has one
    entry per fiber; the last entry is the arrival order at the final fiber,
    which equals the exit order of the one before it.
    """

    tree: VoltageTree
    params: BilliardParams
    order: tuple[int, ...]
    paths: tuple[tuple[LiftVertex, ...], ...]
    arrival: tuple[int, ...]
    exit_offsets: tuple[int | None, ...]
    orders: tuple[Permutation, ...]

    @property
    def d(self) -> int:
        return self.params.d

    @property
    def m(self) -> int:
        return len(self.order)

    @property
    def final_order(self) -> Permutation:
        return self.orders[-1]

    def endpoints(self) -> list[tuple[LiftVertex, LiftVertex]]:
        return [(p[0], p[-1]) for p in self.paths]

    def edges(self) -> set:
        from .core import edge

        out = set()
        for p in self.paths:
            out.update(edge(a, b) for a, b in zip(p, p[1:]))
        return out


def resolve_order(path: VoltageTree, order=None) -> tuple[int, ...]:
    if order is None:
        return path.path_order()
    order = tuple(order)
    if sorted(order) != list(range(path.m)):
        raise NotAPath("order must list every vertex exactly once")
    for a, b in zip(order, order[1:]):
        if b not in path.neighbors(a):
            raise NotAPath(f"{a} and {b} are not adjacent")
    return order


def compute_c(path: VoltageTree, order=None) -> int:
    """Half the largest number of fiber components over internal vertices, rounded up."""
    seq = resolve_order(path, order)
    if len(seq) <= 2:
        return 1
    worst = max(gcd(path.n, path.loops[v]) for v in seq[1:-1])
    return (worst + 1) // 2


def check_params(n: int, params: BilliardParams) -> BilliardParams:
    if params.d < 1:
        raise InvalidParams(f"d must be positive, got {params.d}")
    p = params.reduced(n)
    if n > 1 and p.r == 0:
        raise InvalidParams("r must be nonzero modulo n")
    if len({(p.l + k * p.r) % n for k in range(p.d)}) < p.d:
        raise InvalidParams(
            f"d = {p.d} exceeds n/gcd(r, n) = {n // gcd(p.r, n)}: arrival vertices collide"
        )
    return p


@lru_cache(maxsize=4096)
def _local_step(n: int, a: int, r: int, d: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Walk lengths and exit slots for arrivals at ``k r`` in a fiber of voltage ``a``.

    Returns ``(lengths, exit_slot)`` where path arriving at slot ``k`` takes
    ``lengths[k]`` fiber steps and leaves from slot ``exit_slot[k]``, slots of
    the exit set being ``-a + j r``.
    """
    slot = {(k * r) % n: k for k in range(d)}
    lengths, exits = [], []
    for k in range(d):
        y, steps = (k * r) % n, 0
        while (y + a) % n not in slot:
            y = (y + a) % n
            steps += 1
        lengths.append(steps)
        exits.append(slot[(y + a) % n])
    return tuple(lengths), tuple(exits)


def local_step(n: int, a: int, r: int, d: int) -> Permutation:
    """Position map ``exit slot -> arrival slot`` at a fiber of loop voltage ``a``.

    Depends only on ``(n, a, r, d)``; the arrival offset merely translates
    the picture.  Orders compose as ``pi_t = pi_{t-1} o step``.
    """
    _, exits = _local_step(n, a % n, r % n, d)
    return Permutation(exits).inverse()


def extended_billiard(path: VoltageTree, params: BilliardParams, order=None) -> PathFamily:
    """Run the extended billiard strategy along ``order`` (default: path order).

    Arbitrary cut-edge labels are allowed; the arrival offset at the next
    fiber is the exit offset plus the label of the crossing arc.
    """
    seq = resolve_order(path, order)
    n = path.n
    p = check_params(n, params)
    m = len(seq)
    paths = [[LiftVertex(seq[0], (p.l + k * p.r) % n)] for k in range(p.d)]
    at_slot = list(range(p.d))  # at_slot[k] = path occupying slot k
    arrival, exits, orders = [p.l], [p.l], [Permutation.identity(p.d)]
    for t in range(1, m):
        lab = path.arc(seq[t - 1], seq[t])
        i_t = (exits[-1] + lab) % n
        for k in range(p.d):
            x = paths[at_slot[k]][-1]
            paths[at_slot[k]].append(LiftVertex(seq[t], (x.g + lab) % n))
        arrival.append(i_t)
        if t == m - 1:
            orders.append(orders[-1])
            exits.append(None)
            break
        a = path.loops[seq[t]]
        lengths, exit_slot = _local_step(n, a, p.r, p.d)
        new_slot = [0] * p.d
        for k in range(p.d):
            j = at_slot[k]
            cur = paths[j][-1]
            for _ in range(lengths[k]):
                cur = LiftVertex(cur.base, (cur.g + a) % n)
                paths[j].append(cur)
            new_slot[exit_slot[k]] = j
        at_slot = new_slot
        exits.append((i_t - a) % n)
        orders.append(Permutation(tuple(at_slot)))
    return PathFamily(
        tree=path,
        params=p,
        order=seq,
        paths=tuple(tuple(x) for x in paths),
        arrival=tuple(arrival),
        exit_offsets=tuple(exits),
        orders=tuple(orders),
    )


def _default_params(path: VoltageTree, params: BilliardParams | None, order=None) -> BilliardParams:
    if params is not None:
        return params
    seq = resolve_order(path, order)
    r = path.loops[seq[0]] or 1
    return BilliardParams(0, r, 2 * compute_c(path, seq))


def step_permutation(path: VoltageTree, params: BilliardParams, t: int) -> Permutation:
    """Local reordering at internal fiber ``t`` (1-based, ``2 <= t <= m-1``)."""
    seq = path.path_order()
    if not 2 <= t <= len(seq) - 1:
        raise IndexOutOfRange(f"t = {t} is not an internal index of a path with {len(seq)} vertices")
    p = check_params(path.n, params)
    return local_step(path.n, path.loops[seq[t - 1]], p.r, p.d)


def is_order_preserving_pair(path: VoltageTree, params: BilliardParams, t: int) -> bool:
    """True iff the internal pair ``v_t, v_{t+1}`` leaves the order unchanged."""
    m = path.m
    if not 2 <= t <= m - 2:
        raise IndexOutOfRange(f"t = {t} does not start an internal pair on {m} vertices")
    a = step_permutation(path, params, t)
    b = step_permutation(path, params, t + 1)
    return a.compose(b).is_identity()


def smooth_pair(path: VoltageTree, t: int, params: BilliardParams | None = None) -> VoltageTree:
    """Delete the order preserving pair ``v_t, v_{t+1}`` and rejoin its neighbours.

    The new edge carries the sum of the three removed cut-edge labels, which
    is 0 for normalized input and keeps the lift isomorphic otherwise.
    """
    params = _default_params(path, params)
    if not is_order_preserving_pair(path, params, t):
        raise NotOrderPreserving(f"pair at t = {t} is not order preserving")
    seq = path.path_order()
    i = t - 1
    keep = seq[:i] + seq[i + 2 :]
    labels = [path.arc(a, b) for a, b in zip(seq, seq[1:])]
    new_labels = labels[: i - 1] + [labels[i - 1] + labels[i] + labels[i + 1]] + labels[i + 2 :]
    return VoltageTree.path(path.n, [path.loops[v] for v in keep], new_labels)


@lru_cache(maxsize=65536)
def _reducible(n: int, r: int, d: int, internal: tuple[int, ...]) -> bool:
    if not internal:
        return True
    steps = [local_step(n, a, r, d) for a in internal]
    for i in range(len(internal) - 1):
        if steps[i].compose(steps[i + 1]).is_identity():
            if _reducible(n, r, d, internal[:i] + internal[i + 2 :]):
                return True
    return False


def is_order_preserving_path(path: VoltageTree, params: BilliardParams | None = None) -> bool:
    """Exhaustive search over smoothing sequences (memoized on the loop sequence)."""
    seq = path.path_order()
    if len(seq) % 2:
        raise OddVertexCount(f"order preserving paths have an even vertex count, got {len(seq)}")
    p = check_params(path.n, _default_params(path, params))
    return _reducible(path.n, p.r, p.d, tuple(path.loops[v] for v in seq[1:-1]))


def is_odd_shifting(path: VoltageTree, params: BilliardParams | None = None, order=None) -> int | None:
    """Return the odd shift ``s`` of the final order, or None.

    The family is built with ``d = 2 c``.  When ``d = 2`` both possible
    orders close into a single cycle, so the parity test is vacuous and
    ``s = 1`` is reported.
    """
    seq = resolve_order(path, order)
    if len(seq) < 2:
        raise NotAPath("an odd shifting path needs at least two vertices")
    r0, r1 = path.loops[seq[0]], path.loops[seq[-1]]
    if r0 != r1:
        raise EndpointVoltageMismatch(f"endpoint voltages differ: {r0} and {r1}")
    if params is not None and params.r % path.n != r0:
        raise EndpointVoltageMismatch(f"endpoint voltage {r0} differs from r = {params.r}")
    if gcd(r0, path.n) != 1:
        raise EndpointVoltageMismatch(f"endpoint voltage {r0} is not coprime to {path.n}")
    d = 2 * compute_c(path, seq)
    if d > path.n:
        return None
    if d == 2:
        return 1
    l = params.l if params is not None else 0
    fam = extended_billiard(path, BilliardParams(l, r0, d), seq)
    s = fam.final_order.cyclic_shift()
    if s is not None and s % 2 == 1:
        return s
    return None


def join_order_preserving_paths(paths, r) -> VoltageTree:
    """Concatenate order preserving paths, merging each shared junction vertex."""
    paths = list(paths)
    if not paths:
        raise EmptyInput("no paths to join")
    if len(paths) % 2:
        raise OddCount(f"need an even number of paths, got {len(paths)}")
    n = paths[0].n
    r = int(r) % n
    if gcd(r, n) != 1:
        raise EndpointVoltageMismatch(f"r = {r} is not coprime to {n}")
    loops: list[int] = []
    labels: list[int] = []
    for idx, seg in enumerate(paths):
        if seg.n != n:
            raise EndpointVoltageMismatch("paths use different moduli")
        seq = seg.path_order()
        if seg.loops[seq[0]] != r or seg.loops[seq[-1]] != r:
            raise EndpointVoltageMismatch(f"path {idx} does not have endpoint voltage {r}")
        seg_loops = [seg.loops[v] for v in seq]
        seg_labels = [seg.arc(a, b) for a, b in zip(seq, seq[1:])]
        loops.extend(seg_loops if idx == 0 else seg_loops[1:])
        labels.extend(seg_labels)
    joined = VoltageTree.path(n, loops, labels)
    d = 2 * compute_c(joined)
    for idx, seg in enumerate(paths):
        if seg.m % 2 or not is_order_preserving_path(seg, BilliardParams(0, r, d)):
            raise NotOrderPreserving(f"path {idx} is not order preserving with d = {d}")
    return joined
