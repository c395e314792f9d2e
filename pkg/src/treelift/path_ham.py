"""2-factors and Hamiltonian cycles in lifts of reflexive paths.

Both constructions take the billiard family and close it up inside the two
end fibers.  Positions in an end fiber are counted along its loop voltage
``r``: position ``k`` of the first fiber is ``(v_1, l + k r)``, so for
``r != 1`` "consecutive" means consecutive along the fiber cycle.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from math import gcd

from .billiard import BilliardParams, PathFamily, resolve_order, compute_c, extended_billiard, is_odd_shifting
from .core import LiftVertex, VoltageTree, build_lift, cycle_edges, cycle_from_edges, edge
from .errors import (
    EndpointVoltageMismatch,
    InternalInvariantBroken,
    InvalidParams,
    NotOddShifting,
)


@dataclass(frozen=True)
class AlternatingEdgeSet:
    """Every other edge along a stretch of the fiber cycle over ``v``."""

    v: int
    edges: tuple = ()

    def __len__(self):
        return len(self.edges)

    def __iter__(self):
        return iter(self.edges)

    def as_set(self) -> frozenset:
        return frozenset(self.edges)


@dataclass(frozen=True)
class TwoFactorResult:
    factor: frozenset
    left: AlternatingEdgeSet
    right: AlternatingEdgeSet
    g: int
    family: PathFamily | None = field(default=None, repr=False, compare=False)


@dataclass(frozen=True)
class CycleCertificate:
    """A cycle (closing vertex not repeated) with the edge sets its construction exposes."""

    cycle: tuple
    left: AlternatingEdgeSet | None = None
    right: AlternatingEdgeSet | None = None
    removed: tuple = ()
    info: dict = field(default_factory=dict, compare=False)

    def __len__(self):
        return len(self.cycle)

    @property
    def edges(self) -> frozenset:
        return cycle_edges(self.cycle)

    def closed(self) -> tuple:
        return tuple(self.cycle) + tuple(self.cycle[:1])


def _fiber_edge(v: int, n: int, base: int, r: int, k: int):
    """Edge between positions ``k`` and ``k + 1`` of the fiber over ``v``."""
    return edge((v, (base + k * r) % n), (v, (base + (k + 1) * r) % n))


def _end_fiber_edges(v: int, n: int, base: int, r: int, d: int) -> tuple[set, tuple]:
    """Closing edges added in an end fiber, and the alternating set left out."""
    add = {_fiber_edge(v, n, base, r, k) for k in range(1, d - 2, 2)}
    add |= {_fiber_edge(v, n, base, r, k) for k in range(d - 1, n)}
    skipped = tuple(_fiber_edge(v, n, base, r, k) for k in range(0, d, 2))
    return add, skipped


def _check_path_hypotheses(path: VoltageTree, order=None) -> tuple[tuple[int, ...], int]:
    seq = resolve_order(path, order)
    n = path.n
    if len(seq) < 2:
        raise InvalidParams("the base path needs at least two vertices")
    if n < 3:
        raise InvalidParams(f"end fibers must be cycles; n = {n} is too small")
    r0, r1 = path.loops[seq[0]], path.loops[seq[-1]]
    if r0 != r1:
        raise EndpointVoltageMismatch(f"endpoint voltages differ: {r0} and {r1}")
    if gcd(r0, n) != 1:
        raise EndpointVoltageMismatch(f"endpoint voltage {r0} is not coprime to {n}")
    return seq, r0


def _close_family(path: VoltageTree, seq, r: int, d: int, l: int):
    n = path.n
    fam = extended_billiard(path, BilliardParams(l, r, d), seq)
    i_m = fam.arrival[-1]
    edges = set(fam.edges())
    add_l, skip_l = _end_fiber_edges(seq[0], n, l, r, d)
    add_r, skip_r = _end_fiber_edges(seq[-1], n, i_m, r, d)
    edges |= add_l | add_r
    left = AlternatingEdgeSet(seq[0], skip_l)
    right = AlternatingEdgeSet(seq[-1], skip_r)
    return fam, frozenset(edges), left, right, (i_m - l) % n


def two_factor_of_path(path: VoltageTree, d: int, l: int = 0, order=None) -> TwoFactorResult:
    """A 2-factor containing every end-fiber edge except two alternating sets of size d/2."""
    seq, r = _check_path_hypotheses(path, order)
    n = path.n
    c = compute_c(path, seq)
    if d % 2:
        raise InvalidParams(f"d must be even, got {d}")
    if not 2 * c <= d <= n:
        raise InvalidParams(f"need 2c = {2 * c} <= d <= n = {n}, got d = {d}")
    fam, factor, left, right, g = _close_family(path, seq, r, d, int(l) % n)
    return TwoFactorResult(factor, left, right, g, fam)


def ham_cycle_odd_shifting(path: VoltageTree, l: int = 0, order=None) -> CycleCertificate:
    """Hamiltonian cycle of an odd shifting path lift, built with ``d = 2c``."""
    seq, r = _check_path_hypotheses(path, order)
    n = path.n
    s = is_odd_shifting(path, order=seq)
    if s is None:
        raise NotOddShifting("the final billiard order is not an odd cyclic shift")
    d = 2 * compute_c(path, seq)
    fam, edges, left, right, g = _close_family(path, seq, r, d, int(l) % n)
    try:
        cyc = cycle_from_edges(edges)
    except ValueError as exc:
        raise InternalInvariantBroken(f"closing the billiard family failed: {exc}") from exc
    if len(cyc) != path.m * n:
        raise InternalInvariantBroken("cycle does not cover the lift")
    return CycleCertificate(cyc, left, right, (), {"s": s, "d": d, "g": g, "family": fam})


def check_certificate(path: VoltageTree, cert: CycleCertificate):
    """Run the Hamiltonian-cycle validator on a certificate against its lift."""
    from .oracle import is_hamiltonian_cycle

    return is_hamiltonian_cycle(build_lift(path), cert)


def endpoint_position(v: int, n: int, base: int, r: int, x: LiftVertex) -> int:
    """Position of ``x`` in the fiber over ``v`` counted from ``base`` in steps of ``r``."""
    return ((x.g - base) * pow(r, -1, n)) % n
