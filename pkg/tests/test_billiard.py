from math import gcd

import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from treelift import (
    BilliardParams,
    Permutation,
    VoltageTree,
    build_lift,
    compute_c,
    extended_billiard,
    is_odd_shifting,
    is_order_preserving_pair,
    is_order_preserving_path,
    join_order_preserving_paths,
    smooth_pair,
    step_permutation,
    validate_path_family,
)
from treelift.billiard import check_params
from treelift.errors import (
    EmptyInput,
    EndpointVoltageMismatch,
    IndexOutOfRange,
    InvalidParams,
    NotOrderPreserving,
    OddCount,
    OddVertexCount,
)


def joined_segments_path():
    segment = VoltageTree.path(12, (1, 4, 8, 1))
    return join_order_preserving_paths([segment] * 4, 1)


@st.composite
def billiard_instances(draw):
    n = draw(st.integers(2, 10))
    m = draw(st.integers(1, 5))
    loops = [draw(st.integers(0, n - 1)) for _ in range(m)]
    labels = [draw(st.integers(0, n - 1)) for _ in range(m - 1)]
    t = VoltageTree.path(n, loops, labels)
    r = draw(st.integers(1, n - 1))
    k = gcd(r, n)
    d = draw(st.integers(1, min(k, n // k)))
    l = draw(st.integers(0, n - 1))
    return t, BilliardParams(l, r, d)


class TestPermutation:
    def test_shift(self):
        p = Permutation.shift(4, 1)
        assert p.mapping == (3, 0, 1, 2)
        assert p.cyclic_shift() == 1
        assert Permutation.identity(4).cyclic_shift() == 0
        assert Permutation((1, 0, 2)).cyclic_shift() is None

    def test_compose_inverse(self):
        p = Permutation((2, 0, 3, 1))
        assert p.compose(p.inverse()).is_identity()
        assert (p @ Permutation.identity(4)) == p

    def test_rejects_non_bijection(self):
        with pytest.raises(ValueError):
            Permutation((0, 0, 1))


class TestComputeC:
    def test_two_vertices(self):
        assert compute_c(VoltageTree.path(12, (5, 7))) == 1

    def test_coprime_internal(self):
        assert compute_c(VoltageTree.path(7, (1, 2, 3, 4, 1))) == 1

    def test_gcd_formula(self):
        assert compute_c(VoltageTree.path(12, (1, 4, 6, 1))) == 3


class TestExtendedBilliard:
    def test_stopping_rule(self):
        t = VoltageTree.path(5, (1, 2, 1))
        fam = extended_billiard(t, BilliardParams(0, 1, 2))
        p0 = [x.g for x in fam.paths[0] if x.base == 1]
        p1 = [x.g for x in fam.paths[1] if x.base == 1]
        assert p0 == [0, 2, 4]
        assert p1 == [1, 3]
        assert validate_path_family(build_lift(t), fam).passed

    def test_single_vertex(self):
        t = VoltageTree(9, (1,))
        fam = extended_billiard(t, BilliardParams(2, 3, 3))
        assert fam.paths == tuple(((0, (2 + 3 * j) % 9),) for j in range(3))
        assert validate_path_family(build_lift(t), fam).passed

    def test_full_coverage(self):
        t = VoltageTree.path(6, (1, 3, 1))
        fam = extended_billiard(t, BilliardParams(0, 1, 6))
        covered = {x.g for p in fam.paths for x in p if x.base == 1}
        assert covered == set(range(6))
        alpha = fam.exit_offsets[1]
        ends = {[x for x in p if x.base == 1][-1].g for p in fam.paths}
        assert ends == {(alpha + j) % 6 for j in range(6)}
        assert validate_path_family(build_lift(t), fam).passed

    def test_arrival_collision(self):
        with pytest.raises(InvalidParams):
            check_params(6, BilliardParams(0, 2, 4))
        with pytest.raises(InvalidParams):
            extended_billiard(VoltageTree.path(6, (1, 1, 1)), BilliardParams(0, 2, 4))

    @settings(max_examples=150, deadline=None)
    @given(billiard_instances())
    def test_random_families_validate(self, inst):
        t, params = inst
        fam = extended_billiard(t, params)
        assert validate_path_family(build_lift(t), fam).passed

    @settings(max_examples=100, deadline=None)
    @given(billiard_instances())
    def test_orders_compose_step_permutations(self, inst):
        t, params = inst
        assume(t.m >= 3)
        fam = extended_billiard(t, params)
        for i in range(1, t.m - 1):
            step = step_permutation(t, params, i + 1)
            assert fam.orders[i] == fam.orders[i - 1].compose(step)

    def test_arrival_formula_ignores_first_loop(self):
        t = VoltageTree.path(7, (3, 2, 5, 1), (1, 4, 6))
        fam = extended_billiard(t, BilliardParams(2, 1, 1))
        expected = [2]
        for i in range(1, 4):
            sub = t.loops[i - 1] if i > 1 else 0
            expected.append((expected[-1] - sub + t.arc(i - 1, i)) % 7)
        assert [a % 7 for a in fam.arrival] == expected


class TestStepPermutation:
    def test_zero_voltage_is_identity(self):
        t = VoltageTree.path(5, (1, 0, 1))
        assert step_permutation(t, BilliardParams(0, 1, 2), 2).is_identity()

    def test_read_from_construction(self):
        t = VoltageTree.path(5, (1, 2, 1))
        params = BilliardParams(0, 1, 2)
        step = step_permutation(t, params, 2)
        assert step == extended_billiard(t, params).orders[1]
        assert step.mapping == (1, 0)

    def test_inverse_voltages_cancel(self):
        for n in range(3, 12):
            for x in range(1, n):
                t = VoltageTree.path(n, (1, x, n - x, 1))
                d = 2 * compute_c(t)
                params = BilliardParams(0, 1, d)
                a = step_permutation(t, params, 2)
                b = step_permutation(t, params, 3)
                assert a.compose(b).is_identity()

    def test_index_range(self):
        t = VoltageTree.path(5, (1, 2, 1))
        with pytest.raises(IndexOutOfRange):
            step_permutation(t, BilliardParams(0, 1, 2), 1)
        with pytest.raises(IndexOutOfRange):
            step_permutation(t, BilliardParams(0, 1, 2), 3)


class TestOrderPreserving:
    def test_inverse_pair(self):
        t = VoltageTree.path(7, (1, 3, 4, 1))
        assert is_order_preserving_pair(t, BilliardParams(0, 1, 2), 2)

    def test_zero_pair(self):
        t = VoltageTree.path(7, (1, 0, 0, 1))
        assert is_order_preserving_pair(t, BilliardParams(0, 1, 2), 2)

    def test_pair_by_composition(self):
        t = VoltageTree.path(5, (1, 2, 2, 1))
        params = BilliardParams(0, 1, 2)
        a = step_permutation(t, params, 2)
        b = step_permutation(t, params, 3)
        assert is_order_preserving_pair(t, params, 2) == a.compose(b).is_identity()

    def test_pair_index_range(self):
        with pytest.raises(IndexOutOfRange):
            is_order_preserving_pair(VoltageTree.path(5, (1, 2, 1)), BilliardParams(0, 1, 2), 2)

    def test_bare_path(self):
        assert is_order_preserving_path(VoltageTree.path(5, (1, 1)))

    def test_inverse_pair_path(self):
        assert is_order_preserving_path(VoltageTree.path(5, (1, 2, 3, 1)))

    def test_search_matches_direct_order(self):
        t = VoltageTree.path(5, (1, 1, 2, 1))
        params = BilliardParams(0, 1, 2)
        fam = extended_billiard(t, params)
        assert is_order_preserving_path(t, params) == fam.final_order.is_identity()

    def test_odd_vertex_count(self):
        with pytest.raises(OddVertexCount):
            is_order_preserving_path(VoltageTree.path(5, (1, 2, 1)))


class TestSmoothPair:
    def test_four_to_two(self):
        t = VoltageTree.path(5, (1, 2, 3, 4))
        s = smooth_pair(t, 2)
        assert s.m == 2
        assert s.loops == (1, 4)
        assert s.edges == ((0, 1, 0),)

    def test_repeated(self):
        t = VoltageTree.path(7, (1, 2, 3, 4, 5, 1))
        s = smooth_pair(t, 3)
        assert s.loops == (1, 2, 5, 1)
        assert s.path_order() == (0, 1, 2, 3)
        s = smooth_pair(s, 2)
        assert s.loops == (1, 1)
        assert s.path_order() == (0, 1)

    def test_new_label_is_sum(self):
        t = VoltageTree.path(7, (1, 2, 5, 1), (1, 2, 3))
        assert smooth_pair(t, 2).arc(0, 1) == 6

    def test_rejects_non_preserving(self):
        with pytest.raises(NotOrderPreserving):
            smooth_pair(VoltageTree.path(9, (1, 1, 3, 1)), 2)


class TestOddShifting:
    def test_joined_segments(self):
        t = joined_segments_path()
        assert t.m == 13
        assert is_odd_shifting(t) == 3
        fam = extended_billiard(t, BilliardParams(0, 1, 4))
        assert fam.final_order.mapping == (1, 2, 3, 0)

    def test_identity_order_is_not_odd(self):
        t = VoltageTree.path(12, (1, 4, 8, 1))
        assert extended_billiard(t, BilliardParams(0, 1, 4)).final_order.is_identity()
        assert is_odd_shifting(t) is None

    def test_two_vertex_path(self):
        assert is_odd_shifting(VoltageTree.path(5, (2, 2))) == 1

    def test_endpoint_mismatch(self):
        with pytest.raises(EndpointVoltageMismatch):
            is_odd_shifting(VoltageTree.path(7, (1, 2, 3)))
        with pytest.raises(EndpointVoltageMismatch):
            is_odd_shifting(VoltageTree.path(7, (1, 2, 1)), BilliardParams(0, 2, 2))

    @settings(max_examples=150, deadline=None)
    @given(st.lists(st.integers(0, 6), min_size=3, max_size=3), st.integers(1, 6))
    def test_random_five_vertex_paths(self, internal, r):
        t = VoltageTree.path(7, [r] + internal + [r])
        d = 2 * compute_c(t)
        if d > 7:
            assert is_odd_shifting(t) is None
            return
        fam = extended_billiard(t, BilliardParams(0, r, d))
        s = fam.final_order.cyclic_shift()
        if d == 2:
            expected = 1
        else:
            expected = s if s is not None and s % 2 else None
        assert is_odd_shifting(t) == expected


class TestJoin:
    def test_two_bare_paths(self):
        seg = VoltageTree.path(7, (3, 3))
        t = join_order_preserving_paths([seg, seg], 3)
        assert t.loops == (3, 3, 3)
        s = is_odd_shifting(t)
        assert s is not None and s % 2 == 1

    def test_empty(self):
        with pytest.raises(EmptyInput):
            join_order_preserving_paths([], 1)

    def test_odd_count(self):
        with pytest.raises(OddCount):
            join_order_preserving_paths([VoltageTree.path(5, (1, 1))] * 3, 1)

    def test_endpoint_mismatch(self):
        with pytest.raises(EndpointVoltageMismatch):
            join_order_preserving_paths([VoltageTree.path(5, (1, 2))] * 2, 1)

    def test_not_order_preserving(self):
        seg = VoltageTree.path(9, (1, 1, 3, 1))
        with pytest.raises(NotOrderPreserving):
            join_order_preserving_paths([seg, seg], 1)
