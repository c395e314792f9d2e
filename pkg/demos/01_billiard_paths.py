"""Walk through the extended billiard strategy on small voltage paths.

Run with ``python3 demos/01_billiard_paths.py``.
"""

from treelift import (
    BilliardParams,
    VoltageTree,
    build_lift,
    compute_c,
    extended_billiard,
    is_odd_shifting,
    join_order_preserving_paths,
    validate_path_family,
)


def show_family(t, params):
    fam = extended_billiard(t, params)
    print(f"  params l={params.l} r={params.r} d={params.d}, c={compute_c(t)}")
    for j, p in enumerate(fam.paths):
        print(f"  P_{j}: " + " ".join(f"({x.base},{x.g})" for x in p))
    print("  orders: " + ", ".join(str(list(o)) for o in fam.orders))
    print(f"  family validates: {validate_path_family(build_lift(t), fam).passed}")
    return fam


def main():
    print("A three-vertex path over Z_5 whose middle fiber has loop voltage 2.")
    print("Two billiard paths bounce through the middle fiber and cover it together.")
    show_family(VoltageTree.path(5, (1, 2, 1)), BilliardParams(0, 1, 2))

    print()
    print("The segment 1-4-8-1 over Z_12 returns its paths in their starting order.")
    seg = VoltageTree.path(12, (1, 4, 8, 1))
    fam = show_family(seg, BilliardParams(0, 1, 4))
    print(f"  final order is the identity: {fam.final_order.is_identity()}")

    print()
    print("Joining four copies of that segment gives a 13-vertex path.")
    t = join_order_preserving_paths([seg] * 4, 1)
    fam = extended_billiard(t, BilliardParams(0, 1, 4))
    print(f"  final order {list(fam.final_order)} is a cyclic shift by {fam.final_order.cyclic_shift()}")
    print(f"  odd shifting with s = {is_odd_shifting(t)}")


if __name__ == "__main__":
    main()
