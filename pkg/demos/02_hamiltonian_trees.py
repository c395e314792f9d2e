"""Hamiltonian cycles in lifts of odd shifting paths and of decomposed trees.

Run with ``python3 demos/02_hamiltonian_trees.py``.
"""

from treelift import (
    OddShiftingDecomposition,
    VoltageTree,
    brute_force_decomposition_search,
    build_lift,
    ham_cycle_from_decomposition,
    ham_cycle_odd_shifting,
    is_hamiltonian_cycle,
    two_factor_of_path,
    verify_decomposition,
)
from treelift.core import components


def main():
    t = VoltageTree.path(6, (1, 3, 1))
    res = two_factor_of_path(t, 4)
    print("Path 1-3-1 over Z_6 with four billiard paths:")
    print(f"  the 2-factor drifts by g={res.g} and has {len(components(res.factor))} cycles")

    t = VoltageTree.path(7, (2, 3, 2), (4, 5))
    cert = ham_cycle_odd_shifting(t)
    lift = build_lift(t)
    print("Path 2-3-2 over Z_7 with cut-edge voltages 4 and 5:")
    print(f"  Hamiltonian cycle of length {len(cert)} out of {len(lift)} vertices")
    print(f"  valid: {is_hamiltonian_cycle(lift, cert).passed}")

    star = VoltageTree(7, (1, 1, 1, 1), [(0, 1, 0), (0, 2, 0), (0, 3, 0)])
    dec = OddShiftingDecomposition([(0, 1), (0, 2), (0, 3)], 1)
    w = verify_decomposition(star, dec)
    print("Star with three leaves over Z_7, one path per arm:")
    print(f"  centre weight {w.omega[0]} against n=7, properly weighted: {w.properly_weighted}")
    cert = ham_cycle_from_decomposition(star, dec)
    print(f"  glued cycle valid: {is_hamiltonian_cycle(build_lift(star), cert).passed}")

    small = VoltageTree(5, (1, 1, 1, 1), [(0, 1, 0), (0, 2, 0), (0, 3, 0)])
    print("The same star over Z_5 is too crowded at the centre:")
    print(f"  properly weighted: {verify_decomposition(small, dec).properly_weighted}")

    t = VoltageTree(11, (1,) * 5, [(0, 1, 3), (1, 2, 5), (1, 3, 0), (3, 4, 7)])
    dec = brute_force_decomposition_search(t)
    print(f"Searching a five-vertex tree over Z_11 finds the decomposition {list(dec.paths)}")
    cert = ham_cycle_from_decomposition(t, dec)
    print(f"  glued cycle valid: {is_hamiltonian_cycle(build_lift(t), cert).passed}")


if __name__ == "__main__":
    main()
