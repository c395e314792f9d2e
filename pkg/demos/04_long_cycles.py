"""Long cycles in lifts of trees whose loop voltages are units.

Run with ``python3 demos/04_long_cycles.py``.
"""

from fractions import Fraction

from treelift import VoltageTree, build_lift, is_simple_cycle, long_cycle
from treelift.long_cycle import check_circumference_params, check_long_cycle, required_n


def main():
    n = 500
    t = VoltageTree(n, (1, 3, 7, 11), [(0, 1, 0), (0, 2, 0), (0, 3, 0)])
    print(f"Star with three leaves over Z_{n}, {4 * n} lift vertices.")
    for omega in (25, 64, 100):
        cert = long_cycle(t, omega)
        chk = check_long_cycle(t, cert, omega)
        ok = is_simple_cycle(build_lift(t), cert).passed
        print(
            f"  omega={omega:3d}: length {len(cert)} ({len(cert) / (4 * n):.1%}),"
            f" deficits {chk['deficits']}, valid={ok}"
        )

    print()
    eps = Fraction(2, 5)
    print(f"For maximum degree 3 and epsilon {eps}, n must be at least {required_n(3, eps)}.")
    params = check_circumference_params(3, eps, 1000)
    print(f"  at n=1000 the wrapper picks omega={params.omega} and s={params.s}")


if __name__ == "__main__":
    main()
