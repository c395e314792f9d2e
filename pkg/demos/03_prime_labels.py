"""Integer loop labels reduced modulo a prime.

Run with ``python3 demos/03_prime_labels.py``.
"""

from treelift import (
    IntegerLabeledTree,
    VoltageTree,
    build_lift,
    ham_cycle_prime,
    is_hamiltonian_cycle,
    random_label_experiment,
    sufficient_prime,
)
from treelift.prime_ham import Shape, exact_detector_probability


def report(name, t):
    p = sufficient_prime(t)
    cert = ham_cycle_prime(t)
    lift = build_lift(VoltageTree(cert.info["p"], t.loops, t.edges))
    ok = is_hamiltonian_cycle(lift, cert).passed
    print(f"{name}: p={p}, route={cert.info['route']}, {len(cert)} vertices, valid={ok}")


def main():
    report("two adjacent threes", IntegerLabeledTree((3, 3), [(0, 1, 0)]))
    report("a path of ones", IntegerLabeledTree((1, 1, 1, 1), [(0, 1, 0), (1, 2, 0), (2, 3, 0)]))
    report("mixed labels 2-1-1-3", IntegerLabeledTree((2, 1, 1, 3), [(0, 1, 0), (1, 2, 0), (2, 3, 0)]))

    print()
    print("How often does a random labelling meet one of the two conditions?")
    for shape, name in ((Shape.star(3), "star with 3 leaves"), (Shape.path(8), "path on 8 vertices")):
        exact = exact_detector_probability(shape, [1, 2])
        res = random_label_experiment(shape, [1, 2], trials=2000, seed=1)
        print(f"  {name}: exact {exact} ({float(exact):.3f}), sampled {res.frequency:.3f}")
    res = random_label_experiment(Shape.path(200), [1, 2, 3], trials=200, seed=1)
    print(f"  path on 200 vertices, labels 1..3: sampled {res.frequency:.3f}")


if __name__ == "__main__":
    main()
