"""Acceptance suite: one test per criterion, each printing a PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -s`` to see the lines as they are
produced; the terminal summary repeats them in criterion order.
"""

import itertools
import time
from math import gcd

from corpus import alternating_positions, decomposed_tree_corpus, long_cycle_corpus

from treelift import (
    BilliardParams,
    IntegerLabeledTree,
    VoltageTree,
    anchored_two_factor,
    brute_force_hamiltonian,
    build_lift,
    compute_c,
    extended_billiard,
    ham_cycle_adjacent_ones,
    ham_cycle_from_decomposition,
    ham_cycle_leaf_condition,
    ham_cycle_odd_shifting,
    is_hamiltonian_cycle,
    is_odd_shifting,
    is_simple_cycle,
    is_two_factor,
    long_cycle,
    matching_Mv,
    near_zero_multiple,
    random_label_experiment,
    sufficient_prime,
    two_factor_of_path,
    validate_path_family,
    verify_decomposition,
)
from treelift.cli import main as cli_main
from treelift.core import edge
from treelift.long_cycle import check_long_cycle
from treelift.prime_ham import Shape, adjacent_one_pairs, leaf_condition_vertices
from treelift.tree_ham import joint_runs


def _endpoint_loops(idx: int, n: int):
    # endpoint loops do not influence the billiard; cycle them so every value appears
    return idx % n, (3 * idx + 1) % n


def test_criterion_01_stopping_rule(record_criterion):
    start = time.perf_counter()
    t = VoltageTree.path(5, (1, 2, 1))
    fam = extended_billiard(t, BilliardParams(0, 1, 2))
    p0 = [x.g for x in fam.paths[0] if x.base == 1]
    p1 = [x.g for x in fam.paths[1] if x.base == 1]
    elapsed = time.perf_counter() - start
    ok = p0 == [0, 2, 4] and p1 == [1, 3] and (4 + 2) % 5 == p1[0] and elapsed < 1
    record_criterion("Criterion 1", ok, f"P_0 offsets {p0}, P_1 arrives at {p1[0]}; {elapsed:.3f}s")
    assert ok


def test_criterion_02_billiard_suite(record_criterion):
    start = time.perf_counter()
    runs = failures = 0
    first_failure = None
    for n in range(2, 11):
        for m in range(1, 6):
            internal_count = max(m - 2, 0)
            for idx, internal in enumerate(itertools.product(range(n), repeat=internal_count)):
                if m == 1:
                    loops = (idx % n,)
                else:
                    a, b = _endpoint_loops(idx, n)
                    loops = (a,) + internal + (b,)
                t = VoltageTree.path(n, loops)
                lift = build_lift(t)
                for r in range(1, n):
                    g = gcd(r, n)
                    # d <= gcd(r, n) as stated, restricted to arrivals that do not collide
                    for d in range(1, min(g, n // g) + 1):
                        for l in range(n):
                            fam = extended_billiard(t, BilliardParams(l, r, d))
                            rep = validate_path_family(lift, fam)
                            runs += 1
                            if not rep.passed:
                                failures += 1
                                first_failure = first_failure or (loops, l, r, d, rep.violations[:2])
    elapsed = time.perf_counter() - start
    ok = failures == 0 and elapsed < 300
    record_criterion("Criterion 2", ok, f"{runs} families, {failures} failures, {elapsed:.1f}s {first_failure or ''}")
    assert ok


def test_criterion_03_full_coverage(record_criterion):
    start = time.perf_counter()
    runs = failures = 0
    first_failure = None
    for n in range(2, 11):
        for m in range(3, 6):
            for idx, internal in enumerate(itertools.product(range(n), repeat=m - 2)):
                a, b = _endpoint_loops(idx, n)
                t = VoltageTree.path(n, (a,) + internal + (b,))
                lift = build_lift(t)
                c = compute_c(t)
                ls = sorted({0, 1 + idx % (n - 1)})
                for r in range(1, n):
                    if gcd(r, n) != 1:
                        continue
                    for d in range(2 * c, n + 1):
                        for l in ls:
                            fam = extended_billiard(t, BilliardParams(l, r, d))
                            rep = validate_path_family(lift, fam)
                            covered = {x for p in fam.paths for x in p}
                            missing = [v for v in range(1, m - 1) if any((v, g) not in covered for g in range(n))]
                            runs += 1
                            if missing or not rep.passed:
                                failures += 1
                                first_failure = first_failure or (t.loops, l, r, d, missing, rep.violations[:2])
    elapsed = time.perf_counter() - start
    ok = failures == 0
    record_criterion("Criterion 3", ok, f"{runs} families, {failures} with an uncovered internal fiber, {elapsed:.1f}s {first_failure or ''}")
    assert ok


def _check_two_factor(t, d, l):
    """Problems with one two_factor_of_path output, as a list of strings."""
    n, r = t.n, t.loops[0]
    res = two_factor_of_path(t, d, l)
    lift = build_lift(t)
    problems = []
    if not is_two_factor(lift, res.factor).passed:
        problems.append("two_factor")
    want_left = {edge((0, (l + 2 * j * r) % n), (0, (l + (2 * j + 1) * r) % n)) for j in range(d // 2)}
    if set(res.left) != want_left:
        problems.append("E^L list")
    last = t.m - 1
    base_r = (l + res.g) % n
    want_right = {edge((last, (base_r + 2 * j * r) % n), (last, (base_r + (2 * j + 1) * r) % n)) for j in range(d // 2)}
    if set(res.right) != want_right:
        problems.append("E^R list")
    for side, v, base in ((res.left, 0, l), (res.right, last, base_r)):
        pos = alternating_positions(side, v, n, r, base)
        if pos is None or len(pos) != d // 2:
            problems.append("alternating")
    fiber_l = set(lift.fiber_edges(0))
    fiber_r = set(lift.fiber_edges(last))
    if not (fiber_l - set(res.left)) <= res.factor or not (fiber_r - set(res.right)) <= res.factor:
        problems.append("end fibers")
    return problems


def test_criterion_04_path_constructions(record_criterion):
    start = time.perf_counter()
    factors = cycles = oracle_checks = 0
    failures = []
    k = 0
    for n in range(3, 13):
        units = [r for r in range(1, n) if gcd(r, n) == 1]
        for m in range(2, 6):
            for internal in itertools.product(range(n), repeat=m - 2):
                for r in units:
                    k += 1
                    t = VoltageTree.path(n, (r,) + internal + (r,))
                    c = compute_c(t)
                    l = k % n
                    for d in range(2 * c, n + 1, 2):
                        probs = _check_two_factor(t, d, l)
                        factors += 1
                        if probs:
                            failures.append(("two_factor", t.loops, d, l, probs))
                    s = is_odd_shifting(t)
                    if s is None:
                        continue
                    cert = ham_cycle_odd_shifting(t, l)
                    lift = build_lift(t)
                    cycles += 1
                    if not is_hamiltonian_cycle(lift, cert).passed:
                        failures.append(("ham_cycle", t.loops, l))
                    el = {edge((0, (l + 2 * j * r) % n), (0, (l + (2 * j + 1) * r) % n)) for j in range(c)}
                    if set(cert.left) != el or cert.edges & el:
                        failures.append(("alternating_left", t.loops, l))
                    if len(lift) <= 24:
                        oracle_checks += 1
                        if brute_force_hamiltonian(lift) is None:
                            failures.append(("oracle", t.loops))
    elapsed = time.perf_counter() - start
    ok = not failures
    record_criterion(
        "Criterion 4",
        ok,
        f"{factors} 2-factors, {cycles} Hamiltonian cycles, {oracle_checks} oracle checks, {len(failures)} failures, {elapsed:.1f}s {failures[:1]}",
    )
    assert ok


def test_criterion_05_decomposition_gluing(record_criterion):
    start = time.perf_counter()
    corpus = decomposed_tree_corpus(count=60, seed=5)
    failures = []
    oracle_checks = 0
    for t, dec in corpus:
        weights = verify_decomposition(t, dec)
        assert weights.properly_weighted
        cert = ham_cycle_from_decomposition(t, dec)
        lift = build_lift(t)
        if not is_hamiltonian_cycle(lift, cert).passed:
            failures.append(("hamiltonian", t))
        runs = joint_runs(t, cert, dec.r)
        for v, s in runs.items():
            if s < t.n - weights.omega[v]:
                failures.append(("invariant (1)", t, v, s))
        if len(lift) <= 24:
            oracle_checks += 1
            if brute_force_hamiltonian(lift) is None:
                failures.append(("oracle", t))
    elapsed = time.perf_counter() - start
    ok = len(corpus) >= 50 and not failures
    record_criterion("Criterion 5", ok, f"{len(corpus)} trees, {oracle_checks} oracle checks, {len(failures)} failures, {elapsed:.1f}s")
    assert ok


def test_criterion_06_matchings(record_criterion):
    t = IntegerLabeledTree((3,), ())
    p = 37
    m12 = set(matching_Mv(t, p, 0, 12).edges)
    m12_1 = set(matching_Mv(t, p, 0, 12, shift=1).edges)
    want = {edge((0, a), (0, b)) for a, b in [(0, 3), (1, 4), (2, 5), (6, 9), (7, 10), (8, 11)]}
    want_1 = {edge((0, a + 1), (0, b + 1)) for a, b in [(0, 3), (1, 4), (2, 5), (6, 9), (7, 10), (8, 11)]}
    reference_ok = m12 == want and m12_1 == want_1
    doubling = 0
    bad = []
    for phi in range(1, 5):
        tt = IntegerLabeledTree((phi,), ())
        for N in range(2 * phi, 8 * phi + 1, 2 * phi):
            for p in (101, 211):
                if 4 * N >= p:
                    continue
                for shift in (0, 1, 7):
                    a = set(matching_Mv(tt, p, 0, 2 * N, shift).edges)
                    half = matching_Mv(tt, p, 0, N, shift).edges
                    b = set(half) | set(matching_Mv(tt, p, 0, N, shift + N).edges)
                    doubling += 1
                    if a != b:
                        bad.append((phi, N, p, shift))
    ok = reference_ok and not bad
    record_criterion("Criterion 6", ok, f"reference edge sets {'match' if reference_ok else 'differ'}; {doubling} doubling identities, {len(bad)} failures")
    assert ok


def test_criterion_07_prime_constructions(record_criterion):
    start = time.perf_counter()
    shapes = {1: [[]], 2: [[(0, 1)]], 3: [[(0, 1), (1, 2)]], 4: [[(0, 1), (1, 2), (2, 3)], [(0, 1), (0, 2), (0, 3)]]}
    counts = {"anchored": 0, "leaf": 0, "ones": 0}
    failures = []
    for m, shape_list in shapes.items():
        for es in shape_list:
            for labels in itertools.product([1, 2, 3], repeat=m):
                t = IntegerLabeledTree(labels, [(u, v, 0) for u, v in es])
                p = sufficient_prime(t)
                lift = None
                for v in range(m):
                    res = anchored_two_factor(t, p, v)
                    counts["anchored"] += 1
                    if not res.report.passed:
                        failures.append(("anchored", labels, es, v))
                for v in leaf_condition_vertices(t):
                    cert = ham_cycle_leaf_condition(t, p, v)
                    lift = lift or build_lift(VoltageTree(p, t.loops, t.edges))
                    counts["leaf"] += 1
                    if not is_hamiltonian_cycle(lift, cert).passed:
                        failures.append(("leaf", labels, es, v))
                for u, v in adjacent_one_pairs(t):
                    cert = ham_cycle_adjacent_ones(t, p, u, v)
                    lift = lift or build_lift(VoltageTree(p, t.loops, t.edges))
                    counts["ones"] += 1
                    if not is_hamiltonian_cycle(lift, cert).passed:
                        failures.append(("ones", labels, es, (u, v)))
    elapsed = time.perf_counter() - start
    ok = not failures and elapsed < 600
    record_criterion("Criterion 7", ok, f"{counts}, {len(failures)} failures, {elapsed:.1f}s")
    assert ok


def _near_zero_oracle(g, m, n):
    """Enumerate targets h near 0 and solve k = h / g, instead of scanning k."""
    bound = n // m
    inv = pow(g, -1, n)
    ks = []
    for h in range(-bound, bound + 1):
        k = (h * inv - 1) % n + 1  # representative in [1, n]
        if 1 <= k <= m:
            ks.append(k)
    return min(ks) if ks else None


def test_criterion_08_near_zero_multiple(record_criterion):
    start = time.perf_counter()
    checked = 0
    bad = []
    for n in range(1, 51):
        for g in range(n):
            if gcd(g, n) != 1:
                continue
            for m in range(1, n + 1):
                want = _near_zero_oracle(g, m, n)
                got = near_zero_multiple(g, m, n)
                checked += 1
                if want is None or got.k != want or got.dist > n // m or got.h != got.k * g % n:
                    bad.append((n, g, m, want, got))
    elapsed = time.perf_counter() - start
    ok = not bad and elapsed < 60
    record_criterion("Criterion 8", ok, f"{checked} (n, g, m) triples, {len(bad)} disagreements, {elapsed:.1f}s")
    assert ok


def test_criterion_09_long_cycles(record_criterion):
    start = time.perf_counter()
    corpus = long_cycle_corpus(count=60, seed=9)
    bad = []
    for t, omega in corpus:
        cert = long_cycle(t, omega)
        lift = build_lift(t)
        simple = is_simple_cycle(lift, cert).passed
        chk = check_long_cycle(t, cert, omega)
        if not (simple and chk["global"] and chk["per_fiber"]):
            bad.append((t.n, t.m, omega, simple, chk["global"], chk["per_fiber"]))
    elapsed = time.perf_counter() - start
    ok = len(corpus) >= 50 and not bad
    biggest = max(t.n for t, _ in corpus)
    record_criterion("Criterion 9", ok, f"{len(corpus)} instances (n up to {biggest}), {len(bad)} failures, {elapsed:.1f}s")
    assert ok


def test_criterion_10_random_labels(record_criterion):
    res = random_label_experiment(Shape.path(200), [1, 2], 100, seed=2024)
    again = random_label_experiment(Shape.path(200), [1, 2], 100, seed=2024)
    ok = res.frequency >= 0.95 and res == again
    record_criterion("Criterion 10", ok, f"detector frequency {res.frequency:.2f} over {res.trials} trials (seed {res.seed}), repeat identical: {res == again}")
    assert ok


def _cli_bytes(argv, capsys):
    code = cli_main(argv)
    out = capsys.readouterr().out
    return code, out


def test_criterion_11_cli_determinism(record_criterion, capsys, tmp_path, data_dir):
    d = str(data_dir)
    cyc = tmp_path / "cycle.json"
    commands = [
        ["lift", f"{d}/star.tree"],
        ["lift", f"{d}/single.tree", "--format", "dot"],
        ["billiard", f"{d}/bounce_path.tree", "--l", "0", "--r", "1", "--d", "2"],
        ["ham-path", f"{d}/bounce_path.tree", "--oracle-bound", "24"],
        ["ham-path", f"{d}/bounce_path.tree", "--format", "dot"],
        ["ham-tree", f"{d}/star.tree", "--decomposition", f"{d}/star.dec"],
        ["ham-prime", f"{d}/adjacent_ones.tree", "--prime", "auto"],
        ["two-factor", f"{d}/bounce_path.tree"],
        ["two-factor", f"{d}/anchored_star.tree", "--prime", "auto"],
        ["long-cycle", f"{d}/long.tree", "--omega", "25"],
        ["long-cycle", f"{d}/long.tree", "--epsilon", "0.4", "--delta", "1"],
        ["experiment", "--shape", "path:200", "--trials", "100", "--seed", "7"],
    ]
    mismatched = []
    for argv in commands:
        a = _cli_bytes(argv, capsys)
        b = _cli_bytes(argv, capsys)
        if a != b or a[0] != 0:
            mismatched.append((argv[0], a[0]))
    # the verify round trip counts as its own command
    _, out = _cli_bytes(["ham-path", f"{d}/bounce_path.tree"], capsys)
    cyc.write_text(out)
    v1 = _cli_bytes(["verify", f"{d}/bounce_path.tree", str(cyc)], capsys)
    v2 = _cli_bytes(["verify", f"{d}/bounce_path.tree", str(cyc)], capsys)
    if v1 != v2 or v1[0] != 0:
        mismatched.append(("verify", v1[0]))
    ok = not mismatched
    record_criterion("Criterion 11", ok, f"{len(commands) + 1} command lines run twice, mismatches: {mismatched}")
    assert ok
