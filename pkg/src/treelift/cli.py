"""Command-line interface.

Exit codes: 0 success, 2 unreadable input, 3 violated hypothesis,
4 internal failure or a construction whose validation did not pass.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from fractions import Fraction

from . import io
from .billiard import BilliardParams, _default_params, compute_c, extended_billiard
from .core import build_lift
from .errors import HypothesisViolated, InternalInvariantBroken, ParamsRejected, ParseError, VoltageError
from .long_cycle import check_circumference_params, check_long_cycle, long_cycle
from .oracle import (
    ValidationReport,
    brute_force_hamiltonian,
    is_hamiltonian_cycle,
    is_simple_cycle,
    is_two_factor,
    longest_cycle_brute,
    validate_path_family,
)
from .path_ham import ham_cycle_odd_shifting, two_factor_of_path
from .prime_ham import (
    Shape,
    anchored_two_factor,
    exact_detector_probability,
    ham_cycle_prime,
    random_label_experiment,
    reduce_mod_prime,
    sufficient_prime,
)
from .tree_ham import OddShiftingDecomposition, ham_cycle_from_decomposition

EXIT_OK, EXIT_PARSE, EXIT_HYPOTHESIS, EXIT_INTERNAL = 0, 2, 3, 4

COMMANDS = ("lift", "billiard", "ham-path", "ham-tree", "ham-prime", "two-factor", "long-cycle", "verify", "experiment")


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    cycle: str | None = None
    modulus: int | None = None
    prime: str | None = None
    l: int | None = None
    r: int | None = None
    d: int | None = None
    omega: int | None = None
    epsilon: float | None = None
    delta: int | None = None
    seed: int = 0
    format: str = "json"
    oracle_bound: int = 0
    decomposition: str | None = None
    permissive: bool = False
    shape: str | None = None
    dist: str = "1,2"
    trials: int = 100
    construct_up_to: int = 0
    require: str | None = None
    output: str | None = None


@dataclass
class Outcome:
    doc: dict
    passed: bool
    dot: object = None  # zero-argument callable producing DOT text


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise ParseError(f"cannot read {path}: {exc.strerror}") from None


def _tree_record(cfg: RunConfig) -> io.TreeRecord:
    if cfg.input is None:
        raise ParseError(f"{cfg.command} needs an input tree file")
    return io.parse_tree(_read(cfg.input))


def _voltage_tree(cfg: RunConfig, rec: io.TreeRecord | None = None):
    rec = rec or _tree_record(cfg)
    if rec.integer:
        if cfg.prime is None and cfg.modulus is None:
            raise ParseError("integer-labeled tree needs --prime or --modulus")
        if cfg.modulus is not None:
            return io.voltage_tree(rec, cfg.modulus)
        it = io.integer_tree(rec)
        p = sufficient_prime(it) if cfg.prime == "auto" else _int_flag("--prime", cfg.prime)
        return reduce_mod_prime(it, p)
    return io.voltage_tree(rec, cfg.modulus)


def _int_flag(name: str, value) -> int:
    try:
        return int(value)
    except (TypeError, ValueError):
        raise ParseError(f"{name} expects an integer, got {value!r}") from None


def _oracle(cfg: RunConfig, lift, report: ValidationReport) -> dict:
    """Brute-force cross-check when the lift is small enough."""
    if cfg.oracle_bound <= 0 or len(lift) > cfg.oracle_bound:
        return {"checked": False}
    found = brute_force_hamiltonian(lift, bound=cfg.oracle_bound) is not None
    if not found:
        report.add("oracle_disagrees", "brute force found no Hamiltonian cycle")
    return {"checked": True, "hamiltonian": found}


def _cycle_doc(t, cert, report: ValidationReport, claim: str) -> dict:
    return {
        "claim": claim,
        "cycle": io.cycle_json(cert.cycle),
        "length": len(cert.cycle),
        "modulus": t.n,
        "removed": io.edges_json(cert.removed),
        "validation": report.to_dict(),
    }


def _tree_doc(t) -> dict:
    return {"n": t.n, "loops": list(t.loops), "edges": [list(e) for e in t.edges]}


# ---------------------------------------------------------------------------
# commands


def cmd_lift(cfg: RunConfig) -> Outcome:
    t = _voltage_tree(cfg)
    lift = build_lift(t)
    doc = {
        "tree": _tree_doc(t),
        "vertices": [io.vertex_json(x) for x in lift.vertices],
        "edges": io.edges_json(lift.edges),
        "validation": ValidationReport().to_dict(),
    }
    return Outcome(doc, True, lambda: io.to_dot(lift))


def _path_params(cfg: RunConfig, t) -> BilliardParams:
    base = _default_params(t, None)
    return BilliardParams(
        cfg.l if cfg.l is not None else base.l,
        cfg.r if cfg.r is not None else base.r,
        cfg.d if cfg.d is not None else base.d,
    )


def cmd_billiard(cfg: RunConfig) -> Outcome:
    t = _voltage_tree(cfg)
    params = _path_params(cfg, t)
    fam = extended_billiard(t, params)
    lift = build_lift(t)
    rep = validate_path_family(lift, fam, params)
    doc = {
        "params": {"l": params.l % t.n, "r": params.r % t.n, "d": params.d},
        "order": list(fam.order),
        "paths": [io.cycle_json(p) for p in fam.paths],
        "arrival": list(fam.arrival),
        "exit_offsets": list(fam.exit_offsets),
        "pi": [list(p) for p in fam.orders],
        "c": compute_c(t),
        "validation": rep.to_dict(),
    }
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, extra_edges=fam.edges()))


def cmd_ham_path(cfg: RunConfig) -> Outcome:
    t = _voltage_tree(cfg)
    cert = ham_cycle_odd_shifting(t, cfg.l or 0)
    lift = build_lift(t)
    rep = is_hamiltonian_cycle(lift, cert)
    doc = _cycle_doc(t, cert, rep, "hamiltonian")
    doc["oracle"] = _oracle(cfg, lift, rep)
    doc["validation"] = rep.to_dict()
    doc["s"], doc["d"] = cert.info["s"], cert.info["d"]
    doc["alternating"] = {"left": io.edges_json(cert.left), "right": io.edges_json(cert.right)}
    removed = list(cert.left) + list(cert.right)
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, cert.cycle, removed))


def cmd_ham_tree(cfg: RunConfig) -> Outcome:
    t = _voltage_tree(cfg)
    if cfg.decomposition is None:
        raise ParseError("ham-tree needs --decomposition <file>")
    paths, r = io.parse_decomposition(_read(cfg.decomposition))
    if r is None:
        r = t.loops[paths[0][0]]
    cert = ham_cycle_from_decomposition(t, OddShiftingDecomposition(paths, r))
    lift = build_lift(t)
    rep = is_hamiltonian_cycle(lift, cert)
    doc = _cycle_doc(t, cert, rep, "hamiltonian")
    doc["oracle"] = _oracle(cfg, lift, rep)
    doc["validation"] = rep.to_dict()
    doc["omega"] = {str(k): v for k, v in cert.info["omega"].items()}
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, cert.cycle, cert.removed))


def _prime_tree(cfg: RunConfig):
    rec = _tree_record(cfg)
    if not rec.integer:
        raise ParseError(f"{cfg.command} needs a 'labels integer' tree file")
    return io.integer_tree(rec)


def _prime_arg(cfg: RunConfig):
    if cfg.prime is None or cfg.prime == "auto":
        return None
    return _int_flag("--prime", cfg.prime)


def cmd_ham_prime(cfg: RunConfig) -> Outcome:
    it = _prime_tree(cfg)
    cert = ham_cycle_prime(it, _prime_arg(cfg), permissive=cfg.permissive)
    t = reduce_mod_prime(it, cert.info["p"])
    lift = build_lift(t)
    rep = is_hamiltonian_cycle(lift, cert)
    doc = _cycle_doc(t, cert, rep, "hamiltonian")
    doc["oracle"] = _oracle(cfg, lift, rep)
    doc["validation"] = rep.to_dict()
    doc["condition"] = cert.info.get("route")
    doc["p"] = cert.info["p"]
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, cert.cycle, cert.removed))


def cmd_two_factor(cfg: RunConfig) -> Outcome:
    rec = _tree_record(cfg)
    if rec.integer:
        it = io.integer_tree(rec)
        res = anchored_two_factor(it, _prime_arg(cfg), permissive=cfg.permissive)
        t = reduce_mod_prime(it, res.p)
        lift = build_lift(t)
        rep = is_two_factor(lift, res.factor)
        rep.extend(res.report or ValidationReport(), "anchored_")
        doc = {
            "mode": "anchored",
            "modulus": t.n,
            "N": res.N,
            "v": res.v,
            "factor": io.edges_json(res.factor),
            "anchor": io.edges_json(res.anchor.edges),
            "validation": rep.to_dict(),
        }
        return Outcome(doc, rep.passed, lambda: io.to_dot(lift, extra_edges=res.factor))
    t = _voltage_tree(cfg, rec)
    d = cfg.d if cfg.d is not None else 2 * compute_c(t)
    res = two_factor_of_path(t, d, cfg.l or 0)
    lift = build_lift(t)
    rep = is_two_factor(lift, res.factor)
    doc = {
        "mode": "path",
        "modulus": t.n,
        "d": d,
        "g": res.g,
        "factor": io.edges_json(res.factor),
        "left": io.edges_json(res.left),
        "right": io.edges_json(res.right),
        "validation": rep.to_dict(),
    }
    removed = list(res.left) + list(res.right)
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, extra_edges=res.factor, removed=removed))


def cmd_long_cycle(cfg: RunConfig) -> Outcome:
    t = _voltage_tree(cfg)
    wrapper = None
    if cfg.omega is not None:
        if cfg.epsilon is not None or cfg.delta is not None:
            raise ParseError("--omega cannot be combined with --epsilon/--delta")
        omega = cfg.omega
    else:
        if cfg.epsilon is None or cfg.delta is None:
            raise ParseError("long-cycle needs --omega or both --epsilon and --delta")
        if t.max_degree() > cfg.delta:
            raise ParamsRejected(f"tree has maximum degree {t.max_degree()} > delta = {cfg.delta}")
        wrapper = check_circumference_params(cfg.delta, Fraction(str(cfg.epsilon)), t.n)
        omega = wrapper.omega
    cert = long_cycle(t, omega)
    lift = build_lift(t)
    rep = is_simple_cycle(lift, cert)
    chk = check_long_cycle(t, cert, omega)
    if not chk["global"]:
        rep.add("global_bound", chk["length"])
    if not chk["per_fiber"]:
        rep.add("per_fiber_bound", chk["deficits"])
    doc = _cycle_doc(t, cert, rep, "cycle")
    doc["omega"] = omega
    doc["s"] = cert.info["s"]
    doc["bound"] = str(cert.info["bound"])
    doc["deficits"] = chk["deficits"]
    if wrapper is not None:
        doc["wrapper"] = {"delta": wrapper.delta, "epsilon": str(wrapper.epsilon), "checks": wrapper.checks}
    if 0 < cfg.oracle_bound and len(lift) <= cfg.oracle_bound:
        best = longest_cycle_brute(lift, bound=cfg.oracle_bound)
        doc["oracle"] = {"checked": True, "longest": best}
        if best < len(cert.cycle):
            rep.add("oracle_disagrees", best)
            doc["validation"] = rep.to_dict()
    else:
        doc["oracle"] = {"checked": False}
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, cert.cycle))


def cmd_verify(cfg: RunConfig) -> Outcome:
    if cfg.cycle is None:
        raise ParseError("verify needs a cycle file")
    cdoc = io.parse_cycle(_read(cfg.cycle))
    rec = _tree_record(cfg)
    if rec.integer and cfg.prime is None and cfg.modulus is None and "modulus" in cdoc:
        cfg.modulus = int(cdoc["modulus"])
    t = _voltage_tree(cfg, rec)
    lift = build_lift(t)
    claim = cfg.require or cdoc.get("claim", "hamiltonian")
    if claim not in ("hamiltonian", "cycle"):
        raise ParseError(f"unknown claim {claim!r}")
    check = is_hamiltonian_cycle if claim == "hamiltonian" else is_simple_cycle
    rep = check(lift, cdoc["cycle"])
    doc = {"claim": claim, "length": len(cdoc["cycle"]), "modulus": t.n, "validation": rep.to_dict()}
    return Outcome(doc, rep.passed, lambda: io.to_dot(lift, cdoc["cycle"]))


def _parse_dist(text: str):
    try:
        vals = [int(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise ParseError(f"--dist expects comma-separated integers, got {text!r}") from None
    return vals


def _parse_shape(cfg: RunConfig) -> Shape:
    if cfg.shape is not None:
        kind, _, size = cfg.shape.partition(":")
        k = _int_flag("--shape size", size)
        if kind == "path":
            return Shape.path(k)
        if kind == "star":
            return Shape.star(k)
        raise ParseError(f"--shape must be path:<m> or star:<leaves>, got {cfg.shape!r}")
    rec = _tree_record(cfg)
    return Shape(len(rec.loops), [(u, v) for u, v, _ in rec.edges])


def cmd_experiment(cfg: RunConfig) -> Outcome:
    shape = _parse_shape(cfg)
    dist = _parse_dist(cfg.dist)
    res = random_label_experiment(shape, dist, cfg.trials, cfg.seed, cfg.construct_up_to)
    doc = res.to_dict()
    doc["vertices"] = shape.m
    doc["dist"] = dist
    if shape.m <= 10:
        doc["exact_probability"] = str(exact_detector_probability(shape, dist))
    rep = ValidationReport()
    if res.construction_failures:
        rep.add("construction_failures", res.construction_failures)
    doc["validation"] = rep.to_dict()
    return Outcome(doc, rep.passed)


HANDLERS = {
    "lift": cmd_lift,
    "billiard": cmd_billiard,
    "ham-path": cmd_ham_path,
    "ham-tree": cmd_ham_tree,
    "ham-prime": cmd_ham_prime,
    "two-factor": cmd_two_factor,
    "long-cycle": cmd_long_cycle,
    "verify": cmd_verify,
    "experiment": cmd_experiment,
}


# ---------------------------------------------------------------------------
# argument parsing


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--modulus", type=int, help="group order n (overrides the file header)")
    common.add_argument("--prime", help="prime p for integer-labeled trees, or 'auto'")
    common.add_argument("--format", choices=("json", "dot"), default="json")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--oracle-bound", type=int, default=0, help="brute-force cross-check up to this many lift vertices (0 = off)")
    common.add_argument("--permissive", action="store_true", help="allow primes below the sufficient bound")
    common.add_argument("-o", "--output", help="write the result here instead of stdout")

    parser = argparse.ArgumentParser(prog="treelift", description="Cycles in lifts of voltage trees over Z_n.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("lift", parents=[common], help="emit the lift graph")
    p.add_argument("input")

    p = sub.add_parser("billiard", parents=[common], help="run the extended billiard strategy on a path")
    p.add_argument("input")
    p.add_argument("--l", type=int)
    p.add_argument("--r", type=int)
    p.add_argument("--d", type=int)

    p = sub.add_parser("ham-path", parents=[common], help="Hamiltonian cycle of an odd shifting path lift")
    p.add_argument("input")
    p.add_argument("--l", type=int)

    p = sub.add_parser("ham-tree", parents=[common], help="Hamiltonian cycle from an odd shifting decomposition")
    p.add_argument("input")
    p.add_argument("--decomposition")

    p = sub.add_parser("ham-prime", parents=[common], help="Hamiltonian cycle for integer labels mod a prime")
    p.add_argument("input")

    p = sub.add_parser("two-factor", parents=[common], help="2-factor of a path lift or an anchored 2-factor")
    p.add_argument("input")
    p.add_argument("--l", type=int)
    p.add_argument("--d", type=int)

    p = sub.add_parser("long-cycle", parents=[common], help="long cycle for unit loop labels")
    p.add_argument("input")
    p.add_argument("--omega", type=int)
    p.add_argument("--epsilon", type=float)
    p.add_argument("--delta", type=int)

    p = sub.add_parser("verify", parents=[common], help="validate a cycle against a tree's lift")
    p.add_argument("input")
    p.add_argument("cycle")
    p.add_argument("--require", choices=("hamiltonian", "cycle"))

    p = sub.add_parser("experiment", parents=[common], help="random-label detector experiment")
    p.add_argument("input", nargs="?")
    p.add_argument("--shape", help="path:<m> or star:<leaves> instead of an input file")
    p.add_argument("--dist", default="1,2", help="comma-separated labels, uniform")
    p.add_argument("--trials", type=int, default=100)
    p.add_argument("--construct-up-to", type=int, default=0)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    known = RunConfig.__dataclass_fields__
    return RunConfig(**{k: v for k, v in vars(ns).items() if k in known})


def run(cfg: RunConfig, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    try:
        out = HANDLERS[cfg.command](cfg)
    except ParseError as exc:
        print(f"error: {exc}", file=stderr)
        return EXIT_PARSE
    except HypothesisViolated as exc:
        print(f"hypothesis violated ({type(exc).__name__}): {exc}", file=stderr)
        return EXIT_HYPOTHESIS
    except (InternalInvariantBroken, VoltageError) as exc:
        print(f"internal failure ({type(exc).__name__}): {exc}", file=stderr)
        return EXIT_INTERNAL
    if cfg.format == "dot" and out.dot is not None:
        text = out.dot()
    else:
        text = io.dumps(out.doc)
    if cfg.output:
        with open(cfg.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    if not out.passed:
        print("validation failed", file=stderr)
        return EXIT_INTERNAL
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    return run(config_from_args(ns))


if __name__ == "__main__":
    sys.exit(main())
