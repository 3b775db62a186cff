"""Command-line front end.

Exit codes: 0 success (including negative query answers), 1 usage or input
error, 2 assertion/verification failure.
"""
from __future__ import annotations

import argparse
import os
import sys

from .agents import AutomatonProgram, load_automaton
from .corpus import CorpusSpec, corpus_run
from .engine import (CertifiedNeverMeet, Met, Scenario, Timeout, export_trace,
                     parse_scenario, run)
from .forge import (ForgeError, forge_theorem1, forge_theorem3,
                    forge_theorem4, save_instance)
from .generate import gen_random_tree
from .protocol import RendezvousProgram, prime_line, protocol_horizon
from .symmetry import (is_symmetric, perfectly_symmetrizable,
                       perfectly_symmetrizable_bruteforce)
from .trees import TreeError, parse_tree, format_tree


def _load_tree(path):
    with open(path) as fh:
        return parse_tree(fh.read())


def _outcome_lines(result):
    out = result.outcome
    lines = [f"outcome {out.kind}", f"rounds {result.rounds}"]
    if isinstance(out, Met):
        lines.append(f"meeting_round {out.round}")
        lines.append(f"meeting_node {out.node}")
    elif isinstance(out, CertifiedNeverMeet):
        lines.append(f"cycle_start {out.cycle_start}")
        lines.append(f"cycle_length {out.cycle_length}")
    lines.append(f"memory_bits {result.memory_bits[0]} {result.memory_bits[1]}")
    return lines


def _maybe_trace(args, scenario, factory, result):
    if getattr(args, "trace", None):
        traced = run(scenario, factory, record_trace=True)
        text = export_trace(traced)
        if args.trace == "-":
            sys.stdout.write(text)
        else:
            with open(args.trace, "w") as fh:
                fh.write(text)


def cmd_validate(args):
    try:
        tree = _load_tree(args.tree)
    except (OSError, TreeError, ValueError) as exc:
        print(f"invalid: {exc}")
        return 1
    print(f"valid nodes={len(tree.neighbors)} leaves={tree.leaf_count}")
    return 0


def cmd_symmetry(args):
    tree = _load_tree(args.tree)
    if args.u is None or args.v is None:
        print(f"symmetric {is_symmetric(tree)}")
        return 0
    if args.brute_force:
        ans, witness = perfectly_symmetrizable_bruteforce(
            tree, args.u, args.v, budget=args.budget, return_witness=True)
        print(f"perfectly_symmetrizable {ans}")
        if witness is not None:
            print("witness_labeling:")
            sys.stdout.write(format_tree(witness))
    else:
        print(f"perfectly_symmetrizable "
              f"{perfectly_symmetrizable(tree, args.u, args.v)}")
    return 0


def _build_scenario(args):
    with open(args.tree) as fh:
        text = fh.read()
    if text.lstrip().startswith("scenario"):
        return parse_scenario(text, os.path.dirname(os.path.abspath(args.tree)))
    tree = parse_tree(text)
    if args.a is None or args.b is None:
        raise SystemExit("tree-file input needs --a and --b")
    horizon = args.horizon
    if horizon is not None and horizon != "auto":
        horizon = int(horizon)
    elif horizon == "auto":
        horizon = None
    return Scenario(tree, args.a, args.b, args.delay, args.delayed,
                    horizon=horizon)


def cmd_run(args):
    scenario = _build_scenario(args)
    automaton = load_automaton(args.agent)
    factory = lambda: AutomatonProgram(automaton)
    result = run(scenario, factory)
    for line in _outcome_lines(result):
        print(line)
    _maybe_trace(args, scenario, factory, result)
    return 0


def cmd_run_protocol(args):
    scenario = _build_scenario(args)
    tree = scenario.tree
    if scenario.horizon is None:
        scenario = Scenario(tree, scenario.start_a, scenario.start_b,
                            scenario.delay, scenario.delayed,
                            horizon=protocol_horizon(tree))
    factory = lambda: RendezvousProgram(tree)
    result = run(scenario, factory)
    for line in _outcome_lines(result):
        print(line)
    _maybe_trace(args, scenario, factory, result)
    if isinstance(result.outcome, Met):
        return 0
    if perfectly_symmetrizable(tree, scenario.start_a, scenario.start_b):
        print("note starts perfectly symmetrizable; non-meeting expected")
        return 0
    print("error no meeting despite non-symmetrizable starts")
    return 2


def cmd_prime_line(args):
    res = prime_line(args.m, args.a, args.b, args.dir_a, args.dir_b,
                     max_index=args.max_index)
    print(f"feasible {res.feasible}")
    if res.met:
        print(f"meeting_round {res.round}")
        print(f"meeting_node {res.node}")
        print(f"prime_index {res.prime_index}")
    return 0


def cmd_forge(args):
    automaton = load_automaton(args.agent)
    try:
        if args.kind == "theorem1":
            inst = forge_theorem1(automaton)
        elif args.kind == "theorem3":
            inst = forge_theorem3(automaton)
        else:
            inst = forge_theorem4(automaton, i=args.i, budget=args.budget)
    except ForgeError as exc:
        print(f"forge failed: {exc}")
        return 2
    if inst is None:
        print("NoCollisionFound")
        return 0
    if args.out:
        save_instance(inst, args.out)
    print(f"kind {inst.kind}")
    print(f"branch {inst.provenance.get('branch', 'main')}")
    print(f"nodes {len(inst.tree.neighbors)}")
    print(f"starts {inst.start_a} {inst.start_b}")
    print(f"delay {inst.delay} delayed {inst.delayed}")
    print(f"certificate cycle_start={inst.certificate.cycle_start} "
          f"cycle_length={inst.certificate.cycle_length}")
    return 0


def cmd_gen(args):
    try:
        tree = gen_random_tree(args.n, args.leaves, args.degree_cap,
                               seed=args.seed)
    except ValueError as exc:
        print(f"infeasible: {exc}")
        return 1
    text = format_tree(tree)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def cmd_corpus(args):
    spec = CorpusSpec(seed=args.seed, count=args.count,
                      n_range=(args.n_min, args.n_max),
                      leaf_range=(args.leaf_min, args.leaf_max),
                      degree_cap=args.degree_cap,
                      horizon_cap=args.horizon_cap)
    report = corpus_run(spec)
    lines = []
    for r in report.records:
        lines.append(f"case {r.digest[:16]} n={r.n} leaves={r.leaves} "
                     f"starts={r.start_a},{r.start_b} "
                     f"symmetrizable={r.symmetrizable} outcome={r.outcome} "
                     f"round={r.meeting_round} bits={r.memory_bits} "
                     f"ok={r.ok}")
    lines.append(report.summary())
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    sys.stdout.write(text)
    return 0 if report.ok else 2


def build_parser():
    p = argparse.ArgumentParser(prog="rdvtrees")
    sub = p.add_subparsers(dest="verb", required=True)

    q = sub.add_parser("validate", help="check a tree file")
    q.add_argument("tree")
    q.set_defaults(fn=cmd_validate)

    q = sub.add_parser("symmetry", help="symmetry / symmetrizability queries")
    q.add_argument("tree")
    q.add_argument("--u", type=int)
    q.add_argument("--v", type=int)
    q.add_argument("--brute-force", action="store_true")
    q.add_argument("--budget", type=int, default=2_000_000)
    q.set_defaults(fn=cmd_symmetry)

    for name, fn in (("run", cmd_run), ("run-protocol", cmd_run_protocol)):
        q = sub.add_parser(name)
        q.add_argument("tree", help="tree file or scenario file")
        q.add_argument("--a", type=int)
        q.add_argument("--b", type=int)
        q.add_argument("--delay", type=int, default=0)
        q.add_argument("--delayed", choices=["a", "b"], default="b")
        q.add_argument("--horizon", default=None,
                       help="round bound, or 'auto' for cycle detection")
        q.add_argument("--trace", help="trace output file, '-' for stdout")
        if name == "run":
            q.add_argument("--agent", required=True)
        q.set_defaults(fn=fn)

    q = sub.add_parser("prime-line")
    q.add_argument("--m", type=int, required=True)
    q.add_argument("--a", type=int, required=True)
    q.add_argument("--b", type=int, required=True)
    q.add_argument("--dir-a", type=int, choices=[1, -1], default=1)
    q.add_argument("--dir-b", type=int, choices=[1, -1], default=1)
    q.add_argument("--max-index", type=int, default=None)
    q.set_defaults(fn=cmd_prime_line)

    q = sub.add_parser("forge")
    q.add_argument("kind", choices=["theorem1", "theorem3", "theorem4"])
    q.add_argument("--agent", required=True)
    q.add_argument("--i", type=int, default=4)
    q.add_argument("--budget", type=int, default=None)
    q.add_argument("--out", default=None)
    q.set_defaults(fn=cmd_forge)

    q = sub.add_parser("gen")
    q.add_argument("--n", type=int, required=True)
    q.add_argument("--leaves", type=int, required=True)
    q.add_argument("--degree-cap", type=int, default=None)
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--out", default=None)
    q.set_defaults(fn=cmd_gen)

    q = sub.add_parser("corpus")
    q.add_argument("--seed", type=int, default=0)
    q.add_argument("--count", type=int, default=20)
    q.add_argument("--n-min", type=int, default=6)
    q.add_argument("--n-max", type=int, default=40)
    q.add_argument("--leaf-min", type=int, default=2)
    q.add_argument("--leaf-max", type=int, default=8)
    q.add_argument("--degree-cap", type=int, default=6)
    q.add_argument("--horizon-cap", type=int, default=None)
    q.add_argument("--out", default=None)
    q.set_defaults(fn=cmd_corpus)
    return p


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    try:
        return args.fn(args)
    except (OSError, TreeError, ValueError, SystemExit) as exc:
        if isinstance(exc, SystemExit):
            print(exc, file=sys.stderr)
        else:
            print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
