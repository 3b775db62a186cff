"""Forge adversarial instances for a batch of random small automata.

For each sampled automaton this builds a never-meet line instance with a
delay (theorem1), a never-meet instance for arbitrary delays when the walk
analysis allows it (theorem3), and -- for the basic walk -- a bounded-degree
tree whose two sides fool the agent (theorem4).  Every instance is re-checked
by replaying its periodicity certificate before it is reported.

Usage: python3 scripts/forge_demo.py [--trials 10] [--seed 7] [--out DIR]
"""
import argparse
import os
import random

from rdvtrees.agents import AutomatonProgram, basic_walk_automaton, \
    random_automaton
from rdvtrees.engine import Scenario, verify_certificate
from rdvtrees.forge import forge_theorem1, forge_theorem3, forge_theorem4, \
    save_instance


def check(inst, aut):
    sc = Scenario(inst.tree, inst.start_a, inst.start_b, inst.delay,
                  inst.delayed, horizon=None)
    ok = verify_certificate(sc, lambda: AutomatonProgram(aut),
                            inst.certificate)
    return "certified" if ok else "REPLAY FAILED"


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--trials", type=int, default=10)
    ap.add_argument("--seed", type=int, default=7)
    ap.add_argument("--out", default=None,
                    help="directory to save instances into")
    args = ap.parse_args()
    rng = random.Random(args.seed)

    for trial in range(args.trials):
        bits = 1 + trial % 3
        aut = random_automaton(bits, random.Random(rng.randrange(1 << 30)))
        for name, forge in (("theorem1", forge_theorem1),
                            ("theorem3", forge_theorem3)):
            inst = forge(aut)
            print(f"trial {trial} {name}: {inst.tree.n} nodes, "
                  f"delay {inst.delay} on {inst.delayed}, "
                  f"branch {inst.provenance['branch']}, {check(inst, aut)}")
            if args.out:
                d = os.path.join(args.out, f"{name}-{trial}")
                save_instance(inst, d)

    aut = basic_walk_automaton(3)
    inst = forge_theorem4(aut, i=4)
    if inst is None:
        print("theorem4: no behavior collision at i=4")
    else:
        print(f"theorem4 (basic walk): {inst.tree.n} nodes, "
              f"{inst.tree.leaf_count} leaves, max degree "
              f"{max(inst.tree.degrees)}, {check(inst, aut)}")
        if args.out:
            save_instance(inst, os.path.join(args.out, "theorem4"))


if __name__ == "__main__":
    main()
