"""Measure how much agent memory the rendezvous protocol actually uses.

Two sweeps:
  * colored paths of growing length (two leaves, so the contracted tree is a
    single edge) -- memory should stay flat apart from the loglog-sized
    walk-phase counters;
  * random trees with a growing number of leaves -- memory grows with log l
    through the survey charge and the walk counters.

Usage: python3 scripts/memory_scaling.py [--max-exp 16] [--seed 404]
"""
import argparse
import math
import random
import sys

sys.path.insert(0, "tests")
from conftest import colored_path  # noqa: E402

from rdvtrees.corpus import protocol_case
from rdvtrees.engine import Met, Scenario, run
from rdvtrees.generate import gen_random_tree
from rdvtrees.protocol import RendezvousProgram, protocol_horizon


def path_sweep(max_exp):
    print("== colored paths, l = 2 ==")
    print(f"{'n':>8}  {'rounds':>8}  {'bits':>5}")
    for k in range(4, max_exp + 1):
        n = 2 ** k
        t = colored_path(n)
        u, v = n // 2 - 1, n // 2 + 2
        res = run(Scenario(t, u, v, 0, "b", horizon=protocol_horizon(t)),
                  lambda: RendezvousProgram(t))
        assert isinstance(res.outcome, Met)
        print(f"{n:>8}  {res.outcome.round:>8}  {max(res.memory_bits):>5}")


def leaf_sweep(rng):
    print("== random trees, growing leaf count ==")
    print(f"{'l':>4}  {'n':>4}  {'bits':>5}")
    for l in (4, 8, 16, 32, 64):
        best = 0
        for _ in range(4):
            n = min(3 * l, 190)
            tree = gen_random_tree(n, l, 10, rng=rng)
            u, v = rng.sample(range(n), 2)
            rec = protocol_case(tree, u, v)
            if rec.memory_bits:
                best = max(best, *rec.memory_bits)
        print(f"{l:>4}  {min(3 * l, 190):>4}  {best:>5}")


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--max-exp", type=int, default=16)
    ap.add_argument("--seed", type=int, default=404)
    args = ap.parse_args()
    path_sweep(args.max_exp)
    print()
    leaf_sweep(random.Random(args.seed))


if __name__ == "__main__":
    main()
