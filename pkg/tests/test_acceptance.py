"""Acceptance gate: nine end-to-end criteria, one pass/fail line each.

Each test prints `criterion N (<name>): PASS|FAIL` and then asserts, so the
verdict line is visible in captured output either way.
"""
import itertools
import math
import random

from rdvtrees.agents import (AutomatonProgram, basic_walk_automaton,
                             random_automaton)
from rdvtrees.engine import (CertifiedNeverMeet, Met, Scenario,
                             check_parity_lemma, run, verify_certificate)
from rdvtrees.forge import forge_theorem1, forge_theorem3, forge_theorem4
from rdvtrees.generate import (all_port_labelings, all_topologies,
                               feasible_counts, gen_random_tree,
                               mirrored_instance)
from rdvtrees.corpus import protocol_case
from rdvtrees.protocol import (RendezvousProgram, prime_index_bound,
                               prime_line, protocol_horizon)
from rdvtrees.symmetry import (labeling_count, perfectly_symmetrizable,
                               perfectly_symmetrizable_bruteforce)
from rdvtrees.trees import WalkPosition, basic_walk_step, contract, expand

from conftest import colored_path


def _verdict(num, name, failures):
    status = "PASS" if not failures else "FAIL"
    print(f"criterion {num} ({name}): {status}")
    assert not failures, failures[:5]


def test_criterion_1_symmetrizability_oracle_equivalence():
    rng = random.Random(101)
    failures = []
    for n in range(2, 9):
        for topo in all_topologies(n):
            labs = list(itertools.islice(all_port_labelings(topo), 200))
            if labeling_count(topo) > 200:
                labs = rng.sample(labs, 12)
            pairs = list(itertools.combinations(range(n), 2))
            for u, v in pairs:
                brute = perfectly_symmetrizable_bruteforce(topo, u, v)
                for lab in labs[:12]:
                    if perfectly_symmetrizable(lab, u, v) != brute:
                        failures.append((n, u, v))
    _verdict(1, "symmetrizability oracle equivalence", failures)


def test_criterion_2_protocol_meets_iff_not_symmetrizable():
    rng = random.Random(202)
    failures = []
    # exhaustive small corpus: every topology, sampled labelings, all pairs
    for n in range(2, 9):
        for topo in all_topologies(n):
            labs = list(itertools.islice(all_port_labelings(topo), 25))
            if labeling_count(topo) > 25:
                labs = labs[:12] + [next(iter(
                    itertools.islice(all_port_labelings(topo), k, k + 1)))
                    for k in rng.sample(range(25), 4)]
            for lab in labs:
                for u, v in itertools.combinations(range(n), 2):
                    rec = protocol_case(lab, u, v)
                    if not rec.ok:
                        failures.append(("small", n, u, v, rec.outcome))
    # 500 random trees up to n=200
    done = 0
    while done < 500:
        n = rng.randint(4, 200)
        l = rng.randint(2, min(12, n - 1))
        if not feasible_counts(n, l, 12):
            continue
        tree = gen_random_tree(n, l, 12, rng=rng)
        u, v = rng.sample(range(n), 2)
        rec = protocol_case(tree, u, v)
        if not rec.ok:
            failures.append(("random", n, u, v, rec.outcome))
        done += 1
    _verdict(2, "protocol meets iff not perfectly symmetrizable", failures)


def test_criterion_3_prime_protocol_bound():
    failures = []
    for m in range(2, 61):
        bound = prime_index_bound(m)
        for a in range(1, m):
            for b in range(a + 1, m + 1):
                feasible = (m % 2 == 1) or (a - 1 != m - b)
                for da, db in itertools.product((1, -1), repeat=2):
                    r = prime_line(m, a, b, da, db)
                    if feasible:
                        if not r.met or r.prime_index > bound:
                            failures.append((m, a, b, da, db, r))
                    elif db == -da and r.met:
                        # the mirrored direction pairs realize the adversary's
                        # symmetric labeling and must never meet
                        failures.append((m, a, b, da, db, r))
    _verdict(3, "prime protocol meets within the prime-product bound",
             failures)


def _fit_slope(xs, ys):
    mx = sum(xs) / len(xs)
    my = sum(ys) / len(ys)
    var = sum((x - mx) ** 2 for x in xs)
    if var == 0:
        return 0.0, max(ys)
    b = sum((x - mx) * (y - my) for x, y in zip(xs, ys)) / var
    a = max(y - b * x for x, y in zip(xs, ys))
    return b, a


def test_criterion_4_memory_scaling():
    failures = []
    xs, ys = [], []
    for k in range(4, 17):
        n = 2 ** k
        t = colored_path(n)
        u, v = n // 2 - 1, n // 2 + 2      # not the mirror pair
        res = run(Scenario(t, u, v, 0, "b", horizon=protocol_horizon(t)),
                  lambda: RendezvousProgram(t))
        if not isinstance(res.outcome, Met):
            failures.append(("path", n, res.outcome))
            continue
        xs.append(math.log2(math.log2(n)))
        ys.append(max(res.memory_bits))
    b, a = _fit_slope(xs, ys)
    print(f"  paths (l=2): bits <= {a:.1f} + {b:.2f}*loglog n")
    if b > 8:
        failures.append(("loglog slope", b))

    rng = random.Random(404)
    xl, yl = [], []
    for l in (4, 8, 16, 32, 64):
        best = 0
        for _ in range(4):
            n = min(3 * l, 190)
            tree = gen_random_tree(n, l, 10, rng=rng)
            u, v = rng.sample(range(n), 2)
            rec = protocol_case(tree, u, v)
            if rec.memory_bits:
                best = max(best, *rec.memory_bits)
        xl.append(math.log2(l))
        yl.append(best)
    bl, al = _fit_slope(xl, yl)
    print(f"  random trees: bits <= {al:.1f} + {bl:.2f}*log l")
    if bl > 8:
        failures.append(("log l slope", bl))
    _verdict(4, "memory scaling", failures)


def test_criterion_5_trace_lemmas():
    rng = random.Random(505)
    failures = []
    reached = 0
    attempts = 0
    while reached < 30 and attempts < 400:
        attempts += 1
        tree, a, b, _info = mirrored_instance(rng)
        n, l = tree.n, tree.leaf_count
        res = run(Scenario(tree, a, b, 0, "b",
                           horizon=protocol_horizon(tree)),
                  lambda: RendezvousProgram(tree))
        ev = [dict(), dict()]
        for k in (0, 1):
            for r, e in res.events[k]:
                ev[k].setdefault(e[0], []).append((r, e))
        def first(k, name):
            return ev[k][name][0][0] if name in ev[k] else None
        L = (first(0, "vhat"), first(1, "vhat"))
        S = (first(0, "synchro-done"), first(1, "synchro-done"))
        F = (first(0, "at-far"), first(1, "at-far"))
        if None in S:
            continue
        reached += 1
        beta = abs(L[0] - L[1])
        if abs(S[0] - S[1]) != beta:
            failures.append(("synchro delay", n, S, beta))
        if None in F:
            continue
        tt = abs(F[0] - F[1])
        outer = [{e[1]: r for r, e in ev[k].get("outer", [])} for k in (0, 1)]
        for i in outer[0]:
            if i in outer[1] and abs(outer[0][i] - outer[1][i]) != tt:
                failures.append(("outer delay", n, i))
        primes = [{e[1:]: r for r, e in ev[k].get("prime", [])}
                  for k in (0, 1)]
        for key in primes[0]:
            if key not in primes[1]:
                continue
            d = abs(primes[0][key] - primes[1][key])
            if d > tt + 16 * n * l or d > 20 * n * l:
                failures.append(("prime delay", n, key, d))
    if reached < 30:
        failures.append(("too few instances reached Synchro", reached))
    _verdict(5, "trace lemmas on mirrored instances", failures)


def test_criterion_6_parity_lemma():
    rng = random.Random(606)
    failures = []
    done = 0
    while done < 1000:
        n = rng.randint(3, 25)
        l = rng.randint(2, max(2, min(6, n - 1)))
        if not feasible_counts(n, l, 6):
            continue
        tree = gen_random_tree(n, l, 6, rng=rng)
        pairs = [(u, v) for u in range(n) for v in range(n)
                 if u != v and tree.distance(u, v) % 2 == 1]
        if not pairs:
            continue
        u, v = rng.choice(pairs)
        aut = random_automaton(rng.randint(1, 3),
                               random.Random(rng.randrange(1 << 30)))
        sc = Scenario(tree, u, v, 0, "b", horizon=150)
        res = run(sc, lambda: AutomatonProgram(aut), record_trace=True)
        upto = res.outcome.round if isinstance(res.outcome, Met) else res.rounds
        for t in range(1, upto + 1):
            if not check_parity_lemma(sc, res, t):
                failures.append((n, u, v, t))
                break
        done += 1
    _verdict(6, "parity lemma on 1000 traces", failures)


def test_criterion_7_forge_certification():
    rng = random.Random(707)
    failures = []
    for trial in range(20):
        bits = 1 + trial % 3
        aut = random_automaton(bits, random.Random(rng.randrange(1 << 30)))
        for forge in (forge_theorem1, forge_theorem3):
            try:
                inst = forge(aut)
            except Exception as exc:
                failures.append((trial, forge.__name__, repr(exc)))
                continue
            if perfectly_symmetrizable(inst.tree, inst.start_a, inst.start_b):
                failures.append((trial, forge.__name__, "symmetrizable"))
            sc = Scenario(inst.tree, inst.start_a, inst.start_b, inst.delay,
                          inst.delayed, horizon=None)
            if not isinstance(inst.certificate, CertifiedNeverMeet):
                failures.append((trial, forge.__name__, "no certificate"))
            elif not verify_certificate(sc, lambda: AutomatonProgram(aut),
                                        inst.certificate):
                failures.append((trial, forge.__name__, "replay failed"))
            if (forge is forge_theorem1
                    and inst.provenance["branch"] == "main"
                    and inst.tree.n - 1 != 8 * (aut.n_states + 1) + 1):
                failures.append((trial, "theorem1 length", inst.tree.n - 1))
    _verdict(7, "forge certification (theorem1/theorem3)", failures)


def test_criterion_8_theorem4_forge():
    failures = []
    inst = forge_theorem4(basic_walk_automaton(3), i=4)
    if inst is None:
        failures.append("no collision found")
    else:
        if inst.tree.leaf_count != 8:
            failures.append(("leaves", inst.tree.leaf_count))
        if max(inst.tree.degrees) != 3:
            failures.append(("max degree", max(inst.tree.degrees)))
        if perfectly_symmetrizable(inst.tree, inst.start_a, inst.start_b):
            failures.append("symmetrizable starts")
        sc = Scenario(inst.tree, inst.start_a, inst.start_b, 0, "b",
                      horizon=None)
        aut = basic_walk_automaton(3)
        if not isinstance(inst.certificate, CertifiedNeverMeet):
            failures.append("no certificate")
        elif not verify_certificate(sc, lambda: AutomatonProgram(aut),
                                    inst.certificate):
            failures.append("replay failed")
    _verdict(8, "theorem4 forge on the basic-walk agent", failures)


def test_criterion_9_walk_invariants():
    rng = random.Random(909)
    failures = []
    done = 0
    while done < 1000:
        n = rng.randint(2, 40)
        l = rng.randint(2, max(2, min(10, n - 1))) if n > 2 else 2
        if not feasible_counts(n, l, 8):
            continue
        tree = gen_random_tree(n, l, 8, rng=rng)
        start = rng.randrange(n)
        pos = WalkPosition(start, None)
        darts = set()
        closed_at = None
        for step in range(1, 2 * (n - 1) + 1):
            cur = pos.node
            pos = basic_walk_step(tree, pos)
            darts.add((cur, pos.node))
            if pos.node == start and step == 2 * (n - 1):
                closed_at = step
        if closed_at != 2 * (n - 1) or len(darts) != 2 * (n - 1):
            failures.append(("walk", n, start))
        view = contract(tree)
        if view.nu > max(2, 2 * l - 1):
            failures.append(("nu bound", n, l, view.nu))
        if expand(view).neighbors != tree.neighbors:
            failures.append(("round trip", n))
        done += 1
    _verdict(9, "basic walk and contraction invariants", failures)
