import random

import pytest

from rdvtrees.agents import (AutomatonProgram, basic_walk_automaton,
                             parse_automaton, random_automaton)
from rdvtrees.engine import (CertifiedNeverMeet, EngineError, Met, Scenario,
                             Timeout, check_parity_lemma, export_trace,
                             format_scenario, parse_scenario, run,
                             verify_certificate)
from rdvtrees.generate import gen_random_tree, feasible_counts
from rdvtrees.trees import parse_tree

from conftest import colored_path

EDGE = parse_tree("tree 2\nnode 0 0:1\nnode 1 0:0\n")


def bw_factory(tree):
    aut = basic_walk_automaton(max(tree.degrees))
    return lambda: AutomatonProgram(aut)


def test_perpetual_swap_is_certified():
    res = run(Scenario(EDGE, 0, 1, 0, "b", horizon=None), bw_factory(EDGE))
    assert isinstance(res.outcome, CertifiedNeverMeet)
    assert res.outcome.cycle_length == 2
    assert res.crossings  # they cross the shared edge every round


def test_three_path_meets_at_center():
    t = colored_path(3)
    res = run(Scenario(t, 0, 2, 0, "b", horizon=None), bw_factory(t))
    assert res.outcome == Met(round=1, node=1)


def test_delay_shifts_start():
    t = colored_path(6)
    res = run(Scenario(t, 0, 5, 3, "b", horizon=20), bw_factory(t),
              record_trace=True)
    # delayed agent sits at its start for the first 3 rounds
    assert [p[1] for p in res.positions[:3]] == [5, 5, 5]
    assert res.positions[3][1] != 5


def test_swap_symmetry(rng):
    for _ in range(20):
        n = rng.randint(3, 20)
        if not feasible_counts(n, 2, 4):
            continue
        t = gen_random_tree(n, 2, 4, rng=rng)
        aut = random_automaton(2, random.Random(rng.randrange(1 << 20)))
        u, v = rng.sample(range(n), 2)
        theta = rng.randint(0, 3)
        r1 = run(Scenario(t, u, v, theta, "b", horizon=None),
                 lambda: AutomatonProgram(aut))
        r2 = run(Scenario(t, v, u, theta, "a", horizon=None),
                 lambda: AutomatonProgram(aut))
        assert r1.outcome.kind == r2.outcome.kind
        if isinstance(r1.outcome, Met):
            assert r1.outcome.round == r2.outcome.round


def test_certificates_replay(rng):
    done = 0
    while done < 15:
        n = rng.randint(2, 12)
        if not feasible_counts(n, 2, 4):
            continue
        t = gen_random_tree(n, 2, 4, rng=rng)
        aut = random_automaton(rng.randint(1, 2),
                               random.Random(rng.randrange(1 << 20)))
        u, v = rng.sample(range(n), 2)
        sc = Scenario(t, u, v, 0, "b", horizon=None)
        res = run(sc, lambda: AutomatonProgram(aut))
        if isinstance(res.outcome, CertifiedNeverMeet):
            assert verify_certificate(sc, lambda: AutomatonProgram(aut),
                                      res.outcome)
            done += 1
        else:
            done += 1


def test_timeout_outcome():
    t = colored_path(4)
    stay = parse_automaton("states 1\ninitial 0\nout 0 -1\ntrans 0 * * 0\n")
    res = run(Scenario(t, 0, 3, 0, "b", horizon=5),
              lambda: AutomatonProgram(stay))
    assert res.outcome == Timeout(horizon=5)
    assert res.idle_totals == (5, 5)


def test_scenario_text_round_trip(tmp_path):
    t = colored_path(4)
    (tmp_path / "t.tree").write_text(
        "tree 4\nnode 0 0:1\nnode 1 0:0 1:2\nnode 2 1:1 0:3\nnode 3 0:2\n")
    sc = Scenario(parse_tree((tmp_path / "t.tree").read_text()), 0, 3, 2, "a",
                  horizon=99)
    text = format_scenario("t.tree", sc)
    again = parse_scenario(text, str(tmp_path))
    assert (again.start_a, again.start_b, again.delay, again.delayed,
            again.horizon) == (0, 3, 2, "a", 99)
    assert again.tree.neighbors == sc.tree.neighbors


def test_trace_export_shape():
    t = colored_path(3)
    sc = Scenario(t, 0, 2, 0, "b", horizon=10)
    res = run(sc, bw_factory(t), record_trace=True)
    lines = export_trace(res).strip().splitlines()
    assert lines[0].split() == ["round", "pos_a", "state_a", "pos_b", "state_b"]
    assert lines[1].split()[0] == "1"


def test_parity_lemma_guards():
    t = colored_path(4)
    sc = Scenario(t, 0, 2, 0, "b", horizon=5)   # even distance
    res = run(sc, bw_factory(t), record_trace=True)
    with pytest.raises(EngineError):
        check_parity_lemma(sc, res, 1)


def test_parity_lemma_on_movers():
    t = colored_path(6)
    sc = Scenario(t, 2, 3, 0, "b", horizon=8)
    res = run(sc, bw_factory(t), record_trace=True)
    upto = res.outcome.round if isinstance(res.outcome, Met) else res.rounds
    for tt in range(1, upto + 1):
        assert check_parity_lemma(sc, res, tt)
