import os

import pytest

from rdvtrees.agents import basic_walk_automaton, format_automaton
from rdvtrees.cli import main
from rdvtrees.trees import format_tree, parse_tree

from conftest import colored_path


@pytest.fixture
def tree_file(tmp_path):
    p = tmp_path / "p8.tree"
    p.write_text(format_tree(colored_path(8)))
    return str(p)


@pytest.fixture
def agent_file(tmp_path):
    p = tmp_path / "bw.automaton"
    p.write_text(format_automaton(basic_walk_automaton(3)))
    return str(p)


def test_validate_ok(tree_file, capsys):
    assert main(["validate", tree_file]) == 0
    assert "valid" in capsys.readouterr().out


def test_validate_bad_file(tmp_path, capsys):
    p = tmp_path / "bad.tree"
    p.write_text("tree 2\nnode 0 0:1\n")
    assert main(["validate", str(p)]) == 1
    assert "invalid" in capsys.readouterr().out


def test_unknown_verb_is_usage_error():
    assert main(["frobnicate"]) == 1


def test_symmetry_query(tree_file, capsys):
    assert main(["symmetry", tree_file, "--u", "3", "--v", "4"]) == 0
    assert "True" in capsys.readouterr().out
    assert main(["symmetry", tree_file, "--u", "0", "--v", "4"]) == 0
    assert "False" in capsys.readouterr().out


def test_symmetry_bruteforce_witness(tree_file, capsys):
    assert main(["symmetry", tree_file, "--u", "3", "--v", "4",
                 "--brute-force"]) == 0
    out = capsys.readouterr().out
    assert "witness_labeling" in out


def test_run_with_automaton(tree_file, agent_file, capsys):
    assert main(["run", tree_file, "--agent", agent_file,
                 "--a", "0", "--b", "3"]) == 0
    out = capsys.readouterr().out
    assert "outcome" in out


def test_run_trace_to_stdout(tree_file, agent_file, capsys):
    main(["run", tree_file, "--agent", agent_file, "--a", "0", "--b", "3",
          "--horizon", "6", "--trace", "-"])
    out = capsys.readouterr().out
    assert "round pos_a state_a pos_b state_b" in out


def test_run_protocol_meets(tree_file, capsys):
    assert main(["run-protocol", tree_file, "--a", "2", "--b", "7"]) == 0
    assert "met" in capsys.readouterr().out


def test_run_protocol_symmetrizable_pair(tree_file, capsys):
    rc = main(["run-protocol", tree_file, "--a", "3", "--b", "4",
               "--horizon", "20000"])
    assert rc == 0
    assert "symmetrizable" in capsys.readouterr().out


def test_prime_line_verb(capsys):
    assert main(["prime-line", "--m", "3", "--a", "1", "--b", "2"]) == 0
    out = capsys.readouterr().out
    assert "meeting_round" in out and "prime_index" in out


def test_gen_round_trips(tmp_path, capsys):
    out = str(tmp_path / "g.tree")
    assert main(["gen", "--n", "14", "--leaves", "5", "--seed", "2",
                 "--out", out]) == 0
    t = parse_tree(open(out).read())
    assert t.n == 14 and t.leaf_count == 5


def test_gen_infeasible(capsys):
    assert main(["gen", "--n", "5", "--leaves", "5"]) == 1


def test_forge_verb(tmp_path, agent_file, capsys):
    out = str(tmp_path / "inst")
    assert main(["forge", "theorem1", "--agent", agent_file,
                 "--out", out]) == 0
    assert os.path.exists(os.path.join(out, "instance.tree"))
    assert os.path.exists(os.path.join(out, "instance.scenario"))


def test_corpus_verb(capsys):
    assert main(["corpus", "--count", "4", "--seed", "9"]) == 0
    out = capsys.readouterr().out
    assert "cases 4" in out
