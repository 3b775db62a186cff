import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from rdvtrees.generate import gen_random_tree, feasible_counts
from rdvtrees.trees import (PortLabeledTree, TreeError, WalkPosition,
                            basic_walk, basic_walk_step, center, contract,
                            counter_basic_walk_step, expand, format_tree,
                            parse_tree, validate)

PATH3 = "tree 3\nnode 0 0:1\nnode 1 0:0 1:2\nnode 2 0:1\n"


def random_tree(seed):
    r = random.Random(seed)
    while True:
        n = r.randint(2, 30)
        l = r.randint(2, max(2, min(8, n - 1)))
        if feasible_counts(n, l, 6):
            return gen_random_tree(n, l, 6, rng=r)


def test_parse_format_round_trip():
    t = parse_tree(PATH3)
    assert t.n == 3 and t.leaf_count == 2
    assert parse_tree(format_tree(t)).neighbors == t.neighbors


def test_parse_rejects_garbage():
    with pytest.raises(TreeError):
        parse_tree("tree 2\nnode 0 0:1\n")          # missing node
    with pytest.raises(TreeError):
        parse_tree("tree 2\nnode 0 1:1\nnode 1 0:0\n")  # ports not 0..d-1


def test_validate_catches_asymmetric_adjacency():
    rep = validate([[(0, 1)], [(0, 0), (1, 0)]])
    assert not rep.ok


def test_validate_catches_cycle():
    # triangle
    rep = validate([[(0, 1), (1, 2)], [(0, 0), (1, 2)], [(0, 0), (1, 1)]])
    assert not rep.ok


@given(st.integers(0, 500))
@settings(max_examples=60, deadline=None)
def test_center_matches_eccentricity_bruteforce(seed):
    t = random_tree(seed)
    ecc = []
    for v in range(t.n):
        ecc.append(max(t.distances_from(v)))
    best = min(ecc)
    centers = sorted(v for v in range(t.n) if ecc[v] == best)
    info = center(t)
    assert sorted(info.nodes) == centers
    assert info.kind == ("node" if len(centers) == 1 else "edge")


@given(st.integers(0, 500))
@settings(max_examples=50, deadline=None)
def test_counter_walk_inverts_basic_walk(seed):
    t = random_tree(seed)
    r = random.Random(seed + 1)
    pos = WalkPosition(r.randrange(t.n), None)
    for _ in range(30):
        nxt = basic_walk_step(t, pos)
        back = counter_basic_walk_step(t, WalkPosition(nxt.node, nxt.entry))
        assert back.node == pos.node
        pos = nxt


def test_basic_walk_closes_on_path():
    t = parse_tree(PATH3)
    walk = basic_walk(t, 0, 4)
    assert [w.node for w in walk] == [0, 1, 2, 1, 0]


@given(st.integers(0, 500))
@settings(max_examples=60, deadline=None)
def test_contraction_round_trip(seed):
    t = random_tree(seed)
    view = contract(t)
    assert view.nu <= max(2, 2 * t.leaf_count - 1)
    assert all(d != 2 for d in view.contracted.degrees) or view.contracted.n <= 2
    assert expand(view).neighbors == t.neighbors
