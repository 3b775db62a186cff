"""Instance generators: random port-labeled trees with exact node/leaf counts,
exhaustive small-tree enumeration, and mirrored-contraction instances whose
contracted form is symmetric while the two halves differ in chain lengths.
"""
from __future__ import annotations

import itertools
import random

import networkx as nx

from .symmetry import BudgetExceeded, labeling_count, relabel_ports
from .trees import PortLabeledTree


def feasible_counts(n: int, leaves: int, degree_cap: int) -> bool:
    if n == 2:
        return leaves == 2
    if not (2 <= leaves <= n - 1) or degree_cap < 2:
        return False
    # internal nodes must absorb the whole degree sum
    return (n - leaves) * degree_cap >= 2 * (n - 1) - leaves


def gen_random_tree(n: int, leaves: int, degree_cap: int | None = None,
                    seed=None, rng: random.Random | None = None) -> PortLabeledTree:
    """Uniform-ish random tree with exactly n nodes and the given leaf count,
    max degree <= degree_cap, ports drawn as a fresh random permutation at
    every node.

    Grown from a single edge by two moves: extend a leaf (adds an internal
    node) or hang a new leaf on an internal node with spare degree.
    """
    if rng is None:
        rng = random.Random(seed)
    cap = degree_cap if degree_cap is not None else max(2, n - 1)
    if n < 2:
        raise ValueError("need at least two nodes")
    if not feasible_counts(n, leaves, cap):
        raise ValueError(f"no tree with n={n} leaves={leaves} cap={cap}")

    nbrs = [[1], [0]]
    extends = n - leaves
    hangs = leaves - 2
    while extends or hangs:
        total = extends + hangs
        want_hang = rng.randrange(total) < hangs
        if want_hang:
            cands = [v for v, row in enumerate(nbrs)
                     if 2 <= len(row) < cap]
            if not cands:
                want_hang = False       # grow an internal node first
        if want_hang:
            v = rng.choice(cands)
            hangs -= 1
        else:
            v = rng.choice([w for w, row in enumerate(nbrs) if len(row) == 1])
            extends -= 1
        w = len(nbrs)
        nbrs.append([v])
        nbrs[v].append(w)

    adj = []
    for row in nbrs:
        perm = list(range(len(row)))
        rng.shuffle(perm)
        adj.append([(perm[i], u) for i, u in enumerate(row)])
    tree = PortLabeledTree.from_ports(adj)
    assert tree.leaf_count == leaves and len(tree.neighbors) == n
    return tree


def all_topologies(n: int):
    """Every unlabeled tree on n nodes, with ports in neighbor order."""
    out = []
    for g in nx.nonisomorphic_trees(n):
        adj = []
        for v in range(n):
            adj.append([(i, w) for i, w in enumerate(sorted(g.neighbors(v)))])
        out.append(PortLabeledTree.from_ports(adj))
    return out


def all_port_labelings(tree: PortLabeledTree, budget: int | None = None):
    total = labeling_count(tree)
    if budget is not None and total > budget:
        raise BudgetExceeded(f"{total} labelings exceed budget {budget}")
    pools = [list(itertools.permutations(range(d))) for d in tree.degrees]
    for perms in itertools.product(*pools):
        yield relabel_ports(tree, perms)


def random_port_relabel(tree: PortLabeledTree, rng: random.Random) -> PortLabeledTree:
    perms = []
    for d in tree.degrees:
        p = list(range(d))
        rng.shuffle(p)
        perms.append(p)
    return relabel_ports(tree, perms)


# ---------------------------------------------------------------------------
# mirrored-contraction instances


def mirrored_instance(rng: random.Random, growth: int = 2, max_stretch: int = 3,
                      central_len: int | None = None):
    """A tree whose contraction is a symmetric central-edge tree (two
    port-identical halves) but whose halves use independently random chain
    lengths, so the two agents' exploration times generally differ.

    Returns (tree, start_a, start_b, info); the starts are branching nodes in
    opposite halves.
    """
    children = {0: []}
    k0 = rng.randint(2, 3)
    for _ in range(k0):
        w = len(children)
        children[w] = []
        children[0].append(w)
    for _ in range(growth):
        leaf = rng.choice([v for v, ch in children.items() if not ch and v != 0])
        for _ in range(rng.randint(2, 3)):
            w = len(children)
            children[w] = []
            children[leaf].append(w)
    shape_nodes = sorted(children)

    # one port permutation per shape node, shared by both halves; slot 0 is
    # the edge toward the root (the central path, for the root itself)
    perms = {}
    for v in shape_nodes:
        deg = len(children[v]) + 1
        p = list(range(deg))
        rng.shuffle(p)
        perms[v] = p

    if central_len is None:
        central_len = rng.randint(2, 4)

    rows: list[list] = []

    def new_node():
        rows.append([])
        return len(rows) - 1

    def connect(a, pa, b, pb, length):
        """A path of `length` edges from a (port pa) to b (port pb)."""
        prev, prev_port = a, pa
        for _ in range(length - 1):
            mid = new_node()
            enter = rng.randint(0, 1)
            rows[prev].append((prev_port, mid))
            rows[mid].append((enter, prev))
            prev, prev_port = mid, 1 - enter
        rows[prev].append((prev_port, b))
        rows[b].append((pb, prev))

    ids = [{}, {}]
    half_nodes = [[], []]
    for half in (0, 1):
        mark = len(rows)
        for v in shape_nodes:
            ids[half][v] = new_node()
        for v in shape_nodes:
            for slot, ch in enumerate(children[v], start=1):
                connect(ids[half][v], perms[v][slot],
                        ids[half][ch], perms[ch][0],
                        rng.randint(1, max_stretch))
        half_nodes[half] = list(range(mark, len(rows)))
    connect(ids[0][0], perms[0][0], ids[1][0], perms[0][0], central_len)

    tree = PortLabeledTree.from_ports(rows)
    start_a = rng.choice(half_nodes[0])
    start_b = rng.choice(half_nodes[1])
    info = {"nu": 2 * len(shape_nodes), "central_len": central_len,
            "roots": (ids[0][0], ids[1][0]),
            "halves": (half_nodes[0], half_nodes[1])}
    return tree, start_a, start_b, info
