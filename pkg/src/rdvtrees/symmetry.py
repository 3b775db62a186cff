"""Canonical codes, symmetric trees, and symmetrizable start pairs.

Two notions of rooted isomorphism are used throughout:

* topological -- plain rooted-tree isomorphism, ports ignored;
* port_preserving -- the isomorphism must preserve every port number.

Codes are strings computed bottom-up with sorted child encodings, so equal
codes <=> isomorphic (in the requested mode), independent of node ids.
"""
from __future__ import annotations

import itertools
from collections import deque

from .trees import PortLabeledTree, TreeError, center

TOPOLOGICAL = "topological"
PORT_PRESERVING = "port_preserving"


class BudgetExceeded(RuntimeError):
    """Brute-force enumeration would exceed the configured budget."""


def _component_order(tree, root, banned):
    """BFS order of the component of root when the edge {root, banned} is cut."""
    parent = {root: None}
    order = [root]
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w in tree.neighbors[v]:
            if w in parent or (v == root and w == banned):
                continue
            parent[w] = v
            order.append(w)
            queue.append(w)
    return order, parent


def _codes(tree, root, banned=None, marked=None, mode=TOPOLOGICAL,
           root_edge_port=False):
    """Code of every node in the component of root, treating banned as cut off.

    With root_edge_port, the port at root toward banned is embedded in the
    root code (used when comparing the two halves across a central edge).
    Iterative so that path-shaped trees of any size are fine.
    """
    order, parent = _component_order(tree, root, banned)
    code: dict[int, str] = {}
    for v in reversed(order):
        mark = "!" if v == marked else ""
        if mode == TOPOLOGICAL:
            kids = sorted(code[w] for w in tree.neighbors[v]
                          if w != parent[v] and not (v == root and w == banned))
            code[v] = "(" + mark + "".join(kids) + ")"
        else:
            tokens = []
            for p, w in enumerate(tree.neighbors[v]):
                if v == root and w == banned:
                    if root_edge_port:
                        tokens.append(f"^{p}")
                    continue
                if w == parent[v]:
                    tokens.append(f"^{p}")
                    continue
                q = tree.entry_ports[v][p]
                tokens.append(f"{p}.{q}{code[w]}")
            code[v] = "(" + mark + "|".join(sorted(tokens)) + ")"
    return code


def canonical_code(tree: PortLabeledTree, root: int, marked: int | None = None,
                   mode: str = TOPOLOGICAL) -> str:
    """Canonical string for the tree rooted at root, optionally with one marked node."""
    if mode not in (TOPOLOGICAL, PORT_PRESERVING):
        raise ValueError(f"unknown mode {mode!r}")
    return _codes(tree, root, marked=marked, mode=mode)[root]


def half_code(tree, root, banned, marked=None, mode=TOPOLOGICAL,
              root_edge_port=False):
    return _codes(tree, root, banned=banned, marked=marked, mode=mode,
                  root_edge_port=root_edge_port)[root]


def is_symmetric(tree: PortLabeledTree) -> bool:
    """Does the tree (with its given ports) admit a nontrivial port-preserving
    automorphism?  Only central-edge trees can; such an automorphism must swap
    the two halves, so it exists iff the halves have equal port codes
    (including the central-edge port at each endpoint)."""
    info = center(tree)
    if info.kind != "edge":
        return False
    x, y = info.nodes
    cx = half_code(tree, x, y, mode=PORT_PRESERVING, root_edge_port=True)
    cy = half_code(tree, y, x, mode=PORT_PRESERVING, root_edge_port=True)
    return cx == cy


def _half_of(tree, x, y, v):
    """True if v lies in the half of x when the central edge {x,y} is cut."""
    order, _ = _component_order(tree, x, y)
    return v in set(order)


def perfectly_symmetrizable(tree: PortLabeledTree, u: int, v: int) -> bool:
    """Can some port labeling make u and v images of each other under a
    label-preserving automorphism?

    Holds iff the tree has a central edge and the marked topological codes of
    the two halves (u marked on one side, v on the other) coincide.  The port
    labeling itself is irrelevant: any half-swapping topological isomorphism
    extends to a preserved labeling by mirroring.
    """
    if u == v:
        raise ValueError("start nodes must be distinct")
    info = center(tree)
    if info.kind != "edge":
        return False
    x, y = info.nodes
    if _half_of(tree, x, y, u):
        if _half_of(tree, x, y, v):
            return False
        mu, mv = u, v
    else:
        if not _half_of(tree, x, y, v):
            return False
        mu, mv = v, u
    cu = half_code(tree, x, y, marked=mu, mode=TOPOLOGICAL)
    cv = half_code(tree, y, x, marked=mv, mode=TOPOLOGICAL)
    return cu == cv


# ---------------------------------------------------------------------------
# brute force oracle


def relabel_ports(tree: PortLabeledTree, perms) -> PortLabeledTree:
    """Apply a port permutation per node: new port perms[v][p] replaces port p."""
    nb = []
    for v, row in enumerate(tree.neighbors):
        new_row = [None] * len(row)
        for p, w in enumerate(row):
            new_row[perms[v][p]] = w
        nb.append(tuple(new_row))
    return PortLabeledTree(tuple(nb))


def port_map_automorphism(tree: PortLabeledTree, u: int, v: int):
    """The unique candidate port-preserving automorphism with u -> v, or None.

    Propagates neighbor-for-neighbor through matching ports; any
    inconsistency (degree mismatch, clash, non-bijection) rules it out.
    """
    f = {u: v}
    stack = [u]
    while stack:
        a = stack.pop()
        b = f[a]
        if tree.degree(a) != tree.degree(b):
            return None
        for p in range(tree.degree(a)):
            c = tree.neighbors[a][p]
            d = tree.neighbors[b][p]
            if c in f:
                if f[c] != d:
                    return None
            else:
                f[c] = d
                stack.append(c)
    if len(set(f.values())) != tree.n:
        return None
    return f


def labeling_count(tree: PortLabeledTree) -> int:
    total = 1
    for d in tree.degrees:
        fact = 1
        for k in range(2, d + 1):
            fact *= k
        total *= fact
    return total


def _all_port_perms(tree):
    pools = [list(itertools.permutations(range(d))) for d in tree.degrees]
    return itertools.product(*pools)


def perfectly_symmetrizable_bruteforce(tree: PortLabeledTree, u: int, v: int,
                                       budget: int = 2_000_000,
                                       return_witness: bool = False):
    """Direct transcription of the definition: enumerate every port labeling
    and look for a label-preserving automorphism carrying u to v."""
    if u == v:
        raise ValueError("start nodes must be distinct")
    count = labeling_count(tree)
    if count > budget:
        raise BudgetExceeded(f"{count} labelings exceed budget {budget}")
    if tree.degree(u) != tree.degree(v):
        return (False, None) if return_witness else False
    for perms in _all_port_perms(tree):
        cand = relabel_ports(tree, perms)
        if port_map_automorphism(cand, u, v) is not None:
            return (True, cand) if return_witness else True
    return (False, None) if return_witness else False


def has_nontrivial_automorphism_bruteforce(tree: PortLabeledTree) -> bool:
    """Oracle for is_symmetric: try every candidate image of node 0."""
    for b in range(1, tree.n):
        if port_map_automorphism(tree, 0, b) is not None:
            return True
    return False


# ---------------------------------------------------------------------------
# witness labelings


def _match_halves(tree, x, y, banned_x, banned_y, marked_x, marked_y):
    """A topological isomorphism between the halves of x and y, aligned so
    marked_x maps to marked_y.  Children are paired inside equal-code groups;
    the mark is embedded in codes, so the marked subtrees pair up."""
    cx = _codes(tree, x, banned=banned_x, marked=marked_x, mode=TOPOLOGICAL)
    cy = _codes(tree, y, banned=banned_y, marked=marked_y, mode=TOPOLOGICAL)
    if cx[x] != cy[y]:
        return None
    g = {x: y}
    queue = deque([(x, y, banned_x, banned_y)])
    while queue:
        a, b, pa, pb = queue.popleft()
        kids_a = sorted((cx[w], w) for w in tree.neighbors[a] if w != pa)
        kids_b = sorted((cy[w], w) for w in tree.neighbors[b] if w != pb)
        for (ca, wa), (cb, wb) in zip(kids_a, kids_b):
            if ca != cb:
                return None
            g[wa] = wb
            queue.append((wa, wb, a, b))
    return g


def symmetrize_witness(tree: PortLabeledTree, u: int, v: int):
    """For a perfectly symmetrizable pair, a relabeled tree in which u and v
    really are symmetric: the ports of one half are mirrored onto the other
    through a half-swapping topological isomorphism taking u to v."""
    if not perfectly_symmetrizable(tree, u, v):
        return None
    x, y = center(tree).nodes
    if not _half_of(tree, x, y, u):
        u, v = v, u
    g = _match_halves(tree, x, y, y, x, u, v)
    assert g is not None
    port_of = {}   # (node, neighbor) -> port, for the mirrored half
    for a, b in g.items():
        for p in range(tree.degree(a)):
            c = tree.neighbors[a][p]
            if a == x and c == y:
                port_of[(y, x)] = p
            else:
                port_of[(b, g[c])] = p
    rows = []
    mirrored = set(g.values())
    for w in range(tree.n):
        if w in mirrored:
            rows.append(sorted((port_of[(w, z)], z) for z in tree.neighbors[w]))
        else:
            rows.append(list(enumerate(tree.neighbors[w])))
    return PortLabeledTree.from_ports(rows)


def certify_by_symmetry(tree: PortLabeledTree, u: int, v: int) -> bool:
    """Rigorous never-meet certificate for identical deterministic agents:
    if a port-preserving automorphism f with f(u) = v exists, it has no fixed
    node, both agents' runs mirror each other forever, and co-location would
    force a fixed point."""
    f = port_map_automorphism(tree, u, v)
    if f is None:
        return False
    if any(f[a] == a for a in f):
        raise TreeError("port-preserving automorphism with a fixed node")
    return True
