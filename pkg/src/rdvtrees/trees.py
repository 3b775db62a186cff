"""Anonymous port-labeled trees.

A port-labeled tree assigns, at every node v of degree d, the local port
numbers 0..d-1 to the edges incident to v.  Port assignments at the two
endpoints of an edge are independent.  Nodes carry no identifiers visible
to agents; the integer ids used here are simulation-side bookkeeping only.
"""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from functools import cached_property


class TreeError(ValueError):
    """Adjacency data does not describe a valid port-labeled tree."""


@dataclass(frozen=True)
class ValidationReport:
    errors: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return not self.errors


def validate(adjacency) -> ValidationReport:
    """Check raw adjacency data (sequence of [(port, neighbor), ...] lists).

    Violations collected: ports at a node not forming 0..deg-1, dangling or
    asymmetric edge references, self-loops, multi-edges, disconnectedness,
    and cycles (edge count != n - 1).
    """
    errors = []
    n = len(adjacency)
    if n == 0:
        return ValidationReport(("empty tree",))
    for v, entries in enumerate(adjacency):
        ports = sorted(p for p, _ in entries)
        if ports != list(range(len(entries))):
            errors.append(f"node {v}: ports {ports} are not 0..{len(entries) - 1}")
        nbrs = [w for _, w in entries]
        for w in nbrs:
            if not isinstance(w, int) or not 0 <= w < n:
                errors.append(f"node {v}: neighbor {w} out of range")
            elif w == v:
                errors.append(f"node {v}: self-loop")
        in_range = [w for w in nbrs if isinstance(w, int) and 0 <= w < n and w != v]
        if len(set(in_range)) != len(in_range):
            errors.append(f"node {v}: multi-edge (repeated neighbor)")
    if errors:
        return ValidationReport(tuple(errors))
    for v, entries in enumerate(adjacency):
        for _, w in entries:
            back = sum(1 for _, z in adjacency[w] if z == v)
            if back != 1:
                errors.append(f"edge {{{v},{w}}}: node {w} references {v} {back} times")
    edge_count = sum(len(entries) for entries in adjacency)
    if edge_count % 2 == 1:
        errors.append("odd number of directed edge entries")
    elif edge_count // 2 != n - 1:
        errors.append(f"{edge_count // 2} edges for {n} nodes (want {n - 1})")
    if not errors and n > 1:
        seen = {0}
        queue = deque([0])
        while queue:
            v = queue.popleft()
            for _, w in adjacency[v]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        if len(seen) != n:
            errors.append("not connected")
    return ValidationReport(tuple(errors))


@dataclass(frozen=True)
class PortLabeledTree:
    """Immutable port-labeled tree; neighbors[v][p] is the node behind port p of v."""

    neighbors: tuple[tuple[int, ...], ...]

    @classmethod
    def from_ports(cls, adjacency) -> "PortLabeledTree":
        """Build from raw [(port, neighbor), ...] data; raises TreeError when invalid."""
        report = validate(adjacency)
        if not report.ok:
            raise TreeError("; ".join(report.errors))
        nb = []
        for entries in adjacency:
            row = [None] * len(entries)
            for p, w in entries:
                row[p] = w
            nb.append(tuple(row))
        return cls(tuple(nb))

    @property
    def n(self) -> int:
        return len(self.neighbors)

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(row) for row in self.neighbors)

    def degree(self, v: int) -> int:
        return len(self.neighbors[v])

    @cached_property
    def entry_ports(self) -> tuple[tuple[int, ...], ...]:
        """entry_ports[v][p]: the port at neighbors[v][p] whose edge leads back to v."""
        out = []
        for v, row in enumerate(self.neighbors):
            back = []
            for w in row:
                back.append(self.neighbors[w].index(v))
            out.append(tuple(back))
        return tuple(out)

    @cached_property
    def leaves(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if self.degree(v) == 1)

    @property
    def leaf_count(self) -> int:
        return len(self.leaves) if self.n > 1 else 1

    def port_to(self, v: int, w: int) -> int:
        """Port at v of the edge {v, w}."""
        return self.neighbors[v].index(w)

    def edges(self):
        for v, row in enumerate(self.neighbors):
            for w in row:
                if v < w:
                    yield (v, w)

    def distances_from(self, src: int) -> list[int]:
        dist = [-1] * self.n
        dist[src] = 0
        queue = deque([src])
        while queue:
            v = queue.popleft()
            for w in self.neighbors[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
        return dist

    def distance(self, u: int, v: int) -> int:
        return self.distances_from(u)[v]

    def path_between(self, u: int, v: int) -> list[int]:
        parent = {u: None}
        queue = deque([u])
        while queue:
            a = queue.popleft()
            if a == v:
                break
            for w in self.neighbors[a]:
                if w not in parent:
                    parent[w] = a
                    queue.append(w)
        path = [v]
        while path[-1] != u:
            path.append(parent[path[-1]])
        path.reverse()
        return path


# ---------------------------------------------------------------------------
# file format


def parse_tree(text: str) -> PortLabeledTree:
    """Parse the plain-text tree format.

    Lines: ``tree <n>`` then one ``node <id> <port>:<neighbor> ...`` line per
    node.  ``#`` starts a comment; blank lines are ignored.
    """
    n = None
    rows: dict[int, list[tuple[int, int]]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "tree":
            if n is not None:
                raise TreeError(f"line {lineno}: duplicate tree header")
            try:
                n = int(parts[1])
            except (IndexError, ValueError):
                raise TreeError(f"line {lineno}: bad tree header") from None
        elif parts[0] == "node":
            if n is None:
                raise TreeError(f"line {lineno}: node line before tree header")
            try:
                v = int(parts[1])
            except (IndexError, ValueError):
                raise TreeError(f"line {lineno}: bad node id") from None
            if v in rows:
                raise TreeError(f"line {lineno}: duplicate node {v}")
            entries = []
            for tok in parts[2:]:
                try:
                    p, w = tok.split(":")
                    entries.append((int(p), int(w)))
                except ValueError:
                    raise TreeError(f"line {lineno}: bad port entry {tok!r}") from None
            rows[v] = entries
        else:
            raise TreeError(f"line {lineno}: unknown directive {parts[0]!r}")
    if n is None:
        raise TreeError("missing tree header")
    if sorted(rows) != list(range(n)):
        raise TreeError(f"node ids {sorted(rows)} are not 0..{n - 1}")
    return PortLabeledTree.from_ports([rows[v] for v in range(n)])


def format_tree(tree: PortLabeledTree) -> str:
    lines = [f"tree {tree.n}"]
    for v, row in enumerate(tree.neighbors):
        entries = " ".join(f"{p}:{w}" for p, w in enumerate(row))
        lines.append(f"node {v} {entries}".rstrip())
    return "\n".join(lines) + "\n"


def relabel_nodes(tree: PortLabeledTree, perm) -> PortLabeledTree:
    """Rename node ids by perm (perm[old] = new); ports are untouched."""
    nb = [None] * tree.n
    for v, row in enumerate(tree.neighbors):
        nb[perm[v]] = tuple(perm[w] for w in row)
    return PortLabeledTree(tuple(nb))


# ---------------------------------------------------------------------------
# centers


@dataclass(frozen=True)
class CenterInfo:
    kind: str                      # "node" | "edge"
    nodes: tuple[int, ...]         # one node, or the two central-edge endpoints


def center(tree: PortLabeledTree) -> CenterInfo:
    """Center by iterated leaf removal: strip all leaves until <= 2 nodes remain."""
    n = tree.n
    if n == 1:
        return CenterInfo("node", (0,))
    deg = list(tree.degrees)
    alive = n
    removed = [False] * n
    layer = [v for v in range(n) if deg[v] == 1]
    while alive > 2:
        nxt = []
        for v in layer:
            removed[v] = True
            alive -= 1
            for w in tree.neighbors[v]:
                if not removed[w]:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    core = tuple(v for v in range(n) if not removed[v])
    if len(core) == 1:
        return CenterInfo("node", core)
    return CenterInfo("edge", core)


# ---------------------------------------------------------------------------
# walks


@dataclass(frozen=True)
class WalkPosition:
    """A node plus the port through which it was entered (None at a walk origin)."""

    node: int
    entry: int | None


def basic_walk_step(tree: PortLabeledTree, pos: WalkPosition) -> WalkPosition:
    """One step of the basic walk: leave by port 0 at the origin, else by
    (entry + 1) mod degree."""
    d = tree.degree(pos.node)
    if d == 0:
        raise TreeError("cannot walk from an isolated node")
    port = 0 if pos.entry is None else (pos.entry + 1) % d
    w = tree.neighbors[pos.node][port]
    return WalkPosition(w, tree.entry_ports[pos.node][port])


def counter_basic_walk_step(tree: PortLabeledTree, pos: WalkPosition) -> WalkPosition:
    """Inverse of basic_walk_step: leave by the entry port, and record at the
    new node the entry port a forward basic walk would have had there."""
    if pos.entry is None:
        raise TreeError("counter basic walk needs an entry port")
    port = pos.entry
    w = tree.neighbors[pos.node][port]
    arrived = tree.entry_ports[pos.node][port]
    return WalkPosition(w, (arrived - 1) % tree.degree(w))


def basic_walk(tree: PortLabeledTree, start: int, steps: int) -> list[WalkPosition]:
    """Positions of a port-0 basic walk from start; index i = position after i steps."""
    pos = WalkPosition(start, None)
    out = [pos]
    for _ in range(steps):
        pos = basic_walk_step(tree, pos)
        out.append(pos)
    return out


# ---------------------------------------------------------------------------
# contraction


@dataclass(frozen=True)
class ContractionView:
    """Contraction of a tree: maximal runs of degree-2 nodes become edges.

    node_map[i] is the original id of contracted node i.  For every directed
    contracted edge (i, p), edge_map holds the original node path from
    node_map[i] to the far endpoint, and path_ports the departure port used
    at each path node except the last (so the original tree can be rebuilt).
    """

    contracted: PortLabeledTree
    node_map: tuple[int, ...]
    edge_map: dict
    path_ports: dict

    @property
    def nu(self) -> int:
        return self.contracted.n

    def to_contracted(self, original_node: int) -> int:
        return self.node_map.index(original_node)


def contract(tree: PortLabeledTree) -> ContractionView:
    n = tree.n
    if n == 1:
        return ContractionView(tree, (0,), {}, {})
    keep = [v for v in range(n) if tree.degree(v) != 2]
    tid = {v: i for i, v in enumerate(keep)}
    adj = [[None] * tree.degree(v) for v in keep]
    edge_map = {}
    path_ports = {}
    for i, u in enumerate(keep):
        for p in range(tree.degree(u)):
            path = [u]
            ports = [p]
            cur = tree.neighbors[u][p]
            came = tree.entry_ports[u][p]
            while tree.degree(cur) == 2:
                path.append(cur)
                out = 1 - came
                ports.append(out)
                nxt = tree.neighbors[cur][out]
                came = tree.entry_ports[cur][out]
                cur = nxt
            path.append(cur)
            adj[i][p] = tid[cur]
            edge_map[(i, p)] = tuple(path)
            path_ports[(i, p)] = tuple(ports)
    contracted = PortLabeledTree(tuple(tuple(row) for row in adj))
    return ContractionView(contracted, tuple(keep), edge_map, path_ports)


def expand(view: ContractionView) -> PortLabeledTree:
    """Rebuild the original tree from a ContractionView (round-trip check)."""
    if not view.edge_map:
        return view.contracted
    size = max(max(path) for path in view.edge_map.values()) + 1
    rows: list[dict[int, int]] = [dict() for _ in range(size)]
    for key, path in view.edge_map.items():
        ports = view.path_ports[key]
        for a, b, p in zip(path, path[1:], ports):
            rows[a][p] = b
    return PortLabeledTree.from_ports(
        [sorted(row.items()) for row in rows]
    )
