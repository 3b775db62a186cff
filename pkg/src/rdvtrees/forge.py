"""Adversarial instance generation: given a concrete finite-state agent, build
a port-labeled instance on which two copies of it provably never meet, and
certify that claim by configuration-cycle detection.

Three constructions:
- theorem1: a 2-edge-colored line with a delay that lands the two copies in
  mirror positions in the same state (arbitrary-delay setting);
- theorem3: a 2-edge-colored line with asymmetric arm lengths read off the
  agent's degree-2 transition digraph (simultaneous start);
- theorem4: a two-sided bounded-degree tree whose side trees are
  non-isomorphic but indistinguishable to the agent (equal behavior
  functions).
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .agents import (AgentAutomaton, AutomatonProgram, all_circuits,
                     circuits_lcm, format_automaton, reduce_for_colored_line,
                     state_cycle)
from .engine import (CertifiedNeverMeet, Scenario, format_scenario, run,
                     verify_certificate)
from .symmetry import perfectly_symmetrizable
from .trees import PortLabeledTree, format_tree


class ForgeError(RuntimeError):
    """Internal inconsistency: a construction failed its own verification."""


@dataclass(frozen=True)
class DigraphAnalysis:
    succ: dict
    circuits: tuple
    gamma: int
    bounded: bool
    drift: int          # net displacement per 2*|cycle| steps of the home cycle
    max_range: int      # bound D on |displacement| when bounded


@dataclass
class ForgeInstance:
    kind: str
    tree: PortLabeledTree
    start_a: int
    start_b: int
    delay: int
    delayed: str
    automaton: AgentAutomaton
    provenance: dict
    certificate: CertifiedNeverMeet | None = None


# ---------------------------------------------------------------------------
# colored lines and single-agent probes


def colored_line(colors) -> PortLabeledTree:
    """Line with len(colors) edges; at internal nodes the port of an edge is
    its color (so the coloring must be proper); endpoints use port 0."""
    e = len(colors)
    adj = []
    for q in range(e + 1):
        inc = []
        if q > 0:
            inc.append((colors[q - 1], q - 1))
        if q < e:
            inc.append((colors[q], q + 1))
        if len(inc) == 2 and colors[q - 1] == colors[q]:
            raise ValueError(f"coloring not proper at node {q}")
        if len(inc) == 1:
            inc = [(0, inc[0][1])]
        adj.append(inc)
    return PortLabeledTree.from_ports(adj)


def run_single(tree, automaton, start, steps):
    """One agent alone; per round records (acting state, node, action, node after)."""
    prog = AutomatonProgram(automaton)
    pos = start
    entry = None
    out = []
    for _ in range(steps):
        act = prog.act(entry, tree.degree(pos))
        node = pos
        if act >= 0:
            p = act % tree.degree(pos)
            entry = tree.entry_ports[pos][p]
            pos = tree.neighbors[pos][p]
        else:
            entry = -1
        out.append((prog.state, node, act, pos))
    return out


def line_probe(automaton, max_steps, flip=False):
    """Trajectory on the infinite properly colored line (edge {q, q+1} has
    port q%2, or the flipped coloring); start at 0.  Yields per round
    (acting state, node, action, node after)."""
    pos = 0
    state = automaton.initial
    entry = None
    out = []
    for _ in range(max_steps):
        if entry is not None:
            state = automaton.resolve(state, entry, 2)
        lam = automaton.outputs[state]
        node = pos
        if lam < 0:
            out.append((state, node, -1, pos))
            entry = -1
        else:
            p = lam % 2
            right = (pos % 2 == p) != flip
            pos = pos + 1 if right else pos - 1
            out.append((state, node, p, pos))
            entry = p
    return out


def analyze_digraph(automaton: AgentAutomaton) -> DigraphAnalysis:
    succ = reduce_for_colored_line(automaton)
    circuits = all_circuits(succ)
    gamma = circuits_lcm(circuits)
    tail, cycle = state_cycle(succ, automaton.initial)
    # Displacement over two cycle passes decides boundedness (one pass may
    # flip the node parity and mirror the next pass).
    horizon = len(tail) + 4 * len(cycle) + 4
    steps = line_probe(automaton, horizon)
    t = len(tail)
    drift = steps[t + 2 * len(cycle)][3] - steps[t][3]
    bounded = drift == 0
    max_range = max(abs(s[3]) for s in steps) if bounded else 0
    return DigraphAnalysis(succ=succ, circuits=circuits, gamma=gamma,
                           bounded=bounded, drift=drift, max_range=max_range)


def _certify(instance: ForgeInstance) -> ForgeInstance:
    scenario = Scenario(instance.tree, instance.start_a, instance.start_b,
                        instance.delay, instance.delayed, horizon=None)
    factory = lambda: AutomatonProgram(instance.automaton)
    if perfectly_symmetrizable(instance.tree, instance.start_a, instance.start_b):
        raise ForgeError("constructed starts are perfectly symmetrizable")
    result = run(scenario, factory)
    if not isinstance(result.outcome, CertifiedNeverMeet):
        raise ForgeError(f"agents met: {result.outcome}")
    if not verify_certificate(scenario, factory, result.outcome):
        raise ForgeError("certificate replay failed")
    instance.certificate = result.outcome
    return instance


def _bounded_line_instance(automaton, analysis, kind, extra_provenance):
    d = analysis.max_range
    e = 4 * d + 4
    a, b = d + 1, 3 * d + 2
    colors = [(j - a) % 2 for j in range(e)]
    tree = colored_line(colors)
    prov = {"branch": "bounded-range", "D": d, "line_edges": e,
            **extra_provenance}
    inst = ForgeInstance(kind, tree, a, b, 0, "b", automaton, prov)
    return _certify(inst)


# ---------------------------------------------------------------------------
# arbitrary-delay line construction


def forge_theorem1(automaton: AgentAutomaton, probe_steps=None) -> ForgeInstance:
    k = automaton.n_states
    if probe_steps is None:
        probe_steps = 64 * (k + 2) * (k + 2)
    steps = line_probe(automaton, probe_steps)
    hit = _first_state_repeat(steps)
    if hit is None:
        analysis = analyze_digraph(automaton)
        if not analysis.bounded:
            raise ForgeError("unbounded agent with no state repeat in probe")
        return _bounded_line_instance(automaton, analysis, "theorem1", {})
    t1_inf, t2_inf, s, x1, x2 = hit
    d = abs(x2 - x1)
    delta = abs(x1)
    sigma = 1 if x2 > x1 else -1

    e = 8 * (k + 1) + 1
    c = 4 * (k + 1)                 # central edge index
    colors = [abs(j - c) % 2 for j in range(e)]
    tree = colored_line(colors)

    visited = [st[1] for st in steps[:t2_inf + 1]] + [steps[t2_inf][3]]
    low = min(sigma * q for q in visited)
    # the mirrored copy runs d nodes past the reflection of this prefix, so
    # keep the image at least d+1 nodes clear of the near end
    b0 = d + 1 - low
    if sigma > 0:
        b0 += (b0 + c) % 2          # embedding must preserve edge colors
    else:
        b0 += (b0 + c + 1) % 2
    phi = lambda q: b0 + sigma * q
    if not all(1 <= phi(q) <= e - 1 and
               1 <= 2 * c + 1 + d - phi(q) <= e - 1 for q in visited):
        raise ForgeError("trajectory prefix does not fit in the line")

    psi = lambda w: 2 * c + 1 - w   # reflection about the central edge
    y1 = psi(phi(x1))
    v = psi(phi(0)) + sigma * (x2 - x1)
    u_img = phi(0)

    sim_u = run_single(tree, automaton, u_img, t2_inf + 2)
    sim_v = run_single(tree, automaton, v, t2_inf + 2)
    t1 = next(i + 1 for i, st in enumerate(sim_u)
              if st[1] == phi(x1) and st[0] == s)
    t2 = next(i + 1 for i, st in enumerate(sim_v)
              if st[1] == y1 and st[0] == s)
    theta = t2 - t1
    if theta < 0:
        raise ForgeError("negative delay; mirror bookkeeping is off")

    prov = {"branch": "main", "K": k, "line_edges": e, "central_edge": c,
            "x1": x1, "x2": x2, "state": s, "delta": delta, "d": d,
            "sigma": sigma, "u": u_img, "v": v, "y1": y1,
            "t1": t1, "t2": t2, "theta": theta}
    inst = ForgeInstance("theorem1", tree, u_img, v, theta, "a",
                         automaton, prov)
    return _certify(inst)


def _first_state_repeat(steps):
    """Earliest pair of rounds acting in the same state at two distinct nodes
    of equal parity (equal parity keeps the mirrored embedding on-color)."""
    seen = {}
    for t, (state, node, _act, _nxt) in enumerate(steps):
        key = (state, node % 2)
        if key in seen:
            t1, x1 = seen[key]
            if x1 != node:
                return (t1, t, state, x1, node)
        else:
            seen[key] = (t, node)
    return None


# ---------------------------------------------------------------------------
# simultaneous-start line construction


def forge_theorem3(automaton: AgentAutomaton, probe_steps=None) -> ForgeInstance:
    analysis = analyze_digraph(automaton)
    if analysis.bounded:
        return _bounded_line_instance(automaton, analysis, "theorem3",
                                      {"gamma": analysis.gamma})
    k = automaton.n_states
    gamma = analysis.gamma
    goal = 2 * gamma + k
    tail, cycle = state_cycle(analysis.succ, automaton.initial)
    clen = len(cycle)
    if probe_steps is None:
        # drift is at least 1 per 2*clen steps once in the cycle
        probe_steps = len(tail) + 2 * clen * (goal + 2) + 2 * gamma + clen + 4
    steps = line_probe(automaton, probe_steps)
    t0 = next(t for t, st in enumerate(steps) if abs(st[3]) >= goal)
    base = steps[t0][3]
    window = [steps[t0 + j][3] for j in range(clen + 1)]
    drift_dir = 1 if window[-1] > base else -1
    extreme = max(window, key=lambda w: drift_dir * w)
    j_star = window.index(extreme)
    tau = t0 + j_star
    x = abs(steps[tau][3])
    tau2 = tau + 2 * gamma
    x2 = abs(steps[tau2][3])
    if not x2 > x:
        raise ForgeError("second arm is not longer; drift bookkeeping is off")
    sgn = 1 if steps[tau][3] > 0 else -1
    e = x + x2 + 1
    if sgn > 0:
        colors = [(j - x + 1) % 2 for j in range(e)]
    else:
        colors = [(j - x) % 2 for j in range(e)]
    tree = colored_line(colors)
    prov = {"branch": "main", "K": k, "gamma": gamma, "t0": t0, "tau": tau,
            "tau_prime": tau2, "x": x, "x_prime": x2, "extreme": extreme,
            "line_edges": e, "circuit_len": clen}
    inst = ForgeInstance("theorem3", tree, x, x + 1, 0, "b", automaton, prov)
    return _certify(inst)


# ---------------------------------------------------------------------------
# two-sided trees


def side_tree_ports(i: int, bits: tuple[int, ...]):
    """Adjacency rows for one side tree, plus its anchor and root indices.

    Nodes: 0 = anchor stub, 1..i+1 = spine (1 is the root), then attachments
    for spine nodes 2..i (bit 0: single leaf; bit 1: two-node chain).  Spine
    ports: 0 toward the root/anchor, 1 to the next spine node, 2 to the
    attachment.
    """
    if len(bits) != i - 1:
        raise ValueError("need one attachment bit per internal spine node")
    adj = [[(0, 1)]]                      # anchor stub
    adj.append([(0, 0), (1, 2)])          # root
    for s in range(2, i + 1):             # internal spine node s
        adj.append([(0, s - 1), (1, s + 1), (2, None)])
    adj.append([(0, i)])                  # far endpoint (node i+1)
    for s, bit in zip(range(2, i + 1), bits):
        here = len(adj)
        adj[s][2] = (2, here)
        if bit:
            adj.append([(0, s), (1, here + 1)])
            adj.append([(0, here)])
        else:
            adj.append([(0, s)])
    return adj


def behavior_function(automaton: AgentAutomaton, i: int, bits) -> dict:
    """q(s) = (return state, tour length) for each state s: the agent steps
    from the anchor into the root in state s and walks the side tree until it
    moves back out.  Divergent tours map to the marker ("diverges",)."""
    adj = [list(row) for row in side_tree_ports(i, tuple(bits))]
    tree = PortLabeledTree.from_ports(adj)
    out = {}
    for s in range(automaton.n_states):
        out[s] = _tour(tree, automaton, s)
    return out


def _tour(tree, automaton, s):
    pos, entry = 1, 0         # just entered the root from the anchor stub
    state = s
    t = 1
    seen = set()
    while True:
        cfg = (state, pos, entry)
        if cfg in seen:
            return ("diverges",)
        seen.add(cfg)
        state = automaton.resolve(state, entry, tree.degree(pos))
        lam = automaton.outputs[state]
        t += 1
        if lam < 0:
            entry = -1
            continue
        p = lam % tree.degree(pos)
        nxt = tree.neighbors[pos][p]
        entry = tree.entry_ports[pos][p]
        pos = nxt
        if pos == 0:
            return (state, t)


def forge_theorem4(automaton: AgentAutomaton, i: int = 4,
                   budget: int | None = None):
    """Search the 2^(i-1) side trees for two with equal behavior functions;
    returns the certified two-sided instance, or None when the agent
    distinguishes every pair within the budget."""
    if i < 2 or i % 2:
        raise ValueError("side-tree parameter must be even and at least 2")
    variants = 1 << (i - 1)
    if budget is not None:
        variants = min(variants, budget)
    by_q = {}
    pair = None
    for code in range(variants):
        bits = tuple((code >> b) & 1 for b in range(i - 1))
        q = behavior_function(automaton, i, bits)
        key = tuple(sorted(q.items()))
        for earlier in by_q.get(key, ()):
            # attachment patterns that are mirror images give isomorphic
            # trees; the construction needs genuinely distinct side trees
            if not _side_trees_isomorphic(i, earlier, bits):
                pair = (earlier, bits)
                break
        if pair is not None:
            break
        by_q.setdefault(key, []).append(bits)
    if pair is None:
        return None
    t1_bits, t2_bits = pair
    tree, u, v = two_sided_tree(i, t1_bits, t2_bits)
    prov = {"branch": "main", "i": i, "side1": t1_bits, "side2": t2_bits,
            "m": 2, "leaves": tree.leaf_count,
            "max_degree": max(tree.degrees)}
    inst = ForgeInstance("theorem4", tree, u, v, 0, "b", automaton, prov)
    return _certify(inst)


def _side_trees_isomorphic(i, bits1, bits2) -> bool:
    import networkx as nx
    graphs = []
    for bits in (bits1, bits2):
        adj = side_tree_ports(i, tuple(bits))
        g = nx.Graph()
        for v, row in enumerate(adj):
            if v == 0:
                continue                 # drop the anchor stub
            for _p, w in row:
                if w != 0:
                    g.add_edge(v, w)
        graphs.append(g)
    return nx.is_isomorphic(graphs[0], graphs[1])


def two_sided_tree(i: int, bits1, bits2):
    """Join two side trees by a path with two middle nodes; the central edge
    carries port 0 at both ends.  Returns (tree, u, v) with u, v the middle
    nodes (each adjacent to a root)."""
    left = side_tree_ports(i, tuple(bits1))
    right = side_tree_ports(i, tuple(bits2))
    # left anchor stub becomes middle node u, right stub becomes v
    off = len(left)
    adj = [list(row) for row in left]
    for row in right:
        adj.append([(p, w + off) for p, w in row])
    u, v = 0, off
    adj[u] = [(0, v), (1, 1)]            # central edge port 0, root edge port 1
    adj[v] = [(0, u), (1, off + 1)]
    return PortLabeledTree.from_ports(adj), u, v


# ---------------------------------------------------------------------------
# instance directories


def save_instance(instance: ForgeInstance, out_dir: str) -> None:
    os.makedirs(out_dir, exist_ok=True)
    with open(os.path.join(out_dir, "instance.tree"), "w") as fh:
        fh.write(format_tree(instance.tree))
    with open(os.path.join(out_dir, "agent.automaton"), "w") as fh:
        fh.write(format_automaton(instance.automaton))
    scenario = Scenario(instance.tree, instance.start_a, instance.start_b,
                        instance.delay, instance.delayed, horizon=None)
    with open(os.path.join(out_dir, "instance.scenario"), "w") as fh:
        fh.write(format_scenario("instance.tree", scenario))
    with open(os.path.join(out_dir, "provenance.txt"), "w") as fh:
        fh.write(f"kind {instance.kind}\n")
        fh.write(f"delayed {instance.delayed}\n")
        for key, val in sorted(instance.provenance.items()):
            fh.write(f"{key} {val}\n")
    with open(os.path.join(out_dir, "certificate.txt"), "w") as fh:
        cert = instance.certificate
        fh.write(f"cycle_start {cert.cycle_start}\n")
        fh.write(f"cycle_length {cert.cycle_length}\n")
