"""Synchronous two-agent simulation on a port-labeled tree.

Both agents are present from round 0; the delayed agent simply does not act
until its start round.  Each round every active agent picks an action, the
moves are applied simultaneously, and a meeting is two agents on the same
node at the end of a round.  Swapping along an edge is a crossing, not a
meeting.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from .trees import PortLabeledTree, parse_tree


class EngineError(RuntimeError):
    pass


@dataclass(frozen=True)
class Scenario:
    tree: PortLabeledTree
    start_a: int
    start_b: int
    delay: int = 0
    delayed: str = "b"
    horizon: int | None = None

    def __post_init__(self):
        if self.start_a == self.start_b:
            raise EngineError("start nodes must be distinct")
        if not (0 <= self.start_a < self.tree.n and 0 <= self.start_b < self.tree.n):
            raise EngineError("start node out of range")
        if self.delay < 0:
            raise EngineError("delay must be nonnegative")
        if self.delayed not in ("a", "b"):
            raise EngineError("delayed must be 'a' or 'b'")


@dataclass(frozen=True)
class Met:
    round: int
    node: int
    kind: str = "met"


@dataclass(frozen=True)
class CertifiedNeverMeet:
    cycle_start: int
    cycle_length: int
    kind: str = "never-meet"


@dataclass(frozen=True)
class Timeout:
    horizon: int
    kind: str = "timeout"


@dataclass
class RunResult:
    outcome: object
    rounds: int
    positions: list | None          # [(pos_a, pos_b)] per round when traced
    trace: list | None              # [(round, pos_a, state_a, pos_b, state_b)]
    idle_totals: tuple[int, int]
    crossings: list[int]
    memory_reports: tuple[dict, dict]
    memory_bits: tuple[int, int]
    events: tuple[list, list]       # per agent: [(round, event tuple)]


def run(scenario: Scenario, agent_factory, record_trace: bool = False) -> RunResult:
    tree = scenario.tree
    nbrs = tree.neighbors
    back = tree.entry_ports
    degs = tree.degrees

    progs = (agent_factory(), agent_factory())
    pos = [scenario.start_a, scenario.start_b]
    for k in (0, 1):
        node = pos[k]
        progs[k].bind_position_probe(lambda k=k: pos[k])

    finite = all(p.finite_state for p in progs)
    horizon = scenario.horizon
    if horizon is None and not finite:
        raise EngineError("structured programs need an explicit horizon")

    start_round = [1, 1]
    start_round[0 if scenario.delayed == "a" else 1] = scenario.delay + 1
    both_from = max(start_round)

    entry: list = [None, None]
    pending = [0, 0]
    idles = [0, 0]
    crossings: list[int] = []
    positions = [] if record_trace else None
    trace = [] if record_trace else None
    stamped = [0, 0]
    events: tuple[list, list] = ([], [])
    seen: dict = {}
    outcome = None
    r = 0

    while horizon is None or r < horizon:
        r += 1
        prev0, prev1 = pos[0], pos[1]
        moved = [False, False]
        for k in (0, 1):
            if r < start_round[k]:
                continue
            if pending[k] > 0:
                pending[k] -= 1
                idles[k] += 1
                entry[k] = -1
                continue
            act = progs[k].act(entry[k], degs[pos[k]])
            if isinstance(act, tuple):   # ("idle", count)
                pending[k] = act[1] - 1
                act = -1
            if act >= 0:
                p = act % degs[pos[k]]
                entry[k] = back[pos[k]][p]
                pos[k] = nbrs[pos[k]][p]
                moved[k] = True
            else:
                idles[k] += 1
                entry[k] = -1
        for k in (0, 1):
            ev = progs[k].events
            while stamped[k] < len(ev):
                events[k].append((r, ev[stamped[k]]))
                stamped[k] += 1
        if record_trace:
            positions.append((pos[0], pos[1]))
            trace.append((r, pos[0], progs[0].state_label(),
                          pos[1], progs[1].state_label()))
        if pos[0] == pos[1]:
            outcome = Met(r, pos[0])
            break
        if moved[0] and moved[1] and pos[0] == prev1 and pos[1] == prev0:
            crossings.append(r)
        if finite and horizon is None and r >= both_from:
            cfg = (pos[0], progs[0].config(), entry[0],
                   pos[1], progs[1].config(), entry[1])
            hit = seen.get(cfg)
            if hit is not None:
                outcome = CertifiedNeverMeet(hit, r - hit)
                break
            seen[cfg] = r
        if not record_trace and pending[0] > 0 and pending[1] > 0:
            skip = min(pending[0], pending[1])
            r += skip
            pending[0] -= skip
            pending[1] -= skip
            idles[0] += skip
            idles[1] += skip
    if outcome is None:
        outcome = Timeout(horizon)
    return RunResult(
        outcome=outcome,
        rounds=r,
        positions=positions,
        trace=trace,
        idle_totals=(idles[0], idles[1]),
        crossings=crossings,
        memory_reports=(progs[0].meter.snapshot(), progs[1].meter.snapshot()),
        memory_bits=(progs[0].meter.bits, progs[1].meter.bits),
        events=events,
    )


def verify_certificate(scenario: Scenario, agent_factory,
                       cert: CertifiedNeverMeet) -> bool:
    """Replay up to one full cycle past the certificate and confirm the global
    configuration recurs with no co-location anywhere inside it."""
    bounded = Scenario(scenario.tree, scenario.start_a, scenario.start_b,
                       scenario.delay, scenario.delayed,
                       horizon=cert.cycle_start + 2 * cert.cycle_length + 1)
    res = run(bounded, agent_factory, record_trace=True)
    if isinstance(res.outcome, Met):
        return False
    first = res.trace[cert.cycle_start - 1]
    again = res.trace[cert.cycle_start + cert.cycle_length - 1]
    return first[1:] == again[1:]


# ---------------------------------------------------------------------------
# scenario files, trace export


def parse_scenario(text: str, base_dir: str = ".") -> Scenario:
    """``scenario <tree-file> a=<id> b=<id> delay=<n> delayed=<a|b>
    horizon=<H|auto>``"""
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] != "scenario" or len(parts) < 4:
            raise EngineError(f"bad scenario line: {line!r}")
        tree_path = parts[1]
        if not os.path.isabs(tree_path):
            tree_path = os.path.join(base_dir, tree_path)
        with open(tree_path) as fh:
            tree = parse_tree(fh.read())
        kv = dict(tok.split("=", 1) for tok in parts[2:])
        horizon = kv.get("horizon", "auto")
        return Scenario(
            tree,
            start_a=int(kv["a"]),
            start_b=int(kv["b"]),
            delay=int(kv.get("delay", "0")),
            delayed=kv.get("delayed", "b"),
            horizon=None if horizon == "auto" else int(horizon),
        )
    raise EngineError("empty scenario file")


def format_scenario(tree_file: str, scenario: Scenario) -> str:
    h = "auto" if scenario.horizon is None else str(scenario.horizon)
    return (f"scenario {tree_file} a={scenario.start_a} b={scenario.start_b} "
            f"delay={scenario.delay} delayed={scenario.delayed} horizon={h}\n")


def export_trace(result: RunResult) -> str:
    if result.trace is None:
        raise EngineError("run was not traced")
    lines = ["round pos_a state_a pos_b state_b"]
    for r, pa, sa, pb, sb in result.trace:
        lines.append(f"{r} {pa} {sa} {pb} {sb}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# parity bookkeeping


def idle_flags(scenario: Scenario, result: RunResult):
    """Per-round idle markers derived from positions (a move always changes node)."""
    if result.positions is None:
        raise EngineError("run was not traced")
    flags = []
    prev = (scenario.start_a, scenario.start_b)
    for cur in result.positions:
        flags.append((cur[0] == prev[0], cur[1] == prev[1]))
        prev = cur
    return flags


def check_parity_lemma(scenario: Scenario, result: RunResult, t: int) -> bool:
    """Agents starting simultaneously at odd distance: whenever the idle-count
    difference over rounds 1..t is even, their distance at t is odd."""
    if scenario.delay != 0:
        raise EngineError("parity check expects simultaneous starts")
    d0 = scenario.tree.distance(scenario.start_a, scenario.start_b)
    if d0 % 2 == 0:
        raise EngineError("parity check expects odd initial distance")
    flags = idle_flags(scenario, result)
    if not 1 <= t <= len(flags):
        raise EngineError("t outside the traced range")
    q_a = sum(1 for f in flags[:t] if f[0])
    q_b = sum(1 for f in flags[:t] if f[1])
    if (q_a - q_b) % 2 != 0:
        return True
    pa, pb = result.positions[t - 1]
    if pa == pb:   # met: distance 0, lemma is about non-met rounds
        return True
    return scenario.tree.distance(pa, pb) % 2 == 1


# ---------------------------------------------------------------------------
# infinite colored line probe


@dataclass(frozen=True)
class LineStep:
    round: int
    state: int      # state fixing the action this round
    node: int       # position when acting
    action: int     # -1 or the port taken (0/1)
    node_after: int


def infinite_line_probe(automaton, max_steps: int) -> list[LineStep]:
    """Single agent on the infinite properly 2-edge-colored line: edge {q, q+1}
    carries port q mod 2 at both endpoints; start at node 0."""
    steps = []
    pos = 0
    state = automaton.initial
    entry = None
    for r in range(1, max_steps + 1):
        if entry is not None:
            state = automaton.resolve(state, entry, 2)
        lam = automaton.outputs[state]
        if lam < 0:
            steps.append(LineStep(r, state, pos, -1, pos))
            entry = -1
        else:
            p = lam % 2
            nxt = pos + 1 if p == pos % 2 else pos - 1
            steps.append(LineStep(r, state, pos, p, nxt))
            pos = nxt
            entry = p
    return steps
