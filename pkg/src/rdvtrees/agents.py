"""Mobile agents: finite automata, structured programs, and memory metering.

An agent acts in rounds.  Its very first action is determined by the initial
state alone; afterwards each round it reads an observation (entry, degree) --
entry is the port through which the current node was entered, or -1 after a
null move -- transitions, and the new state fixes the action: -1 to stay, or
a port intent p meaning "leave through port p mod degree".
"""
from __future__ import annotations

import math
import random
from dataclasses import dataclass, field


class AutomatonError(ValueError):
    """Malformed or non-total automaton description."""


class MemoryMeter:
    """Tracks the maximum value of every declared persistent counter.

    Reported footprint: sum over counters of ceil(log2(max + 1)) bits.
    """

    def __init__(self):
        self.counters: dict[str, int] = {}

    def observe(self, name: str, value: int) -> None:
        if value < 0:
            raise ValueError(f"counter {name} got negative value {value}")
        if value > self.counters.get(name, 0):
            self.counters[name] = value

    def charge_bits(self, name: str, bits: int) -> None:
        self.observe(name, (1 << bits) - 1 if bits > 0 else 0)

    @property
    def bits(self) -> int:
        return sum(v.bit_length() for v in self.counters.values())

    def snapshot(self) -> dict[str, int]:
        return dict(self.counters)


STAY = -1


@dataclass(frozen=True)
class AgentAutomaton:
    """Finite-state agent A = (S, pi, lambda, s0) with states 0..n_states-1.

    Transition rules are (state, entry, degree, next) rows; entry or degree
    may be None as a wildcard.  Later rows override earlier ones.
    """

    n_states: int
    initial: int
    outputs: tuple[int, ...]
    rules: tuple[tuple[int, int | None, int | None, int], ...]

    def resolve(self, s: int, entry: int, degree: int) -> int:
        hit = None
        for rs, re, rd, nxt in self.rules:
            if rs != s:
                continue
            if re is not None and re != entry:
                continue
            if rd is not None and rd != degree:
                continue
            hit = nxt
        if hit is None:
            raise AutomatonError(
                f"no transition for state {s}, entry {entry}, degree {degree}")
        return hit

    def validate_total(self, max_degree: int) -> None:
        """Totality over all observations on trees of degree <= max_degree.
        Raised at configuration time, never mid-run."""
        for s in range(self.n_states):
            for d in range(1, max_degree + 1):
                for e in [-1] + list(range(d)):
                    self.resolve(s, e, d)

    @property
    def memory_bits(self) -> int:
        return (self.n_states - 1).bit_length()

    def transition_table(self, max_degree: int) -> dict:
        table = {}
        for s in range(self.n_states):
            for d in range(1, max_degree + 1):
                for e in [-1] + list(range(d)):
                    table[(s, e, d)] = self.resolve(s, e, d)
        return table


def parse_automaton(text: str) -> AgentAutomaton:
    """Parse the automaton file format: ``states K``, ``initial s``,
    ``out s lambda``, ``trans s entry|* deg|* s'`` (later rows override)."""
    n_states = None
    initial = None
    outputs = {}
    rules = []

    def wild(tok):
        return None if tok == "*" else int(tok)

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "states":
                n_states = int(parts[1])
            elif parts[0] == "initial":
                initial = int(parts[1])
            elif parts[0] == "out":
                outputs[int(parts[1])] = int(parts[2])
            elif parts[0] == "trans":
                rules.append((int(parts[1]), wild(parts[2]), wild(parts[3]),
                              int(parts[4])))
            else:
                raise AutomatonError(f"line {lineno}: unknown directive {parts[0]!r}")
        except (IndexError, ValueError):
            raise AutomatonError(f"line {lineno}: malformed line {line!r}") from None
    if n_states is None or initial is None:
        raise AutomatonError("missing states/initial header")
    if not 0 <= initial < n_states:
        raise AutomatonError(f"initial state {initial} out of range")
    if sorted(outputs) != list(range(n_states)):
        raise AutomatonError("missing out row for some state")
    for rs, _, _, nxt in rules:
        if not (0 <= rs < n_states and 0 <= nxt < n_states):
            raise AutomatonError(f"rule references unknown state: {(rs, nxt)}")
    return AgentAutomaton(n_states, initial,
                          tuple(outputs[s] for s in range(n_states)),
                          tuple(rules))


def load_automaton(path) -> AgentAutomaton:
    with open(path) as fh:
        return parse_automaton(fh.read())


def format_automaton(aut: AgentAutomaton) -> str:
    lines = [f"states {aut.n_states}", f"initial {aut.initial}"]
    for s, lam in enumerate(aut.outputs):
        lines.append(f"out {s} {lam}")
    for rs, re, rd, nxt in aut.rules:
        e = "*" if re is None else re
        d = "*" if rd is None else rd
        lines.append(f"trans {rs} {e} {d} {nxt}")
    return "\n".join(lines) + "\n"


def basic_walk_automaton(max_degree: int) -> AgentAutomaton:
    """States 0..max_degree-1; state p departs through port p mod degree and
    entering by port i switches to state (i+1) mod degree, i.e. the basic walk."""
    rules = []
    for d in range(1, max_degree + 1):
        for e in range(d):
            rules.append((None, e, d, (e + 1) % d))
    # expand the state wildcard (rule rows carry explicit states)
    expanded = []
    for s in range(max_degree):
        for _, e, d, nxt in rules:
            expanded.append((s, e, d, nxt))
        expanded.append((s, -1, None, s))
    return AgentAutomaton(max_degree, 0, tuple(range(max_degree)),
                          tuple(expanded))


def random_automaton(bits: int, rng: random.Random,
                     line_only: bool = True) -> AgentAutomaton:
    """Seeded random agent with 2**bits states, total on degrees 1 and 2
    (and, via a wildcard fallback, everywhere else)."""
    k = 1 << bits
    outputs = tuple(rng.choice([-1, 0, 1]) for _ in range(k))
    rules = []
    for s in range(k):
        rules.append((s, None, None, rng.randrange(k)))
        for d in (1, 2):
            for e in [-1] + list(range(d)):
                rules.append((s, e, d, rng.randrange(k)))
    return AgentAutomaton(k, rng.randrange(k), outputs, tuple(rules))


# ---------------------------------------------------------------------------
# programs


class AgentProgram:
    """Round-by-round interface shared by automata and structured programs.

    act(entry, degree) returns -1 (stay), a port intent, or ("idle", k) to
    stay k rounds in a row.  entry is None exactly once, at the first call.
    """

    finite_state = False

    def __init__(self):
        self.meter = MemoryMeter()
        self.events: list[tuple] = []

    def bind_position_probe(self, fn) -> None:
        """Engine hook for oracle-backed programs; default: ignored."""

    def act(self, entry, degree):
        raise NotImplementedError

    def state_label(self) -> str:
        raise NotImplementedError

    def config(self):
        raise NotImplementedError


class AutomatonProgram(AgentProgram):
    finite_state = True

    def __init__(self, automaton: AgentAutomaton, max_degree: int | None = None):
        super().__init__()
        self.automaton = automaton
        self.state = automaton.initial
        self.started = False
        self._outputs = automaton.outputs
        self._table: dict = {}
        if max_degree is not None:
            automaton.validate_total(max_degree)
            self._table = automaton.transition_table(max_degree)
        self.meter.charge_bits("state", automaton.memory_bits)

    def act(self, entry, degree):
        if not self.started:
            self.started = True
            return self._outputs[self.state]
        key = (self.state, entry, degree)
        nxt = self._table.get(key)
        if nxt is None:
            nxt = self.automaton.resolve(self.state, entry, degree)
            self._table[key] = nxt
        self.state = nxt
        return self._outputs[nxt]

    def state_label(self) -> str:
        return str(self.state)

    def config(self):
        return (self.state, self.started)


def reduce_for_colored_line(automaton: AgentAutomaton) -> dict[int, int]:
    """Successor map on states for an agent walking a properly 2-edge-colored
    line (every node degree 2, entry port equals the last departure port, -1
    after a null move)."""
    out = {}
    for s in range(automaton.n_states):
        lam = automaton.outputs[s]
        entry = -1 if lam < 0 else lam % 2
        out[s] = automaton.resolve(s, entry, 2)
    return out


def state_cycle(succ: dict[int, int], start: int):
    """Tail and cycle of the iteration of a functional map from start."""
    seen = {}
    seq = []
    s = start
    while s not in seen:
        seen[s] = len(seq)
        seq.append(s)
        s = succ[s]
    i = seen[s]
    return seq[:i], seq[i:]


def all_circuits(succ: dict[int, int]) -> tuple[tuple[int, ...], ...]:
    """Every distinct circuit of the functional graph (one per component)."""
    found = []
    for s in succ:
        _, cyc = state_cycle(succ, s)
        if not any(set(cyc) == set(c) for c in found):
            found.append(tuple(cyc))
    return tuple(found)


def circuits_lcm(circuits) -> int:
    g = 1
    for c in circuits:
        g = g * len(c) // math.gcd(g, len(c))
    return g
