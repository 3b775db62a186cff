"""The rendezvous program for two identical agents on a port-labeled tree.

Stage 1 walks to a landmark node of degree != 2 and runs the tree survey
(oracle-backed) there.  Stage 2 either converges on a distinguished node
(central node, or the canonical extremity of the central edge when the
contraction is asymmetric), or -- in the hard symmetric case -- resynchronizes
both agents, moves them to the far extremity of the central edge, and runs the
staggered prime-speed pursuit along the rendezvous path until they collide.

Also here: the standalone prime-speed pursuit for blind agents on a path.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .agents import AgentProgram
from .symmetry import PORT_PRESERVING, half_code, is_symmetric
from .trees import PortLabeledTree, WalkPosition, basic_walk_step, center, contract

CENTRAL_NODE = "central-node"
CENTRAL_EDGE_ASYMMETRIC = "central-edge-asymmetric"
CENTRAL_EDGE_SYMMETRIC = "central-edge-symmetric"


@dataclass(frozen=True)
class ExploReport:
    nu: int                   # nodes of the contraction
    leaves: int
    verdict: str
    steps_to_target: int      # contraction-step count of the port-0 walk
    central_port: int | None  # port toward the central edge (edge verdicts)


def explo_oracle(tree: PortLabeledTree, start: int) -> ExploReport:
    """Ground-truth stand-in for the little-memory tree survey: node count of
    the contraction, symmetry verdict, and the walk length to the target node.
    The caller's meter should be charged ~log(nu) bits for it."""
    if tree.degree(start) == 2:
        raise ValueError("survey must start at a node of degree != 2")
    view = contract(tree)
    tp = view.contracted
    nu = view.nu
    start_c = view.to_contracted(start)
    info = center(tp)
    if info.kind == "node":
        verdict = CENTRAL_NODE
        target = info.nodes[0]
        cport = None
    else:
        x, y = info.nodes
        if is_symmetric(tp):
            verdict = CENTRAL_EDGE_SYMMETRIC
            fx, fy = _first_visits(tp, start_c, (x, y))
            target = x if fx > fy else y
        else:
            verdict = CENTRAL_EDGE_ASYMMETRIC
            cx = half_code(tp, x, y, mode=PORT_PRESERVING, root_edge_port=True)
            cy = half_code(tp, y, x, mode=PORT_PRESERVING, root_edge_port=True)
            target = x if cx < cy else y
        other = y if target == x else x
        cport = next(p for p, w in enumerate(tp.neighbors[target]) if w == other)
    steps = _first_visits(tp, start_c, (target,))[0]
    return ExploReport(nu=nu, leaves=tree.leaf_count, verdict=verdict,
                       steps_to_target=steps, central_port=cport)


def _first_visits(tree, start, targets):
    """First-visit step counts of the port-0 basic walk from start (step 0 is
    the start itself); the walk closes after 2(n-1) steps, visiting everything."""
    firsts = {start: 0}
    pos = WalkPosition(start, None)
    for step in range(1, 2 * (tree.n - 1) + 1):
        pos = basic_walk_step(tree, pos)
        firsts.setdefault(pos.node, step)
    return tuple(firsts[t] for t in targets)


# ---------------------------------------------------------------------------
# primes


def next_prime(p: int) -> int:
    q = p + 1
    while True:
        if q >= 2 and all(q % f for f in range(2, int(math.isqrt(q)) + 1)):
            return q
        q += 1


def first_primes(count: int) -> list[int]:
    out, p = [], 1
    while len(out) < count:
        p = next_prime(p)
        out.append(p)
    return out


def prime_index_bound(m: int) -> int:
    """Largest j such that the product of the first j primes is at most m^2."""
    j, prod, p = 0, 1, 1
    while True:
        p = next_prime(p)
        if prod * p > m * m:
            return j
        prod *= p
        j += 1


# ---------------------------------------------------------------------------
# the full program


class RendezvousProgram(AgentProgram):
    """Structured agent; one instance per run.  The tree is used only through
    the survey oracle -- every walking decision reads the (entry, degree)
    observation stream."""

    def __init__(self, tree: PortLabeledTree):
        super().__init__()
        self._tree = tree
        self._pos = None
        self._entry = None
        self._degree = None
        self._phase = "start"
        self._gen = self._main()

    def bind_position_probe(self, fn):
        self._pos = fn

    def act(self, entry, degree):
        self._entry = entry
        self._degree = degree
        try:
            return next(self._gen)
        except StopIteration:
            return -1

    def state_label(self):
        return self._phase

    # -- walking primitives ------------------------------------------------

    def _move(self, port, speed):
        if speed > 1:
            self.meter.observe("idle-countdown", speed - 1)
            yield ("idle", speed - 1)
        yield port

    def _bw(self, j, e=None, speed=1):
        """Forward walk (port 0 first, then entry+1 mod d) until j nodes of
        degree != 2 have been visited; returns the final entry port."""
        count = 0
        while count < j:
            d = self._degree
            port = 0 if e is None else (e + 1) % d
            yield from self._move(port, speed)
            e = self._entry
            if self._degree != 2:
                count += 1
                self.meter.observe("walk-count", count)
        return e

    def _cbw(self, j, e, speed=1):
        """Reverse walk: first depart by the port we entered through, then
        entry-1 mod d; counts degree-!=2 visits like the forward walk."""
        count = 0
        port = e
        while count < j:
            yield from self._move(port, speed)
            e = self._entry
            if self._degree != 2:
                count += 1
                self.meter.observe("walk-count", count)
            port = (e - 1) % self._degree
        return e

    def _cross(self, speed=1):
        """Traverse the central path to the opposite extremity."""
        yield from self._move(self._cport, speed)
        while self._degree == 2:
            yield from self._move((self._entry + 1) % 2, speed)

    # -- composite phases --------------------------------------------------

    def _traverse_path(self, speed):
        """One end-to-end trip of the rendezvous path; lands at the opposite
        extremity of the central path (the instruction list is its own
        reverse, so it reads the same from either end)."""
        two = 2 * (self._nu - 1)
        reps = 5 * self._leaves
        for k in range(reps + 1):
            self.meter.observe("rep", k)
            yield from self._bw(two, speed=speed)
            yield from self._cross(speed)
            yield from self._cbw(two, self._entry, speed=speed)
            if k < reps:
                yield from self._cross(speed)

    def _prime(self, i):
        p = 1
        for idx in range(1, i + 1):
            p = next_prime(p)
            self.meter.observe("prime-index", idx)
            self.meter.observe("prime-value", p)
            yield from self._traverse_path(p)
            yield from self._traverse_path(p)

    def _main(self):
        # Stage 1: reach a degree-!=2 landmark, survey the tree there.
        self._phase = "to-landmark"
        if self._degree == 2:
            e = None
            while self._degree != 1:
                port = 0 if e is None else (e + 1) % self._degree
                yield port
                e = self._entry
        self.events.append(("vhat",))
        report = explo_oracle(self._tree, self._pos())
        self._nu = report.nu
        self._leaves = report.leaves
        self._cport = report.central_port
        self.meter.charge_bits("survey", 3 * max(1, (report.nu + 1).bit_length()))
        self.meter.observe("nu", report.nu)
        self.meter.observe("leaves", report.leaves)
        self.meter.observe("steps-to-target", report.steps_to_target)
        if self._cport is not None:
            self.meter.observe("central-port", self._cport)

        # Stand-in for the survey's walk: a full closed tour from the landmark
        # (2(n-1) rounds from any start, so both agents spend equal time here).
        self._phase = "survey"
        yield from self._bw(2 * (self._nu - 1))

        if report.verdict != CENTRAL_EDGE_SYMMETRIC:
            # Converge on the distinguished node and stay put.
            self._phase = "to-target"
            if report.steps_to_target:
                yield from self._bw(report.steps_to_target)
            self._phase = "wait"
            self.events.append(("waiting",))
            while True:
                yield ("idle", 1 << 20)

        # Symmetric case, part 1: resynchronization.  Closed tour from the
        # landmark, pausing at every degree-!=2 node except the last for a
        # nested closed tour (so both agents do the same work in a different
        # order).
        self._phase = "synchro"
        two = 2 * (self._nu - 1)
        e = None
        for k in range(two):
            self.meter.observe("synchro-leg", k + 1)
            e = yield from self._bw(1, e)
            if k < two - 1:
                self.meter.observe("saved-entry", e)
                yield from self._bw(two)
        self.events.append(("synchro-done",))

        # Part 2: to the far extremity of the central edge, then the staggered
        # pursuit loops.
        self._phase = "to-far"
        yield from self._bw(report.steps_to_target)
        self.events.append(("at-far",))
        self._phase = "pursuit"
        i = 0
        while True:
            i += 1
            self.meter.observe("outer-i", i)
            self.events.append(("outer", i))
            for j in range(two + 1):
                self.meter.observe("inner-j", j)
                if j:
                    e = yield from self._bw(j)
                    yield from self._cbw(j, e)
                self.events.append(("prime", i, j))
                yield from self._prime(i)
            yield from self._cross()
            for j in range(two + 1):
                self.meter.observe("inner-j", j)
                if j:
                    e = yield from self._bw(j)
                    yield from self._cbw(j, e)
            yield from self._cross()


def rendezvous_path_edges(tree: PortLabeledTree) -> int:
    """Edge count of one end-to-end trip of the rendezvous path."""
    view = contract(tree)
    info = center(view.contracted)
    if info.kind != "edge":
        raise ValueError("rendezvous path needs a central edge")
    u, v = (view.node_map[w] for w in info.nodes)
    c_len = tree.distance(u, v)
    closed = 2 * (tree.n - 1)
    group = 2 * closed + 2 * c_len
    return 5 * tree.leaf_count * group + 2 * closed + c_len


def protocol_horizon(tree: PortLabeledTree) -> int:
    """Round bound by which the program meets whenever it can.  Sums the phase
    durations through one pursuit iteration past the prime-product bound for
    the rendezvous path; coarse but computable up front."""
    n = tree.n
    view = contract(tree)
    nu = view.nu
    closed = 2 * (n - 1)
    stage1 = closed + closed            # landmark walk + survey tour
    info = center(view.contracted)
    if info.kind != "edge" or not is_symmetric(view.contracted):
        return 2 * (stage1 + closed) + 64
    path_edges = rendezvous_path_edges(tree)
    u, v = (view.node_map[w] for w in info.nodes)
    c_len = tree.distance(u, v)
    i_star = prime_index_bound(path_edges + 1) + 1
    synchro = closed * 2 * (nu - 1) + closed
    total = stage1 + synchro + closed   # through arrival at the far extremity
    primes = first_primes(i_star)
    inner = 2 * (nu - 1) + 1
    for i in range(1, i_star + 1):
        prime_rounds = 2 * path_edges * sum(primes[:i])
        total += inner * (2 * closed + prime_rounds)   # first inner loop
        total += inner * 2 * closed + 2 * c_len        # reset sweep
    return total + 64


# ---------------------------------------------------------------------------
# blind pursuit on a path, simulated directly


@dataclass(frozen=True)
class PrimeLineResult:
    met: bool
    round: int | None         # meeting round (1-based), when met
    node: int | None
    prime_index: int | None   # index of the prime in force at the meeting
    feasible: bool            # m odd, or the start offsets differ


@dataclass(frozen=True)
class _Leg:
    t0: int      # round after which the leg begins (first move at t0+speed)
    x0: int
    direction: int
    speed: int
    length: int  # edges

    @property
    def t1(self):
        return self.t0 + self.speed * self.length

    def pos(self, t):
        k = min((t - self.t0) // self.speed, self.length)
        return self.x0 + self.direction * k


def _legs(m, start, direction, max_index):
    legs = []
    first = (m - start) if direction > 0 else (start - 1)
    t = first
    x = m if direction > 0 else 1
    if first:
        legs.append(_Leg(0, start, direction, 1, first))
    d = -direction if first else (1 if start == 1 else -1)
    for p in first_primes(max_index):
        for _ in range(2):
            legs.append(_Leg(t, x, d, p, m - 1))
            t += p * (m - 1)
            x += d * (m - 1)
            d = -d
    return legs


def _meet_on_legs(a: _Leg, b: _Leg):
    lo = max(a.t0, b.t0)
    hi = min(a.t1, b.t1)
    if lo > hi:
        return None
    best = None
    k_lo = max(0, (lo - a.t0) // a.speed)
    k_hi = min(a.length, (hi - a.t0) // a.speed)
    for k in range(k_lo, k_hi + 1):
        xa = a.x0 + a.direction * k
        kb = (xa - b.x0) * b.direction
        if not 0 <= kb <= b.length:
            continue
        # rounds where both agents sit on these nodes simultaneously
        wa_lo, wa_hi = a.t0 + k * a.speed, a.t0 + (k + 1) * a.speed - 1
        if k == a.length:
            wa_hi = hi
        wb_lo, wb_hi = b.t0 + kb * b.speed, b.t0 + (kb + 1) * b.speed - 1
        if kb == b.length:
            wb_hi = hi
        t = max(wa_lo, wb_lo, lo)
        if t <= min(wa_hi, wb_hi, hi):
            if best is None or t < best[0]:
                best = (t, xa)
    return best


def prime_line(m, a, b, direction_a, direction_b,
               max_index: int | None = None) -> PrimeLineResult:
    """Two blind agents at nodes a < b of an m-node path run the prime-speed
    pursuit: full-speed to an extremity, then two end-to-end trips per prime
    at speed 1/p.  Simulated arithmetically, leg against leg."""
    if not 1 <= a < b <= m:
        raise ValueError("need 1 <= a < b <= m")
    feasible = (m % 2 == 1) or (a - 1 != m - b)
    if max_index is None:
        max_index = prime_index_bound(m) + 1
    legs_a = _legs(m, a, direction_a, max_index)
    legs_b = _legs(m, b, direction_b, max_index)
    best = None
    for la in legs_a:
        for lb in legs_b:
            hit = _meet_on_legs(la, lb)
            if hit and (best is None or hit[0] < best[0]):
                best = hit
        if best is not None and best[0] <= la.t1:
            break
    if best is None:
        return PrimeLineResult(False, None, None, None, feasible)
    t, node = best
    idx = _prime_index_at(m, a, direction_a, t, max_index)
    return PrimeLineResult(True, t, node, idx, feasible)


def _prime_index_at(m, start, direction, t, max_index):
    first = (m - start) if direction > 0 else (start - 1)
    if t <= first:
        return 0
    t -= first
    for idx, p in enumerate(first_primes(max_index), start=1):
        span = 2 * p * (m - 1)
        if t <= span:
            return idx
        t -= span
    return max_index
