"""Batch runner: draw random trees and start pairs, run the rendezvous
protocol on each, and check the outcome against the symmetrizability predicate.

A start pair that is not perfectly symmetrizable must meet.  A perfectly
symmetrizable pair can still meet under the labeling it was drawn with (the
guarantee is about the adversary's best labeling), so those cases are checked
by re-labeling the tree with a symmetrizing witness and certifying that two
protocol agents never meet on it.
"""
from __future__ import annotations

import hashlib
import random
import time
from dataclasses import dataclass, field

from .engine import CertifiedNeverMeet, Met, Scenario, run
from .generate import gen_random_tree, feasible_counts
from .protocol import RendezvousProgram, protocol_horizon
from .symmetry import certify_by_symmetry, perfectly_symmetrizable, symmetrize_witness
from .trees import PortLabeledTree, format_tree


@dataclass(frozen=True)
class CorpusSpec:
    seed: int = 0
    count: int = 20
    n_range: tuple[int, int] = (6, 40)
    leaf_range: tuple[int, int] = (2, 8)
    degree_cap: int = 6
    horizon_cap: int | None = None


@dataclass
class CaseRecord:
    digest: str
    n: int
    leaves: int
    start_a: int
    start_b: int
    symmetrizable: bool
    outcome: str
    meeting_round: int | None
    memory_bits: tuple[int, int] | None
    ok: bool
    detail: str
    wall_clock: float


@dataclass
class RunReport:
    spec: CorpusSpec
    records: list[CaseRecord] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return all(r.ok for r in self.records)

    def summary(self) -> str:
        met = sum(1 for r in self.records if r.outcome == "met")
        sym = sum(1 for r in self.records if r.symmetrizable)
        bad = [r for r in self.records if not r.ok]
        lines = [f"cases {len(self.records)}  met {met}  symmetrizable {sym}"
                 f"  failures {len(bad)}"]
        for r in bad:
            lines.append(f"  FAIL {r.digest[:12]} n={r.n} "
                         f"starts=({r.start_a},{r.start_b}): {r.detail}")
        return "\n".join(lines)


def scenario_digest(tree: PortLabeledTree, u: int, v: int) -> str:
    blob = format_tree(tree) + f"\n{u} {v}\n"
    return hashlib.sha256(blob.encode()).hexdigest()


def draw_case(spec: CorpusSpec, rng: random.Random):
    while True:
        n = rng.randint(*spec.n_range)
        lo, hi = spec.leaf_range
        leaves = rng.randint(lo, min(hi, max(2, n - 1)))
        if n == 2:
            leaves = 2
        if feasible_counts(n, leaves, spec.degree_cap):
            break
    tree = gen_random_tree(n, leaves, spec.degree_cap, rng=rng)
    u = rng.randrange(n)
    v = rng.randrange(n)
    while v == u:
        v = rng.randrange(n)
    return tree, u, v


def protocol_case(tree: PortLabeledTree, u: int, v: int,
                  horizon_cap: int | None = None) -> CaseRecord:
    t0 = time.perf_counter()
    digest = scenario_digest(tree, u, v)
    n = len(tree.neighbors)
    sym = perfectly_symmetrizable(tree, u, v)
    ok = True
    detail = ""
    outcome = "skipped"
    meeting = None
    bits = None
    if sym:
        witness = symmetrize_witness(tree, u, v)
        cert = witness is not None and certify_by_symmetry(witness, u, v)
        ok = bool(cert)
        outcome = "never-meet-by-symmetry" if ok else "witness-failed"
        if not ok:
            detail = "no symmetrizing witness certificate"
    else:
        horizon = protocol_horizon(tree)
        if horizon_cap is not None:
            horizon = min(horizon, horizon_cap)
        scenario = Scenario(tree, u, v, 0, "b", horizon=horizon)
        result = run(scenario, lambda: RendezvousProgram(tree))
        bits = result.memory_bits
        if isinstance(result.outcome, Met):
            outcome = "met"
            meeting = result.outcome.round
        else:
            outcome = result.outcome.kind
            ok = False
            detail = f"expected meeting within {horizon} rounds"
    return CaseRecord(digest=digest, n=n, leaves=tree.leaf_count,
                      start_a=u, start_b=v, symmetrizable=sym,
                      outcome=outcome, meeting_round=meeting,
                      memory_bits=bits, ok=ok, detail=detail,
                      wall_clock=time.perf_counter() - t0)


def corpus_run(spec: CorpusSpec) -> RunReport:
    rng = random.Random(spec.seed)
    report = RunReport(spec)
    for _ in range(spec.count):
        tree, u, v = draw_case(spec, rng)
        report.records.append(protocol_case(tree, u, v, spec.horizon_cap))
    report.records.sort(key=lambda r: r.digest)
    return report
