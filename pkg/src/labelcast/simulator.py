"""Synchronous round engine with the collision rule, traces and bound checks."""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import IO, Iterable, Mapping

from .graph import Graph, LevelView, compute_levels
from .labelling import LabelSet, Scheme, ack_chain_level
from .protocols import (
    AckTiming,
    Kind,
    Message,
    NodeState,
    Protocol,
    initial_state,
    step_function,
)

SCHEME_FOR = {Protocol.OACK: Scheme.OACK3, Protocol.LS: Scheme.LS1, Protocol.LSACK: Scheme.LSACK2}

ACK_ARRIVED = "arrived"
ACK_MISSING = "missing"
ACK_NOT_APPLICABLE = "not applicable (degenerate depth)"


class SimulationError(ValueError):
    pass


@dataclass(frozen=True)
class Collision:
    round: int
    node: int
    transmitters: tuple[int, ...]
    harmful: bool  # the node had not received the payload yet


@dataclass
class RoundEvent:
    round: int
    transmitters: dict[int, Message]
    receptions: dict[int, Message]


@dataclass
class Trace:
    protocol: Protocol
    graph: Graph = field(repr=False)
    payload: bytes = b"mu"
    rounds: list[RoundEvent] = field(default_factory=list)
    first_receipt: dict[int, int] = field(default_factory=dict)
    ack_arrival_round: int | None = None
    ack_status: str | None = None
    termination_round: int = -1
    collision_log: list[Collision] = field(default_factory=list)
    anomalies: list[tuple[int, str, int | None]] = field(default_factory=list)
    success: bool = False

    @property
    def node_count(self) -> int:
        return self.graph.node_count

    @property
    def source(self) -> int:
        return self.graph.source

    @property
    def informed_all(self) -> bool:
        return len(self.first_receipt) == self.node_count - 1


def _resolve(
    g: Graph, transmitters: Mapping[int, Message]
) -> tuple[dict[int, Message], list[tuple[int, tuple[int, ...]]]]:
    receptions: dict[int, Message] = {}
    collisions: list[tuple[int, tuple[int, ...]]] = []
    if not transmitters:
        return receptions, collisions
    heard: dict[int, list[int]] = {}
    for t in transmitters:
        for v in g.adjacency[t]:
            if v not in transmitters:
                heard.setdefault(v, []).append(t)
    for v in sorted(heard):
        senders = heard[v]
        if len(senders) == 1:
            receptions[v] = transmitters[senders[0]]
        else:
            collisions.append((v, tuple(sorted(senders))))
    return receptions, collisions


def resolve_round(g: Graph, transmitters: Mapping[int, Message]) -> dict[int, Message | None]:
    """What every node decodes in a round.

    A node decodes a message iff exactly one of its neighbours transmits and it
    is not transmitting itself; otherwise it decodes ``None``.
    """
    receptions, _ = _resolve(g, transmitters)
    return {u: receptions.get(u) for u in range(g.node_count)}


def run_simulation(
    g: Graph,
    labels: LabelSet,
    protocol: Protocol,
    payload: bytes = b"mu",
    max_rounds: int | None = None,
    quiescence: int = 3,
    ack_timing: AckTiming = AckTiming.HALFWAY,
) -> Trace:
    """Run ``protocol`` round by round until quiescent or ``max_rounds`` is reached.

    The run stops once every node holds the payload, no node has a scheduled
    transmission left, and ``quiescence`` consecutive rounds were silent.
    """
    if labels.scheme is not SCHEME_FOR[protocol]:
        raise SimulationError(
            f"protocol {protocol.value} needs {SCHEME_FOR[protocol].name} labels, got {labels.scheme.name}"
        )
    if len(labels) != g.node_count:
        raise SimulationError(f"{len(labels)} labels for {g.node_count} nodes")
    if max_rounds is None:
        max_rounds = 4 * g.node_count + 16
    if max_rounds < 2 * g.node_count:
        raise SimulationError(f"max_rounds must be at least 2n = {2 * g.node_count}")
    if not payload:
        raise SimulationError("payload must be non-empty")

    step = step_function(protocol, ack_timing)
    states: list[NodeState] = [
        initial_state(u, u == g.source, labels[u], payload) for u in range(g.node_count)
    ]
    trace = Trace(protocol, g, payload)
    inbox: dict[int, Message] = {}
    silent = 0
    for r in range(max_rounds):
        transmitters: dict[int, Message] = {}
        for u in range(g.node_count):
            states[u], out = step(states[u], r, inbox.get(u))
            if out is not None:
                transmitters[u] = out
        receptions, collisions = _resolve(g, transmitters)

        for v, senders in collisions:
            harmful = v != g.source and v not in trace.first_receipt
            trace.collision_log.append(Collision(r, v, senders, harmful))
            kinds = {transmitters[t].kind for t in senders}
            if Kind.PACK in kinds and Kind.DATA in kinds:
                trace.anomalies.append((r, "pack_data_collision", v))
        kinds_now = {m.kind for m in transmitters.values()}
        if protocol is Protocol.OACK and Kind.DATA in kinds_now and Kind.ACK in kinds_now:
            trace.anomalies.append((r, "data_ack_same_round", None))
        for v, msg in receptions.items():
            if msg.kind is Kind.DATA:
                if msg.payload != payload:
                    trace.anomalies.append((r, "payload_mismatch", v))
                if v != g.source and v not in trace.first_receipt:
                    trace.first_receipt[v] = r
            elif msg.kind is Kind.ACK and v == g.source and trace.ack_arrival_round is None:
                trace.ack_arrival_round = r

        trace.rounds.append(RoundEvent(r, transmitters, receptions))
        if transmitters:
            trace.termination_round = r
            silent = 0
        else:
            silent += 1
        inbox = receptions
        if (
            silent >= quiescence
            and trace.informed_all
            and all(st.idle(r + 1) for st in states)
        ):
            break

    trace.first_receipt = dict(sorted(trace.first_receipt.items()))
    trace.success = trace.informed_all
    if protocol is Protocol.LS:
        trace.ack_status = None
    elif protocol is Protocol.LSACK and ack_chain_level(compute_levels(g).eccentricity) is None:
        trace.ack_status = ACK_NOT_APPLICABLE
    else:
        trace.ack_status = ACK_ARRIVED if trace.ack_arrival_round is not None else ACK_MISSING
    return trace


# -- verification -----------------------------------------------------------------------

@dataclass(frozen=True)
class Expectations:
    """Which reading of the per-level timing to enforce for LS and LSACK.

    ``"window"``: a level-``i`` node first receives at ``2i-3`` or ``2i-2``, so
    the whole level is informed by ``2i-2``. ``"exact"``: first receipt at
    exactly ``2i-2``.
    """

    level_timing: str = "window"

    def __post_init__(self) -> None:
        if self.level_timing not in ("window", "exact"):
            raise ValueError(f"unknown level_timing {self.level_timing!r}")


@dataclass(frozen=True)
class Failure:
    check: str
    node: int | None
    round: int | None
    detail: str

    def __str__(self) -> str:
        where = []
        if self.node is not None:
            where.append(f"node {self.node}")
        if self.round is not None:
            where.append(f"round {self.round}")
        return f"{self.check} ({', '.join(where)}): {self.detail}" if where else f"{self.check}: {self.detail}"


@dataclass
class VerificationReport:
    protocol: Protocol
    checks: list[str] = field(default_factory=list)
    failures: list[Failure] = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, check: str) -> list[Failure]:
        return [f for f in self.failures if f.check == check]


def expected_ack_round(depth: int) -> int | None:
    """ACK arrival at the source: ``2(D-1)`` for odd ``D``, ``2D`` for even ``D``; None if degenerate."""
    if ack_chain_level(depth) is None:
        return None
    return 2 * (depth - 1) if depth % 2 else 2 * depth


def verify_trace(
    tr: Trace,
    lv: LevelView,
    protocol: Protocol | None = None,
    expectations: Expectations | None = None,
) -> VerificationReport:
    protocol = protocol or tr.protocol
    exp = expectations or Expectations()
    rep = VerificationReport(protocol)
    n = tr.node_count
    depth = lv.eccentricity

    def fail(check: str, node: int | None, rnd: int | None, detail: str) -> None:
        rep.failures.append(Failure(check, node, rnd, detail))

    rep.checks.append("broadcast_complete")
    for u in range(n):
        if u != tr.source and u not in tr.first_receipt:
            fail("broadcast_complete", u, None, "never received the payload")

    rep.checks.append("payload_integrity")
    for r, kind, node in tr.anomalies:
        if kind == "payload_mismatch":
            fail("payload_integrity", node, r, "received a payload different from the source's")

    rep.checks.append("single_sender_at_first_receipt")
    by_round = {ev.round: ev for ev in tr.rounds}
    for u, r in tr.first_receipt.items():
        ev = by_round[r]
        senders = [t for t in tr.graph.adjacency[u] if t in ev.transmitters and ev.transmitters[t].kind is Kind.DATA]
        if len(senders) != 1:
            fail("single_sender_at_first_receipt", u, r, f"{len(senders)} neighbours sent DATA")

    if protocol in (Protocol.LS, Protocol.LSACK):
        rep.checks.append("level_timing")
        for u, r in tr.first_receipt.items():
            i = lv.level[u]
            deadline = 2 * i - 2
            if exp.level_timing == "exact":
                good = r == deadline
            else:
                good = r == deadline or (i > 1 and r == deadline - 1)
            if not good:
                fail("level_timing", u, r, f"level {i}: first receipt {r}, deadline {deadline} ({exp.level_timing})")
        rep.checks.append("termination_bound")
        if tr.termination_round > 2 * depth:
            fail("termination_bound", None, tr.termination_round, f"last transmission after 2D = {2 * depth}")
        harmful = [c for c in tr.collision_log if c.harmful]
        if harmful:
            rep.warnings.append(f"{len(harmful)} collisions at not-yet-informed nodes")
        for r, kind, node in tr.anomalies:
            if kind == "pack_data_collision":
                rep.warnings.append(f"round {r}: pACK collided with DATA at node {node}")

    if protocol is Protocol.LSACK:
        rep.checks.append("ack_timing")
        want = expected_ack_round(depth)
        if want is None:
            if tr.ack_status != ACK_NOT_APPLICABLE or tr.ack_arrival_round is not None:
                fail("ack_timing", tr.source, tr.ack_arrival_round,
                     f"depth {depth} has no marked chain, expected '{ACK_NOT_APPLICABLE}'")
        elif tr.ack_arrival_round != want:
            fail("ack_timing", tr.source, tr.ack_arrival_round, f"expected ACK at round {want}")

    if protocol is Protocol.OACK:
        rep.checks.append("oack_broadcast_bound")
        for u, r in tr.first_receipt.items():
            if r > 2 * n - 3:
                fail("oack_broadcast_bound", u, r, f"informed after 2n-3 = {2 * n - 3}")
        rep.checks.append("oack_ack_bound")
        last = max(tr.first_receipt.values(), default=0)
        if n >= 2:
            if tr.ack_arrival_round is None:
                fail("oack_ack_bound", tr.source, None, "ACK never reached the source")
            elif tr.ack_arrival_round > last + n:
                fail("oack_ack_bound", tr.source, tr.ack_arrival_round,
                     f"ACK later than last receipt {last} + n = {last + n}")
        rep.checks.append("phase_separation")
        for r, kind, _ in tr.anomalies:
            if kind == "data_ack_same_round":
                fail("phase_separation", None, r, "DATA and ACK transmitted in the same round")
    return rep


# -- trace output ---------------------------------------------------------------------------

def trace_records(tr: Trace) -> Iterable[dict]:
    """One JSON-ready record per round, then a summary record."""
    collisions_by_round: dict[int, list[Collision]] = {}
    for c in tr.collision_log:
        collisions_by_round.setdefault(c.round, []).append(c)
    for ev in tr.rounds:
        yield {
            "round": ev.round,
            "transmitters": [[u, m.kind.value] for u, m in sorted(ev.transmitters.items())],
            "receptions": [[u, m.kind.value] for u, m in sorted(ev.receptions.items())],
            "collisions": [
                {"node": c.node, "transmitters": list(c.transmitters), "harmful": c.harmful}
                for c in collisions_by_round.get(ev.round, [])
            ],
        }
    yield {
        "summary": {
            "protocol": tr.protocol.value,
            "node_count": tr.node_count,
            "source": tr.source,
            "first_receipt": {str(u): r for u, r in tr.first_receipt.items()},
            "termination_round": tr.termination_round,
            "ack_arrival_round": tr.ack_arrival_round,
            "ack_status": tr.ack_status,
            "success": tr.success,
            "anomalies": [list(a) for a in tr.anomalies],
        }
    }


def write_trace(tr: Trace, fh: IO[str]) -> None:
    for rec in trace_records(tr):
        fh.write(json.dumps(rec, sort_keys=True) + "\n")
