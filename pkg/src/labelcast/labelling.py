"""Offline label computation for the three broadcast schemes.

``OACK3``  3-bit labels for arbitrary graphs (broadcast with acknowledgment).
``LS1``    1-bit labels for level-separable graphs.
``LSACK2`` 2-bit labels for level-separable graphs (broadcast with acknowledgment).

Labels are tuples of bits ``(X1, X2, X3)`` truncated to the scheme width. The
source is always labelled with zeros; it acts on its role, not its label.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .graph import Graph, LevelView
from .separability import Separation, check_separation


class LabelError(ValueError):
    pass


class Scheme(enum.Enum):
    OACK3 = 3
    LS1 = 1
    LSACK2 = 2

    @property
    def width(self) -> int:
        return self.value


@dataclass(frozen=True)
class LabelSet:
    scheme: Scheme
    bits: tuple[tuple[int, ...], ...]
    # OACK3: the ACK return path, generator first. LSACK2: the marked chain, deepest node first.
    marked: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        for u, b in enumerate(self.bits):
            if len(b) != self.scheme.width or any(x not in (0, 1) for x in b):
                raise LabelError(f"node {u}: label {b} is not {self.scheme.width} bits")

    def __getitem__(self, u: int) -> tuple[int, ...]:
        return self.bits[u]

    def __len__(self) -> int:
        return len(self.bits)

    def bit_string(self, u: int) -> str:
        return "".join(str(x) for x in self.bits[u])


def format_labels(labels: LabelSet) -> str:
    lines = [f"scheme {labels.scheme.name}"]
    lines += [f"{u} {labels.bit_string(u)}" for u in range(len(labels))]
    return "\n".join(lines) + "\n"


def parse_labels(text: str) -> LabelSet:
    scheme: Scheme | None = None
    entries: dict[int, tuple[int, ...]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if scheme is None:
            if len(parts) != 2 or parts[0] != "scheme" or parts[1] not in Scheme.__members__:
                raise LabelError(f"line {lineno}: expected 'scheme <OACK3|LS1|LSACK2>'")
            scheme = Scheme[parts[1]]
            continue
        if len(parts) != 2 or not parts[0].isdigit() or set(parts[1]) - {"0", "1"}:
            raise LabelError(f"line {lineno}: expected '<id> <bits>', got {line!r}")
        u = int(parts[0])
        if u in entries:
            raise LabelError(f"line {lineno}: node {u} labelled twice")
        if len(parts[1]) != scheme.width:
            raise LabelError(f"line {lineno}: {scheme.name} labels have {scheme.width} bits")
        entries[u] = tuple(int(c) for c in parts[1])
    if scheme is None:
        raise LabelError("missing scheme header")
    if sorted(entries) != list(range(len(entries))):
        raise LabelError("label ids must be exactly 0..n-1")
    return LabelSet(scheme, tuple(entries[u] for u in range(len(entries))))


# -- offline frontier / dominating-set schedule ---------------------------------------

@dataclass(frozen=True)
class BroadcastSchedule:
    """Offline run of the frontier/dominator broadcast.

    Step ``j`` transmits at round ``2j``; the source is informed at round -1.
    ``stays`` lists ``(round, sender, dominator)`` for every Stay the labels
    must trigger so that ``dominator`` transmits again two rounds later.
    """

    informed_round: dict[int, int]
    informer: dict[int, int]
    transmit_rounds: dict[int, list[int]]
    frontier_history: list[frozenset[int]]
    dominator_history: list[tuple[int, ...]]
    stays: list[tuple[int, int, int]] = field(default_factory=list)

    @property
    def last_informed_round(self) -> int:
        return max(self.informed_round.values())


def _dominating_set(g: Graph, candidates: list[int], frontier: frozenset[int]) -> tuple[int, ...]:
    """Inclusion-minimal dominating subset of ``candidates`` for ``frontier``.

    Greedy pass in ascending id (keep a node iff it covers something new), then
    a pruning pass in descending id removing members whose frontier neighbours
    are all covered by others. Every survivor has a private frontier neighbour.
    """
    covered: set[int] = set()
    chosen: list[int] = []
    for c in sorted(candidates):
        reach = frontier.intersection(g.adjacency[c])
        if reach - covered:
            chosen.append(c)
            covered |= reach
    if covered != frontier:
        raise AssertionError("candidates do not dominate the frontier")
    count = {f: 0 for f in frontier}
    for c in chosen:
        for f in frontier.intersection(g.adjacency[c]):
            count[f] += 1
    kept = set(chosen)
    for c in sorted(chosen, reverse=True):
        reach = frontier.intersection(g.adjacency[c])
        if all(count[f] > 1 for f in reach):
            kept.discard(c)
            for f in reach:
                count[f] -= 1
    return tuple(sorted(kept))


def compute_beta_schedule(g: Graph) -> BroadcastSchedule:
    """Simulate the offline schedule the 3-bit labels encode.

    Round 0: the source transmits. Before each later even round a dominating
    set of the frontier is chosen among nodes that may still transmit: those
    informed in the previous step (a transmission costs them X1=1) and the
    previous dominators (staying costs one Stay from a node they just informed).
    """
    s = g.source
    informed = {s: -1}
    informer: dict[int, int] = {}
    transmit_rounds: dict[int, list[int]] = {}
    frontier_history: list[frozenset[int]] = []
    dominator_history: list[tuple[int, ...]] = []
    stays: list[tuple[int, int, int]] = []

    prev_dom: tuple[int, ...] = ()
    newly: list[int] = []
    informed_by: dict[int, list[int]] = {}
    step = 0
    while True:
        frontier = frozenset(
            v for u in informed for v in g.adjacency[u] if v not in informed
        )
        if step > 0 and not frontier:
            break
        rnd = 2 * step
        if step == 0:
            dom: tuple[int, ...] = (s,)
        else:
            dom = _dominating_set(g, sorted(set(newly) | set(prev_dom)), frontier)
            for w in dom:
                if w in prev_dom:
                    # w needs a Stay from a node it informed last step
                    sender = min(informed_by[w])
                    stays.append((rnd - 1, sender, w))
        frontier_history.append(frontier)
        dominator_history.append(dom)
        for d in dom:
            transmit_rounds.setdefault(d, []).append(rnd)
        dom_set = set(dom)
        newly = []
        informed_by = {}
        for f in sorted(frontier):
            tx = [d for d in g.adjacency[f] if d in dom_set]
            if len(tx) == 1:
                newly.append(f)
                informer[f] = tx[0]
                informed_by.setdefault(tx[0], []).append(f)
        for f in newly:
            informed[f] = rnd
        if step > 0 and not newly:
            raise AssertionError(f"step {step} informed no node")
        prev_dom = dom
        step += 1
        if len(informed) == g.node_count:
            break
    return BroadcastSchedule(
        informed_round=dict(sorted(informed.items())),
        informer=informer,
        transmit_rounds=transmit_rounds,
        frontier_history=frontier_history,
        dominator_history=dominator_history,
        stays=stays,
    )


def _shortcut(g: Graph, chain: list[int]) -> list[int]:
    """Chordless subsequence of ``chain`` with the same endpoints.

    From each node jump to the furthest later chain node it is adjacent to.
    """
    pos = {u: k for k, u in enumerate(chain)}
    out = [chain[0]]
    k = 0
    while k < len(chain) - 1:
        k = max(pos[v] for v in g.adjacency[chain[k]] if v in pos and pos[v] > k)
        out.append(chain[k])
    return out


def label_oack(g: Graph, schedule: BroadcastSchedule | None = None) -> LabelSet:
    """3-bit labels: X1 relay, X2 Stay sender, X3 on the ACK return path.

    The ACK generator is the smallest-id node among the last informed; it
    alone carries ``001``. The return path follows each node's informer back to
    a neighbour of the source, then drops chords so that a relayed ACK reaches
    only the next node of the path.
    """
    if g.node_count < 2:
        raise LabelError("ACK labelling needs at least two nodes")
    sched = schedule or compute_beta_schedule(g)
    x1 = [0] * g.node_count
    x2 = [0] * g.node_count
    x3 = [0] * g.node_count
    for d, rounds in sched.transmit_rounds.items():
        if d != g.source:
            x1[d] = 1
    for _, sender, _ in sched.stays:
        x2[sender] = 1

    last = sched.last_informed_round
    generator = min(u for u, r in sched.informed_round.items() if r == last)
    chain = [generator]
    while sched.informer[chain[-1]] != g.source:
        chain.append(sched.informer[chain[-1]])
    path = _shortcut(g, chain)
    for u in path:
        x3[u] = 1
    bits = tuple((x1[u], x2[u], x3[u]) for u in range(g.node_count))
    if bits[generator] != (0, 0, 1) or sum(1 for b in bits if b == (0, 0, 1)) != 1:
        raise AssertionError("ACK generator label is not unique 001")
    return LabelSet(Scheme.OACK3, bits, tuple(path))


def _ls_bits(lv: LevelView, sep: Separation) -> list[int]:
    verdict = check_separation(lv, sep)
    if not verdict:
        raise LabelError(
            f"not a level separation: node {verdict.witness} at level {verdict.level}"
        )
    x1 = [0] * len(lv.level)
    for i, (first, _) in sep.parts.items():
        for u in first:
            x1[u] = 1
    return x1


def label_ls(lv: LevelView, sep: Separation) -> LabelSet:
    """X1 = 1 exactly on the first part of each level."""
    x1 = _ls_bits(lv, sep)
    return LabelSet(Scheme.LS1, tuple((b,) for b in x1))


def ack_chain_level(depth: int) -> int | None:
    """Level of the node that originates the half-way ACK, or None when the depth is too small."""
    level = depth // 2 - 1
    return level if level >= 1 else None


def label_ls_ack(lv: LevelView, sep: Separation) -> LabelSet:
    """X1 as in ``label_ls``; X2 on a parent chain from level ``D//2 - 1`` up to level 1.

    The chain starts at the smallest-id node of that level and climbs through
    smallest-id parents. For depths below 4 there is no such level; every X2
    is 0 and ``marked`` is empty, so no ACK is ever produced.
    """
    x1 = _ls_bits(lv, sep)
    x2 = [0] * len(x1)
    chain: list[int] = []
    top = ack_chain_level(lv.eccentricity)
    if top is not None:
        u = min(lv.buckets[top])
        while lv.level[u] > 0:
            chain.append(u)
            u = min(lv.parents[u])
        for u in chain:
            x2[u] = 1
    return LabelSet(Scheme.LSACK2, tuple((a, b) for a, b in zip(x1, x2)), tuple(chain))
