"""Body-area channel attenuation tables and threshold-derived connectivity graphs.

CSV layout (one file per posture)::

    # posture: Walking
    navel,chest,head,upper arm,ankle,thigh,wrist
    navel,chest,30.6,0.5
    ...

The header lists the seven positions; each of the 21 data rows gives an
unordered pair with its mean path loss and standard deviation in dB.
"""
from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from importlib import resources
from typing import Mapping

from .graph import Graph, GraphError, build_graph

POSITIONS = ("navel", "chest", "head", "upper arm", "ankle", "thigh", "wrist")

POSTURE_FILES = {
    "walking": "posture1_walking.csv",
    "running": "posture2_running.csv",
    "walking_weakly": "posture3_walking_weakly.csv",
    "sitting_down": "posture4_sitting_down.csv",
    "lying_down": "posture5_lying_down.csv",
    "sleeping": "posture6_sleeping.csv",
    "jacket": "posture7_jacket.csv",
}

Pair = frozenset  # frozenset of two position names


class AttenuationError(ValueError):
    pass


class DisconnectedError(GraphError):
    def __init__(self, component: tuple[str, ...], threshold: float):
        self.component = component
        self.threshold = threshold
        super().__init__(
            f"graph disconnected at threshold {threshold:g} dB: "
            f"{{{', '.join(component)}}} is unreachable from the source"
        )


@dataclass(frozen=True)
class AttenuationTable:
    posture: str
    names: tuple[str, ...]
    mean: Mapping[Pair, float]
    stddev: Mapping[Pair, float]

    def mean_db(self, a: str, b: str) -> float:
        return self.mean[frozenset((a, b))]

    def stddev_db(self, a: str, b: str) -> float:
        return self.stddev[frozenset((a, b))]


def parse_attenuation_csv(text: str, posture: str | None = None) -> AttenuationTable:
    rows: list[tuple[int, list[str]]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped:
            continue
        if stripped.startswith("#"):
            key, _, value = stripped[1:].partition(":")
            if key.strip() == "posture" and posture is None:
                posture = value.strip()
            continue
        rows.append((lineno, next(csv.reader(io.StringIO(stripped)))))
    if not rows:
        raise AttenuationError("empty attenuation table")

    lineno, header = rows[0]
    header = [h.strip() for h in header]
    if sorted(header) != sorted(POSITIONS) or len(header) != len(POSITIONS):
        raise AttenuationError(f"line {lineno}: header must list the positions {', '.join(POSITIONS)}")

    mean: dict[Pair, float] = {}
    stddev: dict[Pair, float] = {}
    for lineno, row in rows[1:]:
        if len(row) != 4:
            raise AttenuationError(f"line {lineno}: expected 'nameA,nameB,mean,stddev'")
        a, b = row[0].strip(), row[1].strip()
        for name in (a, b):
            if name not in POSITIONS:
                raise AttenuationError(f"line {lineno}: unknown position {name!r}")
        if a == b:
            raise AttenuationError(f"line {lineno}: pair {a},{b} is not two distinct positions")
        pair = frozenset((a, b))
        if pair in mean:
            raise AttenuationError(f"line {lineno}: duplicate pair {a},{b}")
        try:
            m, s = float(row[2]), float(row[3])
        except ValueError:
            raise AttenuationError(f"line {lineno}: non-numeric value") from None
        if not (m > 0 and s > 0):
            raise AttenuationError(f"line {lineno}: values must be positive")
        mean[pair] = m
        stddev[pair] = s

    missing = [
        f"{a},{b}"
        for i, a in enumerate(POSITIONS)
        for b in POSITIONS[i + 1:]
        if frozenset((a, b)) not in mean
    ]
    if missing:
        raise AttenuationError(f"missing pairs: {'; '.join(missing)}")
    return AttenuationTable(posture or "unnamed", POSITIONS, mean, stddev)


def load_posture(name: str) -> AttenuationTable:
    """Load a bundled table by posture key (``walking``) or file name."""
    key = name.lower().replace(" ", "_").replace("-", "_")
    fname = POSTURE_FILES.get(key)
    if fname is None:
        candidates = [f for f in POSTURE_FILES.values() if f == name or f.removesuffix(".csv") == name]
        if not candidates:
            raise AttenuationError(f"unknown posture {name!r}; choose from {', '.join(POSTURE_FILES)}")
        fname = candidates[0]
    text = resources.files("labelcast").joinpath("data").joinpath(fname).read_text(encoding="utf-8")
    return parse_attenuation_csv(text)


def derive_graph(tbl: AttenuationTable, threshold_db: float, source: str) -> Graph:
    """Keep edge a-b iff its mean attenuation is strictly below ``threshold_db``."""
    if not threshold_db > 0:
        raise AttenuationError("threshold must be positive")
    if source not in POSITIONS:
        raise AttenuationError(f"unknown source position {source!r}")
    ids = {name: k for k, name in enumerate(POSITIONS)}
    edges = [
        (ids[a], ids[b])
        for i, a in enumerate(POSITIONS)
        for b in POSITIONS[i + 1:]
        if tbl.mean_db(a, b) < threshold_db
    ]
    adj: dict[int, set[int]] = {k: set() for k in ids.values()}
    for a, b in edges:
        adj[a].add(b)
        adj[b].add(a)
    seen = {ids[source]}
    stack = [ids[source]]
    while stack:
        for v in adj[stack.pop()]:
            if v not in seen:
                seen.add(v)
                stack.append(v)
    if len(seen) < len(POSITIONS):
        raise DisconnectedError(tuple(n for n in POSITIONS if ids[n] not in seen), threshold_db)
    return build_graph(len(POSITIONS), edges, ids[source])
