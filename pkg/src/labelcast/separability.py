"""Level separations: checking a given split, and searching for one level by level."""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from . import kernels
from .graph import LevelView

DEFAULT_LEVEL_CAP = 24


class MalformedSeparation(ValueError):
    """The parts do not partition the levels they claim to cover."""


class SearchInfeasible(RuntimeError):
    """The instance is too large for exhaustive search."""

    def __init__(self, what: str, size: int, cap: int):
        self.what, self.size, self.cap = what, size, cap
        super().__init__(f"{what} has size {size}, above the exhaustive-search cap of {cap}")


@dataclass(frozen=True)
class Separation:
    """Two-way split of every level ``1 .. D-1``; ``parts[i] = (first, second)``."""

    parts: Mapping[int, tuple[frozenset[int], frozenset[int]]]

    @classmethod
    def from_first_parts(cls, lv: LevelView, first: Mapping[int, Iterable[int]]) -> "Separation":
        """Build from the first part of each level; the second part is the rest of the level."""
        parts = {}
        for i in range(1, lv.eccentricity):
            a = frozenset(first.get(i, ()))
            parts[i] = (a, frozenset(lv.buckets[i]) - a)
        return cls(parts)

    def part_of(self, u: int, level: int) -> int:
        a, b = self.parts[level]
        if u in a:
            return 1
        if u in b:
            return 2
        raise KeyError(u)


@dataclass(frozen=True)
class Verdict:
    ok: bool
    witness: int | None = None
    level: int | None = None

    def __bool__(self) -> bool:
        return self.ok


def validate_partition(lv: LevelView, sep: Separation) -> None:
    expected = set(range(1, lv.eccentricity))
    got = set(sep.parts)
    if got != expected:
        raise MalformedSeparation(
            f"separation covers levels {sorted(got)}, expected {sorted(expected)}"
        )
    for i in sorted(expected):
        a, b = sep.parts[i]
        if a & b:
            raise MalformedSeparation(f"level {i}: parts overlap on {sorted(a & b)}")
        bucket = set(lv.buckets[i])
        if set(a) | set(b) != bucket:
            raise MalformedSeparation(f"level {i}: parts do not cover level nodes {sorted(bucket)}")


def check_separation(lv: LevelView, sep: Separation) -> Verdict:
    """Accept iff every node of level ``i+1`` has exactly one parent in one of the two parts of level ``i``.

    Returns the first violating node (ascending level, then id) on rejection.
    Raises ``MalformedSeparation`` when ``sep`` is not a partition of the levels.
    """
    validate_partition(lv, sep)
    for i in range(1, lv.eccentricity):
        first, second = sep.parts[i]
        for u in lv.buckets[i + 1]:
            ps = lv.parents[u]
            if len(ps & first) != 1 and len(ps & second) != 1:
                return Verdict(False, u, i + 1)
    return Verdict(True)


def _level_masks(lv: LevelView, i: int) -> tuple[list[int], list[int]]:
    """Son parent-masks for level ``i`` restricted to bits that can matter.

    Only parents of nodes with two or more parents constrain the split. Any valid
    mask stays valid with the other bits cleared, so the first valid mask over
    the compressed bits maps to the first valid mask over the whole level.
    """
    bucket = lv.buckets[i]
    multi = [lv.parents[u] for u in lv.buckets[i + 1] if len(lv.parents[u]) > 1]
    relevant = sorted(set().union(*multi)) if multi else []
    bit = {u: k for k, u in enumerate(relevant)}
    masks = []
    for ps in multi:
        m = 0
        for p in ps:
            m |= 1 << bit[p]
        masks.append(m)
    assert set(relevant) <= set(bucket)
    return relevant, masks


def first_level_split(lv: LevelView, i: int) -> frozenset[int] | None:
    """First valid first-part for level ``i`` in ascending subset order, or ``None``."""
    relevant, masks = _level_masks(lv, i)
    m = kernels.first_separating_mask(masks, len(relevant))
    if m < 0:
        return None
    return frozenset(u for k, u in enumerate(relevant) if m >> k & 1)


def find_separation(lv: LevelView, cap: int = DEFAULT_LEVEL_CAP) -> Separation | None:
    """Search each level independently for a valid split.

    Subsets of a level are enumerated in ascending integer order, bit ``j``
    standing for the ``j``-th smallest node id of the level. Returns ``None``
    when some searchable level has no valid split. Raises ``SearchInfeasible``
    when the graph is not already refuted and some level exceeds ``cap`` nodes.
    """
    first: dict[int, frozenset[int]] = {}
    too_big: list[int] = []
    for i in range(1, lv.eccentricity):
        if len(lv.buckets[i]) > cap:
            too_big.append(i)
            continue
        split = first_level_split(lv, i)
        if split is None:
            return None
        first[i] = split
    if too_big:
        i = too_big[0]
        raise SearchInfeasible(f"level {i}", len(lv.buckets[i]), cap)
    return Separation.from_first_parts(lv, first)


def is_level_separable(lv: LevelView, cap: int = DEFAULT_LEVEL_CAP) -> bool:
    return find_separation(lv, cap) is not None


# -- text format ---------------------------------------------------------------

def format_separation(sep: Separation) -> str:
    lines = []
    for i in sorted(sep.parts):
        a, b = sep.parts[i]
        p1 = " ".join(str(u) for u in sorted(a))
        p2 = " ".join(str(u) for u in sorted(b))
        lines.append(f"level {i} part1: {p1} part2: {p2}".replace("  ", " ").rstrip())
    return "\n".join(lines) + ("\n" if lines else "")


def parse_separation(text: str) -> Separation:
    parts = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = line.split()
        try:
            if tokens[0] != "level" or tokens[2] != "part1:" or "part2:" not in tokens:
                raise ValueError
            level = int(tokens[1])
            k = tokens.index("part2:")
            a = frozenset(int(t) for t in tokens[3:k])
            b = frozenset(int(t) for t in tokens[k + 1:])
        except (ValueError, IndexError):
            raise MalformedSeparation(f"line {lineno}: cannot parse {line!r}") from None
        if level in parts:
            raise MalformedSeparation(f"line {lineno}: level {level} given twice")
        parts[level] = (a, b)
    return Separation(parts)
