"""Reference implementations used as test oracles.

Written straight from the definitions with networkx and plain enumeration;
nothing here imports the search, labelling or simulation code under test.
"""
from __future__ import annotations

import itertools

import networkx as nx


def to_nx(g) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.node_count))
    h.add_edges_from(g.edges)
    return h


def levels(g) -> dict[int, int]:
    return nx.single_source_shortest_path_length(to_nx(g), g.source)


def level_sets(g) -> list[list[int]]:
    lv = levels(g)
    depth = max(lv.values())
    return [sorted(u for u, d in lv.items() if d == i) for i in range(depth + 1)]


def separation_ok(g, first: set[int]) -> bool:
    """Every node at level i+1 (1 <= i <= D-1) has exactly one parent in the first part or exactly one in the second."""
    h = to_nx(g)
    lv = levels(g)
    depth = max(lv.values())
    for v, d in lv.items():
        if d < 2 or d - 1 > depth - 1:
            continue
        ps = [u for u in h[v] if lv[u] == d - 1]
        in_first = sum(1 for u in ps if u in first)
        if in_first != 1 and len(ps) - in_first != 1:
            return False
    return True


def first_violation(g, first: set[int]) -> int | None:
    """Smallest-level, then smallest-id node whose parents are split badly."""
    h = to_nx(g)
    lv = levels(g)
    for v in sorted(lv, key=lambda u: (lv[u], u)):
        d = lv[v]
        if d < 2:
            continue
        ps = [u for u in h[v] if lv[u] == d - 1]
        k = sum(1 for u in ps if u in first)
        if k != 1 and len(ps) - k != 1:
            return v
    return None


def level_ok(g, i: int, first: set[int]) -> bool:
    h = to_nx(g)
    lv = levels(g)
    for v, d in lv.items():
        if d == i + 1:
            ps = [u for u in h[v] if lv[u] == i]
            k = sum(1 for u in ps if u in first)
            if k != 1 and len(ps) - k != 1:
                return False
    return True


def first_split_by_enumeration(g, i: int) -> frozenset[int] | None:
    """First subset of level i in ascending bitmask order (bit j = j-th smallest id) that separates level i+1."""
    members = level_sets(g)[i]
    for mask in range(1 << len(members)):
        first = {u for j, u in enumerate(members) if mask >> j & 1}
        if level_ok(g, i, first):
            return frozenset(first)
    return None


def separable_by_enumeration(g) -> bool:
    sets = level_sets(g)
    return all(first_split_by_enumeration(g, i) is not None for i in range(1, len(sets) - 1))


def all_separations(g):
    """Every choice of first parts over levels 1..D-1 that satisfies the property."""
    sets = level_sets(g)
    per_level = []
    for i in range(1, len(sets) - 1):
        members = sets[i]
        good = []
        for mask in range(1 << len(members)):
            first = {u for j, u in enumerate(members) if mask >> j & 1}
            if level_ok(g, i, first):
                good.append(first)
        per_level.append(good)
    for combo in itertools.product(*per_level):
        yield set().union(*combo) if combo else set()


def one_in_three_assignments(var_count: int, clauses) -> list[dict[int, bool]]:
    out = []
    for bits in itertools.product((False, True), repeat=var_count):
        a = {i + 1: bits[i] for i in range(var_count)}
        if all(sum(1 for lit in c if a[abs(lit)] == (lit > 0)) == 1 for c in clauses):
            out.append(a)
    return out


def reference_ls_run(g, x1: dict[int, int], rounds: int):
    """Round-by-round LS broadcast under the collision model, with its own bookkeeping.

    Returns (first_receipt, last_transmission_round, per-round transmitter sets).
    """
    h = to_nx(g)
    informed_at = {g.source: -1}
    send_at = {g.source: 0}
    history = []
    last_tx = -1
    for r in range(rounds):
        tx = {u for u, t in send_at.items() if t == r}
        history.append(tx)
        if tx:
            last_tx = r
        for v in h.nodes:
            if v in tx or v in informed_at:
                continue
            senders = [u for u in h[v] if u in tx]
            if len(senders) == 1:
                informed_at[v] = r
                if r % 2:
                    send_at[v] = r + (2 if x1[v] else 3)
                else:
                    send_at[v] = r + (1 if x1[v] else 2)
    informed_at.pop(g.source)
    return informed_at, last_tx, history
