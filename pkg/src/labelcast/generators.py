"""Random instance families used by the self-test and the acceptance suite."""
from __future__ import annotations

import random

from .graph import Graph, build_graph, compute_levels
from .reduction import Formula
from .separability import find_separation


def random_tree(n: int, rng: random.Random) -> Graph:
    """Random recursive tree on ``n`` nodes with shuffled ids and a random source."""
    ids = list(range(n))
    rng.shuffle(ids)
    edges = [(ids[i], ids[rng.randrange(i)]) for i in range(1, n)]
    return build_graph(n, edges, rng.choice(ids))


def random_separable_graph(n: int, rng: random.Random, extra: int | None = None) -> Graph:
    """A random tree plus edges that keep BFS levels, kept only while the graph stays separable.

    Candidate edges join two nodes of one level, or a node to an extra parent
    one level up; neither kind changes any node's level.
    """
    g = random_tree(n, rng)
    lv = compute_levels(g)
    edges = set(g.edges)
    if extra is None:
        extra = rng.randint(1, max(1, n // 2))
    for _ in range(extra * 4):
        if extra <= 0:
            break
        u, v = rng.sample(range(n), 2)
        du, dv = lv.level[u], lv.level[v]
        if abs(du - dv) > 1 or 0 in (du, dv):
            continue
        e = (min(u, v), max(u, v))
        if e in edges:
            continue
        trial = build_graph(n, edges | {e}, g.source)
        if find_separation(compute_levels(trial)) is not None:
            edges.add(e)
            g = trial
            extra -= 1
    return g


def random_connected_graph(n: int, rng: random.Random, density: float | None = None) -> Graph:
    """Random tree plus each remaining pair independently with probability ``density``."""
    g = random_tree(n, rng)
    if density is None:
        density = rng.choice((0.0, 0.05, 0.1, 0.2, 0.4))
    edges = set(g.edges)
    for u in range(n):
        for v in range(u + 1, n):
            if (u, v) not in edges and rng.random() < density:
                edges.add((u, v))
    return build_graph(n, edges, g.source)


def random_formula(rng: random.Random, max_vars: int = 4, max_clauses: int = 4) -> Formula:
    """Random formula with 2..max_vars variables and 0..max_clauses clauses of three distinct literals."""
    k = rng.randint(2, max_vars)
    literals = [i for i in range(1, k + 1)] + [-i for i in range(1, k + 1)]
    clauses = [tuple(rng.sample(literals, 3)) for _ in range(rng.randint(0, max_clauses))]
    return Formula.of(k, clauses)
