import os
import sys

from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

sys.path.insert(0, os.path.dirname(__file__))

from labelcast.graph import build_graph  # noqa: E402

settings.register_profile("default", max_examples=150, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@st.composite
def connected_graphs(draw, min_nodes=1, max_nodes=14, max_extra=12):
    n = draw(st.integers(min_nodes, max_nodes))
    edges = set()
    for v in range(1, n):
        u = draw(st.integers(0, v - 1))
        edges.add((u, v))
    if n > 2:
        pairs = st.tuples(st.integers(0, n - 1), st.integers(0, n - 1))
        for a, b in draw(st.lists(pairs, max_size=max_extra)):
            if a != b:
                edges.add((min(a, b), max(a, b)))
    perm = draw(st.permutations(range(n)))
    edges = {(perm[a], perm[b]) for a, b in edges}
    source = draw(st.integers(0, n - 1))
    return build_graph(n, edges, source)


def diamond():
    # s=0, a=1, b=2, c=3
    return build_graph(4, [(0, 1), (0, 2), (1, 3), (2, 3)], 0)


def path(n):
    return build_graph(n, [(i, i + 1) for i in range(n - 1)], 0)


def star(leaves):
    return build_graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)], 0)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
