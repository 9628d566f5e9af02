"""Labelled broadcast in collision-prone radio networks.

Graphs and BFS levels, level separations and their search, offline labels for
three broadcast schemes, a synchronous round simulator with trace checks, a
1-in-3 SAT gadget and body-area attenuation tables.
"""
from .graph import Graph, LevelView, build_graph, compute_levels, format_edge_list, parse_edge_list
from .kernels import BACKEND
from .labelling import LabelSet, Scheme, label_ls, label_ls_ack, label_oack
from .protocols import AckTiming, Protocol
from .reduction import Formula, brute_force_1in3, build_gadget, verify_reduction
from .separability import Separation, check_separation, find_separation
from .simulator import run_simulation, verify_trace

__all__ = [
    "BACKEND",
    "AckTiming",
    "Formula",
    "Graph",
    "LabelSet",
    "LevelView",
    "Protocol",
    "Scheme",
    "Separation",
    "brute_force_1in3",
    "build_gadget",
    "build_graph",
    "check_separation",
    "compute_levels",
    "find_separation",
    "format_edge_list",
    "label_ls",
    "label_ls_ack",
    "label_oack",
    "parse_edge_list",
    "run_simulation",
    "verify_reduction",
    "verify_trace",
]
