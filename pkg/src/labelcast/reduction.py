"""1-IN-3-SAT formulas, the level-separability gadget, and a dual brute-force check.

Literals are signed 1-based integers: ``3`` is x3 and ``-3`` its negation.
Assignments map variable index (1-based) to bool.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from . import kernels
from .graph import Graph, LevelView, build_graph, compute_levels
from .separability import SearchInfeasible, Separation, check_separation, find_separation

VAR_CAP = 24

Assignment = dict[int, bool]


class FormulaError(ValueError):
    pass


@dataclass(frozen=True)
class Formula:
    var_count: int
    clauses: tuple[tuple[int, int, int], ...]

    def __post_init__(self) -> None:
        if self.var_count < 1:
            raise FormulaError("var_count must be positive")
        for j, clause in enumerate(self.clauses, start=1):
            if len(clause) != 3:
                raise FormulaError(f"clause {j} has {len(clause)} literals, expected 3")
            for lit in clause:
                if lit == 0 or abs(lit) > self.var_count:
                    raise FormulaError(f"clause {j}: literal {lit} outside 1..{self.var_count}")
            # a repeated literal would be counted twice by the clause but only once by the gadget
            if len(set(clause)) != 3:
                raise FormulaError(f"clause {j} repeats a literal: {clause}")

    @classmethod
    def of(cls, var_count: int, clauses: Iterable[Sequence[int]]) -> "Formula":
        return cls(var_count, tuple(tuple(int(x) for x in c) for c in clauses))  # type: ignore[misc]


def satisfied_literals(clause: Sequence[int], assignment: Mapping[int, bool]) -> int:
    return sum(1 for lit in clause if assignment[abs(lit)] == (lit > 0))


def is_one_in_three(f: Formula, assignment: Mapping[int, bool]) -> bool:
    return all(satisfied_literals(c, assignment) == 1 for c in f.clauses)


def brute_force_1in3(f: Formula, cap: int = VAR_CAP) -> Assignment | None:
    """First assignment, x1 least significant, with exactly one true literal per clause."""
    if f.var_count > cap:
        raise SearchInfeasible("variable set", f.var_count, cap)
    pos, neg = [], []
    for clause in f.clauses:
        p = n = 0
        for lit in clause:
            if lit > 0:
                p |= 1 << (lit - 1)
            else:
                n |= 1 << (-lit - 1)
        pos.append(p)
        neg.append(n)
    m = kernels.first_one_in_three(pos, neg, f.var_count)
    if m < 0:
        return None
    return {i: bool(m >> (i - 1) & 1) for i in range(1, f.var_count + 1)}


# -- gadget ----------------------------------------------------------------------

@dataclass(frozen=True)
class GadgetMap:
    formula: Formula
    graph: Graph
    role: tuple[str, ...]
    node: Mapping[str, int]

    def u_y(self, i: int) -> int:
        return self.node[f"u_y{i}"]

    def u_n(self, i: int) -> int:
        return self.node[f"u_n{i}"]


def build_gadget(f: Formula) -> GadgetMap:
    """Two-level graph that is level-separable iff ``f`` has a 1-in-3 assignment.

    Node ids: the source, then level 1 (``u_na, u_nb, u_y, u_y1, u_n1, ...``),
    then level 2 (``v_a, v_b, v_x1 .. v_xk, v_c1 .. v_cl``).
    """
    k = f.var_count
    roles = ["s", "u_na", "u_nb", "u_y"]
    for i in range(1, k + 1):
        roles += [f"u_y{i}", f"u_n{i}"]
    roles += ["v_a", "v_b"]
    roles += [f"v_x{i}" for i in range(1, k + 1)]
    roles += [f"v_c{j}" for j in range(1, len(f.clauses) + 1)]
    node = {r: n for n, r in enumerate(roles)}

    first_level = [node[r] for r in roles if r.startswith("u_")]
    edges = [(node["s"], u) for u in first_level]
    edges += [
        (node["u_na"], node["v_a"]),
        (node["u_nb"], node["v_b"]),
        (node["u_y"], node["v_a"]),
        (node["u_y"], node["v_b"]),
    ]
    for i in range(1, k + 1):
        edges += [(node[f"u_y{i}"], node[f"v_x{i}"]), (node[f"u_n{i}"], node[f"v_x{i}"])]
    for j, clause in enumerate(f.clauses, start=1):
        vc = node[f"v_c{j}"]
        for lit in clause:
            edges.append((node[f"u_y{lit}" if lit > 0 else f"u_n{-lit}"], vc))
        edges += [(node["u_na"], vc), (node["u_nb"], vc)]
    g = build_graph(len(roles), edges, node["s"])
    return GadgetMap(f, g, tuple(roles), node)


def extract_assignment(gm: GadgetMap, sep: Separation, lv: LevelView | None = None) -> Assignment:
    """Read an assignment off an accepted separation: x_i is true iff u_yi shares a part with u_y."""
    lv = lv or compute_levels(gm.graph)
    verdict = check_separation(lv, sep)
    if not verdict:
        raise ValueError(f"separation rejected at node {verdict.witness} (level {verdict.level})")
    y_part = sep.part_of(gm.node["u_y"], 1)
    return {
        i: sep.part_of(gm.u_y(i), 1) == y_part for i in range(1, gm.formula.var_count + 1)
    }


def separation_from_assignment(gm: GadgetMap, assignment: Mapping[int, bool], lv: LevelView | None = None) -> Separation:
    """First part: u_y, every u_yi with x_i true and every u_ni with x_i false."""
    lv = lv or compute_levels(gm.graph)
    first = {gm.node["u_y"]}
    for i in range(1, gm.formula.var_count + 1):
        first.add(gm.u_y(i) if assignment[i] else gm.u_n(i))
    return Separation.from_first_parts(lv, {1: first})


@dataclass(frozen=True)
class ReductionReport:
    satisfiable: bool
    separable: bool
    assignment: Assignment | None
    separation: Separation | None
    forward_ok: bool | None = None
    backward_ok: bool | None = None

    @property
    def agree(self) -> bool:
        return self.satisfiable == self.separable

    @property
    def consistent(self) -> bool:
        return self.agree and self.forward_ok is not False and self.backward_ok is not False

    def describe(self) -> str:
        if self.satisfiable and self.separable:
            verdict = "both positive"
        elif not self.satisfiable and not self.separable:
            verdict = "both negative"
        else:
            verdict = f"sat={self.satisfiable} separable={self.separable}"
        return f"{verdict}, {'agree' if self.agree else 'DISAGREE'}"


def verify_reduction(f: Formula) -> ReductionReport:
    """Decide ``f`` by brute force and its gadget by separation search, then cross-check.

    When both sides are positive, the assignment is turned into a separation
    (must be accepted) and the found separation into an assignment (must be
    1-in-3 satisfying).
    """
    assignment = brute_force_1in3(f)
    gm = build_gadget(f)
    lv = compute_levels(gm.graph)
    sep = find_separation(lv)
    forward = backward = None
    if assignment is not None and sep is not None:
        forward = bool(check_separation(lv, separation_from_assignment(gm, assignment, lv)))
        backward = is_one_in_three(f, extract_assignment(gm, sep, lv))
    return ReductionReport(assignment is not None, sep is not None, assignment, sep, forward, backward)


# -- text format -------------------------------------------------------------------

def parse_formula(text: str) -> Formula:
    """``p 1in3 <k> <l>`` then ``l`` lines of three signed literals."""
    header: tuple[int, int] | None = None
    clauses: list[tuple[int, ...]] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith(("#", "c ")) or line == "c":
            continue
        parts = line.split()
        if header is None:
            if len(parts) != 4 or parts[:2] != ["p", "1in3"]:
                raise FormulaError(f"line {lineno}: expected 'p 1in3 <k> <l>', got {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]))
            except ValueError:
                raise FormulaError(f"line {lineno}: non-integer header value") from None
            continue
        if len(parts) != 3:
            raise FormulaError(f"line {lineno}: expected three literals, got {line!r}")
        try:
            clauses.append(tuple(int(p) for p in parts))
        except ValueError:
            raise FormulaError(f"line {lineno}: non-integer literal in {line!r}") from None
    if header is None:
        raise FormulaError("missing 'p 1in3' header")
    if len(clauses) != header[1]:
        raise FormulaError(f"header announces {header[1]} clauses, found {len(clauses)}")
    return Formula.of(header[0], clauses)


def format_formula(f: Formula) -> str:
    lines = [f"p 1in3 {f.var_count} {len(f.clauses)}"]
    lines += [" ".join(str(x) for x in c) for c in f.clauses]
    return "\n".join(lines) + "\n"
