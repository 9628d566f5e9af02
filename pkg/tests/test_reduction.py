import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from labelcast.generators import random_formula
from labelcast.graph import compute_levels
from labelcast.reduction import (
    Formula,
    FormulaError,
    brute_force_1in3,
    build_gadget,
    extract_assignment,
    format_formula,
    is_one_in_three,
    parse_formula,
    separation_from_assignment,
    verify_reduction,
)
from labelcast.separability import SearchInfeasible, Separation, check_separation, find_separation

SAT = Formula.of(3, [(1, 2, 3)])
UNSAT = Formula.of(3, [(1, 2, 3), (-1, -2, -3)])


@st.composite
def formulas(draw, max_vars=4, max_clauses=4):
    k = draw(st.integers(2, max_vars))
    lits = [i for i in range(1, k + 1)] + [-i for i in range(1, k + 1)]
    clauses = draw(st.lists(
        st.lists(st.sampled_from(lits), min_size=3, max_size=3, unique=True),
        max_size=max_clauses,
    ))
    return Formula.of(k, clauses)


def test_brute_force_examples():
    assert brute_force_1in3(SAT) == {1: True, 2: False, 3: False}
    assert brute_force_1in3(UNSAT) is None
    assert brute_force_1in3(Formula.of(3, [])) == {1: False, 2: False, 3: False}


def test_brute_force_cap():
    with pytest.raises(SearchInfeasible):
        brute_force_1in3(Formula.of(30, [(1, 2, 3)]), cap=24)


@pytest.mark.parametrize("k, clauses", [
    (3, [(1, 2)]),
    (3, [(1, 2, 4)]),
    (3, [(1, 0, 2)]),
    (3, [(1, 1, 2)]),
    (0, []),
])
def test_formula_validation(k, clauses):
    with pytest.raises(FormulaError):
        Formula.of(k, clauses)


def test_gadget_sizes():
    gm = build_gadget(Formula.of(1, []))
    assert gm.graph.node_count == 9
    lv = compute_levels(gm.graph)
    assert lv.eccentricity == 2
    gm = build_gadget(SAT)
    lv = compute_levels(gm.graph)
    assert len(lv.buckets[1]) == 9 and len(lv.buckets[2]) == 6
    assert gm.graph.node_count == 16


@given(formulas())
def test_gadget_structure(f):
    gm = build_gadget(f)
    lv = compute_levels(gm.graph)
    assert lv.eccentricity == 2
    for u, role in enumerate(gm.role):
        want = 0 if role == "s" else 1 if role.startswith("u_") else 2
        assert lv.level[u] == want
    for j, clause in enumerate(f.clauses, start=1):
        vc = gm.node[f"v_c{j}"]
        ps = lv.parents[vc]
        assert len(ps) == 5
        assert {gm.node["u_na"], gm.node["u_nb"]} <= ps
    for i in range(1, f.var_count + 1):
        assert lv.parents[gm.node[f"v_x{i}"]] == {gm.u_y(i), gm.u_n(i)}


def test_extract_assignment_examples():
    gm = build_gadget(SAT)
    lv = compute_levels(gm.graph)
    sep = separation_from_assignment(gm, {1: True, 2: False, 3: False}, lv)
    assert sep.part_of(gm.node["u_y"], 1) == sep.part_of(gm.u_y(1), 1)
    assert sep.part_of(gm.node["u_y"], 1) == sep.part_of(gm.u_n(2), 1)
    assert extract_assignment(gm, sep, lv) == {1: True, 2: False, 3: False}


def test_extract_rejects_invalid_separation():
    gm = build_gadget(SAT)
    lv = compute_levels(gm.graph)
    bad = Separation.from_first_parts(lv, {1: lv.buckets[1]})
    with pytest.raises(ValueError):
        extract_assignment(gm, bad, lv)


@given(formulas())
def test_brute_force_matches_enumeration(f):
    got = brute_force_1in3(f)
    sols = oracles.one_in_three_assignments(f.var_count, f.clauses)
    if not sols:
        assert got is None
    else:
        assert got == sols[0] or got in sols
        assert is_one_in_three(f, got)
        # x1 is the least significant bit: the first solution has the smallest integer value
        key = lambda a: sum(1 << (i - 1) for i, v in a.items() if v)  # noqa: E731
        assert key(got) == min(key(a) for a in sols)


@given(formulas(max_vars=3, max_clauses=3))
def test_every_gadget_separation_encodes_a_solution(f):
    """Both directions over all separations: each one decodes to a 1-in-3 assignment, and every
    assignment's separation is valid."""
    gm = build_gadget(f)
    lv = compute_levels(gm.graph)
    sols = oracles.one_in_three_assignments(f.var_count, f.clauses)
    seps = list(oracles.all_separations(gm.graph))
    assert bool(seps) == bool(sols)
    decoded = []
    for first in seps:
        side = lambda u: u in first  # noqa: E731
        assert side(gm.node["u_na"]) != side(gm.node["u_y"])
        assert side(gm.node["u_nb"]) != side(gm.node["u_y"])
        for i in range(1, f.var_count + 1):
            assert side(gm.u_y(i)) != side(gm.u_n(i))
        sep = Separation.from_first_parts(lv, {1: first})
        a = extract_assignment(gm, sep, lv)
        assert is_one_in_three(f, a)
        decoded.append(a)
    for a in sols:
        assert check_separation(lv, separation_from_assignment(gm, a, lv))
        assert a in decoded


@given(formulas())
def test_verify_reduction_agrees(f):
    rep = verify_reduction(f)
    assert rep.consistent
    assert rep.separable == (find_separation(compute_levels(build_gadget(f).graph)) is not None)


def test_verify_reduction_descriptions():
    assert verify_reduction(SAT).describe() == "both positive, agree"
    assert verify_reduction(UNSAT).describe() == "both negative, agree"


def test_random_formulas_agree():
    rng = random.Random(7)
    for _ in range(200):
        assert verify_reduction(random_formula(rng)).consistent


def test_formula_text_round_trip():
    text = "c two clauses\np 1in3 3 2\n1 2 3\n-1 -2 -3\n"
    f = parse_formula(text)
    assert f == UNSAT
    assert parse_formula(format_formula(f)) == f


@pytest.mark.parametrize("text", [
    "1 2 3\n",
    "p 1in3 3 2\n1 2 3\n",
    "p 1in3 3 1\n1 2\n",
    "p 1in3 3 1\n1 2 x\n",
    "p cnf 3 1\n1 2 3\n",
])
def test_formula_parse_errors(text):
    with pytest.raises(FormulaError):
        parse_formula(text)
