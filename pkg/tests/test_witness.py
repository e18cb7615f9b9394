import pytest

from conftest import load_problem, load_team
from incdep import Decider
from incdep.calculus import derivable_equalities
from incdep.errors import CoverageComplete, WitnessVerificationFailed
from incdep.experiments import assumption_sets, atom_universe
from incdep.semantics import Team, project
from incdep.syntax import BOT, TOP, Dialect, atom
from incdep.witness import (
    WitnessPlan,
    build_counterexample,
    choose_c,
    separates,
    stop_branch,
    verify_counterexample,
)

V3 = ("p1", "p2", "p3")


def plan_for(p):
    d = Decider.for_problem(p)
    return d.decide(p.query).plan


def test_stop_branch_table1():
    p = load_problem("table1")
    classes = derivable_equalities(p.assumptions, p.variables)
    assert stop_branch(p.query, classes)
    assert not stop_branch(p.query, derivable_equalities([], p.variables))


def test_stop_branch_constant_position():
    classes = derivable_equalities([atom("q1", "#T")], ("p1", "q1"))
    assert stop_branch(atom("p1", "q1"), classes)


def test_choose_c_table3():
    p = load_problem("table3")
    derivables = Decider.for_problem(p).derivable_set(p.query.rhs)
    assert choose_c(p, derivables) == (1, 0)


def test_choose_c_without_derivables():
    assert choose_c(("p1", "p2"), []) == (0, 0)


def test_choose_c_coverage_complete():
    everything = [(a, b) for a in (BOT, TOP) for b in (BOT, TOP)]
    with pytest.raises(CoverageComplete):
        choose_c(("p1", "p2"), everything)


def test_choose_c_respects_constants_in_target():
    assert choose_c((TOP, "p2"), [(TOP, BOT)]) == (1, 1)


@pytest.mark.parametrize("name, rows", [("table1", 8), ("table2", 10), ("table3", 24)])
def test_build_reproduces_tables(name, rows):
    p = load_problem(name)
    team = build_counterexample(p, plan_for(p))
    assert team == load_team(name)
    assert len(team) == rows
    assert verify_counterexample(p, team)


def test_table1_generic_team():
    p = load_problem("table1")
    plan = plan_for(p)
    assert plan.stop_branch
    team = build_counterexample(p, plan)
    for s in team.assignments():
        assert s["y1"] == s["y2"] and s["x1"] == s["z1"]


def test_table3_avoids_forbidden_value():
    p = load_problem("table3")
    team = build_counterexample(p, plan_for(p))
    assert (1, 0) not in project(team, ("q1", "q2"))
    assert (1, 0) in project(team, ("p1", "p2"))


def test_verify_counterexample_rejects():
    p = load_problem("table3")
    assert not verify_counterexample(p, Team.full(p.variables))
    assert not verify_counterexample(p, Team(p.variables, frozenset()))
    assert verify_counterexample(load_problem("table1"), load_team("table1"))


def test_constraint_lines():
    plan = plan_for(load_problem("table2"))
    lines = plan.constraint_lines()
    assert lines[0] == "y2=z1"
    assert "forbid x1 y2 = 00" in lines
    stop = plan_for(load_problem("table1"))
    assert stop.constraint_lines() == ["x1=z1", "y1=y2"]


def test_plan_fields():
    plan = plan_for(load_problem("table2"))
    assert isinstance(plan, WitnessPlan)
    assert plan.forbidden_tuple == (0, 0)
    assert ("y1", "y2") in plan.forbidden_sequences
    assert plan.pruned_rows == 0 and plan.notes == []


def test_preferred_value_fallback():
    # the all-zero team satisfies the query here; another value separates
    sigma = [atom("x1 x1", "y1 y2")]
    query = atom("x1 x2", "y1 y2")
    v = Decider(Dialect.REPETITIONS, sigma, ("x1", "x2", "y1", "y2")).decide(query)
    assert not v.entailed
    assert v.plan.notes
    assert separates(sigma, query, v.witness)


@pytest.mark.slow
@pytest.mark.parametrize("dialect", [Dialect.REPETITION_FREE, Dialect.REPETITIONS])
def test_forbidden_value_is_the_refutation(dialect):
    """Outside the stop branch the witness should refute the query with the
    forbidden value itself: it occurs on the left and not on the right.

    Fails in the repetitions dialect: e.g. {p1 p1 <= p1 p2} with query
    p1 p2 <= p2 p1 derives p1 p1 <= p2 p1, so forbidding 00 drops every row
    with p1 = 0 and the team separates through 10 instead.
    """
    pool = atom_universe(V3, dialect)
    checked, wrong = 0, []
    for sigma in assumption_sets(pool):
        d = Decider(dialect, sigma, V3, bound=2)
        for q in pool:
            try:
                v = d.decide(q)
            except WitnessVerificationFailed:
                continue
            if v.entailed or v.plan.stop_branch:
                continue
            checked += 1
            c = v.plan.forbidden_tuple
            if c not in project(v.witness, q.lhs) or c in project(v.witness, q.rhs):
                wrong.append((sigma, q))
    print(f"{dialect.value}: {len(wrong)}/{checked} witnesses separate through another value")
    assert wrong == []
