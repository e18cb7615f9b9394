from itertools import product

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import load_team
from incdep.errors import CapExceeded, ParseError
from incdep.semantics import (
    Team,
    enumerate_teams,
    is_trivial,
    largest_satisfying_subteam,
    nonempty_satisfiable,
    parse_team,
    project,
    satisfies,
    satisfies_clause,
    serialize_team,
    team_from_mask,
)
from incdep.syntax import BOT, TOP, Atom, atom

V3 = ("p1", "p2", "p3")


def test_project_table4_t1():
    t1 = load_team("table4_T1")
    assert project(t1, ("q1", "q2")) == {(1, 1), (0, 0)}


def test_project_empty_and_constants():
    assert project(Team(("x1",), frozenset()), ("x1",)) == set()
    t = Team.from_bits(("p1",), [[0], [1]])
    assert project(t, (TOP, BOT)) == {(1, 0)}


def test_satisfies_examples(fixtures_dir):
    t = Team.from_assignments(("p1", "p2"), [{"p1": 0, "p2": 0}, {"p1": 0, "p2": 1}])
    assert satisfies(t, atom("p1", "p2"))
    assert not satisfies(t, atom("p2", "p1"))
    assert satisfies(Team(V3, frozenset()), atom("p1 p2", "p3 p3"))
    table1 = load_team("table1")
    assert not satisfies(table1, atom("x1 x2", "y1 y2"))


def test_is_trivial():
    assert is_trivial(atom("x1 x2", "x1 x2"))
    assert is_trivial(Atom((TOP,), (TOP,)))
    assert not is_trivial(atom("x1 x2", "x2 x1"))
    assert not satisfies(Team.from_bits(("x1", "x2"), [[0, 1]]), atom("x1 x2", "x2 x1"))


def test_nonempty_satisfiable():
    assert not nonempty_satisfiable(Atom((BOT,), (TOP,)))
    assert nonempty_satisfiable(Atom(("p1",), (TOP,)))
    assert not nonempty_satisfiable(Atom((TOP, BOT), ("p1", "p1")))
    # shared variables across the two sides
    assert not nonempty_satisfiable(Atom(("p1", BOT), (TOP, "p1")))
    assert nonempty_satisfiable(atom("p1 p2", "p2 p1"))


def test_nonempty_satisfiable_matches_enumeration():
    symbols = ("p1", "p2", TOP, BOT)
    for lhs in product(symbols, repeat=2):
        for rhs in product(symbols, repeat=2):
            a = Atom(lhs, rhs)
            brute = any(len(t) and satisfies(t, a) for t in enumerate_teams(("p1", "p2")))
            assert nonempty_satisfiable(a) == brute, a


def test_enumerate_counts_and_order():
    teams = list(enumerate_teams(("p1",)))
    assert [t.sorted_bits() for t in teams] == [[], [(0,)], [(1,)], [(0,), (1,)]]
    assert sum(1 for _ in enumerate_teams(("p1", "p2"))) == 16
    masks = [t.mask() for t in enumerate_teams(V3)]
    assert masks == list(range(256))


def test_enumerate_cap():
    with pytest.raises(CapExceeded):
        next(enumerate_teams(("a", "b", "c", "d", "e")))


def test_serialization_round_trip():
    t = load_team("table3")
    text = serialize_team(t)
    assert text.splitlines()[0] == "p1 p2 q1 q2 r1"
    bits = [line for line in text.splitlines()[1:]]
    assert bits == sorted(bits)
    assert parse_team(text) == t


def test_parse_team_rejects_bad_rows():
    with pytest.raises(ParseError):
        parse_team("p1 p2\n0 2\n")
    with pytest.raises(ParseError):
        parse_team("p1 p2\n0\n")


def test_largest_subteam_is_greatest():
    a = atom("p1", "p2")
    for mask in range(0, 256, 7):
        t = team_from_mask(V3, mask)
        best = largest_satisfying_subteam(t, [a])
        assert satisfies(best, a)
        for sub in range(256):
            if sub & mask == sub and sub & ~best.mask():
                assert not satisfies(team_from_mask(V3, sub), a)


def test_restrict():
    t = load_team("table3")
    assert len(t.restrict(("q1", "q2"))) == 3


symbols = st.sampled_from(V3 + (TOP, BOT))


@st.composite
def atoms(draw):
    n = draw(st.integers(1, 3))
    lhs = tuple(draw(st.lists(symbols, min_size=n, max_size=n)))
    rhs = tuple(draw(st.lists(symbols, min_size=n, max_size=n)))
    return Atom(lhs, rhs)


masks = st.integers(0, 255)


@given(atoms(), masks, masks)
@settings(max_examples=300)
def test_union_closure(a, m1, m2):
    t1, t2 = team_from_mask(V3, m1), team_from_mask(V3, m2)
    if satisfies(t1, a) and satisfies(t2, a):
        assert satisfies(t1 | t2, a)


@given(atoms())
def test_empty_team_satisfies_everything(a):
    assert satisfies(Team(V3, frozenset()), a)


@given(atoms(), masks)
@settings(max_examples=300)
def test_clause_equals_projection(a, m):
    t = team_from_mask(V3, m)
    assert satisfies(t, a) == satisfies_clause(t, a)


@given(st.lists(symbols, min_size=1, max_size=3), masks)
def test_trivial_atoms_hold_everywhere(seq, m):
    a = Atom(tuple(seq), tuple(seq))
    assert is_trivial(a)
    assert satisfies(team_from_mask(V3, m), a)
