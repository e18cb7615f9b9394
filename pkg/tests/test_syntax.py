import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from incdep.errors import ArityError, DialectError, DuplicateQuery, MissingQuery, ParseError
from incdep.syntax import (
    BOT,
    TOP,
    Atom,
    Dialect,
    Problem,
    atom,
    dialect_violation,
    is_repetition_free,
    parse_problem,
    render_atom,
    render_problem,
)


def test_parse_with_dialect_line():
    p = parse_problem("dialect: repetitions\nassume: y1 y2 <= z1 z1\nquery: x1 x2 <= y1 y2")
    assert p.dialect is Dialect.REPETITIONS
    assert p.assumptions == (atom("y1 y2", "z1 z1"),)
    assert p.query == atom("x1 x2", "y1 y2")


def test_dialect_defaults_to_boolean():
    p = parse_problem("query: x1 <= x1")
    assert p.dialect is Dialect.BOOLEAN
    assert p.assumptions == ()
    assert p.query == atom("x1", "x1")


def test_repetition_rejected_in_repetition_free():
    with pytest.raises(DialectError):
        parse_problem("dialect: repetition-free\nquery: x1 x1 <= y1 y2")


def test_constants_rejected_without_boolean_dialect():
    with pytest.raises(DialectError):
        parse_problem("dialect: repetitions\nquery: #T <= x1")


def test_comments_and_blank_lines():
    p = parse_problem("# header\n\ndialect: boolean-constants\n  # indented comment\nquery: #T #F <= #T p2\n")
    assert p.query == Atom((TOP, BOT), (TOP, "p2"))


def test_parse_errors_carry_position():
    with pytest.raises(ParseError) as exc:
        parse_problem("query: x1 <= x$")
    assert exc.value.line == 1
    assert exc.value.column is not None


@pytest.mark.parametrize(
    "text, error",
    [
        ("query: x1 x2 <= y1", ArityError),
        ("assume: x1 <= y1", MissingQuery),
        ("query: x1 <= y1\nquery: y1 <= x1", DuplicateQuery),
        ("query: x1 y1", ParseError),
        ("query: x1 <= y1 <= z1", ParseError),
        ("dialect: ternary\nquery: x1 <= x1", ParseError),
        ("frobnicate: x1\nquery: x1 <= x1", ParseError),
        ("query: <= x1", ParseError),
        ("query: T <= #X", ParseError),
    ],
)
def test_malformed_files(text, error):
    with pytest.raises(error):
        parse_problem(text)


def test_is_repetition_free():
    assert is_repetition_free(atom("x1", "x1"))
    assert not is_repetition_free(atom("x1 x1", "y1 y2"))
    assert is_repetition_free(Atom((), ()))
    assert not is_repetition_free(atom("#T", "x1"))


def test_render_atom():
    assert render_atom(atom("p1 p2", "q1 q2")) == "p1 p2 <= q1 q2"
    assert render_atom(Atom((TOP, BOT), (TOP, "p2"))) == "#T #F <= #T p2"
    assert render_atom(atom("x1", "x1")) == "x1 <= x1"


def test_problem_variables_are_naturally_sorted():
    p = parse_problem("assume: p10 <= p2\nquery: p1 <= #T")
    assert p.variables == ("p1", "p2", "p10")


def test_problem_rejects_invalid_atoms():
    with pytest.raises(DialectError):
        Problem(Dialect.REPETITION_FREE, (atom("x1 x1", "y1 y2"),), atom("x1", "y1"))


names = st.sampled_from(["p1", "p2", "q1", "x_1", "Var"])
symbols = st.one_of(names, st.sampled_from([TOP, BOT]))


@st.composite
def atoms(draw, symbol=symbols):
    n = draw(st.integers(1, 4))
    lhs = tuple(draw(st.lists(symbol, min_size=n, max_size=n)))
    rhs = tuple(draw(st.lists(symbol, min_size=n, max_size=n)))
    return Atom(lhs, rhs)


@given(st.lists(atoms(), max_size=4), atoms())
@settings(max_examples=200)
def test_render_parse_round_trip(assumptions, query):
    p = Problem(Dialect.BOOLEAN, tuple(assumptions), query)
    assert parse_problem(render_problem(p)) == p
    assert parse_problem("query: " + render_atom(query)).query == query


@given(atoms())
def test_dialect_monotonicity(a):
    if dialect_violation(a, Dialect.REPETITION_FREE) is None:
        assert dialect_violation(a, Dialect.REPETITIONS) is None
    if dialect_violation(a, Dialect.REPETITIONS) is None:
        assert dialect_violation(a, Dialect.BOOLEAN) is None


@given(st.lists(names, min_size=1, max_size=4), st.lists(names, min_size=1, max_size=4))
def test_arity_mismatch_always_rejected(lhs, rhs):
    text = f"query: {' '.join(lhs)} <= {' '.join(rhs)}"
    if len(lhs) == len(rhs):
        assert parse_problem(text).query.arity == len(lhs)
    else:
        with pytest.raises(ArityError):
            parse_problem(text)
