"""Symbols, atoms and problem files.

Symbols are plain strings: identifiers for variables, ``#T`` and ``#F`` for
the Boolean constants.  The two constant spellings can never be produced by
the identifier grammar, so no wrapper type is needed to tell them apart.
Sequences are tuples of symbols.
"""
from __future__ import annotations

import enum
import re
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple, Sequence

from .errors import (
    ArityError,
    DialectError,
    DuplicateQuery,
    MissingQuery,
    ParseError,
)

TOP = "#T"
BOT = "#F"
CONSTANTS = frozenset((TOP, BOT))

_IDENT = re.compile(r"[A-Za-z_][A-Za-z0-9_]*\Z")
_NATURAL = re.compile(r"(\d+)")


def is_constant(symbol: str) -> bool:
    return symbol == TOP or symbol == BOT


def is_variable_name(name: str) -> bool:
    return bool(_IDENT.match(name))


def natural_key(name: str):
    """Sort key that orders ``p2`` before ``p10``."""
    return [int(tok) if tok.isdigit() else tok for tok in _NATURAL.split(name)]


def variables_of(seq: Iterable[str]) -> set[str]:
    return {s for s in seq if not is_constant(s)}


class Dialect(enum.Enum):
    REPETITION_FREE = "repetition-free"
    REPETITIONS = "repetitions"
    BOOLEAN = "boolean-constants"

    @property
    def allows_repetitions(self) -> bool:
        return self is not Dialect.REPETITION_FREE

    @property
    def allows_constants(self) -> bool:
        return self is Dialect.BOOLEAN


class Atom(NamedTuple):
    """An inclusion atom ``lhs <= rhs``; both sides are tuples of symbols."""

    lhs: tuple
    rhs: tuple

    @property
    def arity(self) -> int:
        return len(self.lhs)

    def symbols(self) -> set[str]:
        return set(self.lhs) | set(self.rhs)

    def variables(self) -> set[str]:
        return variables_of(self.lhs) | variables_of(self.rhs)

    def __str__(self) -> str:
        return render_atom(self)


def atom(lhs: str | Sequence[str], rhs: str | Sequence[str]) -> Atom:
    """Build an atom from whitespace-separated strings or symbol sequences.

    >>> atom("p1 p2", "q1 q2")
    Atom(lhs=('p1', 'p2'), rhs=('q1', 'q2'))
    """
    left = tuple(lhs.split()) if isinstance(lhs, str) else tuple(lhs)
    right = tuple(rhs.split()) if isinstance(rhs, str) else tuple(rhs)
    if len(left) != len(right):
        raise ArityError(f"arity mismatch: {len(left)} symbols on the left, {len(right)} on the right")
    for s in left + right:
        if not (is_constant(s) or is_variable_name(s)):
            raise ParseError(f"bad symbol {s!r}")
    return Atom(left, right)


def render_sequence(seq: Sequence[str]) -> str:
    return " ".join(seq)


def render_atom(a: Atom) -> str:
    return f"{render_sequence(a.lhs)} <= {render_sequence(a.rhs)}"


def is_repetition_free(a: Atom) -> bool:
    if any(is_constant(s) for s in a.lhs + a.rhs):
        return False
    return len(set(a.lhs)) == len(a.lhs) and len(set(a.rhs)) == len(a.rhs)


def dialect_violation(a: Atom, dialect: Dialect) -> str | None:
    """Return a reason string if ``a`` is not admitted by ``dialect``."""
    if len(a.lhs) != len(a.rhs):
        return "sides have different lengths"
    if not dialect.allows_constants and any(is_constant(s) for s in a.lhs + a.rhs):
        return f"constants are not allowed in dialect {dialect.value}"
    if not dialect.allows_repetitions:
        for side, name in ((a.lhs, "left"), (a.rhs, "right")):
            if len(set(side)) != len(side):
                return f"repeated variable on the {name}-hand side"
    return None


def smallest_dialect(atoms: Iterable[Atom]) -> Dialect:
    atoms = list(atoms)
    for d in Dialect:
        if all(dialect_violation(a, d) is None for a in atoms):
            return d
    raise DialectError("atoms are not valid in any dialect")


@dataclass(frozen=True)
class Problem:
    """An implication question: do ``assumptions`` entail ``query``?

    ``extra_variables`` widens the variable universe beyond the variables
    mentioned in the atoms; counterexample teams and the oracle range over
    the whole universe.
    """

    dialect: Dialect
    assumptions: tuple
    query: Atom
    extra_variables: tuple = field(default=())

    def __post_init__(self):
        object.__setattr__(self, "assumptions", tuple(dict.fromkeys(self.assumptions)))
        for a in self.assumptions + (self.query,):
            reason = dialect_violation(a, self.dialect)
            if reason:
                raise DialectError(f"{render_atom(a)}: {reason}")
        for v in self.extra_variables:
            if not is_variable_name(v):
                raise ParseError(f"bad variable name {v!r}")

    @property
    def atoms(self) -> tuple:
        return self.assumptions + (self.query,)

    @property
    def variables(self) -> tuple:
        names = set(self.extra_variables)
        for a in self.atoms:
            names |= a.variables()
        return tuple(sorted(names, key=natural_key))

    @property
    def max_arity(self) -> int:
        return max(a.arity for a in self.atoms)

    def with_query(self, query: Atom) -> "Problem":
        return Problem(self.dialect, self.assumptions, query, self.extra_variables)


def _parse_atom(text: str, lineno: int, offset: int) -> Atom:
    if "<=" not in text:
        raise ParseError("expected '<=' between two sequences", lineno, offset + 1)
    left, _, right = text.partition("<=")
    if "<=" in right:
        col = offset + len(left) + 2 + right.index("<=") + 1
        raise ParseError("more than one '<=' in atom", lineno, col)
    sides = []
    pos = offset
    for part in (left, right):
        symbols = []
        for m in re.finditer(r"\S+", part):
            tok = m.group()
            if not (is_constant(tok) or is_variable_name(tok)):
                raise ParseError(f"bad symbol {tok!r}", lineno, pos + m.start() + 1)
            symbols.append(tok)
        if not symbols:
            raise ParseError("empty sequence", lineno, pos + 1)
        sides.append(tuple(symbols))
        pos += len(left) + 2
    lhs, rhs = sides
    if len(lhs) != len(rhs):
        raise ArityError(
            f"line {lineno}: arity mismatch ({len(lhs)} symbols on the left, {len(rhs)} on the right)"
        )
    return Atom(lhs, rhs)


def parse_problem(text: str) -> Problem:
    """Parse the line-oriented problem format.

    >>> parse_problem("query: x1 <= x1").query
    Atom(lhs=('x1',), rhs=('x1',))
    """
    dialect = None
    assumptions = []
    query = None
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip()
        stripped = line.lstrip()
        if not stripped or stripped.startswith("#"):
            continue
        indent = len(line) - len(stripped)
        key, sep, rest = stripped.partition(":")
        if not sep or key not in ("dialect", "assume", "query"):
            raise ParseError(f"unknown line {stripped!r}", lineno, indent + 1)
        offset = indent + len(key) + 1
        if key == "dialect":
            name = rest.strip()
            try:
                d = Dialect(name)
            except ValueError:
                raise ParseError(f"unknown dialect {name!r}", lineno, offset + 2) from None
            if dialect is not None:
                raise ParseError("dialect given twice", lineno, indent + 1)
            dialect = d
        elif key == "assume":
            assumptions.append((lineno, _parse_atom(rest, lineno, offset)))
        else:
            if query is not None:
                raise DuplicateQuery(f"line {lineno}: second query line")
            query = (lineno, _parse_atom(rest, lineno, offset))
    if query is None:
        raise MissingQuery("no query line")
    dialect = dialect or Dialect.BOOLEAN
    for lineno, a in assumptions + [query]:
        reason = dialect_violation(a, dialect)
        if reason:
            raise DialectError(f"line {lineno}: {render_atom(a)}: {reason}")
    return Problem(dialect, tuple(a for _, a in assumptions), query[1])


def render_problem(p: Problem) -> str:
    lines = [f"dialect: {p.dialect.value}"]
    lines += [f"assume: {render_atom(a)}" for a in p.assumptions]
    lines.append(f"query: {render_atom(p.query)}")
    return "\n".join(lines) + "\n"
