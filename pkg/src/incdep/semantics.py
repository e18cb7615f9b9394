"""Assignments, teams and the satisfaction relation over the values {0, 1}.

A row (assignment) over a universe ``(v0, ..., vk)`` is stored as an int whose
binary expansion, most significant bit first, lists the values of ``v0..vk``.
Sorting rows numerically therefore sorts them by bit pattern.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

from .errors import CapExceeded, ParseError, UnknownVariable
from .syntax import BOT, TOP, Atom, is_constant, variables_of


def _getter(universe: Sequence[str], symbol: str):
    if symbol == TOP:
        return None, 1
    if symbol == BOT:
        return None, 0
    try:
        index = universe.index(symbol)
    except ValueError:
        raise UnknownVariable(symbol) from None
    return len(universe) - 1 - index, None


def evaluator(universe: Sequence[str], seq: Sequence[str]):
    """Return ``f(row) -> tuple of bits`` evaluating ``seq`` on rows over ``universe``."""
    parts = [_getter(universe, s) for s in seq]

    def evaluate(row: int) -> tuple:
        return tuple(fixed if shift is None else (row >> shift) & 1 for shift, fixed in parts)

    return evaluate


def row_value(universe: Sequence[str], row: int, symbol: str) -> int:
    shift, fixed = _getter(universe, symbol)
    return fixed if shift is None else (row >> shift) & 1


def row_from_bits(bits: Sequence[int]) -> int:
    row = 0
    for b in bits:
        row = (row << 1) | (1 if b else 0)
    return row


def row_bits(row: int, width: int) -> tuple:
    return tuple((row >> (width - 1 - i)) & 1 for i in range(width))


@dataclass(frozen=True)
class Team:
    universe: tuple
    rows: frozenset

    def __post_init__(self):
        object.__setattr__(self, "universe", tuple(self.universe))
        object.__setattr__(self, "rows", frozenset(self.rows))

    @classmethod
    def from_bits(cls, universe: Sequence[str], rows: Iterable[Sequence[int]]) -> "Team":
        width = len(universe)
        packed = set()
        for bits in rows:
            if len(bits) != width:
                raise ValueError(f"row {bits!r} does not have {width} entries")
            packed.add(row_from_bits(bits))
        return cls(tuple(universe), frozenset(packed))

    @classmethod
    def full(cls, universe: Sequence[str]) -> "Team":
        return cls(tuple(universe), frozenset(range(1 << len(universe))))

    @classmethod
    def from_assignments(cls, universe: Sequence[str], assignments: Iterable[dict]) -> "Team":
        return cls.from_bits(universe, ([a[v] for v in universe] for a in assignments))

    def __len__(self) -> int:
        return len(self.rows)

    def __iter__(self):
        return iter(sorted(self.rows))

    def sorted_bits(self) -> list:
        width = len(self.universe)
        return [row_bits(r, width) for r in sorted(self.rows)]

    def assignments(self) -> list:
        return [dict(zip(self.universe, bits)) for bits in self.sorted_bits()]

    def restrict(self, variables: Sequence[str]) -> "Team":
        """Project every row onto ``variables`` (a sub-universe)."""
        ev = evaluator(self.universe, variables)
        return Team(tuple(variables), frozenset(row_from_bits(ev(r)) for r in self.rows))

    def union(self, other: "Team") -> "Team":
        if self.universe != other.universe:
            raise ValueError("teams over different universes")
        return Team(self.universe, self.rows | other.rows)

    __or__ = union

    def mask(self) -> int:
        """The characteristic bitmask: bit ``r`` is set iff row ``r`` is present."""
        m = 0
        for r in self.rows:
            m |= 1 << r
        return m


def project(t: Team, seq: Sequence[str]) -> set:
    ev = evaluator(t.universe, seq)
    return {ev(r) for r in t.rows}


def satisfies(t: Team, a: Atom) -> bool:
    """Projection form: ``T[lhs]`` is a subset of ``T[rhs]``."""
    return project(t, a.lhs) <= project(t, a.rhs)


def satisfies_clause(t: Team, a: Atom) -> bool:
    """The defining clause: every row has a partner row whose rhs matches its lhs."""
    left = evaluator(t.universe, a.lhs)
    right = evaluator(t.universe, a.rhs)
    return all(any(left(s) == right(s2) for s2 in t.rows) for s in t.rows)


def is_trivial(a: Atom) -> bool:
    return a.lhs == a.rhs


def largest_satisfying_subteam(t: Team, atoms: Iterable[Atom]) -> Team:
    """Greatest subteam of ``t`` satisfying every atom.

    Satisfaction is closed under unions, so the union of all satisfying
    subteams satisfies the atoms; it is reached by repeatedly dropping rows
    whose left-hand value has no partner.
    """
    atoms = list(atoms)
    evs = [(evaluator(t.universe, a.lhs), evaluator(t.universe, a.rhs)) for a in atoms]
    rows = set(t.rows)
    changed = True
    while changed and rows:
        changed = False
        for left, right in evs:
            available = {right(r) for r in rows}
            keep = {r for r in rows if left(r) in available}
            if len(keep) != len(rows):
                rows = keep
                changed = True
    return Team(t.universe, frozenset(rows))


def nonempty_satisfiable(a: Atom) -> bool:
    """Is ``a`` satisfied by some nonempty team?"""
    universe = tuple(sorted(a.variables()))
    return len(largest_satisfying_subteam(Team.full(universe), [a])) > 0


def enumerate_teams(universe: Sequence[str], cap: int = 4) -> Iterator[Team]:
    """Yield every team over ``universe`` ordered by characteristic bitmask."""
    universe = tuple(universe)
    if len(universe) > cap:
        raise CapExceeded(f"{len(universe)} variables exceed the enumeration cap of {cap}")
    nrows = 1 << len(universe)
    for mask in range(1 << nrows):
        yield Team(universe, frozenset(r for r in range(nrows) if mask >> r & 1))


def team_from_mask(universe: Sequence[str], mask: int) -> Team:
    nrows = 1 << len(universe)
    return Team(tuple(universe), frozenset(r for r in range(nrows) if mask >> r & 1))


def serialize_team(t: Team) -> str:
    lines = [" ".join(t.universe)]
    lines += [" ".join(str(b) for b in bits) for bits in t.sorted_bits()]
    return "\n".join(lines) + "\n"


def parse_team(text: str) -> Team:
    lines = [ln.split() for ln in text.splitlines() if ln.strip()]
    if not lines:
        raise ParseError("empty team serialization")
    universe = tuple(lines[0])
    rows = []
    for n, toks in enumerate(lines[1:], start=2):
        if len(toks) != len(universe) or any(tok not in ("0", "1") for tok in toks):
            raise ParseError(f"bad team row {' '.join(toks)!r}", n)
        rows.append([int(tok) for tok in toks])
    return Team.from_bits(universe, rows)


def sequence_universe(*seqs: Sequence[str]) -> tuple:
    names = set()
    for s in seqs:
        names |= variables_of(s)
    return tuple(sorted(names))


__all__ = [
    "Team",
    "enumerate_teams",
    "evaluator",
    "is_constant",
    "is_trivial",
    "largest_satisfying_subteam",
    "nonempty_satisfiable",
    "parse_team",
    "project",
    "row_bits",
    "row_from_bits",
    "row_value",
    "satisfies",
    "satisfies_clause",
    "serialize_team",
    "team_from_mask",
]
