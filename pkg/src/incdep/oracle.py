"""Ground truth by enumerating every team, plus the 3-SAT side of coverage.

Teams over ``k`` variables are the subsets of the ``2**k`` rows and are
indexed by their characteristic bitmask, the same order as
:func:`incdep.semantics.enumerate_teams`.  For each atom the oracle computes
the set of satisfying team indices with numpy, stored as a Python int used
as a bitset, so entailment checks are a handful of big-int operations.
"""
from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import CapExceeded, ParseError
from .semantics import Team, evaluator, team_from_mask
from .syntax import BOT, TOP, Atom, Problem

DEFAULT_CAP = 4
HARD_CAP = 5
_CHUNK = 1 << 22


def _check_cap(n: int, cap: int, override: bool) -> None:
    if cap > DEFAULT_CAP and not override:
        raise CapExceeded(f"oracle cap {cap} exceeds {DEFAULT_CAP}; pass the override to allow it")
    if cap > HARD_CAP:
        raise CapExceeded(f"oracle cap {cap} exceeds the hard limit {HARD_CAP}")
    if n > cap:
        raise CapExceeded(f"{n} variables exceed the oracle cap of {cap}")


class Oracle:
    """Satisfaction sets of atoms over every team on a fixed universe."""

    def __init__(self, universe: Sequence[str], cap: int = DEFAULT_CAP, override: bool = False):
        self.universe = tuple(universe)
        _check_cap(len(self.universe), cap, override)
        self.nrows = 1 << len(self.universe)
        self.nteams = 1 << self.nrows
        self._masks = {}
        self._teams = np.arange(self.nteams, dtype=np.uint64) if self.nrows <= 16 else None

    def _row_classes(self, a: Atom):
        # per lhs value: (rows where lhs takes it, rows where rhs takes it)
        lhs = evaluator(self.universe, a.lhs)
        rhs = evaluator(self.universe, a.rhs)
        by_value = {}
        for row in range(self.nrows):
            bit = 1 << row
            entry = by_value.setdefault(lhs(row), [0, 0])
            entry[0] |= bit
        for row in range(self.nrows):
            entry = by_value.get(rhs(row))
            if entry is not None:
                entry[1] |= 1 << row
        return list(by_value.values())

    def _holds(self, classes, teams: np.ndarray) -> np.ndarray:
        ok = np.ones(teams.shape, dtype=bool)
        for lmask, rmask in classes:
            hit = (teams & np.uint64(lmask)) != 0
            if rmask:
                ok &= ~hit | ((teams & np.uint64(rmask)) != 0)
            else:
                ok &= ~hit
        return ok

    def atom_mask(self, a: Atom) -> int:
        """Bitset over team indices: bit ``t`` is set iff team ``t`` satisfies ``a``."""
        mask = self._masks.get(a)
        if mask is None:
            if self._teams is None:
                raise CapExceeded("atom masks are only kept for at most 4 variables")
            ok = self._holds(self._row_classes(a), self._teams)
            mask = int.from_bytes(np.packbits(ok, bitorder="little").tobytes(), "little")
            self._masks[a] = mask
        return mask

    def models(self, assumptions: Iterable[Atom]) -> int:
        mask = (1 << self.nteams) - 1
        for a in assumptions:
            mask &= self.atom_mask(a)
        return mask

    def first_separating(self, assumptions: Iterable[Atom], query: Atom) -> int | None:
        """Least team index satisfying the assumptions but not the query."""
        assumptions = list(assumptions)
        if self._teams is None:
            return self._first_separating_chunked(assumptions, query)
        bad = self.models(assumptions) & ~self.atom_mask(query)
        if not bad:
            return None
        return (bad & -bad).bit_length() - 1

    def _first_separating_chunked(self, assumptions, query):
        classes = [self._row_classes(a) for a in assumptions]
        qclasses = self._row_classes(query)
        for start in range(0, self.nteams, _CHUNK):
            teams = np.arange(start, min(start + _CHUNK, self.nteams), dtype=np.uint64)
            ok = ~self._holds(qclasses, teams)
            for c in classes:
                if not ok.any():
                    break
                ok &= self._holds(c, teams)
            hits = np.flatnonzero(ok)
            if hits.size:
                return start + int(hits[0])
        return None

    def entails(self, assumptions: Iterable[Atom], query: Atom) -> bool:
        return self.first_separating(assumptions, query) is None

    def team(self, index: int) -> Team:
        return team_from_mask(self.universe, index)


def oracle_entails(p: Problem, cap: int = DEFAULT_CAP, override: bool = False) -> bool:
    return Oracle(p.variables, cap, override).entails(p.assumptions, p.query)


def separating_team(p: Problem, cap: int = DEFAULT_CAP, override: bool = False) -> Team | None:
    oracle = Oracle(p.variables, cap, override)
    index = oracle.first_separating(p.assumptions, p.query)
    return None if index is None else oracle.team(index)


# -- 3-SAT -------------------------------------------------------------------


@dataclass(frozen=True)
class CnfFormula:
    """Clauses of three literals; a literal is ``(variable index, polarity)``."""

    clauses: tuple
    num_vars: int = 0

    def __post_init__(self):
        clauses = tuple(tuple((int(v), bool(pol)) for v, pol in c) for c in self.clauses)
        for c in clauses:
            if len(c) != 3:
                raise ValueError(f"clause {c} does not have exactly 3 literals")
            if any(v < 1 for v, _ in c):
                raise ValueError(f"clause {c}: variables are numbered from 1")
        used = max((v for c in clauses for v, _ in c), default=0)
        object.__setattr__(self, "clauses", clauses)
        object.__setattr__(self, "num_vars", max(self.num_vars, used))

    @classmethod
    def from_ints(cls, clauses: Iterable[Sequence[int]], num_vars: int = 0) -> "CnfFormula":
        return cls(tuple(tuple((abs(x), x > 0) for x in c) for c in clauses), num_vars)

    def to_dimacs(self) -> str:
        lines = [f"p cnf {self.num_vars} {len(self.clauses)}"]
        for c in self.clauses:
            lines.append(" ".join(str(v if pol else -v) for v, pol in c) + " 0")
        return "\n".join(lines) + "\n"


def parse_dimacs(text: str) -> CnfFormula:
    num_vars = None
    declared = None
    clauses = []
    current = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            m = re.fullmatch(r"p\s+cnf\s+(\d+)\s+(\d+)", line)
            if not m:
                raise ParseError(f"bad problem line {line!r}", lineno, 1)
            num_vars, declared = int(m.group(1)), int(m.group(2))
            continue
        for tok in line.split():
            try:
                lit = int(tok)
            except ValueError:
                raise ParseError(f"bad literal {tok!r}", lineno) from None
            if lit == 0:
                if len(current) != 3:
                    raise ParseError(f"clause with {len(current)} literals; exactly 3 are required", lineno)
                clauses.append(tuple(current))
                current = []
            else:
                if num_vars is not None and abs(lit) > num_vars:
                    raise ParseError(f"literal {lit} exceeds the declared {num_vars} variables", lineno)
                current.append(lit)
    if current:
        raise ParseError("last clause is not terminated by 0")
    if declared is not None and declared != len(clauses):
        raise ParseError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula.from_ints(clauses, num_vars or 0)


def sat_bruteforce(f: CnfFormula, max_vars: int = 24) -> bool:
    n = f.num_vars
    if n > max_vars:
        raise CapExceeded(f"{n} variables exceed the brute-force limit of {max_vars}")
    if not f.clauses:
        return True
    total = 1 << n
    step = min(total, _CHUNK)
    for start in range(0, total, step):
        s = np.arange(start, min(start + step, total), dtype=np.uint32)
        ok = np.ones(s.shape, dtype=bool)
        for clause in f.clauses:
            sat = np.zeros(s.shape, dtype=bool)
            for v, pol in clause:
                bit = ((s >> np.uint32(v - 1)) & np.uint32(1)).astype(bool)
                sat |= bit if pol else ~bit
            ok &= sat
        if ok.any():
            return True
    return False


def reduce_3sat(f: CnfFormula):
    """Coverage instance ``(A, p <= r)`` that is covered iff ``f`` is unsatisfiable.

    ``p`` lists the clause literals' variables in order (repeats kept), ``r``
    is fresh.  Each clause contributes one candidate: its block holds the
    literal values that falsify the clause, the rest copies ``p``.
    """
    if not f.clauses:
        raise ValueError("the reduction needs at least one clause")
    p = tuple(f"p{v}" for c in f.clauses for v, _ in c)
    r = tuple(f"r{i}" for i in range(1, len(p) + 1))
    candidates = []
    for k, clause in enumerate(f.clauses):
        b = list(p)
        for i, (_, pol) in enumerate(clause):
            b[3 * k + i] = BOT if pol else TOP
        candidates.append(Atom(tuple(b), r))
    return tuple(dict.fromkeys(candidates)), Atom(p, r)
