"""Deciding implication: saturation for the positive answer, a verified
counterexample team for the negative one."""
from __future__ import annotations

from collections import deque
from dataclasses import dataclass
from itertools import product
from typing import Iterable

from .calculus.closure import derivable_equalities, normalize
from .calculus.saturation import DEFAULT_MAX_ATOMS, DerivationTrace, Saturation
from .errors import CapExceeded, UnknownVariable
from .semantics import Team
from .syntax import BOT, TOP, Atom, Dialect, Problem, render_atom
from .witness import MATERIALIZE_LIMIT, WitnessPlan, find_counterexample


@dataclass
class Entailed:
    trace: DerivationTrace
    entailed = True

    def to_json(self) -> dict:
        return {"verdict": "entailed", "trace": self.trace.to_json()}


@dataclass
class NotEntailed:
    witness: Team | None
    plan: WitnessPlan
    entailed = False

    def to_json(self, witness: str = "table") -> dict:
        out = {"verdict": "not-entailed"}
        if witness == "table" and self.witness is not None:
            out["witness"] = {
                "variables": list(self.witness.universe),
                "rows": [list(r) for r in self.witness.sorted_bits()],
            }
        elif witness in ("table", "constraints"):
            out["witness"] = {"constraints": self.plan.constraint_lines()}
        return out


class Decider:
    """Answers many queries against one assumption set.

    The saturation and counterexample teams are computed once and shared.
    Queries must stay within ``variables`` and ``bound``.
    """

    def __init__(
        self,
        dialect: Dialect,
        assumptions: Iterable[Atom],
        variables: Iterable[str] = (),
        bound: int | None = None,
        max_atoms: int = DEFAULT_MAX_ATOMS,
        materialize_limit: int = MATERIALIZE_LIMIT,
    ):
        self.dialect = dialect
        self.assumptions = tuple(dict.fromkeys(assumptions))
        self.saturation = Saturation(self.assumptions, dialect, variables, bound, max_atoms)
        self.universe = self.saturation.variables
        self.classes = derivable_equalities(self.assumptions, self.universe)
        self.materialize_limit = materialize_limit
        self._teams = {}

    @classmethod
    def for_problem(cls, p: Problem, bound: int | None = None, **kw) -> "Decider":
        if bound is None:
            bound = max(2, p.max_arity)
        return cls(p.dialect, p.assumptions, p.variables, bound, **kw)

    def _check(self, query: Atom) -> None:
        unknown = query.variables() - set(self.universe)
        if unknown:
            raise UnknownVariable(f"{render_atom(query)}: variables {sorted(unknown)} outside the universe")
        if query.arity > self.saturation.bound:
            raise ValueError(f"{render_atom(query)}: arity above the saturation bound {self.saturation.bound}")

    def derivable_set(self, rhs) -> set:
        return self.saturation.lhs_for(tuple(rhs))

    def decide(self, query: Atom):
        self._check(query)
        sat = self.saturation
        if sat.contains(query):
            return Entailed(sat.trace(query))
        plan, team = find_counterexample(
            self.universe,
            self.dialect,
            self.assumptions,
            query,
            self.classes,
            sat.lhs_for(query.rhs),
            self.materialize_limit,
            self._teams,
        )
        return NotEntailed(team, plan)


def decide(p: Problem, bound: int | None = None, max_atoms: int = DEFAULT_MAX_ATOMS):
    """Entailed(trace) or NotEntailed(witness); witnesses are verified first."""
    return Decider.for_problem(p, bound, max_atoms=max_atoms).decide(p.query)


def derivable_set(p: Problem, rhs) -> set:
    """Every ``w`` over the problem's symbols with ``w <= rhs`` derivable."""
    rhs = tuple(rhs)
    return Decider.for_problem(p, max(2, p.max_arity, len(rhs))).derivable_set(rhs)


def _successors(state: tuple, u: tuple, v: tuple):
    # maps f with state[i] == u[f(i)]; the successor is v∘f
    choices = []
    for s in state:
        positions = [j for j, x in enumerate(u) if x == s]
        if not positions:
            return
        choices.append(positions)
    for f in product(*choices):
        yield tuple(v[j] for j in f)


def reach_entails(p: Problem, max_states: int = 200_000) -> bool:
    """Breadth-first search from the query's left-hand side to its right-hand side.

    Works on the normalized problem.  Each step rewrites the current
    sequence through one assumption ``u <= v``: positions are matched into
    ``u`` (with projection and duplication allowed) and read back from
    ``v``.  With constants, every assumption is padded by ``#T #F`` on
    both sides so constants in a state can be matched.
    """
    normalized, classes, obligations = normalize(p)
    if classes.contradiction:
        return True
    if any(o.lhs[0] != o.lhs[1] for o in obligations):
        return False
    start, goal = normalized.query
    pad = (TOP, BOT) if p.dialect is Dialect.BOOLEAN else ()
    rules = [(a.lhs + pad, a.rhs + pad) for a in normalized.assumptions]
    seen = {start}
    queue = deque([start])
    while queue:
        state = queue.popleft()
        if state == goal:
            return True
        for u, v in rules:
            for nxt in _successors(state, u, v):
                if nxt not in seen:
                    seen.add(nxt)
                    if len(seen) > max_states:
                        raise CapExceeded(f"reachability exceeded {max_states} states")
                    queue.append(nxt)
    return False
