"""Counterexample teams for non-derivable atoms.

The team keeps every assignment that respects the derivable equalities and,
unless the query's right-hand side identifies positions its left-hand side
does not, drops the assignments on which some derivable left-hand side ``w``
of the query's right-hand side takes a forbidden value ``c``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Sequence

from .calculus.closure import EqualityClasses
from .calculus.rules import consistent_tuples
from .errors import CoverageComplete, WitnessVerificationFailed
from .semantics import Team, evaluator, largest_satisfying_subteam, satisfies
from .syntax import TOP, Atom, Dialect, Problem, is_constant, render_atom, render_sequence

MATERIALIZE_LIMIT = 16


@dataclass
class WitnessPlan:
    classes: EqualityClasses
    forbidden_tuple: tuple | None
    forbidden_sequences: frozenset
    stop_branch: bool
    # rows removed by the greatest-subteam fallback; 0 for the plain construction
    pruned_rows: int = 0
    notes: list = field(default_factory=list)

    def constraint_lines(self) -> list:
        lines = []
        for group in self.classes.nontrivial_classes():
            members = sorted(group, key=lambda s: (not is_constant(s), s))
            head = members[0]
            lines += [f"{head}={m}" for m in members[1:]]
        if not self.stop_branch and self.forbidden_tuple is not None:
            bits = "".join(str(b) for b in self.forbidden_tuple)
            for w in sorted(self.forbidden_sequences):
                lines.append(f"forbid {render_sequence(w)} = {bits}")
        return lines


def stop_branch(query: Atom, classes: EqualityClasses) -> bool:
    """Does the right-hand side force an identification the left-hand side lacks?

    Besides equal right-hand positions, a right-hand position that is
    (equal to) a constant counts as identified with that constant.
    """
    x, y = query
    n = len(x)
    for j in range(n):
        c = classes.constant_of(y[j])
        if c is not None and not classes.same(x[j], c):
            return True
        for k in range(j + 1, n):
            if classes.same(y[j], y[k]) and not classes.same(x[j], x[k]):
                return True
    return False


def _bits(x: Sequence[str]) -> tuple:
    return tuple(1 if s == TOP else 0 for s in x)


def choose_c(target, derivables: Iterable[Sequence[str]]) -> tuple:
    """Forbidden value for the constants setting.

    ``target`` is a left-hand side ``p`` or a problem (its query's left-hand
    side is used).  Takes the least constant sequence ``x`` consistent with
    ``p`` that no derivable ``r`` (with ``r_i`` in ``{p_i, #T, #F}``) covers.
    """
    p = tuple(target.query.lhs) if isinstance(target, Problem) else tuple(target)
    rs = [
        tuple(r)
        for r in derivables
        if len(r) == len(p) and all(ri == pi or is_constant(ri) for ri, pi in zip(r, p))
    ]
    for x in consistent_tuples(p):
        if not any(all(ri == xi for xi, ri in zip(x, r) if is_constant(ri)) for r in rs):
            return _bits(x)
    raise CoverageComplete(f"every constant sequence consistent with {render_sequence(p)} is covered")


def class_filter(universe: Sequence[str], classes: EqualityClasses):
    """Predicate on rows: every class of variables is constant across the class."""
    checks = []
    for group in classes.nontrivial_classes():
        members = [v for v in group if v in universe]
        const = next((s for s in group if is_constant(s)), None)
        if const is not None:
            bit = 1 if const == TOP else 0
            checks.extend((universe.index(v), bit) for v in members)
        elif len(members) > 1:
            head = universe.index(members[0])
            checks.extend((universe.index(v), ("eq", head)) for v in members[1:])
    width = len(universe)
    fixed = [(width - 1 - i, b) for i, b in checks if not isinstance(b, tuple)]
    equal = [(width - 1 - i, width - 1 - b[1]) for i, b in checks if isinstance(b, tuple)]

    def respects(row: int) -> bool:
        for shift, bit in fixed:
            if (row >> shift) & 1 != bit:
                return False
        for s1, s2 in equal:
            if (row >> s1) & 1 != (row >> s2) & 1:
                return False
        return True

    return respects


def build_counterexample(universe, plan: WitnessPlan) -> Team:
    """All class-respecting rows, minus forbidden hits outside the stop branch.

    ``universe`` is a variable sequence or a problem (its variables).
    """
    universe = tuple(universe.variables if isinstance(universe, Problem) else universe)
    respects = class_filter(universe, plan.classes)
    rows = [r for r in range(1 << len(universe)) if respects(r)]
    if not plan.stop_branch and plan.forbidden_tuple is not None:
        c = tuple(plan.forbidden_tuple)
        evs = [evaluator(universe, w) for w in plan.forbidden_sequences]
        rows = [r for r in rows if all(ev(r) != c for ev in evs)]
    return Team(universe, frozenset(rows))


def separates(assumptions: Iterable[Atom], query: Atom, team: Team) -> bool:
    return all(satisfies(team, a) for a in assumptions) and not satisfies(team, query)


def verify_counterexample(p: Problem, t: Team) -> bool:
    return separates(p.assumptions, p.query, t)


def candidate_tuples(dialect: Dialect, lhs_normal: Sequence[str], derivables: Iterable[Sequence[str]]):
    """Forbidden values in the order they are tried: the preferred one first."""
    realizable = [_bits(x) for x in consistent_tuples(tuple(lhs_normal))]
    preferred = None
    if dialect is Dialect.BOOLEAN:
        try:
            preferred = choose_c(lhs_normal, derivables)
        except CoverageComplete:
            preferred = None
    else:
        preferred = (0,) * len(lhs_normal)
    order = [preferred] if preferred is not None else []
    order += [c for c in realizable if c != preferred]
    return order


def find_counterexample(
    universe: Sequence[str],
    dialect: Dialect,
    assumptions: Sequence[Atom],
    query: Atom,
    classes: EqualityClasses,
    derivables: Iterable[Sequence[str]],
    materialize_limit: int = MATERIALIZE_LIMIT,
    cache: dict | None = None,
):
    """Build and verify a counterexample; returns ``(plan, team or None)``.

    The construction is tried with the preferred forbidden value first and
    then with the other realizable values.  If none separates, the
    greatest subteam satisfying the assumptions is taken for each value in
    turn, and finally every value is searched for a greatest model that
    separates.  Raises :class:`WitnessVerificationFailed` if every attempt
    fails, which means the query holds in every model.
    ``cache`` (keyed by right-hand side and forbidden value) lets repeated
    queries against the same assumptions share teams; the derivables for a
    right-hand side must not change between calls.
    """
    universe = tuple(universe)
    derivables = frozenset(tuple(w) for w in derivables)
    stop = stop_branch(query, classes)
    if stop:
        plan = WitnessPlan(classes, None, derivables, True)
        if len(universe) > materialize_limit:
            return plan, None
        team = build_counterexample(universe, plan)
        if separates(assumptions, query, team):
            return plan, team
        return _search(universe, assumptions, query, classes, derivables)

    lhs_normal = classes.rewrite(query.lhs)
    tuples = candidate_tuples(dialect, lhs_normal, derivables)
    if len(universe) > materialize_limit:
        return WitnessPlan(classes, tuples[0], derivables, False, notes=["not materialized"]), None
    plans = []
    for c in tuples:
        plan = WitnessPlan(classes, c, derivables, False)
        key = (query.rhs, c)
        if cache is not None and key in cache:
            team, ok = cache[key]
        else:
            team = build_counterexample(universe, plan)
            ok = all(satisfies(team, a) for a in assumptions)
            if cache is not None:
                cache[key] = (team, ok)
        if ok and not satisfies(team, query):
            if c != tuples[0]:
                plan.notes.append(f"preferred value {tuples[0]} did not separate")
            return plan, team
        plans.append((plan, team))
    for plan, team in plans:
        pruned = largest_satisfying_subteam(team, assumptions)
        if separates(assumptions, query, pruned):
            plan.pruned_rows = len(team) - len(pruned)
            plan.notes.append("pruned to the greatest subteam satisfying the assumptions")
            return plan, pruned
    return _search(universe, assumptions, query, classes, derivables)


def _search(universe, assumptions, query, classes, derivables):
    """Complete for separation: for each value ``a``, the greatest model
    avoiding ``a`` on the right-hand side shows ``a`` on the left, or no
    separating team realizes ``a`` at all."""
    full = Team.full(universe)
    lhs, rhs = evaluator(universe, query.lhs), evaluator(universe, query.rhs)
    for a in product((0, 1), repeat=query.arity):
        start = Team(universe, frozenset(r for r in full.rows if rhs(r) != a))
        model = largest_satisfying_subteam(start, assumptions)
        if any(lhs(r) == a for r in model.rows):
            plan = WitnessPlan(classes, a, derivables, False, len(start) - len(model))
            plan.notes.append("greatest model avoiding the value on the right-hand side")
            return plan, model
    raise WitnessVerificationFailed(
        f"{render_atom(query)} holds in every team satisfying the assumptions but is not derivable",
        query,
    )
