"""Inference rules I1-I6 and B1-B3 as checkable steps.

``detail`` carries the parameters that pin down a rule instance:

* I3: ``(i, j)`` -- the left block has length ``i``, the moved block ``j``;
  ``xyz <= uvw`` becomes ``xzy <= uwv``.
* I4: ``k`` -- the length of the kept prefix.
* I5: ``i`` -- the split point; the suffix from ``i`` on is repeated.
* I6: ``None`` -- substitution always acts on the last right-hand position.
* B2: the appended constant.
* B1, B3, I1, I2: ``None``; for B3 the premises are the covering set.
"""
from __future__ import annotations

from dataclasses import dataclass
from itertools import product
from typing import Iterable, Iterator, Sequence

from ..errors import PreconditionViolated
from ..syntax import BOT, TOP, Atom, Dialect, is_constant, render_atom

RULES = ("I1", "I2", "I3", "I4", "I5", "I6", "B1", "B2", "B3")

RULES_BY_DIALECT = {
    Dialect.REPETITION_FREE: frozenset(("I1", "I2", "I3", "I4")),
    Dialect.REPETITIONS: frozenset(("I1", "I2", "I3", "I4", "I5", "I6")),
    Dialect.BOOLEAN: frozenset(RULES),
}

CONTRADICTION = Atom((TOP,), (BOT,))


@dataclass(frozen=True)
class RuleStep:
    rule: str
    premises: tuple
    conclusion: Atom
    detail: object = None

    def __str__(self):
        prem = ", ".join(render_atom(p) for p in self.premises)
        return f"{self.rule} [{prem}] |- {render_atom(self.conclusion)}"


def _i3(a: Atom, i: int, j: int) -> Atom:
    l, r = a
    return Atom(l[:i] + l[i + j:] + l[i:i + j], r[:i] + r[i + j:] + r[i:i + j])


def consistent(a: Atom) -> bool:
    """Consistency of an atom whose left-hand side is all constants."""
    x, r = a
    if not all(is_constant(s) for s in x):
        raise PreconditionViolated(f"{render_atom(a)}: left-hand side must consist of constants")
    seen = {}
    for xi, ri in zip(x, r):
        if is_constant(ri) and ri != xi:
            return False
        if seen.setdefault(ri, xi) != xi:
            return False
    return True


def consistent_tuples(p: Sequence[str]) -> Iterator[tuple]:
    """All constant sequences ``x`` with ``x <= p`` consistent, lexicographically (#F < #T)."""
    order = list(dict.fromkeys(s for s in p if not is_constant(s)))
    for values in product((BOT, TOP), repeat=len(order)):
        env = dict(zip(order, values))
        yield tuple(s if is_constant(s) else env[s] for s in p)


def b3_candidate_ok(r: Sequence[str], p: Sequence[str]) -> bool:
    return len(r) == len(p) and all(ri == pi or is_constant(ri) for ri, pi in zip(r, p))


def _covers(x: Sequence[str], r: Sequence[str], p: Sequence[str]) -> bool:
    # r_i in {p_i, #T, #F}; x <= p consistent.  Then x <= r is consistent
    # iff x agrees with r on r's constant positions.
    return all(ri == xi for xi, ri in zip(x, r) if is_constant(ri))


def b3_coverage(candidates: Iterable[Atom], target: Atom):
    """Check the B3 side condition.

    Returns ``(covered, witness)``; ``witness`` is the least constant
    sequence consistent with the target's left-hand side that no candidate
    covers, or ``None`` when covered.
    """
    p, q = target
    lhss = []
    for c in candidates:
        if c.rhs != q or not b3_candidate_ok(c.lhs, p):
            raise PreconditionViolated(
                f"{render_atom(c)} is not a B3 candidate for {render_atom(target)}"
            )
        lhss.append(c.lhs)
    for x in consistent_tuples(p):
        if not any(_covers(x, r, p) for r in lhss):
            return False, x
    return True, None


def minimal_cover(candidates: Sequence[Atom], target: Atom) -> tuple:
    """An irredundant covering subset, preferring earlier candidates."""
    chosen = [c for c in candidates if c.rhs == target.rhs and b3_candidate_ok(c.lhs, target.lhs)]
    if not b3_coverage(chosen, target)[0]:
        raise PreconditionViolated(f"candidates do not cover {render_atom(target)}")
    for c in reversed(list(chosen)):
        rest = [d for d in chosen if d is not c]
        if rest and b3_coverage(rest, target)[0]:
            chosen = rest
    return tuple(chosen)


def validate_step(step: RuleStep, dialect: Dialect | None = None) -> bool:
    """Is ``step`` a correct instance of its rule (and allowed in ``dialect``)?"""
    rule, prem, concl, detail = step.rule, step.premises, step.conclusion, step.detail
    if rule not in RULES:
        return False
    if dialect is not None and rule not in RULES_BY_DIALECT[dialect]:
        return False
    if len(concl.lhs) != len(concl.rhs):
        return False
    n = len(prem[0].lhs) if prem else 0
    if rule == "I1":
        return not prem and concl.lhs == concl.rhs
    if rule == "I2":
        return len(prem) == 2 and prem[0].rhs == prem[1].lhs and concl == Atom(prem[0].lhs, prem[1].rhs)
    if rule == "B3":
        if not prem:
            return False
        try:
            return b3_coverage(prem, concl)[0]
        except PreconditionViolated:
            return False
    if rule == "I6":
        if len(prem) != 2:
            return False
        eq, b = prem
        if len(eq.lhs) != 2 or eq.rhs[0] != eq.rhs[1] or not b.rhs:
            return False
        x1, x2 = eq.lhs
        return b.rhs[-1] == x2 and concl == Atom(b.lhs, b.rhs[:-1] + (x1,))
    if len(prem) != 1:
        return False
    (a,) = prem
    if rule == "B1":
        return a == CONTRADICTION
    if rule == "I3":
        if not (isinstance(detail, tuple) and len(detail) == 2):
            return False
        i, j = detail
        return 0 <= i and 0 <= j and i + j <= n and concl == _i3(a, i, j)
    if rule == "I4":
        return isinstance(detail, int) and 0 <= detail <= n and concl == Atom(a.lhs[:detail], a.rhs[:detail])
    if rule == "I5":
        return (
            isinstance(detail, int)
            and 0 <= detail <= n
            and concl == Atom(a.lhs + a.lhs[detail:], a.rhs + a.rhs[detail:])
        )
    if rule == "B2":
        return detail in (TOP, BOT) and concl == Atom(a.lhs + (detail,), a.rhs + (detail,))
    return False
