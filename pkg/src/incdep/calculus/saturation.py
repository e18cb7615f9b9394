"""Bounded forward saturation under I1-I6 and B1-B3 with replayable traces."""
from __future__ import annotations

import logging
from collections import defaultdict, deque
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable

from ..errors import CapExceeded
from ..syntax import BOT, TOP, Atom, Dialect, Problem, is_constant, natural_key, render_atom
from .rules import CONTRADICTION, RULES_BY_DIALECT, RuleStep, minimal_cover, validate_step

log = logging.getLogger(__name__)

DEFAULT_MAX_ATOMS = 500_000


class _Contradiction(Exception):
    pass


@dataclass
class DerivationTrace:
    """Steps in dependency order; premises are assumptions or earlier conclusions."""

    target: Atom
    assumptions: tuple
    steps: list = field(default_factory=list)

    def references(self):
        """Per step, the premise references: ``A#k`` or an earlier step index."""
        where = {a: f"A#{k}" for k, a in enumerate(self.assumptions)}
        out = []
        for idx, step in enumerate(self.steps):
            out.append([where[p] for p in step.premises])
            where.setdefault(step.conclusion, str(idx))
        return out

    def lines(self) -> list:
        lines = []
        for idx, (step, refs) in enumerate(zip(self.steps, self.references())):
            text = f"{idx}: {step.rule} [{', '.join(refs)}]"
            if step.rule == "B3":
                text += " {" + "; ".join(render_atom(p) for p in step.premises) + "}"
            lines.append(f"{text} |- {render_atom(step.conclusion)}")
        return lines

    def __str__(self):
        return "\n".join(self.lines())

    def to_json(self) -> list:
        out = []
        for idx, (step, refs) in enumerate(zip(self.steps, self.references())):
            item = {
                "index": idx,
                "rule": step.rule,
                "premises": refs,
                "conclusion": render_atom(step.conclusion),
            }
            if step.detail is not None:
                item["detail"] = step.detail
            if step.rule == "B3":
                item["covering_set"] = [render_atom(p) for p in step.premises]
            out.append(item)
        return out

    def replay(self, dialect: Dialect | None = None) -> bool:
        """Validate every step in order and check that the target is reached."""
        known = set(self.assumptions)
        for step in self.steps:
            if any(p not in known for p in step.premises):
                return False
            if not validate_step(step, dialect):
                return False
            known.add(step.conclusion)
        if not self.steps:
            return self.target in known
        return self.steps[-1].conclusion == self.target


class Saturation:
    """Closure of an assumption set under the dialect's rules, bounded in arity.

    Trivial atoms (I1 instances) are implicit: they are never stored, but
    :meth:`contains` accepts them and traces introduce them as I1 steps.
    Once ``#T <= #F`` is derived every atom follows by B1, and saturation
    stops.
    """

    def __init__(
        self,
        assumptions: Iterable[Atom],
        dialect: Dialect,
        variables: Iterable[str] = (),
        bound: int | None = None,
        max_atoms: int = DEFAULT_MAX_ATOMS,
    ):
        self.assumptions = tuple(dict.fromkeys(assumptions))
        self.dialect = dialect
        self.rules = RULES_BY_DIALECT[dialect]
        names = set(variables)
        for a in self.assumptions:
            names |= a.variables()
        symbols = sorted(names, key=natural_key)
        if dialect.allows_constants:
            symbols += [BOT, TOP]
        self.variables = tuple(sorted(names, key=natural_key))
        self.symbols = tuple(symbols)
        arities = [a.arity for a in self.assumptions]
        self.bound = bound if bound is not None else max([2, *arities])
        if arities and max(arities) > self.bound:
            raise ValueError(f"bound {self.bound} is below the largest assumption arity {max(arities)}")
        self.max_atoms = max_atoms

        self.steps = {}
        self.contradiction = False
        self._by_lhs = defaultdict(set)
        self._by_rhs = defaultdict(set)
        self._by_rhs_last = defaultdict(set)
        self._eq_by_x2 = defaultdict(list)
        self._queue = deque()
        self._dirty_rhs = set()
        self._run()

    # -- construction -------------------------------------------------------

    def _add(self, a: Atom, rule: str, premises: tuple, detail=None) -> None:
        n = len(a.lhs)
        if n == 0 or n > self.bound or a.lhs == a.rhs or a in self.steps:
            return
        self.steps[a] = RuleStep(rule, premises, a, detail) if rule else None
        if a == CONTRADICTION:
            self.contradiction = True
            raise _Contradiction
        if len(self.steps) > self.max_atoms:
            raise CapExceeded(f"saturation exceeded {self.max_atoms} derived atoms")
        self._by_lhs[a.lhs].add(a)
        self._by_rhs[a.rhs].add(a)
        self._by_rhs_last[a.rhs[-1]].add(a)
        self._dirty_rhs.add(a.rhs)
        self._queue.append(a)

    def _run(self) -> None:
        try:
            for a in self.assumptions:
                if a == CONTRADICTION and "B1" in self.rules:
                    self.steps[a] = None
                    self.contradiction = True
                    return
                self._add(a, None, ())
            while True:
                while self._queue:
                    self._expand(self._queue.popleft())
                if "B3" not in self.rules or not self._b3_pass():
                    break
        except _Contradiction:
            self._queue.clear()
        log.debug("saturation: %d atoms, contradiction=%s", len(self.steps), self.contradiction)

    def _expand(self, a: Atom) -> None:
        l, r = a
        n = len(l)
        add = self._add
        rules = self.rules
        for i in range(n):
            for j in range(1, n - i):
                k = i + j
                add(Atom(l[:i] + l[k:] + l[i:k], r[:i] + r[k:] + r[i:k]), "I3", (a,), (i, j))
        for k in range(1, n):
            add(Atom(l[:k], r[:k]), "I4", (a,), k)
        if "I5" in rules:
            for i in range(n):
                if 2 * n - i <= self.bound:
                    add(Atom(l + l[i:], r + r[i:]), "I5", (a,), i)
        if "B2" in rules and n < self.bound:
            for c in (TOP, BOT):
                add(Atom(l + (c,), r + (c,)), "B2", (a,), c)
        for b in list(self._by_lhs.get(r, ())):
            add(Atom(l, b.rhs), "I2", (a, b))
        for b in list(self._by_rhs.get(l, ())):
            add(Atom(b.lhs, r), "I2", (b, a))
        if "I6" in rules:
            if n == 2 and r[0] == r[1] and l[0] != l[1]:
                x1, x2 = l
                self._eq_by_x2[x2].append(a)
                for b in list(self._by_rhs_last.get(x2, ())):
                    add(Atom(b.lhs, b.rhs[:-1] + (x1,)), "I6", (a, b))
                for k in range(self.bound):
                    for v in product(self.symbols, repeat=k):
                        z = v + (x2,)
                        add(Atom(z, v + (x1,)), "I6", (a, Atom(z, z)))
            for e in list(self._eq_by_x2.get(r[-1], ())):
                add(Atom(l, r[:-1] + (e.lhs[0],)), "I6", (e, a))

    def _b3_pass(self) -> bool:
        """Apply B3 to every right-hand side that gained atoms; report progress."""
        dirty, self._dirty_rhs = self._dirty_rhs, set()
        before = len(self.steps)
        variables = self.variables
        for q in sorted(dirty):
            group = sorted(self._by_rhs.get(q, ()))
            lhss = [b.lhs for b in group]
            targets = set()
            for r in lhss:
                options = [
                    (ri,) + variables if is_constant(ri) else (ri,)
                    for ri in r
                ]
                if all(len(o) == 1 for o in options):
                    continue
                targets.update(product(*options))
            for p in sorted(targets):
                if p == q or Atom(p, q) in self.steps:
                    continue
                if _covered(p, lhss):
                    cover = minimal_cover(group, Atom(p, q))
                    self._add(Atom(p, q), "B3", cover)
        return len(self.steps) > before

    # -- queries ------------------------------------------------------------

    def contains(self, a: Atom) -> bool:
        if len(a.lhs) != len(a.rhs):
            return False
        if a.lhs == a.rhs or self.contradiction:
            return True
        return a in self.steps

    @property
    def derived(self) -> frozenset:
        """Stored atoms (assumptions included); trivial atoms are implicit."""
        return frozenset(self.steps)

    def lhs_for(self, rhs: tuple) -> set:
        """Every ``w`` with ``w <= rhs`` derived, ``rhs`` itself included."""
        if self.contradiction:
            return set(product(self.symbols, repeat=len(rhs)))
        return {a.lhs for a in self._by_rhs.get(rhs, ())} | {rhs}

    def _step_for(self, a: Atom):
        if a.lhs == a.rhs:
            return RuleStep("I1", (), a)
        if a in self.steps:
            return self.steps[a]
        if self.contradiction:
            return RuleStep("B1", (CONTRADICTION,), a)
        raise KeyError(render_atom(a))

    def trace(self, target: Atom) -> DerivationTrace:
        if not self.contains(target):
            raise KeyError(f"{render_atom(target)} is not derived")
        assumptions = set(self.assumptions)
        done = set(assumptions)
        steps = []
        stack = [(target, False)]
        while stack:
            a, expanded = stack.pop()
            if a in done:
                continue
            step = self._step_for(a)
            if expanded:
                done.add(a)
                steps.append(step)
                continue
            stack.append((a, True))
            for p in reversed(step.premises):
                if p not in done:
                    stack.append((p, False))
        return DerivationTrace(target, self.assumptions, steps)


def _covered(p: tuple, lhss: list) -> bool:
    """Fast B3 coverage test via subcube masks over the target's variables."""
    order = list(dict.fromkeys(s for s in p if not is_constant(s)))
    k = len(order)
    index = {v: n for n, v in enumerate(order)}
    full = (1 << (1 << k)) - 1
    covered = 0
    for r in lhss:
        fixed = {}
        ok = True
        for pi, ri in zip(p, r):
            if ri == pi:
                continue
            if not is_constant(ri):
                ok = False
                break
            if is_constant(pi):
                ok = False
                break
            bit = 1 if ri == TOP else 0
            if fixed.setdefault(index[pi], bit) != bit:
                ok = False
                break
        if not ok:
            continue
        covered |= _cube(k, tuple(sorted(fixed.items())))
        if covered == full:
            return True
    return covered == full


_CUBES = {}


def _cube(k: int, fixed: tuple) -> int:
    key = (k, fixed)
    mask = _CUBES.get(key)
    if mask is None:
        mask = 0
        for x in range(1 << k):
            if all((x >> (k - 1 - var)) & 1 == bit for var, bit in fixed):
                mask |= 1 << x
        _CUBES[key] = mask
    return mask


def saturate(p: Problem, bound: int | None = None, max_atoms: int = DEFAULT_MAX_ATOMS) -> Saturation:
    """Saturate ``p``'s assumptions over ``p``'s symbols.

    The default bound is the largest arity among the query and the
    assumptions, and at least 2.
    """
    if bound is None:
        bound = max(2, p.max_arity)
    return Saturation(p.assumptions, p.dialect, p.variables, bound, max_atoms)
