"""Derivable equalities, right-hand-side normal form and problem normalization."""
from __future__ import annotations

from typing import Iterable, Sequence

from ..syntax import BOT, TOP, Atom, Problem, is_constant


class EqualityClasses:
    """A partition of symbols (variables plus ``#T``/``#F``).

    The representative of a class is its constant if it has one, otherwise
    its lexicographically least variable.  ``contradiction`` is set when the
    two constants fall into one class.
    """

    def __init__(self, symbols: Iterable[str] = ()):
        self._parent = {}
        for s in (BOT, TOP, *symbols):
            self._parent.setdefault(s, s)

    def add(self, s: str) -> None:
        self._parent.setdefault(s, s)

    def find(self, s: str) -> str:
        parent = self._parent
        parent.setdefault(s, s)
        root = s
        while parent[root] != root:
            root = parent[root]
        while parent[s] != root:
            parent[s], s = root, parent[s]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        # keep the preferred representative as root
        if _rank(rb) < _rank(ra):
            ra, rb = rb, ra
        self._parent[rb] = ra
        return True

    def same(self, a: str, b: str) -> bool:
        return self.find(a) == self.find(b)

    def representative(self, s: str) -> str:
        return self.find(s)

    def constant_of(self, s: str) -> str | None:
        root = self.find(s)
        return root if is_constant(root) else None

    @property
    def contradiction(self) -> bool:
        return self.find(TOP) == self.find(BOT)

    @property
    def symbols(self) -> tuple:
        return tuple(self._parent)

    def classes(self) -> list:
        groups = {}
        for s in self._parent:
            groups.setdefault(self.find(s), set()).add(s)
        return sorted((frozenset(g) for g in groups.values()), key=lambda g: sorted(g))

    def nontrivial_classes(self) -> list:
        return [g for g in self.classes() if len(g) > 1]

    def rewrite(self, seq: Sequence[str]) -> tuple:
        return tuple(self.find(s) for s in seq)

    def rewrite_atom(self, a: Atom) -> Atom:
        return Atom(self.rewrite(a.lhs), self.rewrite(a.rhs))

    def __repr__(self):
        parts = ["{" + ", ".join(sorted(g)) + "}" for g in self.nontrivial_classes()]
        flag = ", contradiction" if self.contradiction else ""
        return f"EqualityClasses({'; '.join(parts)}{flag})"


def _rank(s: str):
    # constants first, then variables by name
    return (0, s) if is_constant(s) else (1, s)


def derivable_equalities(assumptions: Iterable[Atom], symbols: Iterable[str] = ()) -> EqualityClasses:
    """Least fixed point of equality propagation through right-hand sides.

    Positions ``i, j`` whose right-hand symbols are equal force equal
    left-hand symbols; a right-hand symbol equal to a constant forces the
    left-hand symbol at the same position to that constant.
    """
    atoms = list(assumptions)
    classes = EqualityClasses(symbols)
    for a in atoms:
        for s in a.lhs + a.rhs:
            classes.add(s)
    changed = True
    while changed:
        changed = False
        for lhs, rhs in atoms:
            first = {}
            for i, r in enumerate(rhs):
                root = classes.find(r)
                if is_constant(root):
                    changed |= classes.union(lhs[i], root)
                j = first.setdefault(root, i)
                if j != i:
                    changed |= classes.union(lhs[j], lhs[i])
    return classes


def decompose_rhs_repetitions(a: Atom):
    """Split repeated right-hand symbols off as arity-2 equality atoms.

    The first occurrence of every right-hand symbol is kept in the core.
    """
    first = {}
    keep = []
    equalities = []
    for i, r in enumerate(a.rhs):
        if r in first:
            j = first[r]
            equalities.append(Atom((a.lhs[j], a.lhs[i]), (r, r)))
        else:
            first[r] = i
            keep.append(i)
    core = Atom(tuple(a.lhs[i] for i in keep), tuple(a.rhs[i] for i in keep))
    return core, tuple(dict.fromkeys(equalities))


def normalize(p: Problem):
    """Rewrite ``p`` over class representatives with repetition-free right-hand sides.

    Returns ``(normalized problem, classes, query equality obligations)``.
    Obligations that are not trivial after rewriting mean the query's
    right-hand side identifies positions its left-hand side does not.
    """
    classes = derivable_equalities(p.assumptions, p.variables)
    assumptions = []
    for a in p.assumptions:
        core, _ = decompose_rhs_repetitions(classes.rewrite_atom(a))
        assumptions.append(core)
    query, obligations = decompose_rhs_repetitions(classes.rewrite_atom(p.query))
    normalized = Problem(p.dialect, tuple(assumptions), query, p.extra_variables)
    return normalized, classes, obligations
