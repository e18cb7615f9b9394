"""Exhaustive sweeps over every team on three variables.

Each sweep returns a count of checked cases and a list of failures so the
acceptance suite can reuse it.
"""
from itertools import combinations, product

import numpy as np

from incdep.experiments import atom_universe
from incdep.oracle import Oracle
from incdep.calculus import RuleStep, validate_step
from incdep.syntax import BOT, TOP, Atom, Dialect

V3 = ("p1", "p2", "p3")
ATOMS = atom_universe(V3, Dialect.BOOLEAN)


def _satisfying(oracle, a):
    mask = oracle.atom_mask(a)
    bits = np.unpackbits(np.frombuffer(mask.to_bytes(32, "little"), dtype=np.uint8), bitorder="little")
    return bits.astype(bool)


def union_closure_sweep():
    oracle = Oracle(V3)
    failures = []
    for a in ATOMS:
        ok = _satisfying(oracle, a)
        idx = np.flatnonzero(ok)
        unions = np.bitwise_or.outer(idx, idx)
        if not ok[unions].all():
            failures.append(a)
    return len(ATOMS) * 256 * 256, failures


def empty_team_sweep():
    oracle = Oracle(V3)
    failures = [a for a in ATOMS if not oracle.atom_mask(a) & 1]
    return len(ATOMS), failures


def b2_equivalence_sweep():
    oracle = Oracle(V3)
    failures = []
    for a in ATOMS:
        for c in (TOP, BOT):
            padded = Atom(a.lhs + (c,), a.rhs + (c,))
            if oracle.atom_mask(a) != oracle.atom_mask(padded):
                failures.append((a, c))
    return 2 * len(ATOMS), failures


def _single_premise_steps(a):
    n = a.arity
    for i in range(n + 1):
        for j in range(n - i + 1):
            yield RuleStep(
                "I3",
                (a,),
                Atom(a.lhs[:i] + a.lhs[i + j:] + a.lhs[i:i + j], a.rhs[:i] + a.rhs[i + j:] + a.rhs[i:i + j]),
                (i, j),
            )
    for k in range(1, n + 1):
        yield RuleStep("I4", (a,), Atom(a.lhs[:k], a.rhs[:k]), k)
    for k in range(n + 1):
        yield RuleStep("I5", (a,), Atom(a.lhs + a.lhs[k:], a.rhs + a.rhs[k:]), k)
    for c in (TOP, BOT):
        yield RuleStep("B2", (a,), Atom(a.lhs + (c,), a.rhs + (c,)), c)


def _b3_steps():
    # candidate sets of size <= 3 for every arity-2 target with right-hand side p2 p3
    q = ("p2", "p3")
    for p in product(V3 + (TOP, BOT), repeat=2):
        options = [Atom(r, q) for r in product(*[(pi, TOP, BOT) for pi in p]) if r != p]
        for k in (1, 2, 3):
            for S in combinations(options, k):
                yield RuleStep("B3", S, Atom(p, q))


def rule_soundness_sweep():
    """Every validated rule instance over arity <= 2 atoms (and their one-step
    extensions) holds in all 256 teams on three variables."""
    oracle = Oracle(V3)
    checked = 0
    failures = []

    def check(step):
        nonlocal checked
        if not validate_step(step):
            return
        checked += 1
        if oracle.models(step.premises) & ~oracle.atom_mask(step.conclusion):
            failures.append(step)

    by_lhs = {}
    for a in ATOMS:
        by_lhs.setdefault(a.lhs, []).append(a)
    for a in ATOMS:
        check(RuleStep("I1", (), Atom(a.lhs, a.lhs)))
        check(RuleStep("B1", (Atom((TOP,), (BOT,)),), a))
        for step in _single_premise_steps(a):
            check(step)
        for b in by_lhs.get(a.rhs, ()):
            check(RuleStep("I2", (a, b), Atom(a.lhs, b.rhs)))
        if a.arity == 2 and a.rhs[0] == a.rhs[1]:
            x1, x2 = a.lhs
            for b in ATOMS:
                if b.rhs[-1] == x2:
                    check(RuleStep("I6", (a, b), Atom(b.lhs, b.rhs[:-1] + (x1,))))
    for step in _b3_steps():
        check(step)
    return checked, failures


def test_union_closure_exhaustive():
    checked, failures = union_closure_sweep()
    assert checked > 0 and failures == []


def test_empty_team_exhaustive():
    assert empty_team_sweep()[1] == []


def test_b2_two_way_exhaustive():
    assert b2_equivalence_sweep()[1] == []


def test_rule_soundness_exhaustive():
    checked, failures = rule_soundness_sweep()
    assert checked > 30000
    assert failures == []
