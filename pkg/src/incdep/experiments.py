"""Executable checks: oracle agreement sweeps, the missing Armstrong team,
and the arity lower bound for the constants system."""
from __future__ import annotations

import logging
import random
import time
from dataclasses import dataclass, field
from itertools import combinations, permutations, product
from typing import Iterable, Sequence

from .calculus.rules import b3_coverage
from .decide import Decider
from .errors import CatalogueGap, WitnessVerificationFailed
from .oracle import Oracle
from .semantics import Team, enumerate_teams, largest_satisfying_subteam, row_from_bits, satisfies
from .syntax import BOT, TOP, Atom, Dialect, dialect_violation, render_atom
from .witness import separates

log = logging.getLogger(__name__)

GRID_VARIABLES = ("p1", "p2", "p3")


# -- oracle agreement ----------------------------------------------------------


def atom_universe(variables: Sequence[str], dialect: Dialect, max_arity: int = 2) -> list:
    """Every atom of arity at most ``max_arity`` allowed in ``dialect``."""
    symbols = tuple(variables) + ((BOT, TOP) if dialect.allows_constants else ())
    atoms = []
    for k in range(1, max_arity + 1):
        seqs = list(product(symbols, repeat=k))
        for lhs in seqs:
            for rhs in seqs:
                a = Atom(lhs, rhs)
                if dialect_violation(a, dialect) is None:
                    atoms.append(a)
    return atoms


def assumption_sets(atoms: Sequence, max_size: int = 2):
    for k in range(max_size + 1):
        yield from combinations(atoms, k)


_FLIP = {TOP: BOT, BOT: TOP}


def _swap_positions(a: Atom) -> Atom:
    return Atom(a.lhs[::-1], a.rhs[::-1])


def _canonical_atom(a: Atom) -> Atom:
    return min(a, _swap_positions(a)) if a.arity == 2 else a


def _transforms(variables: Sequence[str], with_duality: bool):
    out = []
    for perm in permutations(variables):
        rename = dict(zip(variables, perm))
        out.append(rename)
        if with_duality:
            out.append({**rename, **_FLIP})
    return out


def _apply(mapping: dict, a: Atom) -> Atom:
    return Atom(tuple(mapping.get(s, s) for s in a.lhs), tuple(mapping.get(s, s) for s in a.rhs))


def symmetry_classes(atoms: Sequence[Atom], variables: Sequence[str], dialect: Dialect, max_size: int = 2):
    """Representatives of assumption sets up to renaming, value duality and
    swapping the two positions of an atom.

    Each transformation maps models to models (renaming columns, flipping
    every bit) or leaves an atom's meaning unchanged (position swap), so a
    set and its image entail the images of the same queries.
    """
    transforms = _transforms(variables, dialect.allows_constants)
    canon_atoms = sorted({_canonical_atom(a) for a in atoms})
    reps = {}
    for sigma in assumption_sets(canon_atoms, max_size):
        key = min(
            tuple(sorted({_canonical_atom(_apply(m, a)) for a in sigma})) for m in transforms
        )
        reps.setdefault(key, key)
    return list(reps.values())


@dataclass
class AgreementReport:
    dialect: Dialect
    problems: int = 0
    assumption_sets: int = 0
    entailed: int = 0
    # traces replayed and witnesses checked independently of decide
    replayed: int = 0
    verified: int = 0
    disagreements: list = field(default_factory=list)
    seconds: float = 0.0

    @property
    def agree(self) -> bool:
        return not self.disagreements


def compare_with_oracle(
    dialect: Dialect,
    sigma: Sequence[Atom],
    queries: Sequence[Atom],
    oracle: Oracle,
    report: AgreementReport,
) -> None:
    decider = Decider(dialect, sigma, oracle.universe, bound=2)
    models = oracle.models(sigma)
    report.assumption_sets += 1
    for q in queries:
        truth = not (models & ~oracle.atom_mask(q))
        report.problems += 1
        report.entailed += truth
        try:
            verdict = decider.decide(q)
        except WitnessVerificationFailed:
            # entailed over two values, yet the rules give no derivation
            report.disagreements.append((tuple(sigma), q, "not derivable", truth))
            continue
        if verdict.entailed != truth:
            report.disagreements.append((tuple(sigma), q, verdict.entailed, truth))
            continue
        if verdict.entailed:
            if verdict.trace.replay(dialect):
                report.replayed += 1
            else:
                report.disagreements.append((tuple(sigma), q, "trace does not replay", truth))
        elif separates(sigma, q, verdict.witness):
            report.verified += 1
        else:
            report.disagreements.append((tuple(sigma), q, "witness does not separate", truth))


def grid_agreement(
    dialect: Dialect,
    variables: Sequence[str] = GRID_VARIABLES,
    max_assumptions: int = 2,
    reduce_symmetry: bool | None = None,
) -> AgreementReport:
    """decide against the oracle on every assumption set and every query.

    By default the constants dialect is swept over symmetry representatives
    of the assumption sets (see :func:`symmetry_classes`); the other
    dialects are swept in full.
    """
    start = time.perf_counter()
    atoms = atom_universe(variables, dialect)
    if reduce_symmetry is None:
        reduce_symmetry = dialect is Dialect.BOOLEAN
    if reduce_symmetry:
        sets = symmetry_classes(atoms, variables, dialect, max_assumptions)
    else:
        sets = list(assumption_sets(atoms, max_assumptions))
    oracle = Oracle(variables)
    report = AgreementReport(dialect)
    for sigma in sets:
        compare_with_oracle(dialect, sigma, atoms, oracle, report)
    report.seconds = time.perf_counter() - start
    return report


def random_instances(count: int, variables: Sequence[str], seed: int = 0, max_assumptions: int = 2):
    """``(dialect, assumptions, query)`` triples drawn uniformly per dialect."""
    rng = random.Random(seed)
    pools = {d: atom_universe(variables, d) for d in Dialect}
    dialects = list(Dialect)
    for _ in range(count):
        d = rng.choice(dialects)
        pool = pools[d]
        sigma = rng.sample(pool, rng.randint(0, max_assumptions))
        yield d, tuple(sigma), rng.choice(pool)


def random_agreement(count: int = 1000, variables: Sequence[str] = ("p1", "p2", "p3", "p4"), seed: int = 0):
    start = time.perf_counter()
    oracle = Oracle(variables)
    reports = {d: AgreementReport(d) for d in Dialect}
    for d, sigma, q in random_instances(count, variables, seed):
        compare_with_oracle(d, sigma, [q], oracle, reports[d])
    for r in reports.values():
        r.seconds = time.perf_counter() - start
    return reports


# -- Armstrong team ----------------------------------------------------------


@dataclass
class ArmstrongReport:
    teams_examined: int
    satisfying: int
    only_first: int
    only_second: int
    both: int
    violations: list
    oracle_first: bool
    oracle_second: bool
    log: list

    @property
    def confirmed(self) -> bool:
        return not self.violations and not self.oracle_first and not self.oracle_second


def check_armstrong_gap() -> ArmstrongReport:
    """No team satisfies exactly the consequences of ``p1 <= p2`` over three variables.

    Any such team would have to refute both ``p3 <= p2`` and ``p2 <= p1``
    (neither is entailed), but every team satisfying ``p1 <= p2`` satisfies
    one of them.
    """
    universe = GRID_VARIABLES
    sigma = Atom(("p1",), ("p2",))
    first = Atom(("p3",), ("p2",))
    second = Atom(("p2",), ("p1",))
    examined = satisfying = only_first = only_second = both = 0
    violations = []
    lines = []
    for t in enumerate_teams(universe, cap=3):
        examined += 1
        if not satisfies(t, sigma):
            continue
        satisfying += 1
        a, b = satisfies(t, first), satisfies(t, second)
        both += a and b
        only_first += a and not b
        only_second += b and not a
        if not (a or b):
            violations.append(t)
        lines.append(
            f"team {t.mask():3d} rows={t.sorted_bits()} p3<=p2:{int(a)} p2<=p1:{int(b)}"
        )
    oracle = Oracle(universe)
    report = ArmstrongReport(
        examined,
        satisfying,
        only_first,
        only_second,
        both,
        violations,
        oracle.entails([sigma], first),
        oracle.entails([sigma], second),
        lines,
    )
    log.info("armstrong sweep: %d teams, %d satisfy p1<=p2", examined, satisfying)
    return report


# -- arity lower bound ----------------------------------------------------------


def _seq(prefix: str, n: int) -> tuple:
    return tuple(f"{prefix}{i}" for i in range(1, n + 1))


def rule_star_instance(n: int):
    """``(B, p <= q)``: ``#F^n <= q`` and, for each ``i``, ``p`` with ``#T`` at ``i``."""
    if n < 1:
        raise ValueError("arity must be at least 1")
    p, q = _seq("p", n), _seq("q", n)
    B = [Atom((BOT,) * n, q)]
    for i in range(n):
        B.append(Atom(p[:i] + (TOP,) + p[i + 1:], q))
    return tuple(B), Atom(p, q)


def _team(universe: Sequence[str], rows: Iterable[dict]) -> Team:
    out = set()
    for values in rows:
        out.add(row_from_bits([values[v] for v in universe]))
    return Team(tuple(universe), frozenset(out))


def catalogue_teams(n: int, fresh: int = 1) -> list:
    """Teams satisfying the rule's premises, used to refute other consequences.

    Universe: ``r1..r_fresh, p1..pn, q1..qn``.
    """
    if n < 2:
        raise ValueError("the catalogue needs n >= 2")
    r, p, q = _seq("r", fresh), _seq("p", n), _seq("q", n)
    universe = r + p + q

    def row(rv, pv, qv):
        return {**dict(zip(r, rv)), **dict(zip(p, pv)), **dict(zip(q, qv))}

    ones, zeros = (1,) * n, (0,) * n

    def unit(i):
        return tuple(1 if k == i else 0 for k in range(n))

    out = []
    r_patterns = [("r1", (1,) * fresh), ("r0", (0,) * fresh)]
    for j in range(fresh):
        if fresh > 1:
            r_patterns.append((f"r{j + 1}0", tuple(0 if k == j else 1 for k in range(fresh))))
    # T1: p constant 1, q either all ones or all zeros
    for tag, rv in r_patterns:
        out.append((f"T1_{tag}", _team(universe, [row(rv, ones, ones), row(rv, ones, zeros)])))
    # T2: p constant 0, q has at most one 1
    for tag, rv in r_patterns[:2]:
        qs = [unit(i) for i in range(n)] + [zeros]
        out.append((f"T2_{tag}", _team(universe, [row(rv, zeros, qv) for qv in qs])))
    for j in range(n):
        # one-hot p: p_j = 1, q carries e_j plus at most one more 1, or 0
        pj = unit(j)
        qs = [tuple(max(a, b) for a, b in zip(pj, unit(i))) for i in range(n) if i != j]
        qs += [pj, zeros]
        for tag, rv in r_patterns[:2]:
            out.append((f"onehot{j + 1}_{tag}", _team(universe, [row(rv, pj, qv) for qv in qs])))
        # p_j = 0, rest 1: q is all ones, all ones but q_j, or all zeros
        pz = tuple(0 if k == j else 1 for k in range(n))
        qs = [ones, pz, zeros]
        for tag, rv in r_patterns[:2]:
            out.append((f"zero{j + 1}_{tag}", _team(universe, [row(rv, pz, qv) for qv in qs])))
    return out


@dataclass
class NoKaryReport:
    n: int
    B: tuple
    conclusion: Atom
    b3_premises: int = 0
    conclusion_entailed: bool = False
    independence: dict = field(default_factory=dict)
    subsets: dict = field(default_factory=dict)
    allowed_consequences: set = field(default_factory=set)
    allowed_entailed: dict = field(default_factory=dict)
    refutations: dict = field(default_factory=dict)
    gaps: list = field(default_factory=list)
    candidates: int = 0
    seconds: float = 0.0

    @property
    def independence_ok(self) -> bool:
        return len(self.independence) == len(self.B) and all(t is not None for t in self.independence.values())

    @property
    def tight(self) -> bool:
        return (
            self.conclusion_entailed
            and self.b3_premises == self.n + 1
            and all(v is False for v in self.subsets.values())
        )

    @property
    def sweep_ok(self) -> bool:
        return not self.gaps and all(self.allowed_entailed.values()) and all(
            ok for _, ok in self.refutations.values()
        )

    @property
    def confirmed(self) -> bool:
        return self.independence_ok and self.tight and self.sweep_ok


def _separating_subteam(universe, atoms, refute, n):
    """Greatest subteam avoiding a q-value ``c`` that satisfies ``atoms`` and refutes all of ``refute``."""
    q = _seq("q", n)
    full = Team.full(universe)
    index = [universe.index(v) for v in q]
    width = len(universe)
    for c in product((0, 1), repeat=n):
        rows = [
            x for x in full.rows
            if tuple((x >> (width - 1 - i)) & 1 for i in index) != c
        ]
        t = largest_satisfying_subteam(Team(universe, frozenset(rows)), atoms)
        if all(not satisfies(t, a) for a in refute):
            return t
    return None


def check_no_kary(n: int, fresh: int = 1, strict: bool = False) -> NoKaryReport:
    """Check the two finite claims behind the arity lower bound at arity ``n``.

    (1) no premise follows from the others (a team satisfies the rest but
    neither it nor the conclusion), and every proper subset of the premises
    fails to entail the conclusion; (2) every candidate ``u <= q`` outside the
    premises, the conclusion and ``q <= q`` is refuted by a catalogue team
    satisfying all premises.  Candidates left unrefuted are recorded in
    ``gaps`` with decide's verdict on them; with ``strict`` an unrefuted
    candidate that decide also rejects raises :class:`CatalogueGap`.
    """
    if not 2 <= n <= 3:
        raise ValueError("check_no_kary supports n in {2, 3}")
    start = time.perf_counter()
    B, conclusion = rule_star_instance(n)
    report = NoKaryReport(n, B, conclusion)
    r, p, q = _seq("r", fresh), _seq("p", n), _seq("q", n)
    universe = r + p + q

    decider = Decider(Dialect.BOOLEAN, B, universe, bound=n)
    verdict = decider.decide(conclusion)
    report.conclusion_entailed = verdict.entailed
    if verdict.entailed:
        b3 = [s for s in verdict.trace.steps if s.rule == "B3" and s.conclusion == conclusion]
        report.b3_premises = len(b3[0].premises) if b3 else 0

    pq = p + q
    for b in B:
        rest = [a for a in B if a != b]
        report.independence[b] = _separating_subteam(pq, rest, [b, conclusion], n)
    for k in range(len(B)):
        for S in combinations(B, k):
            report.subsets[S] = Decider(Dialect.BOOLEAN, S, universe, bound=n).decide(conclusion).entailed

    allowed = set(B) | {conclusion, Atom(q, q)}
    report.allowed_consequences = allowed
    teams = catalogue_teams(n, fresh)
    for name, t in teams:
        if not all(satisfies(t, b) for b in B):
            raise CatalogueGap(f"catalogue team {name} does not satisfy the premises")
    symbols = r + p + q + (TOP, BOT)
    for u in product(symbols, repeat=n):
        cand = Atom(u, q)
        report.candidates += 1
        if cand in allowed:
            report.allowed_entailed[cand] = decider.decide(cand).entailed
            continue
        for name, t in teams:
            if not satisfies(t, cand):
                report.refutations[cand] = (name, all(satisfies(t, b) for b in B))
                break
        else:
            entailed = decider.decide(cand).entailed
            report.gaps.append((cand, entailed))
            if strict and not entailed:
                raise CatalogueGap(f"no catalogue team refutes {render_atom(cand)}")
    report.seconds = time.perf_counter() - start
    return report


def rule_star_covered(n: int) -> bool:
    B, conclusion = rule_star_instance(n)
    return b3_coverage(B, conclusion)[0]
