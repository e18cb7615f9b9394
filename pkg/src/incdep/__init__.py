"""Implication of propositional inclusion atoms over the values {0, 1}."""
from .decide import Decider, Entailed, NotEntailed, decide, derivable_set, reach_entails
from .semantics import Team, satisfies
from .syntax import BOT, TOP, Atom, Dialect, Problem, atom, parse_problem, render_atom

__all__ = [
    "Atom",
    "BOT",
    "Decider",
    "Dialect",
    "Entailed",
    "NotEntailed",
    "Problem",
    "TOP",
    "Team",
    "atom",
    "decide",
    "derivable_set",
    "parse_problem",
    "reach_entails",
    "render_atom",
    "satisfies",
]
