from .closure import EqualityClasses, decompose_rhs_repetitions, derivable_equalities, normalize
from .rules import (
    CONTRADICTION,
    RULES,
    RULES_BY_DIALECT,
    RuleStep,
    b3_coverage,
    consistent,
    consistent_tuples,
    minimal_cover,
    validate_step,
)
from .saturation import DerivationTrace, Saturation, saturate

__all__ = [
    "CONTRADICTION",
    "DerivationTrace",
    "EqualityClasses",
    "RULES",
    "RULES_BY_DIALECT",
    "RuleStep",
    "Saturation",
    "b3_coverage",
    "consistent",
    "consistent_tuples",
    "decompose_rhs_repetitions",
    "derivable_equalities",
    "minimal_cover",
    "normalize",
    "saturate",
    "validate_step",
]
