"""Typed calculus of P-twists, Fourier-Mukai and Kawamata-Namikawa equivalences."""
from .parser import parse, parse_raw
from .rules import READINGS, RULE_INFO, RuleSet
from .search import (
    NormalizeResult,
    ProofTrace,
    Step,
    Unknown,
    normalize,
    prove_equal,
    replay,
    step_budget,
)
from .terms import (
    Atom,
    Category,
    Compose,
    Expr,
    Inverse,
    PTwist,
    Shift,
    Signature,
    compose,
    render,
    rpo_greater,
)


def rewrite_rules(ctx, reading: str = "a") -> RuleSet:
    return RuleSet(ctx, reading)


__all__ = [
    "Atom", "Category", "Compose", "Expr", "Inverse", "NormalizeResult", "PTwist",
    "ProofTrace", "READINGS", "RULE_INFO", "RuleSet", "Shift", "Signature", "Step",
    "Unknown", "compose", "normalize", "parse", "parse_raw", "prove_equal", "render",
    "replay", "rewrite_rules", "step_budget", "rpo_greater",
]
