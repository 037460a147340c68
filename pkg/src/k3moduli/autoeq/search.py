"""Normalization and bounded equality proving over a RuleSet."""
from __future__ import annotations

import os
from dataclasses import dataclass, field

from ..errors import EndpointMismatch
from .rules import BWD, FWD, RULE_INFO, RuleSet, positions, replace_at
from .terms import Expr, render

DEFAULT_STEP_BUDGET = 10_000
BUDGET_ENV = "K3MODULI_STEP_BUDGET"

NORMALIZE_ORDER = ("R6", "R2", "R1")


def step_budget() -> int:
    raw = os.environ.get(BUDGET_ENV)
    if raw is None or raw.strip() == "":
        return DEFAULT_STEP_BUDGET
    value = int(raw)
    if value < 1:
        raise ValueError(f"{BUDGET_ENV} must be positive")
    return value


@dataclass(frozen=True)
class Step:
    rule_id: str
    direction: str
    before: Expr
    after: Expr

    def to_json(self) -> dict:
        return {
            "rule_id": self.rule_id,
            "direction": self.direction,
            "quote": RULE_INFO[self.rule_id].quote,
            "before": render(self.before),
            "after": render(self.after),
        }


@dataclass(frozen=True)
class ProofTrace:
    lhs: Expr
    rhs: Expr
    steps: tuple[Step, ...]
    reading: str = "a"

    def to_json(self) -> list[dict]:
        return [s.to_json() for s in self.steps]

    def __len__(self) -> int:
        return len(self.steps)


@dataclass(frozen=True)
class Unknown:
    reason: str
    explored: int = 0


@dataclass
class NormalizeResult:
    expr: Expr
    steps: list[Step] = field(default_factory=list)
    normalized: bool = True


# normalize -----------------------------------------------------------------

def _oriented_step(rules: RuleSet, e: Expr) -> Step | None:
    """Leftmost-innermost application of R6, R2 (one factor), R1 (one factor)."""
    for path, node in positions(e):
        for rid in NORMALIZE_ORDER:
            if rid == "R6":
                gen = rules.r6_local(node)
            elif rid == "R2":
                gen = rules.r2_local(node, single=True)
            else:
                gen = rules.r1_local(node, single=True)
            for new in gen:
                return Step(rid, FWD, e, replace_at(e, path, new))
    return None


def normalize(rules: RuleSet, e: Expr, max_steps: int | None = None) -> NormalizeResult:
    max_steps = step_budget() if max_steps is None else max_steps
    result = NormalizeResult(e)
    for _ in range(max_steps):
        step = _oriented_step(rules, result.expr)
        if step is None:
            return result
        result.steps.append(step)
        result.expr = step.after
    result.normalized = _oriented_step(rules, result.expr) is None
    return result


# prove_equal ---------------------------------------------------------------

def _moves(rules: RuleSet, e: Expr, vocab):
    """(rule_id, direction, successor) in a fixed deterministic order."""
    for rid in RULE_INFO:
        for new in rules.forward(rid, e):
            yield rid, FWD, new
        for new in rules.backward_candidates(rid, e, vocab):
            yield rid, BWD, new


def _flip(direction: str) -> str:
    return BWD if direction == FWD else FWD


def prove_equal(rules: RuleSet, lhs: Expr, rhs: Expr, depth: int = 6,
                budget: int | None = None) -> ProofTrace | Unknown:
    """Bidirectional breadth-first search for a rewrite chain lhs -> rhs.

    Finds a shortest chain of at most ``depth`` steps or returns Unknown;
    a negative answer is never produced.
    """
    if (lhs.source, lhs.target) != (rhs.source, rhs.target):
        raise EndpointMismatch(
            f"{render(lhs)}: {lhs.source} -> {lhs.target} but "
            f"{render(rhs)}: {rhs.source} -> {rhs.target}")
    budget = step_budget() if budget is None else budget
    if lhs == rhs:
        return ProofTrace(lhs, rhs, (), rules.reading)
    vocab = rules.vocabulary(lhs, rhs)
    endpoints = (lhs.source, lhs.target)

    # parent maps: term -> (neighbour closer to the root, rule, direction)
    left = {lhs: None}
    right = {rhs: None}
    left_frontier, right_frontier = [lhs], [rhs]
    left_depth = right_depth = 0
    explored = 0

    while left_depth + right_depth < depth and (left_frontier or right_frontier):
        grow_left = bool(left_frontier) and (
            not right_frontier or len(left_frontier) <= len(right_frontier))
        frontier, seen, other = ((left_frontier, left, right) if grow_left
                                 else (right_frontier, right, left))
        nxt = []
        meet = None
        for term in frontier:
            explored += 1
            if explored > budget:
                return Unknown(f"step budget {budget} exhausted", explored)
            for rid, direction, new in _moves(rules, term, vocab):
                if new in seen or (new.source, new.target) != endpoints:
                    continue
                seen[new] = (term, rid, direction)
                nxt.append(new)
                if new in other:
                    meet = new
                    break
            if meet is not None:
                break
        if grow_left:
            left_frontier, left_depth = nxt, left_depth + 1
        else:
            right_frontier, right_depth = nxt, right_depth + 1
        if meet is not None:
            steps = _assemble(left, right, meet)
            if len(steps) <= depth:
                return ProofTrace(lhs, rhs, tuple(steps), rules.reading)
    return Unknown(f"no rewrite chain of length <= {depth}", explored)


def _assemble(left: dict, right: dict, meet: Expr) -> list[Step]:
    steps = []
    node = meet
    while left[node] is not None:
        prev, rid, direction = left[node]
        steps.append(Step(rid, direction, prev, node))
        node = prev
    steps.reverse()
    node = meet
    while right[node] is not None:
        prev, rid, direction = right[node]
        # the search went prev -> node; the proof needs node -> prev
        steps.append(Step(rid, _flip(direction), node, prev))
        node = prev
    return steps


def replay(rules: RuleSet, trace: ProofTrace) -> bool:
    """Re-check every step of a trace against the forward rule generators."""
    current = trace.lhs
    for step in trace.steps:
        if step.before != current:
            return False
        if (step.after.source, step.after.target) != (current.source, current.target):
            return False
        if not rules.is_step(step.rule_id, step.direction, step.before, step.after):
            return False
        current = step.after
    return current == trace.rhs
