"""Rewrite rules between functor expressions, all up to isomorphism.

Each rule has a forward generator: given a term, it yields every term
reachable by one forward application at any position. Backward
application is defined as the inverse relation (``t -> u`` backward iff
``u -> t`` forward); the backward generators here are only a search aid
and every step they produce is re-validated against the forward one.

    R1  P(Φ ∘ G)  ->  Φ ∘ P(G) ∘ Φ^-1         Φ an equivalence
    R2  P(G ∘ Ψ)  ->  P(G)                   Ψ an equivalence
    R3  P(AJcomp) ->  KNflop(i)^-1 ∘ KNflop(j)
    R4  F         ->  FM ∘ AJcomp
    R5  F' ∘ T(1) ->  KNhilb(2) ∘ F
    R6  groupoid laws (forward only)

R1, R2 and R6 are oriented; normalize uses them. R3-R5 are equations and
are used in both directions by the prover.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Iterator

from ..errors import ExprTypeError
from ..lattice import K3Context
from .terms import Atom, Compose, Expr, Inverse, PTwist, Shift, Signature, atoms, compose

FWD = "fwd"
BWD = "bwd"

# Index pairs (i, j) for P(AJcomp) = KNflop(i)^-1 ∘ KNflop(j).
READINGS = {
    "a": lambda g: (g - 1, g),   # P_F = FM ∘ KN^-1_{g-1} ∘ KN_g ∘ FM^-1
    "b": lambda g: (1 - g, g),   # the six-factor form of P_{F'} writes KN^-1_{1-g}
}


@dataclass(frozen=True)
class Rule:
    rule_id: str
    name: str
    quote: str
    oriented: bool


RULE_INFO = {
    "R1": Rule("R1", "conjugation by an equivalence", "P_{ΦF} ≅ Φ P_F Φ^{-1}", True),
    "R2": Rule("R2", "precomposition with an equivalence", "P_{FΨ} ≅ P_F", True),
    "R3": Rule("R3", "P-twist of the Abel-Jacobi functor via flop-flop",
               "P_F = FM ∘ KN^{-1}_{g-1} ∘ KN_g ∘ FM^{-1}; P_k ≅ KN_{n+k}^{-1} ∘ KN_{n+k+1}", False),
    "R4": Rule("R4", "factorization of F", "F = FM ∘ AJ_* ∘ ϖ^*(- ⊗ O_S(l))", False),
    "R5": Rule("R5", "compatibility with the Hilbert scheme", "F' ∘ T_{O_S(1)} = KN_2 ∘ F", False),
    "R6": Rule("R6", "groupoid laws",
               "Φ∘Φ^-1 = Id, Id∘G = G = G∘Id, (Φ^-1)^-1 = Φ, (Φ∘Ψ)^-1 = Ψ^-1∘Φ^-1", True),
}


# Positions -----------------------------------------------------------------

def positions(e: Expr, path: tuple = ()) -> Iterator[tuple[tuple, Expr]]:
    """Every subterm with its path, children before parents, left to right."""
    if isinstance(e, Compose):
        for i, f in enumerate(e.factors):
            yield from positions(f, path + (i,))
    elif not isinstance(e, Atom):
        yield from positions(e.arg, path + (0,))
    yield path, e


def replace_at(e: Expr, path: tuple, new: Expr) -> Expr:
    if not path:
        return new
    i, rest = path[0], path[1:]
    if isinstance(e, Compose):
        fs = list(e.factors)
        fs[i] = replace_at(fs[i], rest, new)
        return compose(*fs)
    inner = replace_at(e.arg, rest, new)
    if isinstance(e, Inverse):
        return Inverse(inner)
    if isinstance(e, PTwist):
        return PTwist(inner)
    if isinstance(e, Shift):
        return Shift(inner, e.n)
    raise TypeError(e)


def _windows(e: Compose, width: int):
    fs = e.factors
    for i in range(len(fs) - width + 1):
        yield i, fs[i:i + width]


def _splice(e: Compose, i: int, width: int, new: list[Expr]) -> Expr:
    return compose(*e.factors[:i], *new, *e.factors[i + width:])


# Local rule generators ------------------------------------------------------
# Each takes (node, rules) and yields replacements for that node.

class RuleSet:
    def __init__(self, ctx: K3Context, reading: str = "a"):
        if reading not in READINGS:
            raise ValueError(f"unknown reading {reading!r}; choose from {sorted(READINGS)}")
        self.ctx = ctx
        self.sig = Signature(ctx)
        self.reading = reading
        i, j = READINGS[reading](ctx.g)
        s = self.sig
        self.kn_pair = (Inverse(s.KNflop(i)), s.KNflop(j))
        self.r5_lhs = (s.F_prime(), s.T(1))
        self.r5_rhs = (s.KNhilb(2), s.F())
        self.r4_lhs = s.F()
        self.r4_rhs = (s.FM(), s.AJcomp())
        self.aj_twist = PTwist(s.AJcomp())

    @property
    def rules(self) -> list[Rule]:
        return list(RULE_INFO.values())

    def vocabulary(self, *exprs: Expr) -> list[Atom]:
        """Equivalence atoms that backward R2 may insert."""
        seen: dict[Atom, None] = {}
        pool = [*self.r5_lhs, *self.r5_rhs, *self.r4_rhs, *self.kn_pair]
        for e in exprs:
            pool.extend(atoms(e))
        for a in pool:
            if isinstance(a, Atom) and a.is_equivalence and a.symbol != "Id":
                seen.setdefault(a)
        return list(seen)

    # forward, per node ------------------------------------------------------

    def r1_local(self, node: Expr, single: bool = False):
        if not (isinstance(node, PTwist) and isinstance(node.arg, Compose)):
            return
        fs = node.arg.factors
        for k in range(1, len(fs)):
            head = fs[:k]
            if not all(f.is_equivalence for f in head):
                break
            rest = compose(*fs[k:])
            if rest.is_pfunctor:
                phi = compose(*head)
                yield compose(phi, PTwist(rest), Inverse(phi))
            if single:
                break

    def r2_local(self, node: Expr, single: bool = False):
        if not (isinstance(node, PTwist) and isinstance(node.arg, Compose)):
            return
        fs = node.arg.factors
        for k in range(len(fs) - 1, 0, -1):
            tail = fs[k:]
            if not all(f.is_equivalence for f in tail):
                break
            head = compose(*fs[:k])
            if head.is_pfunctor:
                yield PTwist(head)
            if single:
                break

    def r3_local(self, node: Expr):
        if node == self.aj_twist:
            yield compose(*self.kn_pair)

    def r4_local(self, node: Expr):
        if node == self.r4_lhs:
            yield compose(*self.r4_rhs)

    def r5_local(self, node: Expr):
        yield from _window_replace(node, self.r5_lhs, self.r5_rhs)

    def r6_local(self, node: Expr):
        sig = self.sig
        if isinstance(node, Compose):
            fs = node.factors
            for i, f in enumerate(fs):
                if isinstance(f, Atom) and f.symbol == "Id":
                    yield _splice(node, i, 1, [])
            for i, (a, b) in _windows(node, 2):
                if a.is_equivalence and b == Inverse(a):
                    yield _splice(node, i, 2, [sig.identity(a.target)])
                elif isinstance(a, Inverse) and b == a.arg:
                    yield _splice(node, i, 2, [sig.identity(b.source)])
        elif isinstance(node, Inverse):
            arg = node.arg
            if isinstance(arg, Inverse):
                yield arg.arg
            elif isinstance(arg, Compose):
                yield compose(*(Inverse(f) for f in reversed(arg.factors)))
            elif isinstance(arg, Atom) and arg.symbol == "Id":
                yield arg
        elif isinstance(node, Shift) and node.n == 0:
            yield node.arg

    def local(self, rule_id: str) -> Callable:
        return {
            "R1": self.r1_local, "R2": self.r2_local, "R3": self.r3_local,
            "R4": self.r4_local, "R5": self.r5_local, "R6": self.r6_local,
        }[rule_id]

    # backward, per node (search aid only) -----------------------------------

    def r1_back(self, node: Expr, vocab):
        if not isinstance(node, Compose):
            return
        fs = node.factors
        for j, f in enumerate(fs):
            if not isinstance(f, PTwist):
                continue
            for k in range(1, j + 1):
                head = fs[j - k:j]
                if not all(h.is_equivalence for h in head):
                    break
                # only the exact shape forward R1 produces
                if j + 1 < len(fs) and fs[j + 1] == Inverse(compose(*head)):
                    try:
                        new = PTwist(compose(*head, f.arg))
                    except ExprTypeError:
                        continue
                    yield compose(*fs[:j - k], new, *fs[j + 2:])

    def r2_back(self, node: Expr, vocab):
        if not isinstance(node, PTwist):
            return
        for psi in vocab:
            if psi.target == node.arg.source:
                yield PTwist(compose(node.arg, psi))

    def r3_back(self, node: Expr, vocab):
        yield from _window_replace(node, self.kn_pair, (self.aj_twist,))

    def r4_back(self, node: Expr, vocab):
        yield from _window_replace(node, self.r4_rhs, (self.r4_lhs,))

    def r5_back(self, node: Expr, vocab):
        yield from _window_replace(node, self.r5_rhs, self.r5_lhs)

    def back(self, rule_id: str) -> Callable | None:
        return {
            "R1": self.r1_back, "R2": self.r2_back, "R3": self.r3_back,
            "R4": self.r4_back, "R5": self.r5_back,
        }.get(rule_id)

    # whole-term successors --------------------------------------------------

    def forward(self, rule_id: str, e: Expr) -> list[Expr]:
        gen = self.local(rule_id)
        out = []
        for path, node in positions(e):
            for new in gen(node):
                out.append(replace_at(e, path, new))
        return out

    def backward_candidates(self, rule_id: str, e: Expr, vocab) -> list[Expr]:
        gen = self.back(rule_id)
        if gen is None:
            return []
        out = []
        for path, node in positions(e):
            for new in gen(node, vocab):
                out.append(replace_at(e, path, new))
        return out

    def is_step(self, rule_id: str, direction: str, before: Expr, after: Expr) -> bool:
        """Independent validity check for one rewrite step."""
        if direction == FWD:
            return after in self.forward(rule_id, before)
        if direction == BWD:
            return before in self.forward(rule_id, after)
        return False


def _window_replace(node: Expr, pattern: tuple, repl: tuple):
    width = len(pattern)
    if isinstance(node, Compose):
        for i, win in _windows(node, width):
            if tuple(win) == tuple(pattern):
                yield _splice(node, i, width, list(repl))
    elif width == 1 and node == pattern[0]:
        yield compose(*repl)
