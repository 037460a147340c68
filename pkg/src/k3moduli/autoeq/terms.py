"""Typed terms over the functors between derived categories of S, Hilb^g,
Picbar^d and the flop X'.

Terms are immutable and hashable. Composition is n-ary and always kept
flat, so associativity is structural. Every constructor type-checks and
raises ExprTypeError on mismatched endpoints.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache

from ..errors import ExprTypeError
from ..lattice import K3Context
from ..moduli import picbar_brauer_bound


@dataclass(frozen=True)
class Category:
    """D^b of one of the spaces in play.

    kind is one of S, Hilb, Picbar, Xflop, B. For Picbar the twist exponent
    e stands for D^b(Picbar^d, alpha_d^e) and is stored modulo the certified
    Brauer bound, so labels that are provably equal compare equal.
    """

    kind: str
    d: int | None = None
    twist: int = 0

    def __str__(self) -> str:
        if self.kind == "Picbar":
            return f"DbPicbar({self.d},{self.twist})"
        if self.kind == "Xflop":
            return f"DbXflop({self.twist})"
        return f"Db{self.kind}"


def DbS() -> Category:
    return Category("S")


def DbHilb() -> Category:
    return Category("Hilb")


def DbB() -> Category:
    return Category("B")


def DbPicbar(ctx: K3Context, d: int, twist: int = 0) -> Category:
    return Category("Picbar", d, twist % picbar_brauer_bound(ctx, d))


def DbXflop(ctx: K3Context, twist: int = 0) -> Category:
    # the flop is birational to Picbar^{-1}, which has the same Brauer group
    return Category("Xflop", None, twist % picbar_brauer_bound(ctx, -1))


class Expr:
    __slots__ = ()

    source: Category
    target: Category
    is_equivalence: bool
    is_pfunctor: bool

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True)
class Atom(Expr):
    symbol: str
    params: tuple[int, ...]
    source: Category
    target: Category
    is_equivalence: bool
    is_pfunctor: bool = False


@dataclass(frozen=True)
class Compose(Expr):
    """factors[0] is applied last: Compose((f, g)) = f ∘ g."""

    factors: tuple[Expr, ...]
    source: Category = field(init=False, compare=False, repr=False)
    target: Category = field(init=False, compare=False, repr=False)
    is_equivalence: bool = field(init=False, compare=False, repr=False)
    is_pfunctor: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        fs = self.factors
        if len(fs) < 2 or any(isinstance(f, Compose) for f in fs):
            raise ValueError("use compose() to build compositions")
        for left, right in zip(fs, fs[1:]):
            if left.source != right.target:
                raise ExprTypeError(
                    f"cannot compose {render(left)} ∘ {render(right)}: "
                    f"source {left.source} vs target {right.target}")
        equiv = all(f.is_equivalence for f in fs)
        pf = [f for f in fs if f.is_pfunctor]
        pfun = len(pf) == 1 and all(f.is_equivalence for f in fs if f not in pf)
        object.__setattr__(self, "source", fs[-1].source)
        object.__setattr__(self, "target", fs[0].target)
        object.__setattr__(self, "is_equivalence", equiv)
        object.__setattr__(self, "is_pfunctor", pfun)


@dataclass(frozen=True)
class Inverse(Expr):
    arg: Expr
    source: Category = field(init=False, compare=False, repr=False)
    target: Category = field(init=False, compare=False, repr=False)
    is_equivalence: bool = field(init=False, compare=False, repr=False, default=True)
    is_pfunctor: bool = field(init=False, compare=False, repr=False, default=False)

    def __post_init__(self):
        if not self.arg.is_equivalence:
            raise ExprTypeError(f"{render(self.arg)} is not an equivalence and has no inverse")
        object.__setattr__(self, "source", self.arg.target)
        object.__setattr__(self, "target", self.arg.source)


@dataclass(frozen=True)
class PTwist(Expr):
    """The P-twist, an autoequivalence of the target of its argument."""

    arg: Expr
    source: Category = field(init=False, compare=False, repr=False)
    target: Category = field(init=False, compare=False, repr=False)
    is_equivalence: bool = field(init=False, compare=False, repr=False, default=True)
    is_pfunctor: bool = field(init=False, compare=False, repr=False, default=False)

    def __post_init__(self):
        if not self.arg.is_pfunctor:
            raise ExprTypeError(
                f"P({render(self.arg)}): argument must be a P-functor up to equivalences")
        object.__setattr__(self, "source", self.arg.target)
        object.__setattr__(self, "target", self.arg.target)


@dataclass(frozen=True)
class Shift(Expr):
    arg: Expr
    n: int
    source: Category = field(init=False, compare=False, repr=False)
    target: Category = field(init=False, compare=False, repr=False)
    is_equivalence: bool = field(init=False, compare=False, repr=False)
    is_pfunctor: bool = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(self, "source", self.arg.source)
        object.__setattr__(self, "target", self.arg.target)
        object.__setattr__(self, "is_equivalence", self.arg.is_equivalence)
        object.__setattr__(self, "is_pfunctor", self.arg.is_pfunctor)


def _memo_hash(generated):
    # terms are immutable, so the recursive dataclass hash is computed once
    def __hash__(self):
        h = self.__dict__.get("_hash")
        if h is None:
            h = generated(self)
            object.__setattr__(self, "_hash", h)
        return h
    return __hash__


for _cls in (Atom, Compose, Inverse, PTwist, Shift):
    _cls.__hash__ = _memo_hash(_cls.__hash__)


def compose(*exprs: Expr) -> Expr:
    """Flattening composition; a single factor is returned unchanged."""
    flat: list[Expr] = []
    for e in exprs:
        if isinstance(e, Compose):
            flat.extend(e.factors)
        else:
            flat.append(e)
    if not flat:
        raise ValueError("empty composition")
    if len(flat) == 1:
        return flat[0]
    return Compose(tuple(flat))


def inverse(e: Expr) -> Expr:
    return Inverse(e)


# The atom signature ---------------------------------------------------------

class Signature:
    """Atoms available at a fixed genus."""

    def __init__(self, ctx: K3Context):
        self.ctx = ctx
        g = ctx.g
        self.picbar_g = DbPicbar(ctx, -g, 1)   # D^b(Picbar^{-g}, alpha), alpha = 1
        self.picbar_1 = DbPicbar(ctx, -1, -g)  # D^b(Picbar^{-1}, beta)
        self.xflop = DbXflop(ctx, -g)

    def identity(self, cat: Category) -> Atom:
        return Atom("Id", (), cat, cat, True)

    def F(self) -> Atom:
        return Atom("F", (), DbS(), self.picbar_g, False, True)

    def F_prime(self) -> Atom:
        return Atom("F'", (), DbS(), DbHilb(), False, True)

    def AJcomp(self) -> Atom:
        """AJ_* ∘ varpi^*(- ⊗ O_S(l)) as one opaque P-functor."""
        return Atom("AJcomp", (), DbS(), self.picbar_1, False, True)

    def FM(self, m: int | None = None, n: int | None = None) -> Atom:
        """FM(m, n): D^b(Picbar^m, alpha_m^n) -> D^b(Picbar^n, alpha_n^{-m}).

        Bare FM is FM(-1, -g); it is stored with empty params.
        """
        if m is None:
            m, n = -1, -self.ctx.g
        params = () if (m, n) == (-1, -self.ctx.g) else (m, n)
        src = DbPicbar(self.ctx, m, n)
        tgt = DbPicbar(self.ctx, n, -m)
        return Atom("FM", params, src, tgt, True)

    def KNflop(self, k: int) -> Atom:
        return Atom("KNflop", (k,), self.picbar_1, self.xflop, True)

    def KNhilb(self, k: int) -> Atom:
        return Atom("KNhilb", (k,), self.picbar_g, DbHilb(), True)

    def T(self, k: int) -> Atom:
        """Twist by the line bundle O_S(k)."""
        return Atom("T", (k,), DbS(), DbS(), True)

    def Phi(self, i: int = 0) -> Atom:
        """An unnamed autoequivalence of D^b(Picbar^{-g})."""
        return Atom("Phi", (i,), self.picbar_g, self.picbar_g, True)

    def build(self, name: str, args: tuple[int, ...]) -> Atom:
        """Atom by name; raises KeyError for unknown names, TypeError on arity."""
        nullary = {"F": self.F, "F'": self.F_prime, "AJcomp": self.AJcomp}
        unary = {"KNflop": self.KNflop, "KNhilb": self.KNhilb, "T": self.T}
        if name in nullary:
            if args:
                raise TypeError(f"{name} takes no parameters")
            return nullary[name]()
        if name in unary:
            if len(args) != 1:
                raise TypeError(f"{name} takes exactly one integer parameter")
            return unary[name](*args)
        if name == "FM":
            if len(args) not in (0, 2):
                raise TypeError("FM takes zero or two integer parameters")
            return self.FM(*args)
        if name == "Phi":
            if len(args) > 1:
                raise TypeError("Phi takes at most one integer parameter")
            return self.Phi(*args)
        raise KeyError(name)


# Rendering ------------------------------------------------------------------

def render(e: Expr) -> str:
    if isinstance(e, Atom):
        if e.symbol == "Phi" and e.params == (0,):
            return "Phi"
        if e.params:
            return f"{e.symbol}({','.join(str(p) for p in e.params)})"
        return e.symbol
    if isinstance(e, Compose):
        return " ∘ ".join(render(f) for f in e.factors)
    if isinstance(e, Inverse):
        return f"{_wrap(e.arg)}^-1"
    if isinstance(e, PTwist):
        return f"P({render(e.arg)})"
    if isinstance(e, Shift):
        return f"{_wrap(e.arg)}[{e.n}]"
    raise TypeError(e)


def _wrap(e: Expr) -> str:
    return f"({render(e)})" if isinstance(e, Compose) else render(e)


def atoms(e: Expr):
    if isinstance(e, Atom):
        yield e
    elif isinstance(e, Compose):
        for f in e.factors:
            yield from atoms(f)
    else:
        yield from atoms(e.arg)


def size(e: Expr) -> int:
    if isinstance(e, Atom):
        return 1
    if isinstance(e, Compose):
        return 1 + sum(size(f) for f in e.factors)
    return 1 + size(e.arg)


# Termination ordering -------------------------------------------------------
# Recursive path ordering with multiset status over the precedence
#   P > inverse > composition > shift > atoms > Id.
# Every oriented rule (R1, R2, R6) strictly decreases in this ordering, and
# it is closed under contexts even with flattened compositions, so
# normalization terminates.

_PRECEDENCE = {"PTwist": 5, "Inverse": 4, "Compose": 3, "Shift": 2}


def _head(e: Expr):
    if isinstance(e, Atom):
        return ("Id",) if e.symbol == "Id" else ("atom", e.symbol, e.params)
    if isinstance(e, Shift):
        return ("Shift", e.n)
    return (type(e).__name__,)


def _level(e: Expr) -> int:
    if isinstance(e, Atom):
        return 0 if e.symbol == "Id" else 1
    return _PRECEDENCE[type(e).__name__]


def _args(e: Expr) -> tuple:
    if isinstance(e, Atom):
        return ()
    if isinstance(e, Compose):
        return e.factors
    return (e.arg,)


@lru_cache(maxsize=200_000)
def rpo_greater(s: Expr, t: Expr) -> bool:
    """s >_rpo t."""
    if s == t:
        return False
    sargs = _args(s)
    if any(a == t or rpo_greater(a, t) for a in sargs):
        return True
    hs, ht = _head(s), _head(t)
    if hs != ht and _level(s) > _level(t):
        return all(rpo_greater(s, b) for b in _args(t))
    if hs == ht:
        return _multiset_greater(sargs, _args(t))
    return False


def _multiset_greater(m: tuple, n: tuple) -> bool:
    m_rest, n_rest = list(m), list(n)
    for x in m:
        if x in n_rest:
            n_rest.remove(x)
            m_rest.remove(x)
    if not m_rest and not n_rest:
        return False
    return all(any(rpo_greater(x, y) for x in m_rest) for y in n_rest)
