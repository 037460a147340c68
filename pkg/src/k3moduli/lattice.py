"""Algebraic Mukai lattice H^0 + Z.h + H^4 of a Picard-rank-1 K3 surface of genus g.

Vectors are triples (r, a, s): rank, coefficient of the polarization h,
and the H^4 component. The pairing is

    <(r, a, s), (r', a', s')> = (2g - 2) a a' - r s' - r' s

All arithmetic is exact (``int`` / ``Fraction``).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import _linalg
from .errors import (
    InvalidGenus,
    NonIntegralPairing,
    NonPrimitiveVector,
    NonSphericalReflector,
    NotInPerp,
    OddSquare,
    SquareBelowMinusTwo,
    ZeroVector,
)


@dataclass(frozen=True)
class K3Context:
    g: int

    def __post_init__(self):
        if isinstance(self.g, bool) or not isinstance(self.g, int) or self.g < 2:
            raise InvalidGenus(f"genus must be an integer >= 2, got {self.g!r}")

    @property
    def degree(self) -> int:
        return 2 * self.g - 2

    @property
    def h0(self) -> int:
        """dim H^0(O_S(1))."""
        return self.g + 1


def _q(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


@dataclass(frozen=True)
class MukaiVector:
    r: Fraction
    a: Fraction
    s: Fraction

    def __init__(self, r, a, s):
        object.__setattr__(self, "r", _q(r))
        object.__setattr__(self, "a", _q(a))
        object.__setattr__(self, "s", _q(s))

    @classmethod
    def parse(cls, text: str) -> "MukaiVector":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 3:
            raise ValueError(f"expected r,a,s but got {text!r}")
        return cls(*(Fraction(p) for p in parts))

    @property
    def is_integral(self) -> bool:
        return all(c.denominator == 1 for c in self)

    def __iter__(self):
        return iter((self.r, self.a, self.s))

    def __add__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r + other.r, self.a + other.a, self.s + other.s)

    def __sub__(self, other: "MukaiVector") -> "MukaiVector":
        return MukaiVector(self.r - other.r, self.a - other.a, self.s - other.s)

    def __neg__(self) -> "MukaiVector":
        return MukaiVector(-self.r, -self.a, -self.s)

    def __mul__(self, c) -> "MukaiVector":
        c = _q(c)
        return MukaiVector(c * self.r, c * self.a, c * self.s)

    __rmul__ = __mul__

    def as_ints(self) -> tuple[int, int, int]:
        if not self.is_integral:
            raise ValueError(f"{self} is not integral")
        return int(self.r), int(self.a), int(self.s)

    def __str__(self) -> str:
        return ",".join(str(c) for c in self)


@dataclass(frozen=True)
class DivisorClass:
    """The class x*H~ - y*B in NS of the moduli space."""

    x: Fraction
    y: Fraction

    def __init__(self, x, y):
        object.__setattr__(self, "x", _q(x))
        object.__setattr__(self, "y", _q(y))

    @classmethod
    def parse(cls, text: str) -> "DivisorClass":
        parts = [p.strip() for p in text.split(",")]
        if len(parts) != 2:
            raise ValueError(f"expected x,y but got {text!r}")
        return cls(Fraction(parts[0]), Fraction(parts[1]))

    def __iter__(self):
        return iter((self.x, self.y))

    def normalized(self) -> "DivisorClass":
        """Positive rescale to x = 1 (rays with x > 0 only)."""
        if self.x <= 0:
            raise ValueError("normalization needs x > 0")
        return DivisorClass(1, self.y / self.x)

    def __str__(self) -> str:
        return f"{self.x},{self.y}"


@dataclass(frozen=True)
class IntegerLattice:
    gram: tuple[tuple[int, ...], ...] = field(default=())

    def __post_init__(self):
        rows = tuple(tuple(int(v) for v in row) for row in self.gram)
        n = len(rows)
        if n > 4:
            raise ValueError("only rank <= 4 lattices are supported")
        if any(len(row) != n for row in rows):
            raise ValueError("Gram matrix must be square")
        if any(rows[i][j] != rows[j][i] for i in range(n) for j in range(n)):
            raise ValueError("Gram matrix must be symmetric")
        object.__setattr__(self, "gram", rows)

    @property
    def rank(self) -> int:
        return len(self.gram)


# Named vectors -------------------------------------------------------------

def v_hilb(ctx: K3Context, n: int | None = None) -> MukaiVector:
    """Ideal sheaf of n points; n defaults to g (v1 = (1, 0, 1-g))."""
    n = ctx.g if n is None else n
    return MukaiVector(1, 0, 1 - n)


def v_picbar(ctx: K3Context, d: int) -> MukaiVector:
    """Degree-d rank-one sheaf on a curve in |O(1)|: (0, 1, d+1-g)."""
    return MukaiVector(0, 1, d + 1 - ctx.g)


def v1(ctx: K3Context) -> MukaiVector:
    return v_hilb(ctx)


def v2(ctx: K3Context) -> MukaiVector:
    return v_picbar(ctx, -ctx.g)


def s_twist(ctx: K3Context) -> MukaiVector:
    return mukai_vector_of_line_bundle(ctx, -1)


def h_tilde_preimage(ctx: K3Context) -> MukaiVector:
    return MukaiVector(0, -1, 0)


def b_preimage(ctx: K3Context) -> MukaiVector:
    return MukaiVector(-1, 0, 1 - ctx.g)


# Operations ----------------------------------------------------------------

def pair(ctx: K3Context, v: MukaiVector, w: MukaiVector) -> Fraction:
    return ctx.degree * v.a * w.a - v.r * w.s - w.r * v.s


def mukai_vector_of_line_bundle(ctx: K3Context, k: int) -> MukaiVector:
    return MukaiVector(1, k, (ctx.g - 1) * k * k + 1)


def reflect(ctx: K3Context, v: MukaiVector, s: MukaiVector) -> MukaiVector:
    """Action of the spherical twist around an object of vector s."""
    if not s.is_integral:
        raise NonSphericalReflector(f"reflector {s} is not integral")
    if pair(ctx, s, s) != -2:
        raise NonSphericalReflector(f"<s,s> = {pair(ctx, s, s)}, need -2")
    return v + pair(ctx, v, s) * s


def _check_primitive(v: MukaiVector) -> tuple[int, int, int]:
    if not v.is_integral:
        raise NonPrimitiveVector(f"{v} is not integral")
    ints = v.as_ints()
    c = _linalg.content(ints)
    if c == 0:
        raise ZeroVector("zero Mukai vector")
    if c != 1:
        raise NonPrimitiveVector(f"{v} has content {c}")
    return ints


def perp_basis(ctx: K3Context, v: MukaiVector) -> tuple[MukaiVector, MukaiVector]:
    """Hermite-reduced basis of the saturated sublattice v^perp of Z^3."""
    r, a, s = _check_primitive(v)
    # <u, v> = u.r * (-s) + u.a * (2g-2) a + u.s * (-r)
    row = [-s, ctx.degree * a, -r]
    b1, b2 = _linalg.hermite_rows(_linalg.integer_kernel_of_row(row))
    return MukaiVector(*b1), MukaiVector(*b2)


def gram(ctx: K3Context, basis: Sequence[MukaiVector]) -> IntegerLattice:
    rows = []
    for v in basis:
        row = []
        for w in basis:
            p = pair(ctx, v, w)
            if p.denominator != 1:
                raise NonIntegralPairing(f"<{v}, {w}> = {p}")
            row.append(int(p))
        rows.append(tuple(row))
    return IntegerLattice(tuple(rows))


def lattice_invariants(lat: IntegerLattice) -> tuple[int, tuple[int, int, int]]:
    d = _linalg.det(lat.gram)
    return int(d), _linalg.signature(lat.gram)


def theta_coordinates(ctx: K3Context, u: MukaiVector) -> DivisorClass:
    """Coordinates of u in v1^perp w.r.t. the preimages of H~ and B.

    u = x*(0,-1,0) - y*(-1,0,1-g), i.e. x = -u.a and y = u.r.
    """
    if pair(ctx, u, v1(ctx)) != 0:
        raise NotInPerp(f"{u} is not orthogonal to v1 = {v1(ctx)}")
    return DivisorClass(-u.a, u.r)


def moduli_dimension(ctx: K3Context, v: MukaiVector) -> int:
    if not v.is_integral:
        raise ValueError(f"{v} is not integral")
    sq = pair(ctx, v, v)
    if sq < -2:
        raise SquareBelowMinusTwo(f"<v,v> = {sq} < -2")
    if sq % 2:
        raise OddSquare(f"<v,v> = {sq} is odd")
    return int(sq) + 2
