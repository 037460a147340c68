"""Movable cone of Hilb^g in the (H~, B) basis, the ample family coming from
stability conditions, and the Pell equation X^2 - dY^2 = N.

A divisor class (x, y) stands for x*H~ - y*B. For x > 0 its slope is y/x:

    slope 0                  Hilbert-Chow contraction (nef boundary of Hilb^g)
    0 < slope < w            ample on Hilb^g
    slope w = (2g-2)/(2g-1)  the flop wall
    w < slope < 1            ample on Picbar^{-g}
    slope 1                  Lagrangian fibration (isotropic)
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from math import isqrt

from .errors import BelowThreshold, InvalidParameters, NoSolution, ZeroClass
from .lattice import (
    DivisorClass,
    K3Context,
    MukaiVector,
    pair,
    reflect,
    s_twist,
    theta_coordinates,
    v1,
    v2,
)


class ChamberLabel(str, enum.Enum):
    AMPLE_HILB = "AMPLE_HILB"
    NEF_BOUNDARY_HILBERT_CHOW = "NEF_BOUNDARY_HILBERT_CHOW"
    WALL_FLOP = "WALL_FLOP"
    AMPLE_PICBAR = "AMPLE_PICBAR"
    WALL_LAGRANGIAN_FIBRATION = "WALL_LAGRANGIAN_FIBRATION"
    MOVABLE_EXTERIOR = "MOVABLE_EXTERIOR"


def movable_cone(ctx: K3Context) -> tuple[DivisorClass, DivisorClass]:
    return DivisorClass(1, 0), DivisorClass(1, 1)


def flop_wall_slope(ctx: K3Context) -> Fraction:
    return Fraction(2 * ctx.g - 2, 2 * ctx.g - 1)


def flop_wall(ctx: K3Context) -> DivisorClass:
    return DivisorClass(1, flop_wall_slope(ctx))


def bb_square(ctx: K3Context, D: DivisorClass) -> Fraction:
    """Beauville-Bogomolov square; H~^2 = 2g-2, B^2 = -(2g-2), H~.B = 0."""
    return ctx.degree * (D.x * D.x - D.y * D.y)


def classify_divisor(ctx: K3Context, D: DivisorClass) -> ChamberLabel:
    if D.x == 0 and D.y == 0:
        raise ZeroClass("the zero class is not a ray")
    if D.x <= 0:
        return ChamberLabel.MOVABLE_EXTERIOR
    slope = D.y / D.x
    wall = flop_wall_slope(ctx)
    if slope < 0 or slope > 1:
        return ChamberLabel.MOVABLE_EXTERIOR
    if slope == 0:
        return ChamberLabel.NEF_BOUNDARY_HILBERT_CHOW
    if slope < wall:
        return ChamberLabel.AMPLE_HILB
    if slope == wall:
        return ChamberLabel.WALL_FLOP
    if slope < 1:
        return ChamberLabel.AMPLE_PICBAR
    return ChamberLabel.WALL_LAGRANGIAN_FIBRATION


def chamber_table(ctx: K3Context) -> list[dict]:
    """Walls and open chambers of Mov(Hilb^g), ordered by slope."""
    w = flop_wall_slope(ctx)
    return [
        {"kind": "wall", "slope": Fraction(0), "label": ChamberLabel.NEF_BOUNDARY_HILBERT_CHOW},
        {"kind": "chamber", "slope_range": (Fraction(0), w), "label": ChamberLabel.AMPLE_HILB},
        {"kind": "wall", "slope": w, "label": ChamberLabel.WALL_FLOP},
        {"kind": "chamber", "slope_range": (w, Fraction(1)), "label": ChamberLabel.AMPLE_PICBAR},
        {"kind": "wall", "slope": Fraction(1), "label": ChamberLabel.WALL_LAGRANGIAN_FIBRATION},
    ]


# Ample classes from the stability conditions sigma_{t,-1} ------------------

def bm_threshold(ctx: K3Context) -> Fraction:
    """t0^2 with t0 = 1/sqrt(g-1); only the square is ever handled."""
    return Fraction(1, ctx.g - 1)


def bm_w_vector(ctx: K3Context, tsq) -> MukaiVector:
    """w_{sigma_{t,-1}} with the positive factor (2g-2)t dropped."""
    tsq = Fraction(tsq)
    g = ctx.g
    return MukaiVector(1, Fraction(-(2 * g - 1), 2 * g - 2), g - (g - 1) * tsq)


def _bm_chain(ctx: K3Context, tsq: Fraction) -> DivisorClass:
    w = bm_w_vector(ctx, tsq)
    assert pair(ctx, w, v2(ctx)) == 0, "w must lie in v2^perp"
    u = reflect(ctx, w, s_twist(ctx))
    assert pair(ctx, u, v1(ctx)) == 0, "reflected w must lie in v1^perp"
    cls = theta_coordinates(ctx, u)
    # u.r = (g-1) tsq > 0, so dividing by y is a positive rescale
    return DivisorClass(cls.x / cls.y, 1)


def bm_ample_class(ctx: K3Context, tsq) -> DivisorClass:
    """Ample class on Picbar^{-g} for t^2 = tsq, as (x, 1) = x*H~ - B."""
    tsq = Fraction(tsq)
    if tsq <= bm_threshold(ctx):
        raise BelowThreshold(f"t^2 = {tsq} must exceed 1/(g-1) = {bm_threshold(ctx)}")
    return _bm_chain(ctx, tsq)


def bm_limit_class(ctx: K3Context) -> DivisorClass:
    """Limit of bm_ample_class as t^2 decreases to 1/(g-1).

    The chain is a polynomial in 1/t^2, so the limit is the chain
    evaluated at the threshold.
    """
    return _bm_chain(ctx, bm_threshold(ctx))


def bm_closed_form(ctx: K3Context, tsq) -> DivisorClass:
    tsq = Fraction(tsq)
    return DivisorClass(1 + 1 / (2 * (ctx.g - 1) ** 2 * tsq), 1)


def bm_curve(ctx: K3Context, tsq_values) -> list[tuple[Fraction, Fraction]]:
    """(t^2, slope) samples of the ample family, slope = y/x."""
    out = []
    for tsq in tsq_values:
        D = bm_ample_class(ctx, tsq)
        out.append((Fraction(tsq), D.y / D.x))
    return out


# Pell equation X^2 - d Y^2 = N ---------------------------------------------

CERTIFICATE_MODULI = (3, 4, 5, 8)


@dataclass(frozen=True)
class PellSolution:
    exists: bool
    x1: int | None = None
    y1: int | None = None
    certificate: str | None = None
    search_bound: int = 0


def residue_certificate(d: int, N: int) -> str | None:
    """A modulus m in (3, 4, 5, 8) with no solution of x^2 - d y^2 = N mod m."""
    for m in CERTIFICATE_MODULI:
        squares = {x * x % m for x in range(m)}
        values = {(a - d * b) % m for a in squares for b in squares}
        if N % m in values:
            continue
        if d % m == 0:
            sq = ", ".join(str(q) for q in sorted(squares))
            return f"x^2 ≡ {N % m} (mod {m}) impossible: squares mod {m} are {{{sq}}}"
        return (f"x^2 - {d % m}*y^2 ≡ {N % m} (mod {m}) has no solution; "
                f"attainable residues are {sorted(values)}")
    return None


def pell_min_solution(d: int, N: int = 5, search_bound: int = 10_000) -> PellSolution:
    """Minimal positive solution by exhaustive search over y = 1..search_bound.

    If no solution exists in range, a residue-class obstruction is attached
    when one of the moduli 3, 4, 5, 8 provides it.
    """
    if d < 1 or N < 1 or search_bound < 1:
        raise InvalidParameters(f"need d, N, search_bound >= 1 (got {d}, {N}, {search_bound})")
    cert = residue_certificate(d, N)
    if cert is not None:
        return PellSolution(False, certificate=cert, search_bound=search_bound)
    for y in range(1, search_bound + 1):
        x2 = N + d * y * y
        x = isqrt(x2)
        if x * x == x2:
            return PellSolution(True, x, y, search_bound=search_bound)
    return PellSolution(False, search_bound=search_bound)


def footnote_nef_boundary(ctx: K3Context, d: int, search_bound: int = 10_000) -> DivisorClass:
    """Raw boundary (1, 2d*y1/x1) from the minimal solution of X^2 - dY^2 = 5.

    This uses the divisor normalization of the source of that formula,
    which is not reconciled with the (H~, B) slopes used elsewhere here.
    """
    sol = pell_min_solution(d, 5, search_bound)
    if not sol.exists:
        raise NoSolution(f"X^2 - {d}Y^2 = 5 has no positive solution"
                         + ("" if sol.certificate else f" with Y <= {search_bound}"),
                         certificate=sol.certificate)
    return DivisorClass(1, Fraction(2 * d * sol.y1, sol.x1))
