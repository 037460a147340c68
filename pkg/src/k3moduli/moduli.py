"""Moduli spaces Hilb^n and Picbar^d of a genus-g K3, their Brauer-class
bounds, the derived-equivalence graph among the Picbar^d, and the
discriminant certificate separating Picbar^0 from Picbar^{g-1}.

A Brauer class alpha_d is never represented directly; only the integer
``brauer_bound`` with alpha_d^bound = 1 is known, so alpha_d^k = 1 is
certified exactly when bound | k.
"""
from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .errors import InvalidIndex
from .lattice import (
    IntegerLattice,
    K3Context,
    MukaiVector,
    gram,
    lattice_invariants,
    moduli_dimension,
    perp_basis,
    v_hilb,
    v_picbar,
)

HILB = "Hilb"
PICBAR = "Picbar"

QUOTE_TWIST_TO_DEGREE_ZERO = "D^b(Picbar^d) ≅ D^b(Picbar^0, α_0^d)"
QUOTE_UNTWISTED_PAIR = "D^b(Picbar^d) ≅ D^b(Picbar^{g-1-d}) since α_d^{g-1-d} = 1 and α_{g-1-d}^d = 1"
QUOTE_FM_TYPING = "FM: D^b(Picbar^m, α_m^n) → D^b(Picbar^n, α_n^{-m}) is an equivalence"
QUOTE_BRAUER_BOUND = "α_d^{2g-2} = α_d^{d+1-g} = 1"


@dataclass(frozen=True)
class ModuliDescriptor:
    ctx: K3Context
    kind: str
    index: int
    mukai_vector: MukaiVector
    dim: int
    brauer_bound: int

    @property
    def name(self) -> str:
        return f"{self.kind}^{self.index}"

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "g": self.ctx.g,
            "kind": self.kind,
            "index": self.index,
            "mukai_vector": [str(c) for c in self.mukai_vector],
            "dim": self.dim,
            "brauer_bound": self.brauer_bound,
            "fine": is_certified_fine(self),
        }


def picbar_brauer_bound(ctx: K3Context, d: int) -> int:
    """gcd(2g-2, |d+1-g|), with gcd(x, 0) = x."""
    return gcd(ctx.degree, abs(d + 1 - ctx.g))


def describe(ctx: K3Context, kind: str, index: int) -> ModuliDescriptor:
    if kind == HILB:
        if index < 1:
            raise InvalidIndex(f"Hilb^n needs n >= 1, got {index}")
        v = v_hilb(ctx, index)
        bound = 1  # universal ideal sheaf
    elif kind == PICBAR:
        v = v_picbar(ctx, index)
        bound = picbar_brauer_bound(ctx, index)
    else:
        raise InvalidIndex(f"unknown moduli kind {kind!r}")
    return ModuliDescriptor(ctx, kind, index, v, moduli_dimension(ctx, v), bound)


def is_certified_fine(desc: ModuliDescriptor) -> bool:
    """Sufficient (not necessary) criterion for a universal sheaf."""
    return desc.brauer_bound == 1


def twist_certified_trivial(desc: ModuliDescriptor, exponent: int) -> bool:
    return exponent % desc.brauer_bound == 0


@dataclass(frozen=True)
class EquivalenceEdge:
    left: ModuliDescriptor
    left_twist: int
    right: ModuliDescriptor
    right_twist: int
    tag: str
    quote: str

    @property
    def certified_untwisted(self) -> bool:
        return (twist_certified_trivial(self.left, self.left_twist)
                and twist_certified_trivial(self.right, self.right_twist))

    def key(self) -> tuple:
        return (self.tag, self.left.index, self.right.index)

    def to_json(self) -> dict:
        return {
            "left": self.left.name,
            "left_twist_exponent": self.left_twist,
            "right": self.right.name,
            "right_twist_exponent": self.right_twist,
            "certified_untwisted": self.certified_untwisted,
            "justification": {"tag": self.tag, "quote": self.quote},
        }


def certified_equivalences(ctx: K3Context, d_lo: int, d_hi: int) -> list[EquivalenceEdge]:
    """Equivalences among Picbar^d, d_lo <= d <= d_hi.

    (i) Picbar^d with Picbar^0 twisted by alpha_0^d, for every d in range;
    (ii) Picbar^d with Picbar^{g-1-d}, once per unordered pair with both
    ends in range. These are FM(m, n) with (m, n) = (d, 0) and (d, g-1-d).
    """
    if d_lo > d_hi:
        raise InvalidIndex(f"empty range {d_lo}..{d_hi}")
    g = ctx.g
    zero = describe(ctx, PICBAR, 0)
    edges = []
    for d in range(d_lo, d_hi + 1):
        edges.append(EquivalenceEdge(describe(ctx, PICBAR, d), 0, zero, d,
                                     "twist_to_degree_zero", QUOTE_TWIST_TO_DEGREE_ZERO))
    for d in range(d_lo, d_hi + 1):
        e = g - 1 - d
        if d <= e and d_lo <= e <= d_hi:
            edges.append(EquivalenceEdge(describe(ctx, PICBAR, d), e, describe(ctx, PICBAR, e), -d,
                                         "untwisted_pair", QUOTE_UNTWISTED_PAIR))
    return edges


def equivalence_graph(ctx: K3Context, d_lo: int, d_hi: int) -> dict:
    edges = certified_equivalences(ctx, d_lo, d_hi)
    nodes = {}
    for e in edges:
        nodes[e.left.name] = e.left
        nodes[e.right.name] = e.right
    ordered = sorted(nodes.values(), key=lambda n: n.index)
    return {
        "nodes": [n.to_json() for n in ordered],
        "edges": [e.to_json() for e in edges],
    }


def ns_lattice(ctx: K3Context, desc: ModuliDescriptor) -> IntegerLattice:
    return gram(ctx, perp_basis(ctx, desc.mukai_vector))


@dataclass(frozen=True)
class TheoremBCertificate:
    g: int
    X: ModuliDescriptor
    Y: ModuliDescriptor
    discX: int
    discY: int
    derived_equivalent: bool
    birational_possible: bool

    def to_json(self) -> dict:
        return {
            "g": self.g,
            "X": self.X.to_json(),
            "Y": self.Y.to_json(),
            "discX": self.discX,
            "discY": self.discY,
            "derived_equivalent": self.derived_equivalent,
            "birational_possible": self.birational_possible,
        }


def theorem_b_certificate(ctx: K3Context) -> TheoremBCertificate:
    """Picbar^0 and Picbar^{g-1}: derived equivalent, Picard discriminants differ."""
    g = ctx.g
    X = describe(ctx, PICBAR, 0)
    Y = describe(ctx, PICBAR, g - 1)
    discX, _ = lattice_invariants(ns_lattice(ctx, X))
    discY, _ = lattice_invariants(ns_lattice(ctx, Y))
    edges = certified_equivalences(ctx, 0, g - 1)
    derived = any(e.tag == "untwisted_pair" and e.certified_untwisted
                  and {e.left.index, e.right.index} == {0, g - 1} for e in edges)
    # Hodge-isometric H^2 would force isometric Picard lattices
    return TheoremBCertificate(g, X, Y, discX, discY, derived, discX == discY)
