import random
from math import gcd

import pytest
import sympy

from k3moduli import errors
from k3moduli.lattice import IntegerLattice, K3Context, MukaiVector, lattice_invariants
from k3moduli.moduli import (
    HILB,
    PICBAR,
    certified_equivalences,
    describe,
    equivalence_graph,
    is_certified_fine,
    ns_lattice,
    picbar_brauer_bound,
    theorem_b_certificate,
)


def test_describe_examples():
    ctx = K3Context(3)
    d1 = describe(ctx, PICBAR, 1)
    assert (d1.mukai_vector, d1.dim, d1.brauer_bound) == (MukaiVector(0, 1, -1), 6, 1)
    assert is_certified_fine(d1)
    d2 = describe(ctx, PICBAR, 2)
    assert (d2.mukai_vector, d2.dim, d2.brauer_bound) == (MukaiVector(0, 1, 0), 6, 4)
    assert not is_certified_fine(describe(ctx, PICBAR, 0))
    h = describe(K3Context(2), HILB, 2)
    assert (h.mukai_vector, h.dim, h.brauer_bound) == (MukaiVector(1, 0, -1), 4, 1)
    assert is_certified_fine(describe(K3Context(2), PICBAR, 0))


def test_describe_errors():
    with pytest.raises(errors.InvalidIndex):
        describe(K3Context(2), HILB, 0)
    with pytest.raises(errors.InvalidIndex):
        describe(K3Context(2), "Quot", 1)
    with pytest.raises(errors.InvalidIndex):
        certified_equivalences(K3Context(2), 3, 1)


@pytest.mark.parametrize("g", range(2, 31))
def test_picbar_invariants(g):
    ctx = K3Context(g)
    for d in range(-2 * g, 2 * g + 1):
        desc = describe(ctx, PICBAR, d)
        assert desc.dim == 2 * g
        b = desc.brauer_bound
        assert (2 * g - 2) % b == 0 and abs(d + 1 - g) % b == 0
        assert b == gcd(2 * g - 2, d + 1 - g)
    for d in range(0, g):
        assert (g - 1 - d) % picbar_brauer_bound(ctx, d) == 0


@pytest.mark.parametrize("g", range(2, 11))
def test_untwisted_pairs_certified(g):
    edges = certified_equivalences(K3Context(g), 0, g - 1)
    pairs = {(e.left.index, e.right.index) for e in edges if e.tag == "untwisted_pair"}
    assert pairs == {(d, g - 1 - d) for d in range(g) if d <= g - 1 - d}
    assert all(e.certified_untwisted for e in edges if e.tag == "untwisted_pair")


def test_twist_edges():
    ctx = K3Context(3)
    edges = certified_equivalences(ctx, 0, 2)
    twist = [e for e in edges if e.tag == "twist_to_degree_zero"]
    assert [(e.left.index, e.right.index, e.right_twist) for e in twist] == [(0, 0, 0), (1, 0, 1), (2, 0, 2)]
    # alpha_0 has bound 2, so alpha_0^1 is not certified trivial
    assert [e.certified_untwisted for e in twist] == [True, False, True]
    assert all(e.to_json()["justification"]["quote"] for e in edges)


def test_graph_g5():
    graph = equivalence_graph(K3Context(5), 0, 4)
    pairs = {(e["left"], e["right"]) for e in graph["edges"]
             if e["justification"]["tag"] == "untwisted_pair"}
    assert pairs == {("Picbar^0", "Picbar^4"), ("Picbar^1", "Picbar^3"), ("Picbar^2", "Picbar^2")}
    assert [n["index"] for n in graph["nodes"]] == [0, 1, 2, 3, 4]


def test_g2_single_pair():
    edges = certified_equivalences(K3Context(2), 0, 1)
    pair = [e for e in edges if e.tag == "untwisted_pair"]
    assert len(pair) == 1 and pair[0].certified_untwisted
    assert (pair[0].left.index, pair[0].right.index) == (0, 1)


def test_ns_lattice_examples():
    assert lattice_invariants(ns_lattice(K3Context(2), describe(K3Context(2), HILB, 2)))[0] == -4
    ctx = K3Context(4)
    assert lattice_invariants(ns_lattice(ctx, describe(ctx, PICBAR, 0)))[0] == -4
    assert lattice_invariants(ns_lattice(ctx, describe(ctx, PICBAR, 3)))[0] == -1


@pytest.mark.parametrize("g", range(2, 31))
def test_theorem_b(g):
    cert = theorem_b_certificate(K3Context(g))
    assert (cert.discX, cert.discY) == (-4, -1)
    assert cert.derived_equivalent and not cert.birational_possible


def test_ns_det_fuzzed():
    rng = random.Random(7)
    ctx = K3Context(6)
    for d in range(-3, 6):
        G = sympy.Matrix(ns_lattice(ctx, describe(ctx, PICBAR, d)).gram)
        base = lattice_invariants(IntegerLattice(G.tolist()))
        for _ in range(10):
            a, b = rng.randint(-4, 4), rng.randint(-4, 4)
            U = sympy.Matrix([[1, a], [0, 1]]) * sympy.Matrix([[1, 0], [b, 1]])
            assert lattice_invariants(IntegerLattice((U * G * U.T).tolist())) == base
