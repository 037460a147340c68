import time

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from k3moduli import errors
from k3moduli.autoeq import (
    Compose,
    Inverse,
    ProofTrace,
    PTwist,
    Shift,
    Signature,
    Step,
    Unknown,
    normalize,
    parse,
    prove_equal,
    render,
    replay,
    rewrite_rules,
    rpo_greater,
)
from k3moduli.autoeq.rules import FWD
from k3moduli.autoeq.terms import DbHilb, DbPicbar, DbS
from k3moduli.lattice import K3Context
from termgen import TermGen

CTX = K3Context(3)
SIG = Signature(CTX)


def p(text, ctx=CTX):
    return parse(text, ctx)


# parsing ---------------------------------------------------------------------

def test_parse_examples():
    assert p("KNhilb(2) ∘ F") == Compose((SIG.KNhilb(2), SIG.F()))
    assert p("KNhilb(2) . F") == p("KNhilb(2) ∘ F")
    assert p("P(F')") == PTwist(SIG.F_prime())
    assert p("KNflop(g-1)^-1") == Inverse(SIG.KNflop(2))
    assert p("KNflop(2g)⁻¹") == p("KNflop(6)^{-1}")
    assert p("FM[2]") == Shift(SIG.FM(), 2)


def test_parse_types():
    e = p("KNhilb(2) ∘ F")
    assert (e.source, e.target) == (DbS(), DbHilb())
    assert p("F").target == DbPicbar(CTX, -3, 1)
    assert not p("F").is_equivalence and p("F").is_pfunctor
    assert p("P(F')").is_equivalence


def test_identity_is_inferred():
    assert normalize(rewrite_rules(CTX), p("Id ∘ F")).expr == p("F")
    assert p("KNhilb(2) ∘ Id ∘ F") .factors[1] == SIG.identity(p("F").target)


def test_type_errors():
    with pytest.raises(errors.ExprTypeError):
        p("F ∘ KNhilb(2)")
    with pytest.raises(errors.ExprTypeError):
        p("F^-1")
    with pytest.raises(errors.ExprTypeError):
        p("P(KNhilb(2))")


def test_syntax_errors_have_positions():
    with pytest.raises(errors.ExprSyntaxError) as info:
        p("KNhilb(2) ∘")
    assert info.value.position == len("KNhilb(2) ∘")
    with pytest.raises(errors.ExprSyntaxError) as info:
        p("P(F")
    assert info.value.position == 3 and ")" in info.value.expected
    with pytest.raises(errors.ExprSyntaxError):
        p("")
    with pytest.raises(errors.ExprSyntaxError):
        p("F )")


def test_unknown_atom():
    with pytest.raises(errors.UnknownAtom) as info:
        p("KNhilb(2) ∘ G")
    assert info.value.position == len("KNhilb(2) ∘ ")


@given(st.integers(0, 10**6))
@settings(max_examples=200)
def test_render_parse_roundtrip(seed):
    gen = TermGen(CTX, seed, identities=False)
    e = gen.expr(5)
    assert p(render(e)) == e


# rules -----------------------------------------------------------------------

def test_rule_examples():
    rules = rewrite_rules(CTX)
    assert p("KNhilb(2) ∘ F") in rules.forward("R5", p("F' ∘ T(1)"))
    assert p("P(F')") in rules.forward("R2", p("P(F' ∘ T(1))"))
    e = p("KNhilb(2) ∘ KNhilb(2)^-1")
    assert rules.forward("R6", e) == [SIG.identity(DbHilb())]
    assert p("FM ∘ AJcomp") in rules.forward("R4", p("F"))
    assert p("KNflop(2)^-1 ∘ KNflop(3)") in rules.forward("R3", p("P(AJcomp)"))
    rules_b = rewrite_rules(CTX, "b")
    assert p("KNflop(-2)^-1 ∘ KNflop(3)") in rules_b.forward("R3", p("P(AJcomp)"))
    with pytest.raises(ValueError):
        rewrite_rules(CTX, "c")


def test_normalize_examples():
    rules = rewrite_rules(CTX)
    assert render(normalize(rules, p("P(KNhilb(2) ∘ F)")).expr) == render(p("KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1"))
    assert normalize(rules, p("P(F ∘ Id)")).expr == p("P(F)")
    res = normalize(rules, p("P(Phi(1) ∘ Phi(2) ∘ F)"), max_steps=1)
    assert not res.normalized and len(res.steps) == 1


@pytest.mark.parametrize("seed", range(8))
def test_rewrites_preserve_type(seed):
    gen = TermGen(K3Context(2 + seed % 4), seed)
    rules = rewrite_rules(gen.sig.ctx)
    vocab = rules.vocabulary()
    for _ in range(40):
        e = gen.expr(5)
        for rid in ("R1", "R2", "R3", "R4", "R5", "R6"):
            for new in rules.forward(rid, e) + rules.backward_candidates(rid, e, vocab):
                assert (new.source, new.target) == (e.source, e.target)


@pytest.mark.parametrize("seed", range(4))
def test_normalize_terminates_with_decreasing_order(seed):
    gen = TermGen(K3Context(2 + seed), 1000 + seed)
    rules = rewrite_rules(gen.sig.ctx)
    for _ in range(250):
        e = gen.expr(8)
        res = normalize(rules, e)
        assert res.normalized
        for step in res.steps:
            assert rpo_greater(step.before, step.after)
            assert (step.after.source, step.after.target) == (e.source, e.target)


def test_order_examples():
    assert rpo_greater(p("P(KNhilb(2) ∘ F)"), p("KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1"))
    assert not rpo_greater(p("KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1"), p("P(KNhilb(2) ∘ F)"))
    assert not rpo_greater(p("F"), p("F"))


# prover ----------------------------------------------------------------------

IDENTITIES = {
    "a": ("P(F')", "KNhilb(2) ∘ P(F) ∘ KNhilb(2)^-1"),
    "b": ("P(F)", "FM ∘ KNflop(g-1)^-1 ∘ KNflop(g) ∘ FM^-1"),
    "c": ("P(F')", "KNhilb(2) ∘ FM ∘ KNflop(g-1)^-1 ∘ KNflop(g) ∘ FM^-1 ∘ KNhilb(2)^-1"),
}


@pytest.mark.parametrize("g", [2, 3, 5, 10])
@pytest.mark.parametrize("name", sorted(IDENTITIES))
def test_identities_prove_and_replay(g, name):
    ctx = K3Context(g)
    rules = rewrite_rules(ctx)
    lhs, rhs = (parse(t, ctx) for t in IDENTITIES[name])
    trace = prove_equal(rules, lhs, rhs, depth=6)
    assert isinstance(trace, ProofTrace)
    assert replay(rules, trace)
    assert trace.steps[0].before == lhs and trace.steps[-1].after == rhs
    assert trace == prove_equal(rules, lhs, rhs, depth=6)


def test_trace_shapes():
    rules = rewrite_rules(K3Context(5))
    a = prove_equal(rules, *(parse(t, K3Context(5)) for t in IDENTITIES["a"]))
    assert len(a) <= 4 and {s.rule_id for s in a.steps} == {"R1", "R2", "R5"}
    b = prove_equal(rules, *(parse(t, K3Context(5)) for t in IDENTITIES["b"]))
    # AJcomp already absorbs the line-bundle twist, so R2 is not needed here
    assert {"R1", "R3", "R4"} <= {s.rule_id for s in b.steps} <= {"R1", "R2", "R3", "R4"}
    assert all(set(s.to_json()) == {"rule_id", "direction", "quote", "before", "after"} for s in b.steps)


def test_reading_b_needs_its_own_indices():
    ctx = K3Context(4)
    rules = rewrite_rules(ctx, "b")
    lhs = parse("P(F)", ctx)
    assert isinstance(prove_equal(rules, lhs, parse("FM ∘ KNflop(1-g)^-1 ∘ KNflop(g) ∘ FM^-1", ctx)), ProofTrace)
    assert isinstance(prove_equal(rules, lhs, parse(IDENTITIES["b"][1], ctx), depth=4), Unknown)


def test_reflexivity_and_mismatch():
    rules = rewrite_rules(CTX)
    trace = prove_equal(rules, p("F"), p("F"))
    assert isinstance(trace, ProofTrace) and len(trace) == 0 and replay(rules, trace)
    with pytest.raises(errors.EndpointMismatch):
        prove_equal(rules, p("F"), p("F'"))


def test_unknown_not_false():
    rules = rewrite_rules(CTX)
    out = prove_equal(rules, p("Phi(1)"), p("Phi(2)"), depth=3)
    assert isinstance(out, Unknown)
    out = prove_equal(rules, p("P(F')"), p(IDENTITIES["c"][1]), depth=6, budget=3)
    assert isinstance(out, Unknown) and "budget" in out.reason


def test_budget_env(monkeypatch):
    monkeypatch.setenv("K3MODULI_STEP_BUDGET", "2")
    rules = rewrite_rules(CTX)
    out = prove_equal(rules, p("P(F')"), p(IDENTITIES["c"][1]))
    assert isinstance(out, Unknown)


def test_replay_rejects_forged_steps():
    rules = rewrite_rules(CTX)
    lhs, rhs = p("P(F)"), p("P(F')")
    forged = ProofTrace(p("F"), p("F"), (Step("R4", FWD, p("F"), p("F")),))
    assert not replay(rules, forged)
    good = prove_equal(rules, *(p(t) for t in IDENTITIES["a"]))
    broken = ProofTrace(good.lhs, good.rhs, good.steps[:-1])
    assert not replay(rules, broken)
    assert lhs != rhs


@pytest.mark.parametrize("g", [2, 4])
def test_conjugation_coherence(g):
    ctx = K3Context(g)
    sig = Signature(ctx)
    rules = rewrite_rules(ctx)
    F = sig.F()
    phis = [sig.Phi(i) for i in range(3)] + [sig.KNhilb(k) for k in (1, 2, 5)]
    phis += [Inverse(sig.FM()), sig.FM(-g, 1)]
    for phi in phis:
        lhs = PTwist(Compose((phi, F)))
        rhs = Compose((phi, PTwist(F), Inverse(phi)))
        trace = prove_equal(rules, lhs, rhs, depth=1)
        assert isinstance(trace, ProofTrace) and len(trace) == 1 and replay(rules, trace)


def test_prover_is_fast():
    start = time.perf_counter()
    for g in (2, 3, 5):
        ctx = K3Context(g)
        rules = rewrite_rules(ctx)
        for lhs, rhs in IDENTITIES.values():
            assert isinstance(prove_equal(rules, parse(lhs, ctx), parse(rhs, ctx)), ProofTrace)
    assert time.perf_counter() - start < 1.0
