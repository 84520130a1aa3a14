from __future__ import annotations

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from catalg import rewrite as rw
from catalg.io import builtin_theory


def sig(name):
    return builtin_theory(name).signature


def R(name):
    return builtin_theory(name).system


def parse(name, text):
    return rw.parse_term(sig(name), text)


# ---------------------------------------------------------------- random terms


def terms(name, depth=4, names=("x", "y", "z")):
    S = sig(name)
    s = S.single_sort
    leaves = [st.just(rw.Var(v, s)) for v in names] + [st.just(rw.app(S, c)) for c in S.constants()]
    base = st.one_of(*leaves)

    def extend(children):
        options = []
        for op, d in S.ops.items():
            if d.arity:
                options.append(st.tuples(*([children] * len(d.arity))).map(lambda a, op=op: rw.app(S, op, *a)))
        return st.one_of(*options)

    return st.recursive(base, extend, max_leaves=2**depth)


# independent normal forms: words for monoids, reduced words for groups, sets for semilattices


def monoid_word(t):
    if isinstance(t, rw.Var):
        return (t.name,)
    if t.op == "e":
        return ()
    return sum((monoid_word(a) for a in t.args), ())


def group_word(t):
    if isinstance(t, rw.Var):
        return ((t.name, 1),)
    if t.op == "e":
        return ()
    if t.op == "inv":
        return tuple((v, -k) for v, k in reversed(group_word(t.args[0])))
    out: list = []
    for a in t.args:
        for letter in group_word(a):
            if out and out[-1] == (letter[0], -letter[1]):
                out.pop()
            else:
                out.append(letter)
    return tuple(out)


def support(t):
    if isinstance(t, rw.Var):
        return frozenset([t.name])
    return frozenset().union(*(support(a) for a in t.args)) if t.args else frozenset()


# ---------------------------------------------------------------- examples


def test_substitution():
    S = sig("group")
    t = parse("group", "m(x, x)")
    assert rw.substitute(S, t, {"x": parse("group", "e")}) == parse("group", "m(e, e)")
    u = rw.substitute(S, parse("group", "inv(x)"), {"x": parse("group", "m(y, z)")})
    assert rw.show(u) == "inv(m(y,z))"
    assert rw.substitute(S, t, {"x": rw.Var("x", "s")}) == t
    with pytest.raises(rw.UnboundVariable):
        rw.substitute(S, t, {"y": t})


def test_normalization_examples():
    assert rw.show(R("group").nf(parse("group", "m(a, inv(a))"))) == "e"
    nf = R("monoid").normalize(parse("monoid", "m(e, m(e, a))"))
    assert rw.show(nf.term) == "a" and nf.steps == 2
    t = parse("monoid", "m(a, m(b, c))")
    nf = R("monoid").normalize(t)
    assert nf.term == t and nf.steps == 0


def test_budget_exceeded_carries_partial_term():
    t = parse("monoid", "m(m(m(m(a, b), c), d), e)")
    with pytest.raises(rw.BudgetExceeded) as e:
        R("monoid").normalize(t, budget=1)
    assert e.value.partial is not None


def test_confluence_reports():
    assert rw.local_confluence_report(R("monoid")) == []
    S = rw.Signature(["s"], [rw.OpDecl("f", ("s",), "s"), rw.OpDecl("a", (), "s"), rw.OpDecl("b", (), "s")])
    bad = rw.RewriteSystem(S, [rw.parse_rule(S, "f(x) -> a"), rw.parse_rule(S, "f(x) -> b")])
    report = rw.local_confluence_report(bad)
    assert len(report) == 1
    assert {rw.show(report[0].left), rw.show(report[0].right)} == {"a", "b"}
    assert rw.local_confluence_report(rw.RewriteSystem(S, [])) == []


def test_term_enumeration():
    S = rw.Signature(["s"], [])
    ctx = [rw.Var("x", "s"), rw.Var("y", "s")]
    assert rw.enumerate_terms(S, ctx, 5) == ctx
    M = sig("monoid")
    got = {rw.show(t) for t in rw.enumerate_terms(M, [rw.Var("x", "s")], 1)}
    assert got == {"x", "e", "m(x,x)", "m(x,e)", "m(e,x)", "m(e,e)"}
    assert {rw.show(t) for t in rw.enumerate_terms(M, [rw.Var("x", "s")], 0)} == {"x", "e"}


def test_ac_canonical_forms():
    S = sig("cmonoid")
    a = parse("cmonoid", "m(y, m(x, e))")
    b = parse("cmonoid", "m(m(x, y), e)")
    assert a == b
    assert rw.show(a) == "m(x,y)"
    assert rw.depth(parse("cmonoid", "m(x, m(y, z))")) == 2
    assert R("semilattice").nf(parse("semilattice", "m(x, m(y, x))")) == parse("semilattice", "m(x, y)")
    assert S.ac == {"m": "e"}


def test_rejected_rules():
    S = sig("monoid")
    with pytest.raises(rw.UnorientableRule):
        rw.RewriteSystem(S, [rw.parse_rule(S, "x -> m(x, e)")])
    with pytest.raises(rw.UnorientableRule):
        rw.RewriteSystem(S, [rw.parse_rule(S, "m(x, e) -> y")])
    with pytest.raises(rw.UnorientableRule):
        rw.RewriteSystem(S, [rw.parse_rule(S, "m(x, y) -> m(y, x)")])
    with pytest.raises(rw.ParseError):
        rw.parse_term(S, "m(x,")


def test_signature_validation():
    with pytest.raises(rw.RewriteError):
        rw.Signature(["s"], [rw.OpDecl("f", ("s",), "s")], ac={"f": None})
    with pytest.raises(rw.SortMismatch):
        rw.Signature(["s"], [rw.OpDecl("f", ("t",), "s")])


def test_unification():
    S = sig("group")
    a, b = parse("group", "m(x, inv(y))"), parse("group", "m(inv(z), w)")
    sigma = rw.unify(a, b)
    assert sigma is not None
    assert rw.unify(parse("group", "inv(x)"), parse("group", "e")) is None


# ---------------------------------------------------------------- properties


@settings(max_examples=200, deadline=None)
@given(terms("group"))
def test_normalization_is_idempotent_and_replayable(t):
    nf = R("group").normalize(t, trace=True)
    assert R("group").nf(nf.term) == nf.term
    assert R("group").replay(t, nf.trace) == nf.term


@settings(max_examples=200, deadline=None)
@given(terms("monoid"), terms("monoid"))
def test_monoid_normal_forms_match_words(t, u):
    assert (R("monoid").nf(t) == R("monoid").nf(u)) == (monoid_word(t) == monoid_word(u))


@settings(max_examples=200, deadline=None)
@given(terms("group", depth=3), terms("group", depth=3))
def test_group_normal_forms_match_reduced_words(t, u):
    assert (R("group").nf(t) == R("group").nf(u)) == (group_word(t) == group_word(u))


@settings(max_examples=200, deadline=None)
@given(terms("semilattice"), terms("semilattice"))
def test_semilattice_normal_forms_match_supports(t, u):
    assert (R("semilattice").nf(t) == R("semilattice").nf(u)) == (support(t) == support(u))


@settings(max_examples=200, deadline=None)
@given(terms("cmonoid", depth=3), terms("cmonoid", depth=3))
def test_ac_normalization_ignores_argument_order(t, u):
    S = sig("cmonoid")
    assert R("cmonoid").nf(rw.app(S, "m", t, u)) == R("cmonoid").nf(rw.app(S, "m", u, t))


@settings(max_examples=100, deadline=None)
@given(terms("monoid", depth=3))
def test_show_parse_roundtrip(t):
    assert parse("monoid", rw.show(t)) == t
