from __future__ import annotations

from itertools import product

import pytest

from catalg import models as md
from catalg import monadic as mo
from catalg import rewrite as rw
from catalg.io import builtin_theory
from catalg.theory import TheoryError, hom_enumerate


def T(name):
    return builtin_theory(name)


def test_identity_monad():
    M = mo.monad_from_theory(T("empty"), 3)
    S = M.slice(["a", "b", "c"])
    assert [rw.show(t) for t in S.terms] == ["a", "b", "c"]
    assert [M.eta(S.names, x) for x in "abc"] == [0, 1, 2]
    for i in range(3):
        assert M.mu(S.names, S.var(i)) == S.terms[i]


def test_slice_sizes():
    assert len(mo.monad_from_theory(T("pointed"), 2).slice(2)) == 3
    M = mo.monad_from_theory(T("semilattice"), 4)
    for n in range(5):
        S = M.slice(n)
        assert len(S) == 2**n and S.saturated
    assert not mo.monad_from_theory(T("monoid"), 3).slice(1).saturated


def test_slices_agree_with_layered_enumeration():
    # closure under the operations and depth-layered normal forms are two routes to T(X)
    for name, depth in (("pointed", 2), ("semilattice", 3), ("group", 2), ("monoid", 3)):
        Th = T(name)
        M = mo.monad_from_theory(Th, depth)
        S = M.slice(["x1", "x2"])
        by_sort, closed = Th.normal_forms([rw.Var("x1", "s"), rw.Var("x2", "s")], depth)
        if S.saturated:
            assert set(S.terms) == set(by_sort["s"])
        else:
            assert set(S.terms) <= set(by_sort["s"])


def test_many_sorted_theory_is_refused():
    with pytest.raises(TheoryError):
        mo.monad_from_theory(T("action"), 2)


def test_monad_laws():
    for name, depth in (("empty", 2), ("pointed", 2), ("monoid", 3), ("group", 2), ("semilattice", 3), ("cmonoid", 3)):
        M = mo.monad_from_theory(T(name), depth)
        for n in range(3):
            rep = mo.check_monad_laws(M, n, samples=50, seed=n)
            assert rep.ok, rep.failures


def test_fmap_is_functorial():
    M = mo.monad_from_theory(T("group"), 2)
    S = M.slice(["a", "b", "c"])
    f = {"a": "b", "b": "c", "c": "c"}
    g = {"a": "a", "b": "a", "c": "b"}
    gf = {x: g[f[x]] for x in f}
    for t in S.terms:
        assert M.fmap(g, M.fmap(f, t)) == M.fmap(gf, t)
        assert M.fmap({x: x for x in "abc"}, t) == t


def test_kleisli_theory_homs():
    K = mo.theory_from_monad(mo.monad_from_theory(T("empty"), 2))
    for m in range(4):
        for n in range(4):
            assert len(K.hom(m, n)) == m**n
    K = mo.theory_from_monad(mo.monad_from_theory(T("pointed"), 2))
    assert len(K.hom(1, 1)) == 2
    K = mo.theory_from_monad(mo.monad_from_theory(T("monoid"), 3))
    shown = {rw.show(h[0]) for h in K.hom(1, 1)}
    assert shown == {str(h)[1:-1] for h in hom_enumerate(T("monoid"), 1, 1, 3).homs}


def test_kleisli_identities():
    K = mo.theory_from_monad(mo.monad_from_theory(T("group"), 2))
    for f in K.hom(2, 1):
        assert K.compose(K.identity(2), f, 2) == f
        assert K.compose(f, K.identity(1), 2) == f


def test_roundtrips():
    r = mo.roundtrip_check(T("empty"), 3, 2, max_pairs=None)
    assert r.ok and r.exact
    assert all(a == b == m**n for (m, n), (a, b) in r.sizes.items())
    r = mo.roundtrip_check(T("pointed"), 3, 2, max_pairs=None)
    assert r.ok and r.exact
    assert all(a == b == (m + 1) ** n for (m, n), (a, b) in r.sizes.items())
    r = mo.roundtrip_check(T("monoid"), 2, 4)
    assert r.ok and not r.exact
    r = mo.roundtrip_check(T("semilattice"), 2, 3, max_pairs=None)
    assert r.ok and r.exact


def brute_models(theory, n):
    # oracle: every assignment of tables, filtered by the equations
    sig = theory.signature
    ops = list(sig.ops.items())
    spaces = [list(product(range(n), repeat=n ** len(d.arity))) for _, d in ops]
    out = []
    for tables in product(*spaces):
        M = md.Model(theory, {"s": n}, {op: t for (op, _), t in zip(ops, tables)}, check=False)
        if md.check_model(M):
            out.append(M)
    return out


def test_em_algebras_match_brute_force_models():
    for name, depth in (("pointed", 2), ("group", 2)):
        M = mo.monad_from_theory(T(name), depth)
        for n in (1, 2):
            algs = mo.enumerate_em_algebras(M, n)
            models = brute_models(T(name), n)
            assert len(algs) == len(models)
            assert {mo.model_of_algebra(M, a) for a in algs} == set(models)


def test_em_correspondence_counts():
    r = mo.em_model_correspondence(T("pointed"), 3)
    assert r.ok and r.counts == {1: (1, 1), 2: (2, 2), 3: (3, 3)}
    r = mo.em_model_correspondence(T("group"), 2)
    # two labelled copies of Z/2 on {0, 1}: the identity may be either element
    assert r.ok and r.counts == {1: (1, 1), 2: (2, 2)}
    r = mo.em_model_correspondence(T("empty"), 2)
    assert r.ok and r.counts == {1: (1, 1), 2: (1, 1)}


def test_algebra_maps_are_homomorphisms():
    M = mo.monad_from_theory(T("semilattice"), 3)
    models = md.enumerate_models(T("semilattice"), {"s": 2}) + md.enumerate_models(T("semilattice"), {"s": 3})
    for A in models:
        for B in models:
            a, b = mo.algebra_of_model(M, A), mo.algebra_of_model(M, B)
            assert set(mo.algebra_maps(M, a, b)) == {h.maps["s"] for h in md.hom_models(A, B)}
