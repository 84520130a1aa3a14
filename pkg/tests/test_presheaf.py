from __future__ import annotations

import pytest

from catalg import fincat as fc
from catalg import fixtures
from catalg import presheaf as psh


def gph():
    return fixtures.gph_base()


def V():
    return fixtures.gph_vertex()


def E():
    return fixtures.gph_edge()


def one():
    return fixtures.gph_terminal()


def test_representables_on_the_graph_base():
    assert V().sizes == {"V": 1, "E": 0}
    assert E().sizes == {"V": 2, "E": 1}
    assert one().sizes == {"V": 1, "E": 1}


def test_invalid_action_is_rejected():
    with pytest.raises(psh.PresheafError):
        psh.Presheaf(gph(), {"V": 1, "E": 1}, {"s": (3,), "t": (0,)})


def test_product_of_two_edges():
    L = psh.finite_limit("product", E(), E())
    assert L.apex.sizes == {"V": 4, "E": 1}


def test_terminal_and_equalizer_of_identities():
    T = psh.finite_limit("terminal", base=gph()).apex
    assert T.sizes == {"V": 1, "E": 1}
    ident = psh.identity_map(E())
    eq = psh.finite_limit("equalizer", ident, ident).apex
    assert psh.isomorphic(eq, E()) is not None


def test_pullback_of_vertex_inclusions():
    s = psh.yoneda_map(E(), "V", 0)
    t = psh.yoneda_map(E(), "V", 1)
    assert psh.finite_limit("pullback", s, t).apex.sizes == {"V": 0, "E": 0}
    assert psh.finite_limit("pullback", s, s).apex.sizes == {"V": 1, "E": 0}


def test_base_mismatch():
    with pytest.raises(psh.BaseMismatch):
        psh.finite_limit("product", E(), fixtures.rgph_edge())


def test_reflexive_coequalizer_is_the_terminal_graph():
    colim = fixtures.gph_reflexive_coequalizer()
    assert psh.isomorphic(colim.apex, one()) is not None


def test_coproduct_and_pushout():
    C = psh.finite_colimit("coproduct", V(), E(), V())
    assert C.apex.sizes == {"V": 4, "E": 1}
    ident = psh.identity_map(E())
    assert psh.isomorphic(psh.finite_colimit("pushout", ident, ident).apex, E()) is not None
    assert psh.finite_colimit("initial", base=gph()).apex.sizes == {"V": 0, "E": 0}


def test_colimit_factorization_is_unique_mediator():
    C = psh.finite_colimit("coproduct", V(), V())
    # both injections into E: the mediating map picks the source and the target
    m = C.factor({"0": psh.yoneda_map(E(), "V", 0), "1": psh.yoneda_map(E(), "V", 1)})
    assert m.source == C.apex and m.target == E()
    assert m.is_iso() is False


def test_weighted_colimits():
    A = fixtures.reflexive_pair()
    for D in psh.set_functors(A, 2):
        for c in A.objects:
            assert psh.weighted_colimit(psh.representable(A, c), D).size == D.sizes[c]
    T = fc.terminal_category()
    W = psh.Presheaf(T, {"*": 2})
    D3 = psh.Presheaf(T.op(), {"*": 3})
    assert psh.weighted_colimit(W, D3).size == 6
    with pytest.raises(psh.IndexMismatch):
        psh.weighted_colimit(W, psh.Presheaf(A.op(), {"P": 0, "Q": 0}))


def test_conical_colimit_of_a_reflexive_pair_diagram():
    A = fixtures.reflexive_pair()
    for D in psh.set_functors(A, 2):
        n, _ = psh.set_colimit(D)
        assert psh.conical_colimit(D).size == n


def test_left_kan_extension_examples():
    A = fixtures.reflexive_pair()
    for D in psh.set_functors(A, 2):
        lan = psh.left_kan_extension(D, fc.identity_functor(A))
        assert psh.isomorphic(lan.extension, D) is not None
    T, B = fc.terminal_category(), fixtures.discrete2()
    J = fc.FinFunctor(T, B, {"*": "a"}, {"id_*": "id_a"})
    F = psh.Presheaf(T.op(), {"*": 1})
    assert psh.left_kan_extension(F, J).extension.sizes == {"a": 1, "b": 0}


def test_nat_transformations_in_graphs():
    assert len(psh.nat_transformations(one(), E())) == 0
    assert len(psh.nat_transformations(one(), one())) == 1
    G = psh.finite_limit("product", E(), E()).apex
    for c in gph().objects:
        assert len(psh.nat_transformations(psh.representable(gph(), c), G)) == G.sizes[c]


def test_exponential_examples():
    G = psh.finite_limit("product", E(), E()).apex
    assert psh.isomorphic(psh.exponential(one(), G).apex, G) is not None
    assert psh.isomorphic(psh.exponential(G, one()).apex, one()) is not None
    EV = psh.exponential(V(), E()).apex
    # (E^V)(c) = Nat(y(c) x V, E): y(V) x V = V and y(E) x V = V + V, with |Nat(V, E)| = |E(V)| = 2
    assert EV.sizes == {"V": 2, "E": 4}


def test_exponential_universal_property_on_graphs():
    F, G = V(), E()
    exp = psh.exponential(F, G)
    for H in [V(), E(), one()]:
        HF = psh.product(H, F)
        lhs = psh.nat_transformations(HF.apex, G)
        rhs = psh.nat_transformations(H, exp.apex)
        assert len(lhs) == len(rhs)
        curried = {psh.curry(b, HF, exp).key() for b in lhs}
        assert curried == {m.key() for m in rhs}


def test_gph_decompositions():
    P = fixtures.PRESHEAVES
    assert psh.decompose_into_representables(P["gph:VxV"]()).summands == ("V",)
    assert psh.decompose_into_representables(P["gph:ExE"]()).formula() == "V + V + E"
    d = psh.decompose_into_representables(P["gph:ExE"]())
    assert d.iso.is_iso()


def test_rgph_square_does_not_decompose():
    with pytest.raises(psh.NotDecomposable) as e:
        psh.decompose_into_representables(fixtures.PRESHEAVES["rgph:ExE"]())
    assert len(e.value.component) == 13


def test_strong_finite_presentability():
    assert not psh.is_strongly_finitely_presentable(one())
    for c in gph().objects:
        assert psh.is_strongly_finitely_presentable(psh.representable(gph(), c))
    VEV = psh.finite_colimit("coproduct", V(), E(), V()).apex
    assert psh.is_strongly_finitely_presentable(VEV)
    assert not psh.is_strongly_finitely_presentable(fixtures.PRESHEAVES["rgph:ExE"]())


def test_preservation_of_the_reflexive_coequalizer():
    colim = fixtures.gph_reflexive_coequalizer()
    res = psh.preserves_colimit(one(), colim)
    assert not res.preserved
    assert (res.colimit_of_homs, res.hom_into_colimit) == (0, 1)
    assert res.missing == [0]
    for c in gph().objects:
        assert psh.preserves_colimit(psh.representable(gph(), c), colim).preserved
    VV = psh.finite_colimit("coproduct", V(), V()).apex
    assert psh.preserves_colimit(VV, colim).preserved


def test_commutation_examples():
    J = fixtures.discrete2()
    D1 = psh.Presheaf(J.op(), {"a": 1, "b": 0})
    D2 = psh.Presheaf(J.op(), {"a": 0, "b": 1})
    v = psh.commutes_products_colimit(J, [(D1, D2)])
    assert not v and v.witness is not None
    T = fixtures.terminal()
    assert psh.commutes_products_colimit(T, psh.all_pairs(psh.set_functors(T, 3)))
    R = fixtures.reflexive_pair()
    assert psh.commutes_products_colimit(R, psh.all_pairs(psh.set_functors(R, 3)))


def test_set_functor_enumeration_counts():
    # functors from the walking arrow with sets of size <= 2: sum over sizes of n^m maps
    A = fc.build(["a", "b"], [("f", "a", "b")])
    expected = sum(n**m for m in range(3) for n in range(3))
    assert len(psh.set_functors(A, 2)) == expected


def test_injection_representables():
    P = fixtures.inj_representable(2, 3)
    assert P.sizes == {"0": 0, "1": 0, "2": 2, "3": 6}
