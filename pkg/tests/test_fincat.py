from __future__ import annotations

import pytest

from catalg import fincat as fc
from catalg import fixtures
from catalg import presheaf as psh


def test_terminal_and_arrow_categories_validate():
    T = fc.terminal_category()
    assert len(T.morphisms) == 1
    A = fc.build(["a", "b"], [("f", "a", "b")])
    assert A.hom("a", "b") == ("f",)
    assert A.comp("f", "id_a") == "f"


def test_two_element_group_as_one_object_category():
    mult = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "x", ("x", "x"): "1"}
    C = fc.one_object(["1", "x"], mult, "1")
    triples = [(h, g, f) for f in "1x" for g in "1x" for h in "1x"]
    assert len(triples) == 8
    assert C.comp("x", "x") == "1"


def test_validation_errors():
    with pytest.raises(fc.IllTypedComposite):
        fc.build(["a"], [("e", "a", "a")], [("e", "e", "missing")])
    bad = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "1", ("x", "x"): "1"}
    with pytest.raises(fc.IdentityViolation):
        fc.one_object(["1", "x"], bad, "1")
    # a·b = b while every other product of a, b is a: (b·a)·b = b but b·(a·b) = a
    mult = {}
    for g in "1ab":
        for f in "1ab":
            mult[g, f] = f if g == "1" else (g if f == "1" else "a")
    mult["a", "b"] = "b"
    with pytest.raises(fc.AssocViolation):
        fc.one_object(["1", "a", "b"], mult, "1")


def test_siftedness_of_shipped_index_categories():
    assert fc.is_sifted(fixtures.reflexive_pair())
    assert fc.is_sifted(fixtures.terminal())
    v = fc.is_sifted(fixtures.discrete2())
    assert not v and v.pair == ("a", "b") and v.components == []
    assert not fc.is_sifted(fixtures.parallel_pair())
    assert not fc.is_sifted(fixtures.span())
    e = fc.is_sifted(fc.empty_category())
    assert not e and e.reason == "empty category"


def test_fam_of_empty_category():
    F = fc.fam_completion(fc.empty_category(), 3)
    assert F.category.objects == ("[]",)
    assert len(F.category.morphisms) == 1


def test_fam_of_terminal_counts_reindexings():
    F = fc.fam_completion(fc.terminal_category(), 3)
    for m in range(4):
        for n in range(4):
            A, B = F.name_of(["*"] * m), F.name_of(["*"] * n)
            assert len(F.category.hom(A, B)) == n**m


def test_fam_of_discrete2_has_six_objects():
    F = fc.fam_completion(fixtures.discrete2(), 2)
    assert len(F.category.objects) == 6


def test_fam_coproducts_respect_the_bound():
    F = fc.fam_completion(fixtures.discrete2(), 2)
    a, b = F.name_of(["a"]), F.name_of(["b"])
    S, ia, ib = F.coproduct(a, b)
    assert F.families[S] == ("a", "b")
    assert F.category.src(ia) == a and F.category.dst(ib) == S
    assert F.coproduct(S, a) is None
    with pytest.raises(fc.BoundTooSmall):
        fc.fam_completion(fixtures.discrete2(), 0)


def test_split_idempotents():
    mult = {("1", "1"): "1", ("1", "x"): "x", ("x", "1"): "x", ("x", "x"): "1"}
    group = fc.one_object(["1", "x"], mult, "1")
    assert len(fc.split_idempotents(group).category.objects) == 1
    idem = fc.one_object(["1", "e"], {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}, "1")
    K = fc.split_idempotents(idem)
    assert sorted(K.pairs.values()) == [("*", "1"), ("*", "e")]
    assert len(fc.split_idempotents(fixtures.gph_base()).category.objects) == 2
    # the reflexive graph base already splits its idempotents sr, tr through V
    assert len(fc.split_idempotents(fixtures.rgph_base()).category.objects) == 4


def test_split_idempotents_is_idempotent_up_to_equivalence():
    for C in [fixtures.rgph_base(), fixtures.reflexive_pair(), fixtures.gph_base()]:
        K1 = fc.split_idempotents(C).category
        K2 = fc.split_idempotents(K1).category
        # every new object of the second completion is isomorphic to an old one
        for X in K2.objects:
            assert any(fc.isomorphic_objects(K2, X, Y) for Y in K1.objects)


def test_category_of_elements():
    C = fixtures.gph_base()
    W = psh.coproduct(fixtures.gph_vertex(), fixtures.gph_edge()).apex
    El = fc.category_of_elements(W)
    assert len(El.category.objects) == 4
    assert len(El.category.nonidentity()) == 2
    two = psh.Presheaf(fc.terminal_category(), {"*": 2})
    assert not fc.is_sifted(fc.category_of_elements(two).category)
    assert len(fc.category_of_elements(two).category.morphisms) == 2
    assert C.objects == ("V", "E")


def test_colimit_of_representables_over_elements_recovers_the_presheaf():
    for P in [fixtures.PRESHEAVES["gph:ExE"](), fixtures.gph_terminal(), fixtures.rgph_edge()]:
        El = fc.category_of_elements(P)
        C = P.base
        D = El.category
        objects = {X: psh.representable(C, El.elements[X][0]) for X in D.objects}
        maps = {}
        for u in D.nonidentity():
            X, Y = D.src(u), D.dst(u)
            f = El.projection.mor[u]
            # y(f): y(c) -> y(d), postcomposition with f
            maps[u] = psh.yoneda_map(objects[Y], El.elements[X][0], C.hom(El.elements[X][0], El.elements[Y][0]).index(f))
        colim = psh.colimit_of_diagram(psh.Diagram(D, objects, maps), base=C)
        assert psh.isomorphic(colim.apex, P) is not None


def test_functors_and_opposites():
    C = fixtures.reflexive_pair()
    assert C.op().op() == C
    Fs = fc.enumerate_functors(fc.terminal_category(), C)
    assert len(Fs) == len(C.objects)
    walking = fc.one_object(["1", "e"], {("1", "1"): "1", ("1", "e"): "e", ("e", "1"): "e", ("e", "e"): "e"}, "1")
    assert len(fc.enumerate_functors(walking, C)) == len(fc.idempotents(C, "P")) + len(fc.idempotents(C, "Q"))
    F = Fs[0]
    assert fc.identity_functor(C).then(fc.identity_functor(C)).obj == fc.identity_functor(C).obj
    assert F.then(fc.identity_functor(C)).obj == F.obj
