from __future__ import annotations

import random
from itertools import product

import pytest

from catalg import fixtures
from catalg import models as md
from catalg import rewrite as rw
from catalg.io import builtin_theory
from catalg.suites import abelianization, free_semilattice_functor, left_zero_monoid, two_point_set
from catalg.theory import TheoryMorphism, identity_morphism


def T(name):
    return builtin_theory(name)


def cyclic(n):
    return md.model_from_function(
        T("group"), {"s": n}, lambda op, a: {"m": lambda: (a[0] + a[1]) % n, "inv": lambda: -a[0] % n, "e": lambda: 0}[op]()
    )


def z2_monoid(mult):
    # (Z/2, +, 0) or (Z/2, ·, 1)
    if mult:
        return md.model_from_function(T("monoid"), {"s": 2}, lambda op, a: 1 if op == "e" else a[0] * a[1])
    return md.model_from_function(T("monoid"), {"s": 2}, lambda op, a: 0 if op == "e" else (a[0] + a[1]) % 2)


def brute_homs(A, B):
    # oracle: every function on the single carrier, filtered by the operation tables
    n, k = A.carriers["s"], B.carriers["s"]
    out = []
    for f in product(range(k), repeat=n):
        ok = all(
            f[A.apply(op, args)] == B.apply(op, [f[x] for x in args])
            for op, d in A.theory.signature.ops.items()
            for args in product(range(n), repeat=len(d.arity))
        )
        if ok:
            out.append(f)
    return out


def test_check_model_examples():
    assert md.check_model(cyclic(2))
    for name in ("group", "monoid", "semilattice", "pointed", "cmonoid"):
        assert md.check_model(md.terminal_model(T(name)))
    AND = md.Model(T("group"), {"s": 2}, {"m": [0, 0, 0, 1], "inv": [0, 1], "e": [0]}, check=False)
    v = md.check_model(AND)
    assert not v
    eq, env, a, b = v.witness
    assert eq.label == "rule 1" and env == {"x": "1"} and (a, b) == ("0", "1")
    with pytest.raises(md.ModelError):
        md.Model(T("group"), {"s": 2}, {"m": [0, 0, 0, 1], "inv": [0, 1], "e": [0]})


def test_hom_examples():
    for M in (cyclic(3), left_zero_monoid()):
        assert len(md.hom_models(M, md.terminal_model(M.theory))) == 1
    assert len(md.hom_models(cyclic(2), cyclic(2))) == 2
    A, B = z2_monoid(False), z2_monoid(True)
    homs = md.hom_models(A, B)
    assert [h.maps["s"] for h in homs] == brute_homs(A, B)
    assert len(homs) == 1


def test_hom_search_matches_brute_force():
    models = md.models_up_to(T("monoid"), 3, up_to_iso=True)[0]
    for A in models:
        for B in models:
            assert [h.maps["s"] for h in md.hom_models(A, B)] == brute_homs(A, B)


def test_search_space_bound():
    with pytest.raises(md.SearchSpaceTooLarge):
        md.hom_models(cyclic(4), cyclic(4), bound=100)


def test_limits():
    M = left_zero_monoid()
    P = md.limit_of_models("product", M, md.terminal_model(M.theory))
    assert md.canonical_key(P.model) == md.canonical_key(M)
    Z = md.product_of_models(cyclic(2), cyclic(2))
    assert Z.model.carriers == {"s": 4}
    assert md.check_model(Z.model)
    for i, (x, y) in enumerate(Z.elements["s"]):
        for j, (u, v) in enumerate(Z.elements["s"]):
            assert Z.elements["s"][Z.model.apply("m", (i, j))] == ((x + u) % 2, (y + v) % 2)
    ident = md.identity_hom(M)
    E = md.limit_of_models("equalizer", ident, ident)
    assert md.canonical_key(E.model) == md.canonical_key(M)


def _kernel_pair_of_left_zero():
    # the submonoid {(1,1), (a,a), (b,b), (a,b)} of L x L with both projections and the diagonal
    L = left_zero_monoid()
    elems = [(0, 0), (1, 1), (2, 2), (1, 2)]
    pos = {e: i for i, e in enumerate(elems)}

    def fn(op, args):
        if op == "e":
            return 0
        (x, y), (u, v) = elems[args[0]], elems[args[1]]
        return pos[L.apply("m", (x, u)), L.apply("m", (y, v))]

    R = md.model_from_function(T("monoid"), {"s": 4}, fn)
    p1 = md.ModelHom(R, L, {"s": [e[0] for e in elems]})
    p2 = md.ModelHom(R, L, {"s": [e[1] for e in elems]})
    d = md.ModelHom(L, R, {"s": [pos[x, x] for x in range(3)]})
    return R, L, p1, p2, d


def test_sifted_colimits():
    J = fixtures.reflexive_pair()
    M = left_zero_monoid()
    ident = md.identity_hom(M)
    maps = {u: ident for u in ("f", "g", "s", "sf", "sg")}
    C = md.sifted_colimit_of_models(J, {"P": M, "Q": M}, maps)
    assert md.canonical_key(C.model) == md.canonical_key(M)
    R, L, p1, p2, d = _kernel_pair_of_left_zero()
    maps = {"f": p1, "g": p2, "s": d, "sf": p1.then(d), "sg": p2.then(d)}
    C = md.sifted_colimit_of_models(J, {"P": R, "Q": L}, maps)
    assert C.model.carriers == {"s": 2}
    assert md.canonical_key(C.model) == md.canonical_key(z2_monoid(True))
    C = md.sifted_colimit_of_models(fixtures.terminal(), {"*": M}, {})
    assert C.model == M


def test_non_sifted_index_is_refused():
    M = left_zero_monoid()
    with pytest.raises(md.NotSifted):
        md.sifted_colimit_of_models(fixtures.discrete2(), {"a": M, "b": M}, {})


def test_quotients():
    M = left_zero_monoid()
    Q = md.quotient_by_congruence(M)
    assert Q.model == M and Q.hom.maps["s"] == (0, 1, 2)
    assert md.quotient_by_congruence(cyclic(4), [("s", 0, 2)]).model.carriers == {"s": 2}
    ab, ba = M.apply("m", (1, 2)), M.apply("m", (2, 1))
    Q = md.quotient_by_congruence(M, [("s", ab, ba)])
    assert Q.model.labels["s"] == ("1", "a")


def test_raw_structure_is_reflected():
    # a non-associative table on two elements: the quotient imposes the equations
    raw = md.Model(T("monoid"), {"s": 3}, {"m": [0, 1, 2, 1, 2, 0, 2, 1, 1], "e": [0]}, check=False)
    assert not md.check_model(raw)
    Q = md.quotient_by_congruence(raw)
    assert Q.hom is None
    assert md.check_model(Q.model)


def _partitions(n):
    if n == 0:
        yield ()
        return
    for p in _partitions(n - 1):
        k = max(p, default=-1) + 1
        for c in range(k + 1):
            yield p + (c,)


def test_congruence_closure_is_smallest():
    rng = random.Random(3)
    pool = md.models_up_to(T("monoid"), 3)[0] + [cyclic(4), md.product_of_models(cyclic(2), cyclic(2)).model]
    for _ in range(60):
        M = rng.choice(pool)
        n = M.carriers["s"]
        if n == 0:
            continue
        pairs = [("s", rng.randrange(n), rng.randrange(n)) for _ in range(rng.randint(0, 2))]
        got = md.quotient_by_congruence(M, pairs).congruence.classes["s"]
        # oracle: the finest partition that is a congruence containing the pairs
        cands = [p for p in _partitions(n) if all(p[a] == p[b] for _, a, b in pairs) and md.is_congruence(M, {"s": p})]
        finest = [p for p in cands if all(all(q[x] == q[y] for x in range(n) for y in range(n) if p[x] == p[y]) for q in cands)]
        assert finest == [tuple(got)]


def test_free_models():
    F = md.free_model(T("pointed"), ["a", "b"], 0)
    assert not F.truncated and F.model.carriers == {"s": 3}
    F = md.free_model(T("semilattice"), ["a", "b"], 3)
    assert F.model.carriers == {"s": 4}
    assert sorted(F.model.labels["s"]) == ["a", "b", "e", "m(a,b)"]
    F = md.free_model(T("monoid"), [], 2)
    assert F.model.carriers == {"s": 1}
    assert md.free_model(T("monoid"), ["a"], 3).truncated


def test_free_model_unit():
    for name, gens in (("pointed", 3), ("semilattice", 3), ("group", 0), ("empty", 2)):
        F = md.free_model(T(name), gens, 4)
        unit = F.unit()
        assert len(set(unit.values())) == len(unit)
        names = {v.name for v in unit}
        for t in F.terms["s"]:
            assert {v.name for v in rw.variables(t)} <= names
            assert T(name).nf(t) == t


def test_model_counts_up_to_iso():
    assert len(md.models_up_to(T("group"), 3)[0]) == 3
    assert len(md.models_up_to(T("monoid"), 3)[0]) == 10
    assert len(md.models_up_to(T("semilattice"), 3)[0]) == 3
    assert len(md.models_up_to(T("cmonoid"), 3)[0]) == 8
    # labelled count of monoids on three elements
    assert len(md.enumerate_models(T("monoid"), {"s": 3})) == 33
    # the empty set is a model when no constant is declared
    assert md.models_up_to(T("empty"), 2)[0][0].carriers == {"s": 0}


def test_left_adjoint_along_identity():
    M = left_zero_monoid()
    res = md.left_adjoint_algebraic(identity_morphism(M.theory), M, bound=2)
    assert md.canonical_key(res.model) == md.canonical_key(M)
    assert sorted(res.unit.maps["s"]) == [0, 1, 2]
    assert res.certificate.ok


def test_abelianization():
    res = md.left_adjoint_algebraic(abelianization(), left_zero_monoid(), bound=3)
    assert res.model.carriers == {"s": 2}
    a = res.model.labels["s"].index("[a]")
    assert res.model.apply("m", (a, a)) == a
    assert res.certificate.ok and res.certificate.models_checked == 8


def test_free_semilattice_adjoint():
    res = md.left_adjoint_algebraic(free_semilattice_functor(), two_point_set(), bound=3)
    assert res.model.carriers == {"s": 4}
    assert res.certificate.ok


def test_adjoint_bijection_counts_by_direct_enumeration():
    G, A = abelianization(), left_zero_monoid()
    res = md.left_adjoint_algebraic(G, A, bound=None)
    for B in md.models_up_to(G.target, 3)[0]:
        GB = md.restrict_model(G, B)
        assert len(brute_homs(res.model, B)) == len(brute_homs(A, GB))
        # every map out of A factors through the unit in exactly one way
        for f in brute_homs(A, GB):
            lifts = [phi for phi in brute_homs(res.model, B) if tuple(phi[u] for u in res.unit.maps["s"]) == f]
            assert len(lifts) == 1


def test_wrong_candidate_fails_certificate():
    G, A = abelianization(), left_zero_monoid()
    res = md.left_adjoint_algebraic(G, A, bound=None)
    # the terminal model with the constant unit is not universal
    Tm = md.terminal_model(G.target)
    unit = md.ModelHom(A, md.restrict_model(G, Tm), {"s": [0, 0, 0]})
    cert = md.certify_adjoint(G, A, Tm, unit, 2)
    assert not cert.ok
    assert res.model.carriers == {"s": 2}


def test_truncated_adjoint():
    # free monoid on a set: no finite presentation closes up
    G = TheoryMorphism(T("empty"), T("monoid"), {})
    with pytest.raises(md.Truncated):
        md.left_adjoint_algebraic(G, two_point_set(), depth=2)
