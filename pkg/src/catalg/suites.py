"""Batteries behind ``catalg suite``: the worked examples and the seeded
property checks. Each item is reported as a :class:`Item`."""

from __future__ import annotations

from dataclasses import dataclass
from math import comb, factorial

from . import fixtures
from . import models as md
from . import monadic as mo
from . import presheaf as psh
from . import properties
from .fincat import is_sifted
from .io import builtin_theory
from .theory import TheoryMorphism


@dataclass
class Item:
    name: str
    ok: bool
    detail: str = ""


def injection_multiplicities(m: int, n: int) -> dict:
    """Copies of ``I(k,-)`` in ``I(m,-) × I(n,-)``: pairs of injections into
    ``k`` that jointly cover it, up to relabelling ``k``. With ``i = m+n-k``
    points shared there are ``C(m,i)·C(n,i)·i!`` of them."""
    return {k: comb(m, m + n - k) * comb(n, m + n - k) * factorial(m + n - k) for k in range(max(m, n), m + n + 1)}


def _decomposition_counts(P) -> dict:
    d = psh.decompose_into_representables(P)
    out: dict = {}
    for s in d.summands:
        out[int(s)] = out.get(int(s), 0) + 1
    return out


def injection_product_counts(m: int, n: int) -> dict:
    K = m + n
    P = psh.product(fixtures.inj_representable(m, K), fixtures.inj_representable(n, K)).apex
    return _decomposition_counts(P)


def left_zero_monoid() -> md.Model:
    """``{1, a, b}`` with ``ab = a``, ``ba = b`` and ``a² = a``, ``b² = b``."""
    T = builtin_theory("monoid")
    return md.model_from_function(T, {"s": 3}, lambda op, a: 0 if op == "e" else (a[1] if a[0] == 0 else a[0]), labels={"s": ["1", "a", "b"]})


def abelianization() -> TheoryMorphism:
    return TheoryMorphism(builtin_theory("monoid"), builtin_theory("cmonoid"), {"m": "m(x1, x2)", "e": "e"})


def free_semilattice_functor() -> TheoryMorphism:
    return TheoryMorphism(builtin_theory("empty"), builtin_theory("semilattice"), {})


def two_point_set() -> md.Model:
    return md.Model(builtin_theory("empty"), {"s": 2}, {}, labels={"s": ["a", "b"]})


def paper_examples() -> list[Item]:
    items = []
    expected = {"gph:VxV": "V", "gph:VxE": "V + V", "gph:ExV": "V + V", "gph:ExE": "V + V + E"}
    for ref, want in expected.items():
        got = psh.decompose_into_representables(fixtures.PRESHEAVES[ref]()).formula()
        items.append(Item(f"{ref} decomposes as {want}", got == want, got))

    colim = fixtures.gph_reflexive_coequalizer()
    one, E = fixtures.gph_terminal(), fixtures.gph_edge()
    apex = colim.apex
    items.append(Item("reflexive coequalizer is the terminal graph", psh.isomorphic(apex, one) is not None, apex.summary()))
    items.append(Item("Nat(1, E) is empty", len(psh.nat_transformations(one, E)) == 0))
    items.append(Item("Nat(1, 1) is a singleton", len(psh.nat_transformations(one, one)) == 1))
    pres = psh.preserves_colimit(one, colim)
    items.append(
        Item("Gph(1, -) does not preserve the coequalizer", not pres.preserved, f"{pres.colimit_of_homs} vs {pres.hom_into_colimit}")
    )

    try:
        psh.decompose_into_representables(fixtures.PRESHEAVES["rgph:ExE"]())
        items.append(Item("rgph:ExE is not a coproduct of representables", False, "decomposed"))
    except psh.NotDecomposable as e:
        items.append(Item("rgph:ExE is not a coproduct of representables", True, f"component of {len(e.component)}"))
    sfp = psh.is_strongly_finitely_presentable(fixtures.PRESHEAVES["rgph:ExE"]())
    items.append(Item("rgph:ExE is not a coproduct of representables after splitting idempotents", not sfp))

    for m in range(1, 4):
        for n in range(1, 4):
            got = injection_product_counts(m, n)
            want = injection_multiplicities(m, n)
            items.append(Item(f"I({m},-) x I({n},-) multiplicities", got == want, str(got)))

    for name, mk in fixtures.INDEX_CATEGORIES.items():
        J = mk()
        v = psh.commutes_products_colimit(J, psh.all_pairs(psh.set_functors(J, 3)))
        items.append(Item(f"{name}: sifted iff products commute with its colimits", bool(is_sifted(J)) == v.commutes))

    for name, arity, depth, pairs in (("empty", 3, 2, None), ("pointed", 3, 2, None), ("monoid", 2, 4, 2000)):
        r = mo.roundtrip_check(builtin_theory(name), arity, depth, max_pairs=pairs)
        items.append(Item(f"{name}: theory and monad hom-sets agree", r.ok, f"{r.compositions} composites"))

    for name in ("pointed", "group"):
        r = mo.em_model_correspondence(builtin_theory(name), 3)
        items.append(Item(f"{name}: algebras are models", r.ok, str(r.counts)))

    for label, G, A in (
        ("abelianization", abelianization(), left_zero_monoid()),
        ("free semilattice", free_semilattice_functor(), two_point_set()),
    ):
        res = md.left_adjoint_algebraic(G, A, bound=3)
        items.append(Item(f"{label}: adjunction bijection", res.certificate.ok, f"{res.model.carriers} over {res.certificate.models_checked} models"))
    return items


def property_items(seed: int = 0, count: int = 500) -> list[Item]:
    items = []
    for name in properties.PROPERTIES:
        n, fails = properties.run_property(name, count, seed)
        detail = f"{n} instances" if not fails else f"seed {fails[0][0]}: {fails[0][1]}"
        items.append(Item(name, not fails, detail))
    return items


SUITES = {"paper-examples": lambda seed, count: paper_examples(), "properties": property_items}
