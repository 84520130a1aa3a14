"""Built-in index categories, base categories and presheaves.

The graph bases have objects ``V`` and ``E`` with ``s, t: V -> E``, so a
presheaf assigns vertices to ``V``, edges to ``E``, and ``P(s), P(t)`` are the
source and target maps. Reflexive graphs add ``r: E -> V`` with ``r∘s = r∘t = id``.
"""

from __future__ import annotations

from functools import lru_cache
from itertools import permutations

from .fincat import FinCat, build, concrete, discrete, terminal_category
from . import presheaf as psh


# ---------------------------------------------------------------- index categories


@lru_cache(maxsize=None)
def reflexive_pair() -> FinCat:
    """``f, g: P -> Q`` with a common section ``s: Q -> P`` (``f∘s = g∘s = id``)."""
    return build(
        ["P", "Q"],
        [("f", "P", "Q"), ("g", "P", "Q"), ("s", "Q", "P"), ("sf", "P", "P"), ("sg", "P", "P")],
        [
            ("f", "s", "id_Q"),
            ("g", "s", "id_Q"),
            ("s", "f", "sf"),
            ("s", "g", "sg"),
            ("f", "sf", "f"),
            ("g", "sf", "f"),
            ("f", "sg", "g"),
            ("g", "sg", "g"),
            ("sf", "s", "s"),
            ("sg", "s", "s"),
            ("sf", "sf", "sf"),
            ("sf", "sg", "sg"),
            ("sg", "sf", "sf"),
            ("sg", "sg", "sg"),
        ],
        name="reflexive-pair",
    )


@lru_cache(maxsize=None)
def parallel_pair() -> FinCat:
    return build(["P", "Q"], [("f", "P", "Q"), ("g", "P", "Q")], name="parallel-pair")


@lru_cache(maxsize=None)
def span() -> FinCat:
    """The shape of pushouts: ``A <- C -> B``."""
    return build(["C", "A", "B"], [("f", "C", "A"), ("g", "C", "B")], name="span")


@lru_cache(maxsize=None)
def discrete2() -> FinCat:
    return discrete(["a", "b"], name="discrete2")


@lru_cache(maxsize=None)
def terminal() -> FinCat:
    return terminal_category()


INDEX_CATEGORIES = {
    "reflexive-pair": reflexive_pair,
    "discrete2": discrete2,
    "span": span,
    "terminal": terminal,
    "parallel-pair": parallel_pair,
}


# ---------------------------------------------------------------- base categories


@lru_cache(maxsize=None)
def gph_base() -> FinCat:
    return build(["V", "E"], [("s", "V", "E"), ("t", "V", "E")], name="Gph")


@lru_cache(maxsize=None)
def rgph_base() -> FinCat:
    return build(
        ["V", "E"],
        [("s", "V", "E"), ("t", "V", "E"), ("r", "E", "V"), ("sr", "E", "E"), ("tr", "E", "E")],
        [
            ("r", "s", "id_V"),
            ("r", "t", "id_V"),
            ("s", "r", "sr"),
            ("t", "r", "tr"),
            ("sr", "s", "s"),
            ("sr", "t", "s"),
            ("tr", "s", "t"),
            ("tr", "t", "t"),
            ("r", "sr", "r"),
            ("r", "tr", "r"),
            ("sr", "sr", "sr"),
            ("sr", "tr", "sr"),
            ("tr", "sr", "tr"),
            ("tr", "tr", "tr"),
        ],
        name="RGph",
    )


def _injections(a: int, b: int):
    return list(permutations(range(b), a))


@lru_cache(maxsize=None)
def injections(K: int) -> FinCat:
    """Finite sets ``0..K`` and injections; a morphism ``a -> b`` is the tuple
    of its values. Functors out of it are presheaves on ``injections(K).op()``."""
    objects = [str(n) for n in range(K + 1)]

    def label(a, b, v):
        return f"{a}>{b}:" + ".".join(map(str, v))

    cat = concrete(
        objects,
        lambda a, b: _injections(int(a), int(b)),
        lambda g, f: tuple(g[i] for i in f),
        lambda a: tuple(range(int(a))),
        label,
        name=f"I≤{K}",
        check=False,
    )
    # standard inclusions n -> n+1 and adjacent transpositions of each n
    gens = [label(str(n), str(n + 1), tuple(range(n))) for n in range(K)]
    for n in range(2, K + 1):
        for i in range(n - 1):
            p = list(range(n))
            p[i], p[i + 1] = p[i + 1], p[i]
            gens.append(label(str(n), str(n), tuple(p)))
    cat.data["generators"] = gens
    return cat


# ---------------------------------------------------------------- presheaves


def gph_vertex() -> psh.Presheaf:
    P = psh.representable(gph_base(), "V")
    P.name = "V"
    return P


def gph_edge() -> psh.Presheaf:
    P = psh.representable(gph_base(), "E")
    P.name = "E"
    return P


def gph_terminal() -> psh.Presheaf:
    P = psh.terminal(gph_base())
    P.name = "1"
    return P


def gph_reflexive_coequalizer():
    """The pair ``E + V ⇉ E``: identity on ``E``, and ``V`` sent to the source
    (resp. target) vertex of the edge. Its coequalizer is the terminal graph."""
    C = gph_base()
    E, V = gph_edge(), gph_vertex()
    EV = psh.coproduct(E, V)
    src = psh.yoneda_map(E, "V", C.hom("V", "E").index("s"))
    tgt = psh.yoneda_map(E, "V", C.hom("V", "E").index("t"))
    ident = psh.identity_map(E)
    f = EV.factor({"0": ident, "1": src})
    g = EV.factor({"0": ident, "1": tgt})
    return psh.finite_colimit("coequalizer", f, g)


def rgph_edge() -> psh.Presheaf:
    P = psh.representable(rgph_base(), "E")
    P.name = "E"
    return P


def inj_representable(n: int, K: int) -> psh.Presheaf:
    """``𝕀(n, -)`` on the injections category truncated at ``K``."""
    P = psh.representable(injections(K).op(), str(n))
    P.name = f"I({n},-)"
    return P


def _product(*Ps) -> psh.Presheaf:
    P = psh.product(*Ps).apex
    P.name = "x".join(Q.name for Q in Ps)
    return P


PRESHEAVES = {
    "gph:V": gph_vertex,
    "gph:E": gph_edge,
    "gph:terminal": gph_terminal,
    "gph:VxV": lambda: _product(gph_vertex(), gph_vertex()),
    "gph:VxE": lambda: _product(gph_vertex(), gph_edge()),
    "gph:ExV": lambda: _product(gph_edge(), gph_vertex()),
    "gph:ExE": lambda: _product(gph_edge(), gph_edge()),
    "rgph:E": rgph_edge,
    "rgph:ExE": lambda: _product(rgph_edge(), rgph_edge()),
}

COLIMITS = {
    "gph:reflexive-coeq": gph_reflexive_coequalizer,
}
