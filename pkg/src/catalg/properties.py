"""Seeded randomized property checks.

Each ``check_*`` function draws one instance from ``random.Random(seed)`` and
compares two independent computations of the same thing, returning a
:class:`Outcome`. :data:`PROPERTIES` lists them for the test suite and the CLI.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import finset
from . import fixtures
from . import models as md
from . import monadic as mo
from . import presheaf as psh
from . import rewrite as rw
from .fincat import FinCat, build, enumerate_functors
from .io import builtin_theory


@dataclass
class Outcome:
    ok: bool
    detail: str = ""


# ---------------------------------------------------------------- instance pools


@lru_cache(maxsize=None)
def _poset(n: int, edges: tuple) -> FinCat:
    objs = [str(i) for i in range(n)]
    arrows = [(f"{a}<{b}", str(a), str(b)) for a, b in edges]
    rel = set(edges)
    compose = [
        (f"{b}<{c}", f"{a}<{b}", f"{a}<{c}") for a, b in rel for b2, c in rel if b == b2
    ]
    return build(objs, arrows, compose, name=f"poset{n}:{edges}")


def _random_poset(rng) -> FinCat:
    n = rng.randint(1, 3)
    rel = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.6}
    # transitive closure keeps it a preorder
    changed = True
    while changed:
        changed = False
        for a, b in list(rel):
            for b2, c in list(rel):
                if b == b2 and (a, c) not in rel:
                    rel.add((a, c))
                    changed = True
    return _poset(n, tuple(sorted(rel)))


@lru_cache(maxsize=None)
def _z2() -> FinCat:
    return build(["*"], [("g", "*", "*")], [("g", "g", "id_*")], name="Z/2")


@lru_cache(maxsize=None)
def _idem() -> FinCat:
    return build(["*"], [("e", "*", "*")], [("e", "e", "e")], name="idempotent")


_BASES = (
    fixtures.gph_base,
    fixtures.rgph_base,
    fixtures.reflexive_pair,
    fixtures.parallel_pair,
    fixtures.span,
    fixtures.discrete2,
    fixtures.terminal,
    _z2,
    _idem,
)


def random_base(rng) -> FinCat:
    k = rng.randrange(len(_BASES) + 1)
    return _random_poset(rng) if k == len(_BASES) else _BASES[k]()


@lru_cache(maxsize=None)
def _presheaves(C: FinCat, max_size: int) -> tuple:
    return tuple(psh.set_functors(C.op(), max_size))


def random_presheaf(rng, C: FinCat, max_size: int = 2) -> psh.Presheaf:
    P = rng.choice(_presheaves(C, max_size))
    assert P.base == C
    return P


# ---------------------------------------------------------------- presheaf properties


def check_yoneda(seed: int) -> Outcome:
    """Nat(y(c), P) enumerated by search matches P(c) through the Yoneda maps."""
    rng = random.Random(seed)
    C = random_base(rng)
    P = random_presheaf(rng, C)
    c = rng.choice(C.objects)
    nats = psh.nat_transformations(psh.representable(C, c), P)
    if len(nats) != P.sizes[c]:
        return Outcome(False, f"{C.name}: |Nat(y({c}), P)| = {len(nats)} but |P({c})| = {P.sizes[c]}")
    built = sorted(psh.yoneda_map(P, c, x).key() for x in range(P.sizes[c]))
    if built != [m.key() for m in nats]:
        return Outcome(False, f"{C.name}: Yoneda maps differ from the enumerated transformations")
    for x in range(P.sizes[c]):
        if psh.yoneda_element(psh.yoneda_map(P, c, x), c) != x:
            return Outcome(False, f"{C.name}: element {x} does not round-trip")
    return Outcome(True)


def _random_map(rng, P, Q):
    maps = psh.nat_transformations(P, Q)
    return rng.choice(maps) if maps else None


def check_pointwise_limits(seed: int) -> Outcome:
    """Finite (co)limits of presheaves agree objectwise with the set-level ones."""
    rng = random.Random(seed)
    C = random_base(rng)
    shape = rng.choice(["product", "coproduct", "equalizer", "coequalizer", "pullback", "pushout"])
    for _ in range(20):
        P, Q, R = (random_presheaf(rng, C) for _ in range(3))
        if shape in ("product", "coproduct"):
            items = (P, Q)
            break
        if shape in ("equalizer", "coequalizer"):
            f, g = _random_map(rng, P, Q), _random_map(rng, P, Q)
            if f is not None:
                items = (f, g)
                break
        if shape == "pullback":
            f, g = _random_map(rng, P, R), _random_map(rng, Q, R)
            if f is not None and g is not None:
                items = (f, g)
                break
        if shape == "pushout":
            f, g = _random_map(rng, R, P), _random_map(rng, R, Q)
            if f is not None and g is not None:
                items = (f, g)
                break
    else:
        return Outcome(True, "no instance drawn")
    colimit = shape in ("coproduct", "coequalizer", "pushout")
    res = psh.finite_colimit(shape, *items, base=C) if colimit else psh.finite_limit(shape, *items, base=C)
    D = res.diagram
    J = D.shape
    for c in C.objects:
        sizes = {j: D.objects[j].sizes[c] for j in J.objects}
        maps = [(J.src(u), J.dst(u), D.map(u).components[c]) for u in J.nonidentity()]
        if colimit:
            n, _ = finset.colimit(J.objects, sizes, maps)
        else:
            n = len(finset.limit(J.objects, sizes, maps)[0])
        if n != res.apex.sizes[c]:
            return Outcome(False, f"{shape} on {C.name} at {c}: {res.apex.sizes[c]} != {n}")
    # the legs form a (co)cone
    legs = res.cocone if colimit else res.cone
    for u in J.nonidentity():
        a, b = J.morphisms[u]
        lhs = D.map(u).then(legs[b]) if colimit else legs[a].then(D.map(u))
        rhs = legs[a] if colimit else legs[b]
        if lhs.key() != rhs.key():
            return Outcome(False, f"{shape} legs do not commute with {u}")
    return Outcome(True)


def check_exponential(seed: int) -> Outcome:
    """Currying is a bijection Nat(H × F, G) ≅ Nat(H, G^F) inverse to evaluation."""
    rng = random.Random(seed)
    C = rng.choice([fixtures.gph_base, fixtures.parallel_pair, fixtures.terminal, _z2, _idem, fixtures.discrete2])()
    F, G, H = (random_presheaf(rng, C) for _ in range(3))
    exp = psh.exponential(F, G)
    HF = psh.product(H, F)
    left = psh.nat_transformations(HF.apex, G)
    right = psh.nat_transformations(H, exp.apex)
    if len(left) != len(right):
        return Outcome(False, f"{C.name}: |Nat(HxF,G)| = {len(left)} but |Nat(H,G^F)| = {len(right)}")
    curried = {psh.curry(beta, HF, exp).key() for beta in left}
    if curried != {m.key() for m in right}:
        return Outcome(False, f"{C.name}: currying is not a bijection")
    for beta in left[:4]:
        lam = psh.curry(beta, HF, exp)
        for e in C.objects:
            pos = {t: i for i, t in enumerate(exp.domain.tuples[e])}
            for i, (h, x) in enumerate(HF.tuples[e]):
                if exp.evaluation.components[e][pos[lam.components[e][h], x]] != beta.components[e][i]:
                    return Outcome(False, f"{C.name}: evaluation does not undo currying")
    return Outcome(True)


@lru_cache(maxsize=None)
def _functor_pool() -> tuple:
    cats = [fixtures.terminal(), fixtures.discrete2(), fixtures.parallel_pair(), fixtures.span(), _z2(), _idem(), fixtures.gph_base()]
    out = []
    for A in cats:
        for B in cats:
            fs = enumerate_functors(A, B)
            out.extend(fs[:: max(1, len(fs) // 6)])
    return tuple(out)


def check_lan_weight(seed: int) -> Outcome:
    """The colimit of D weighted by Lan_J W matches that of D∘J weighted by W,
    through the canonical comparison map."""
    rng = random.Random(seed)
    J = rng.choice(_functor_pool())
    A, B = J.source, J.target
    W = random_presheaf(rng, A)
    D = random_presheaf(rng, B.op())
    lan = psh.weight_extension(W, J)
    left = psh.weighted_colimit(lan.extension, D)
    right = psh.weighted_colimit(W, psh.restrict(D, J.op()))
    if left.size != right.size:
        return Outcome(False, f"{A.name}->{B.name}: sizes {left.size} != {right.size}")
    image: dict = {}
    for (a, w, d), k in zip(right.pairs, right.quotient):
        b = J.obj[a]
        img = left.cls(b, lan.unit.components[a][w], d)
        if image.setdefault(k, img) != img:
            return Outcome(False, f"{A.name}->{B.name}: comparison map not well defined")
    if len(set(image.values())) != left.size:
        return Outcome(False, f"{A.name}->{B.name}: comparison map not bijective")
    return Outcome(True)


# ---------------------------------------------------------------- monads and models

_MONAD_THEORIES = (("empty", 2), ("pointed", 2), ("monoid", 3), ("semilattice", 3), ("cmonoid", 2), ("group", 2))


@lru_cache(maxsize=None)
def _monad(name: str, depth: int) -> mo.TermMonad:
    return mo.monad_from_theory(builtin_theory(name), depth)


def check_monad_laws(seed: int) -> Outcome:
    """Unit and associativity laws, and naturality of η and μ in X."""
    rng = random.Random(seed)
    name, depth = rng.choice(_MONAD_THEORIES)
    M = _monad(name, depth)
    n = rng.randint(0, 2)
    rep = mo.check_monad_laws(M, n, samples=3, seed=seed)
    if not rep.ok:
        return Outcome(False, f"{name}: {rep.failures[:2]}")
    # T(f) for a random f: n -> m commutes with η and μ
    m = rng.randint(1, 2)
    f = {str(i): str(rng.randrange(m)) for i in range(n)}
    X, Y = M.slice(n), M.slice(m)
    for x in X.names:
        if M.fmap(f, rw.Var(x, M.sort)) != rw.Var(f[x], M.sort):
            return Outcome(False, f"{name}: T(f) does not commute with the unit at {x}")
    if not len(X):
        return Outcome(True)
    sig = M.theory.signature
    for _ in range(3):
        phi = mo._random_term(rng, sig, M.sort, [X.var(i) for i in range(len(X))], 2)
        # T(f)(μ(Φ)) against μ(T(T(f))(Φ)), when the images stay in the slice
        a = M.fmap(f, M.mu(n, phi))
        inner = {}
        ok = True
        for i in mo._at_indices(phi):
            t = M.fmap(f, X.terms[i])
            if t not in Y.index:
                ok = False
                break
            inner[f"@{i}"] = Y.var(Y.index[t])
        if not ok:
            continue
        b = M.mu(m, rw.substitute(sig, phi, inner))
        if a != b:
            return Outcome(False, f"{name}: T(f) does not commute with μ on {rw.show(phi)}")
    return Outcome(True)


_MODEL_THEORIES = ("pointed", "monoid", "semilattice", "cmonoid", "group")


@lru_cache(maxsize=None)
def _small_models(name: str) -> tuple:
    T = builtin_theory(name)
    out = []
    for n in (1, 2, 3):
        out.extend(md.enumerate_models(T, {"s": n}))
    return tuple(out)


def _kernel_pair(rng, M: md.Model):
    """A random congruence as the reflexive pair R ⇉ M with its diagonal."""
    pairs = [("s", rng.randrange(M.carriers["s"]), rng.randrange(M.carriers["s"])) for _ in range(rng.randint(0, 2))]
    q = md.quotient_by_congruence(M, pairs).hom
    MM = md.product_of_models(M, M)
    R = md.equalizer_of_models(MM.projections[0].then(q), MM.projections[1].then(q))
    incl = R.projections[0]
    p1, p2 = incl.then(MM.projections[0]), incl.then(MM.projections[1])
    pos = {t: i for i, t in enumerate(R.elements["s"])}
    diag = md.ModelHom(M, R.model, {"s": [pos[x * M.carriers["s"] + x] for x in range(M.carriers["s"])]})
    return R.model, p1, p2, diag


def _reflexive_colimit(R, M, p1, p2, d):
    J = fixtures.reflexive_pair()
    maps = {"f": p1, "g": p2, "s": d, "sf": p1.then(d), "sg": p2.then(d)}
    return md.sifted_colimit_of_models(J, {"P": R, "Q": M}, maps)


def _product_hom(P: md.ModelLimit, Q: md.ModelLimit, h1: md.ModelHom, h2: md.ModelHom) -> md.ModelHom:
    pos = {t: i for i, t in enumerate(Q.elements["s"])}
    return md.ModelHom(P.model, Q.model, {"s": [pos[h1.maps["s"][a], h2.maps["s"][b]] for a, b in P.elements["s"]]})


def check_products_reflexive_coequalizers(seed: int) -> Outcome:
    """In models of a theory, the coequalizer of a product of reflexive pairs
    is the product of the coequalizers (via the canonical comparison)."""
    rng = random.Random(seed)
    name = rng.choice(_MODEL_THEORIES)
    pool = _small_models(name)
    M1, M2 = rng.choice(pool), rng.choice(pool)
    R1, a1, b1, d1 = _kernel_pair(rng, M1)
    R2, a2, b2, d2 = _kernel_pair(rng, M2)
    C1 = _reflexive_colimit(R1, M1, a1, b1, d1)
    C2 = _reflexive_colimit(R2, M2, a2, b2, d2)
    RR, MM = md.product_of_models(R1, R2), md.product_of_models(M1, M2)
    CC = _reflexive_colimit(RR.model, MM.model, _product_hom(RR, MM, a1, a2), _product_hom(RR, MM, b1, b2), _product_hom(MM, RR, d1, d2))
    prod = md.product_of_models(C1.model, C2.model)
    pos = {t: i for i, t in enumerate(prod.elements["s"])}
    comparison: dict = {}
    for i, (x, y) in enumerate(MM.elements["s"]):
        k = CC.injections["Q"].maps["s"][i]
        img = pos[C1.injections["Q"].maps["s"][x], C2.injections["Q"].maps["s"][y]]
        if comparison.setdefault(k, img) != img:
            return Outcome(False, f"{name}: comparison map not well defined")
    table = tuple(comparison[k] for k in range(CC.model.carriers["s"]))
    if not finset.is_bijection(table, prod.model.carriers["s"]):
        return Outcome(False, f"{name}: colimit of products has {len(table)} elements, product of colimits {prod.model.carriers['s']}")
    if md.hom_failure(CC.model, prod.model, {"s": table}) is not None:
        return Outcome(False, f"{name}: comparison is not a homomorphism")
    return Outcome(True)


PROPERTIES = {
    "yoneda": check_yoneda,
    "pointwise-limits": check_pointwise_limits,
    "exponential": check_exponential,
    "lan-weight": check_lan_weight,
    "monad-laws": check_monad_laws,
    "products-reflexive-coequalizers": check_products_reflexive_coequalizers,
}


def run_property(name: str, count: int, seed: int = 0) -> tuple[int, list]:
    """Run ``count`` instances with seeds ``seed, seed+1, ...``; returns the
    number run and the failures as ``(seed, detail)``."""
    check = PROPERTIES[name]
    fails = []
    for s in range(seed, seed + count):
        out = check(s)
        if not out.ok:
            fails.append((s, out.detail))
    return count, fails
