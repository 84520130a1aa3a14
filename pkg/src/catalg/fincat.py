"""Finite categories given by explicit tables, functors between them, and the
combinatorial constructions performed on index categories: siftedness,
free finite-coproduct completion, idempotent splitting, categories of
elements.

Morphisms are opaque string identifiers. ``composition[(g, f)]`` is ``g ∘ f``
for ``f: a -> b`` and ``g: b -> c``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations_with_replacement, product
from typing import Any, Callable, Iterable, Mapping

from .finset import UnionFind


class CategoryError(ValueError):
    pass


class AssocViolation(CategoryError):
    def __init__(self, triple):
        super().__init__(f"composition not associative on {triple}")
        self.triple = triple


class IdentityViolation(CategoryError):
    def __init__(self, morphism, detail=""):
        super().__init__(f"identity law fails for {morphism!r}{detail}")
        self.morphism = morphism


class IllTypedComposite(CategoryError):
    def __init__(self, pair, detail=""):
        super().__init__(f"bad composite for pair {pair}: {detail}")
        self.pair = pair


class FunctorError(CategoryError):
    pass


class BoundTooSmall(ValueError):
    pass


class FinCat:
    """A finite category. Construct with :func:`validate_fincat`, :func:`build`
    or :func:`concrete`; instances are treated as immutable."""

    def __init__(self, objects, morphisms, composition, identities, name="", data=None, compose_fn=None):
        self.objects = tuple(objects)
        self.morphisms = dict(morphisms)
        self._composition = None if composition is None else dict(composition)
        self._compose_fn = compose_fn
        self._memo: dict = {}
        self.identities = dict(identities)
        self.name = name
        self.data = data or {}
        self._op = None
        self._gens = None
        hom: dict[tuple, list] = {(a, b): [] for a in self.objects for b in self.objects}
        for f, (a, b) in self.morphisms.items():
            hom[a, b].append(f)
        self._hom = {k: tuple(v) for k, v in hom.items()}
        self._out = {a: [f for f, (s, _) in self.morphisms.items() if s == a] for a in self.objects}
        self._in = {b: [f for f, (_, t) in self.morphisms.items() if t == b] for b in self.objects}
        self._idset = frozenset(self.identities.values())

    @property
    def composition(self) -> dict:
        """The full composition table; computed on first use for lazily composed categories."""
        if self._composition is None:
            self._composition = {
                (g, f): self.comp(g, f) for f, (_, b) in self.morphisms.items() for g in self._out[b]
            }
        return self._composition

    def src(self, f: str) -> str:
        return self.morphisms[f][0]

    def dst(self, f: str) -> str:
        return self.morphisms[f][1]

    def hom(self, a: str, b: str) -> tuple[str, ...]:
        return self._hom[a, b]

    def out(self, a: str) -> list[str]:
        return self._out[a]

    def into(self, b: str) -> list[str]:
        return self._in[b]

    def comp(self, g: str, f: str) -> str:
        if self._composition is not None:
            return self._composition[g, f]
        h = self._memo.get((g, f))
        if h is None:
            if self.morphisms[g][0] != self.morphisms[f][1]:
                raise KeyError((g, f))
            h = self._memo[g, f] = self._compose_fn(g, f)
        return h

    def id(self, a: str) -> str:
        return self.identities[a]

    def is_identity(self, f: str) -> bool:
        return f in self._idset

    def nonidentity(self) -> list[str]:
        return [f for f in self.morphisms if f not in self._idset]

    def generators(self) -> tuple[str, ...]:
        """A set of non-identity morphisms whose composites give every morphism.

        Taken from ``data['generators']`` when a constructor supplies one,
        otherwise chosen greedily in morphism order.
        """
        if self._gens is None:
            given = self.data.get("generators")
            self._gens = tuple(given) if given is not None else greedy_generators(self)
        return self._gens

    def op(self) -> FinCat:
        if self._op is None:
            table = None if self._composition is None else {(f, g): h for (g, f), h in self._composition.items()}
            o = FinCat(
                self.objects,
                {f: (b, a) for f, (a, b) in self.morphisms.items()},
                table,
                self.identities,
                name=self.name[:-3] if self.name.endswith("^op") else self.name + "^op",
                data=self.data,
                compose_fn=lambda g, f: self.comp(f, g),
            )
            o._op = self
            self._op = o
        return self._op

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, FinCat):
            return NotImplemented
        return (
            self.objects == other.objects
            and self.morphisms == other.morphisms
            and self.identities == other.identities
            and self.composition == other.composition
        )

    def __hash__(self):
        return hash((self.objects, tuple(self.morphisms)))

    def __repr__(self):
        label = f"{self.name} " if self.name else ""
        return f"<FinCat {label}{len(self.objects)} objects, {len(self.morphisms)} morphisms>"


def generated_closure(C: FinCat, gens) -> set[str]:
    """Every morphism that is a composite of ``gens`` (identities included)."""
    gens = list(gens)
    leaving: dict[str, list] = {a: [] for a in C.objects}
    for g in gens:
        leaving[C.src(g)].append(g)
    seen = set(C.identities.values())
    frontier = list(seen)
    while frontier:
        nxt = []
        for w in frontier:
            for g in leaving[C.dst(w)]:
                h = C.comp(g, w)
                if h not in seen:
                    seen.add(h)
                    nxt.append(h)
        frontier = nxt
    return seen


def greedy_generators(C: FinCat) -> tuple[str, ...]:
    gens: list[str] = []
    leaving: dict[str, list] = {a: [] for a in C.objects}
    closure = set(C.identities.values())
    for f in C.nonidentity():
        if f in closure:
            continue
        gens.append(f)
        leaving[C.src(f)].append(f)
        # new words are (words in the old gens) then f then anything
        frontier = [f2 for w in list(closure) if C.dst(w) == C.src(f) for f2 in [C.comp(f, w)] if f2 not in closure]
        closure.update(frontier)
        while frontier:
            nxt = []
            for w in frontier:
                for g in leaving[C.dst(w)]:
                    h = C.comp(g, w)
                    if h not in closure:
                        closure.add(h)
                        nxt.append(h)
            frontier = nxt
        if len(closure) == len(C.morphisms):
            break
    return tuple(gens)


def validate_fincat(objects, morphisms, composition, identities, name="") -> FinCat:
    """Check the category axioms exhaustively and return the category.

    ``morphisms`` maps id to ``(src, dst)`` and must include the identities.
    """
    objects = tuple(objects)
    morphisms = dict(morphisms)
    composition = dict(composition)
    identities = dict(identities)
    objset = set(objects)
    if len(objset) != len(objects):
        raise CategoryError("duplicate object names")
    for f, (a, b) in morphisms.items():
        if a not in objset or b not in objset:
            raise CategoryError(f"morphism {f!r} has unknown endpoint")
    for a in objects:
        i = identities.get(a)
        if i is None or morphisms.get(i) != (a, a):
            raise IdentityViolation(i, f" (not an endomorphism of {a!r})")
    for (g, f), h in composition.items():
        if g not in morphisms or f not in morphisms:
            raise IllTypedComposite((g, f), "unknown morphism")
        if morphisms[f][1] != morphisms[g][0]:
            raise IllTypedComposite((g, f), "not composable")
        if morphisms.get(h) != (morphisms[f][0], morphisms[g][1]):
            raise IllTypedComposite((g, f), f"composite {h!r} has the wrong type")
    for f, (a, b) in morphisms.items():
        for g, (b2, _) in morphisms.items():
            if b2 == b and (g, f) not in composition:
                raise IllTypedComposite((g, f), "composite missing")
    for f, (a, b) in morphisms.items():
        if composition[identities[b], f] != f or composition[f, identities[a]] != f:
            raise IdentityViolation(f)
    cat = FinCat(objects, morphisms, composition, identities, name=name)
    for f in morphisms:
        for g in cat.out(cat.dst(f)):
            gf = composition[g, f]
            for h in cat.out(cat.dst(g)):
                if composition[h, gf] != composition[composition[h, g], f]:
                    raise AssocViolation((h, g, f))
    return cat


def build(objects, arrows=(), compose=(), name="") -> FinCat:
    """Category from non-identity arrows ``(id, src, dst)`` and the composites
    ``(g, f, g∘f)`` of composable non-identity pairs. Identities are ``id_<obj>``."""
    objects = tuple(objects)
    identities = {a: f"id_{a}" for a in objects}
    morphisms = {identities[a]: (a, a) for a in objects}
    for f, a, b in arrows:
        if f in morphisms:
            raise CategoryError(f"duplicate morphism {f!r}")
        morphisms[f] = (a, b)
    composition = {}
    for f, (a, b) in morphisms.items():
        composition[identities[b], f] = f
        composition[f, identities[a]] = f
    pairs = compose.items() if isinstance(compose, Mapping) else (((g, f), h) for g, f, h in compose)
    for (g, f), h in pairs:
        composition[g, f] = h
    return validate_fincat(objects, morphisms, composition, identities, name=name)


def concrete(
    objects: Iterable[str],
    homs: Callable[[str, str], Iterable[Any]],
    compose_fn: Callable[[Any, Any], Any],
    identity_fn: Callable[[str], Any],
    label: Callable[[str, str, Any], str],
    name: str = "",
    check: bool = True,
) -> FinCat:
    """Category whose morphisms are Python values: ``homs(a, b)`` lists them,
    ``compose_fn(g, f)`` composes. ``cat.data['value']`` maps ids back to values.
    Without ``check`` composites are computed on demand."""
    objects = tuple(objects)
    morphisms: dict[str, tuple[str, str]] = {}
    value: dict[str, Any] = {}
    lookup: dict[tuple, str] = {}
    for a in objects:
        for b in objects:
            for v in homs(a, b):
                f = label(a, b, v)
                if f in morphisms:
                    raise CategoryError(f"label clash {f!r}")
                morphisms[f] = (a, b)
                value[f] = v
                lookup[a, b, v] = f
    identities = {a: lookup[a, a, identity_fn(a)] for a in objects}

    def comp(g, f):
        return lookup[morphisms[f][0], morphisms[g][1], compose_fn(value[g], value[f])]

    cat = FinCat(objects, morphisms, None, identities, name=name, data={"value": value}, compose_fn=comp)
    if check:
        cat = validate_fincat(objects, morphisms, cat.composition, identities, name=name)
        cat.data = {"value": value}
    return cat


def discrete(objects, name="") -> FinCat:
    objects = tuple(objects)
    return build(objects, name=name or f"discrete{len(objects)}")


def terminal_category() -> FinCat:
    return build(["*"], name="terminal")


def empty_category() -> FinCat:
    return build([], name="empty")


def one_object(elements, mult, unit, obj="*", name="") -> FinCat:
    """Monoid as a one-object category; ``mult[(g, f)]`` is the product ``g·f``."""
    morphisms = {x: (obj, obj) for x in elements}
    return validate_fincat([obj], morphisms, dict(mult), {obj: unit}, name=name)


# ---------------------------------------------------------------- functors


class FinFunctor:
    def __init__(self, source: FinCat, target: FinCat, objects, morphisms, check=True):
        self.source = source
        self.target = target
        self.obj = dict(objects)
        self.mor = dict(morphisms)
        if check:
            self._check()

    def _check(self):
        S, T = self.source, self.target
        for a in S.objects:
            if self.obj.get(a) not in T.identities:
                raise FunctorError(f"object {a!r} not sent to an object")
            if self.mor.get(S.id(a)) != T.id(self.obj[a]):
                raise FunctorError(f"identity of {a!r} not preserved")
        for f, (a, b) in S.morphisms.items():
            Ff = self.mor.get(f)
            if Ff not in T.morphisms or T.morphisms[Ff] != (self.obj[a], self.obj[b]):
                raise FunctorError(f"morphism {f!r} sent to {Ff!r} of the wrong type")
        for (g, f), h in S.composition.items():
            if T.comp(self.mor[g], self.mor[f]) != self.mor[h]:
                raise FunctorError(f"composite {g}∘{f} not preserved")

    def __call__(self, x: str) -> str:
        return self.obj[x] if x in self.obj else self.mor[x]

    def op(self) -> FinFunctor:
        return FinFunctor(self.source.op(), self.target.op(), self.obj, self.mor, check=False)

    def then(self, other: FinFunctor) -> FinFunctor:
        """``other ∘ self``."""
        return FinFunctor(
            self.source,
            other.target,
            {a: other.obj[b] for a, b in self.obj.items()},
            {f: other.mor[g] for f, g in self.mor.items()},
            check=False,
        )

    def __repr__(self):
        return f"<FinFunctor {self.source.name or '?'} -> {self.target.name or '?'}>"


def identity_functor(C: FinCat) -> FinFunctor:
    return FinFunctor(C, C, {a: a for a in C.objects}, {f: f for f in C.morphisms}, check=False)


def enumerate_functors(A: FinCat, B: FinCat) -> list[FinFunctor]:
    """All functors ``A -> B`` by backtracking over object and morphism images."""
    out = []
    mors = A.nonidentity()
    for images in product(B.objects, repeat=len(A.objects)):
        obj = dict(zip(A.objects, images))
        mor = {A.id(a): B.id(obj[a]) for a in A.objects}

        def go(i):
            if i == len(mors):
                out.append(FinFunctor(A, B, obj, dict(mor), check=False))
                return
            f = mors[i]
            a, b = A.morphisms[f]
            for g in B.hom(obj[a], obj[b]):
                mor[f] = g
                if _composites_ok(A, B, mor):
                    go(i + 1)
            mor.pop(f, None)

        go(0)
    return out


def _composites_ok(A, B, mor):
    for (g, f), h in A.composition.items():
        if g in mor and f in mor and h in mor and B.comp(mor[g], mor[f]) != mor[h]:
            return False
    return True


# ---------------------------------------------------------------- siftedness


@dataclass
class SiftedVerdict:
    sifted: bool
    reason: str
    pair: tuple | None = None
    components: list = field(default_factory=list)

    def __bool__(self):
        return self.sifted


def cospan_components(C: FinCat, A: str, B: str) -> list[list[tuple[str, str, str]]]:
    """Connected components of the category of cospans ``A -> X <- B``."""
    cospans = [(X, f, g) for X in C.objects for f in C.hom(A, X) for g in C.hom(B, X)]
    index = {c: i for i, c in enumerate(cospans)}
    uf = UnionFind(len(cospans))
    for X, f, g in cospans:
        for h in C.out(X):
            uf.union(index[X, f, g], index[C.dst(h), C.comp(h, f), C.comp(h, g)])
    n, q = uf.classes()
    comps: list[list] = [[] for _ in range(n)]
    for c, k in zip(cospans, q):
        comps[k].append(c)
    return comps


def is_sifted(C: FinCat) -> SiftedVerdict:
    """Non-empty, and every cospan category is connected. The witness is the
    first failing ordered pair in object order."""
    if not C.objects:
        return SiftedVerdict(False, "empty category")
    for A in C.objects:
        for B in C.objects:
            comps = cospan_components(C, A, B)
            if len(comps) != 1:
                why = "no cospans" if not comps else f"{len(comps)} cospan components"
                return SiftedVerdict(False, why, (A, B), comps)
    return SiftedVerdict(True, "all cospan categories connected")


# ---------------------------------------------------------------- Fam


@dataclass
class FamCompletion:
    category: FinCat
    inclusion: FinFunctor
    bound: int
    families: dict  # object name -> tuple of base objects

    def name_of(self, family) -> str | None:
        return self._names.get(tuple(sorted(family, key=self._rank.__getitem__)))

    def __post_init__(self):
        base = self.inclusion.source
        self._rank = {a: i for i, a in enumerate(base.objects)}
        self._names = {v: k for k, v in self.families.items()}

    def coproduct(self, A: str, B: str):
        """The coproduct family of ``A`` and ``B`` with its two injections, or
        ``None`` when the concatenation exceeds the size bound."""
        fa, fb = self.families[A], self.families[B]
        if len(fa) + len(fb) > self.bound:
            return None
        merged = sorted(
            [(x, 0, i) for i, x in enumerate(fa)] + [(x, 1, i) for i, x in enumerate(fb)],
            key=lambda t: (self._rank[t[0]], t[1], t[2]),
        )
        S = self.name_of([x for x, _, _ in merged])
        pos = {(side, i): p for p, (_, side, i) in enumerate(merged)}
        base = self.inclusion.source
        inj = []
        for side, fam, src in ((0, fa, A), (1, fb, B)):
            comps = tuple((pos[side, i], base.id(x)) for i, x in enumerate(fam))
            inj.append(_fam_label(src, S, comps))
        return S, inj[0], inj[1]


def _fam_name(fam) -> str:
    return "[" + ",".join(fam) + "]"


def _fam_label(A, B, comps) -> str:
    return f"{A}->{B}:" + ",".join(f"{j}.{f}" for j, f in comps)


def fam_completion(C: FinCat, max_family_size: int) -> FamCompletion:
    """Free completion under finite coproducts, truncated to families of size
    at most ``max_family_size``; families are sorted multisets of objects."""
    if max_family_size < 1:
        raise BoundTooSmall(f"family size bound must be >= 1, got {max_family_size}")
    fams = []
    for k in range(max_family_size + 1):
        fams.extend(combinations_with_replacement(C.objects, k))
    families = {_fam_name(f): tuple(f) for f in fams}

    def homs(A, B):
        fa, fb = families[A], families[B]
        choices = [[(j, f) for j, y in enumerate(fb) for f in C.hom(x, y)] for x in fa]
        return [tuple(c) for c in product(*choices)]

    def compose_fn(g, f):
        return tuple((g[j][0], C.comp(g[j][1], h)) for j, h in f)

    def identity_fn(A):
        return tuple((i, C.id(x)) for i, x in enumerate(families[A]))

    cat = concrete(
        families,
        homs,
        compose_fn,
        identity_fn,
        lambda A, B, v: _fam_label(A, B, v),
        name=f"Fam({C.name})≤{max_family_size}",
        check=False,
    )
    inclusion = FinFunctor(
        C,
        cat,
        {a: _fam_name((a,)) for a in C.objects},
        {f: _fam_label(_fam_name((a,)), _fam_name((b,)), ((0, f),)) for f, (a, b) in C.morphisms.items()},
    )
    return FamCompletion(cat, inclusion, max_family_size, families)


# ---------------------------------------------------------------- idempotents


def idempotents(C: FinCat, a: str) -> list[str]:
    return [e for e in C.hom(a, a) if C.comp(e, e) == e]


def splitting(C: FinCat, e: str):
    """A splitting ``(Y, r, s)`` of idempotent ``e`` (``s∘r = e``, ``r∘s = id``)
    or ``None``."""
    a = C.src(e)
    for Y in C.objects:
        for r in C.hom(a, Y):
            for s in C.hom(Y, a):
                if C.comp(s, r) == e and C.comp(r, s) == C.id(Y):
                    return Y, r, s
    return None


@dataclass
class Karoubi:
    category: FinCat
    embedding: FinFunctor
    pairs: dict  # object name -> (base object, idempotent)
    underlying: dict  # morphism id -> base morphism


def split_idempotents(C: FinCat) -> Karoubi:
    """Cauchy completion: objects ``(c, e)`` for idempotents ``e`` on ``c``;
    morphisms ``(c, e) -> (d, e')`` are ``f: c -> d`` with ``e'∘f∘e = f``."""
    pairs = {}
    for c in C.objects:
        for e in idempotents(C, c):
            pairs[c if C.is_identity(e) else f"{c}|{e}"] = (c, e)

    def homs(X, Y):
        (c, e), (d, e2) = pairs[X], pairs[Y]
        return [f for f in C.hom(c, d) if C.comp(e2, C.comp(f, e)) == f]

    cat = concrete(
        pairs,
        homs,
        lambda g, f: C.comp(g, f),
        lambda X: pairs[X][1],
        lambda X, Y, f: f if X == C.src(f) and Y == C.dst(f) else f"{f}:{X}>{Y}",
        name=f"Kar({C.name})",
        check=False,
    )
    underlying = dict(cat.data["value"])
    emb = FinFunctor(C, cat, {c: c for c in C.objects}, {f: f for f in C.morphisms})
    for X in cat.objects:
        for e in idempotents(cat, X):
            if splitting(cat, e) is None:
                raise CategoryError(f"idempotent {e!r} does not split in the completion")
    return Karoubi(cat, emb, pairs, underlying)


def isomorphic_objects(C: FinCat, a: str, b: str) -> bool:
    for f in C.hom(a, b):
        for g in C.hom(b, a):
            if C.comp(g, f) == C.id(a) and C.comp(f, g) == C.id(b):
                return True
    return False


# ---------------------------------------------------------------- elements


@dataclass
class Elements:
    category: FinCat
    projection: FinFunctor
    elements: dict  # object name -> (base object, element index)


def category_of_elements(W) -> Elements:
    """Category of elements of a presheaf ``W`` on ``C``.

    Objects are ``(c, x)`` with ``x ∈ W(c)``; a morphism ``(c, x) -> (d, y)`` is
    ``u: c -> d`` with ``W(u)(y) = x``. The projection lands in ``C``, so that
    the colimit of representables indexed by it is ``W`` itself.
    """
    C = W.base
    elements = {}
    for c in C.objects:
        for x in range(W.sizes[c]):
            elements[f"{c}:{W.label(c, x)}"] = (c, x)

    def homs(P, Q):
        (c, x), (d, y) = elements[P], elements[Q]
        return [u for u in C.hom(c, d) if W.act(u, y) == x]

    cat = concrete(
        elements,
        homs,
        lambda g, f: C.comp(g, f),
        lambda P: C.id(elements[P][0]),
        lambda P, Q, u: f"{u}:{P}>{Q}",
        name=f"el({W.name or 'W'})",
        check=False,
    )
    value = cat.data["value"]
    proj = FinFunctor(
        cat, C, {P: elements[P][0] for P in cat.objects}, {f: value[f] for f in cat.morphisms}
    )
    return Elements(cat, proj, elements)
