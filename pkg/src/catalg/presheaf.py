"""Finite-set-valued presheaves on finite categories.

A presheaf ``P`` on ``C`` stores ``P(c)`` as ``range(sizes[c])`` and, for each
``f: a -> b``, the function ``P(f): P(b) -> P(a)`` as a tuple. A covariant
functor ``D: A -> FinSet`` is a presheaf on ``A.op()``; see :func:`copresheaf`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product as _product
from typing import Iterable, Mapping, Sequence

from . import finset
from .fincat import FinCat, FinFunctor, build, split_idempotents, Karoubi


class PresheafError(ValueError):
    pass


class BaseMismatch(PresheafError):
    pass


class IndexMismatch(PresheafError):
    pass


class NotNatural(PresheafError):
    pass


class NotDecomposable(PresheafError):
    def __init__(self, component):
        super().__init__(f"component {component} is not representable")
        self.component = component


class _Actions(dict):
    """Action tables filled in on first lookup from ``fn(f)``."""

    def __init__(self, base, fn):
        super().__init__()
        self._base = base
        self._fn = fn

    def __missing__(self, f):
        if f not in self._base.morphisms:
            raise KeyError(f)
        v = self[f] = tuple(self._fn(f))
        return v


class Presheaf:
    """``actions`` is either a mapping covering the non-identity morphisms or a
    function ``f -> table`` evaluated on demand (for derived presheaves whose
    full tables would be large)."""

    def __init__(self, base: FinCat, sizes, actions=None, labels=None, name="", check=True):
        self.base = base
        self.name = name
        self.sizes = {c: int(sizes[c]) for c in base.objects}
        if callable(actions):
            fn = actions

            def table(f):
                return range(self.sizes[base.src(f)]) if base.is_identity(f) else fn(f)

            self.actions = _Actions(base, table)
        else:
            acts = dict(actions or {})
            for c in base.objects:
                acts.setdefault(base.id(c), tuple(range(self.sizes[c])))
            for f, (_, b) in base.morphisms.items():
                if self.sizes[b] == 0:
                    acts.setdefault(f, ())  # the empty function is the only choice
            missing = [f for f in base.morphisms if f not in acts]
            if missing:
                raise PresheafError(f"no action given for {missing[0]!r}")
            self.actions = {f: tuple(acts[f]) for f in base.morphisms}
        if labels is None or callable(labels):
            self._labels = labels
        else:
            self._labels = {c: tuple(map(str, labels[c])) for c in base.objects}
        if check:
            self._check()

    @property
    def labels(self):
        if callable(self._labels):
            raw = self._labels()
            self._labels = {c: tuple(map(str, raw[c])) for c in self.base.objects}
        return self._labels

    def _check(self):
        C = self.base
        for f, (a, b) in C.morphisms.items():
            act = self.actions[f]
            if len(act) != self.sizes[b] or any(not 0 <= y < self.sizes[a] for y in act):
                raise PresheafError(f"action of {f!r} is not a function P({b}) -> P({a})")
        for c in C.objects:
            if self.actions[C.id(c)] != tuple(range(self.sizes[c])):
                raise PresheafError(f"identity on {c!r} acts nontrivially")
        for (g, f), h in C.composition.items():
            if self.actions[h] != finset.compose(self.actions[f], self.actions[g]):
                raise PresheafError(f"P({g}∘{f}) != P({f})∘P({g})")

    def act(self, f: str, x: int) -> int:
        return self.actions[f][x]

    def label(self, c: str, x: int) -> str:
        return self.labels[c][x] if self.labels else str(x)

    def elements(self) -> list[tuple[str, int]]:
        return [(c, x) for c in self.base.objects for x in range(self.sizes[c])]

    def key(self):
        C = self.base
        return tuple(self.sizes[c] for c in C.objects), tuple(self.actions[f] for f in C.morphisms)

    def __eq__(self, other):
        if self is other:
            return True
        if not isinstance(other, Presheaf):
            return NotImplemented
        return self.base == other.base and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def summary(self) -> str:
        return " ".join(f"{c}:{self.sizes[c]}" for c in self.base.objects)

    def __repr__(self):
        return f"<Presheaf {self.name + ' ' if self.name else ''}{self.summary()}>"


def copresheaf(A: FinCat, sizes, maps=None, labels=None, name="") -> Presheaf:
    """A covariant ``A -> FinSet``; ``maps[f]`` for ``f: a -> b`` is ``D(a) -> D(b)``."""
    return Presheaf(A.op(), sizes, maps, labels, name=name)


class PresheafMap:
    def __init__(self, source: Presheaf, target: Presheaf, components, check=True):
        if source.base != target.base:
            raise BaseMismatch("map between presheaves on different bases")
        self.source = source
        self.target = target
        self.components = {c: tuple(components[c]) for c in source.base.objects}
        if check:
            self._check()

    def _check(self):
        P, Q = self.source, self.target
        for c in P.base.objects:
            comp = self.components[c]
            if len(comp) != P.sizes[c] or any(not 0 <= y < Q.sizes[c] for y in comp):
                raise PresheafError(f"component at {c!r} is not a function")
        for f in P.base.generators():
            a, b = P.base.morphisms[f]
            for x in range(P.sizes[b]):
                if self.components[a][P.act(f, x)] != Q.act(f, self.components[b][x]):
                    raise NotNatural(f"naturality square for {f!r} fails at element {x}")

    def __call__(self, c: str, x: int) -> int:
        return self.components[c][x]

    def key(self):
        return tuple(self.components[c] for c in self.source.base.objects)

    def __eq__(self, other):
        return isinstance(other, PresheafMap) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def then(self, other: PresheafMap) -> PresheafMap:
        """``other ∘ self``."""
        return PresheafMap(
            self.source,
            other.target,
            {c: finset.compose(other.components[c], self.components[c]) for c in self.source.base.objects},
            check=False,
        )

    def is_iso(self) -> bool:
        return all(
            finset.is_bijection(self.components[c], self.target.sizes[c]) for c in self.source.base.objects
        )

    def inverse(self) -> PresheafMap:
        return PresheafMap(
            self.target, self.source, {c: finset.inverse(v) for c, v in self.components.items()}, check=False
        )

    def __repr__(self):
        return f"<PresheafMap {self.key()}>"


def identity_map(P: Presheaf) -> PresheafMap:
    return PresheafMap(P, P, {c: range(P.sizes[c]) for c in P.base.objects}, check=False)


# ---------------------------------------------------------------- basic objects


def representable(C: FinCat, c: str) -> Presheaf:
    """``y(c) = C(-, c)``; elements at ``d`` are the morphisms ``d -> c`` in hom order."""
    index = {d: {u: i for i, u in enumerate(C.hom(d, c))} for d in C.objects}

    def action(f):
        a, b = C.morphisms[f]
        return [index[a][C.comp(u, f)] for u in C.hom(b, c)]

    return Presheaf(
        C,
        {d: len(C.hom(d, c)) for d in C.objects},
        action,
        {d: C.hom(d, c) for d in C.objects},
        name=f"y({c})",
        check=False,
    )


def terminal(C: FinCat) -> Presheaf:
    return Presheaf(C, {c: 1 for c in C.objects}, {f: (0,) for f in C.morphisms}, name="1", check=False)


def initial(C: FinCat) -> Presheaf:
    return Presheaf(C, {c: 0 for c in C.objects}, {f: () for f in C.morphisms}, name="0", check=False)


def yoneda_map(P: Presheaf, c: str, x: int) -> PresheafMap:
    """The map ``y(c) -> P`` classifying ``x ∈ P(c)``."""
    C = P.base
    y = representable(C, c)
    # u ↦ P(u)(x), filled in from id_c by precomposing generators
    value = {C.id(c): x}
    into: dict = {d: [] for d in C.objects}
    for g in C.generators():
        into[C.dst(g)].append(g)
    stack = [C.id(c)]
    while stack:
        u = stack.pop()
        for g in into[C.src(u)]:
            w = C.comp(u, g)
            if w not in value:
                value[w] = P.act(g, value[u])
                stack.append(w)
    return PresheafMap(y, P, {d: tuple(value[u] for u in C.hom(d, c)) for d in C.objects}, check=False)


def yoneda_element(alpha: PresheafMap, c: str) -> int:
    C = alpha.source.base
    return alpha.components[c][C.hom(c, c).index(C.id(c))]


def restrict(P: Presheaf, F: FinFunctor) -> Presheaf:
    """``P ∘ F`` for ``F: A -> base``, a presheaf on ``A``."""
    if F.target != P.base:
        raise BaseMismatch("functor does not land in the presheaf's base")
    A = F.source
    return Presheaf(
        A,
        {a: P.sizes[F.obj[a]] for a in A.objects},
        {f: P.actions[F.mor[f]] for f in A.morphisms},
        {a: P.labels[F.obj[a]] for a in A.objects} if P.labels else None,
        check=False,
    )


def restrict_map(alpha: PresheafMap, F: FinFunctor) -> PresheafMap:
    return PresheafMap(
        restrict(alpha.source, F),
        restrict(alpha.target, F),
        {a: alpha.components[F.obj[a]] for a in F.source.objects},
        check=False,
    )


# ---------------------------------------------------------------- limits and colimits


@dataclass
class Diagram:
    """A functor from ``shape`` to presheaves; ``maps`` covers non-identity morphisms."""

    shape: FinCat
    objects: dict
    maps: dict = field(default_factory=dict)

    def __post_init__(self):
        first = next(iter(self.objects.values()), None)
        if first is not None and any(P.base != first.base for P in self.objects.values()):
            raise BaseMismatch("diagram presheaves live on different bases")
        J = self.shape
        for u in J.nonidentity():
            a, b = J.morphisms[u]
            m = self.maps.get(u)
            if m is None or m.source != self.objects[a] or m.target != self.objects[b]:
                raise PresheafError(f"diagram map for {u!r} missing or mistyped")
        for (g, f), h in J.composition.items():
            if J.is_identity(g) or J.is_identity(f):
                continue
            if self.map(h).key() != self.map(f).then(self.map(g)).key():
                raise PresheafError(f"diagram does not preserve {g}∘{f}")

    def map(self, u: str) -> PresheafMap:
        J = self.shape
        if J.is_identity(u):
            return identity_map(self.objects[J.src(u)])
        return self.maps[u]

    def base(self, default=None) -> FinCat:
        for P in self.objects.values():
            return P.base
        return default


@dataclass
class Colimit:
    diagram: Diagram
    apex: Presheaf
    cocone: dict
    reps: dict  # object -> list of (j, x) representing each class

    def factor(self, maps: Mapping[str, PresheafMap]) -> PresheafMap:
        """The mediating map from the apex to the vertex of another cocone."""
        X = next(iter(maps.values())).target if maps else None
        C = self.apex.base
        comps = {}
        for c in C.objects:
            out = [None] * self.apex.sizes[c]
            for j in self.diagram.shape.objects:
                for x, q in enumerate(self.cocone[j].components[c]):
                    y = maps[j].components[c][x]
                    if out[q] is None:
                        out[q] = y
                    elif out[q] != y:
                        raise PresheafError("maps do not form a cocone")
            comps[c] = out
        if X is None:
            raise PresheafError("factoring out of an initial colimit needs a target")
        return PresheafMap(self.apex, X, comps)


@dataclass
class Limit:
    diagram: Diagram
    apex: Presheaf
    cone: dict
    tuples: dict  # object -> list of compatible tuples

    def factor(self, maps: Mapping[str, PresheafMap], source: Presheaf | None = None) -> PresheafMap:
        X = source or next(iter(maps.values())).source
        J = self.diagram.shape
        comps = {}
        for c in X.base.objects:
            index = {t: i for i, t in enumerate(self.tuples[c])}
            row = []
            for x in range(X.sizes[c]):
                t = tuple(maps[j].components[c][x] for j in J.objects)
                if t not in index:
                    raise PresheafError("maps do not form a cone")
                row.append(index[t])
            comps[c] = row
        return PresheafMap(X, self.apex, comps)


def _shape_maps(diagram: Diagram, c: str):
    J = diagram.shape
    return [(J.src(u), J.dst(u), diagram.maps[u].components[c]) for u in J.nonidentity()]


def colimit_of_diagram(diagram: Diagram, base: FinCat | None = None) -> Colimit:
    """Pointwise colimit; elements of the apex are classes of pairs ``(j, x)``."""
    J = diagram.shape
    C = diagram.base(base)
    if C is None:
        raise PresheafError("empty diagram needs an explicit base")
    sizes, cop, reps = {}, {}, {}
    for c in C.objects:
        n, q = finset.colimit(J.objects, {j: diagram.objects[j].sizes[c] for j in J.objects}, _shape_maps(diagram, c))
        sizes[c] = n
        cop[c] = q
        r: list = [None] * n
        for j in J.objects:
            for x, k in enumerate(q[j]):
                if r[k] is None:
                    r[k] = (j, x)
        reps[c] = r
    def action(f):
        a, b = C.morphisms[f]
        return [cop[a][j][diagram.objects[j].act(f, x)] for j, x in reps[b]]

    def labels():
        return {c: [f"{j}.{diagram.objects[j].label(c, x)}" for j, x in reps[c]] for c in C.objects}

    apex = Presheaf(C, sizes, action, labels, check=False)
    cocone = {j: PresheafMap(diagram.objects[j], apex, {c: cop[c][j] for c in C.objects}, check=False) for j in J.objects}
    return Colimit(diagram, apex, cocone, reps)


def limit_of_diagram(diagram: Diagram, base: FinCat | None = None) -> Limit:
    """Pointwise limit; elements of the apex are compatible tuples ``(x_j)_j``."""
    J = diagram.shape
    C = diagram.base(base)
    if C is None:
        raise PresheafError("empty diagram needs an explicit base")
    sizes, tuples, proj = {}, {}, {}
    for c in C.objects:
        ts, pr = finset.limit(J.objects, {j: diagram.objects[j].sizes[c] for j in J.objects}, _shape_maps(diagram, c))
        sizes[c], tuples[c], proj[c] = len(ts), ts, pr
    objs = [diagram.objects[j] for j in J.objects]
    if J.nonidentity():
        indexes: dict = {}

        def locate(a, t):
            if a not in indexes:
                indexes[a] = {t: i for i, t in enumerate(tuples[a])}
            return indexes[a][t]

    else:
        # a product: tuples are the whole cartesian product in lexicographic order
        def locate(a, t):
            i = 0
            for P, x in zip(objs, t):
                i = i * P.sizes[a] + x
            return i

    def action(f):
        a, b = C.morphisms[f]
        return [locate(a, tuple(P.act(f, x) for P, x in zip(objs, t))) for t in tuples[b]]

    def labels():
        return {
            c: ["(" + ",".join(P.label(c, x) for P, x in zip(objs, t)) + ")" for t in tuples[c]]
            for c in C.objects
        }

    apex = Presheaf(C, sizes, action, labels, check=False)
    cone = {j: PresheafMap(apex, diagram.objects[j], {c: proj[c][j] for c in C.objects}, check=False) for j in J.objects}
    return Limit(diagram, apex, cone, tuples)


_PARALLEL = build(["A", "B"], [("f", "A", "B"), ("g", "A", "B")], name="parallel")
_COSPAN = build(["A", "B", "C"], [("f", "A", "C"), ("g", "B", "C")], name="cospan")
_SPAN = build(["C", "A", "B"], [("f", "C", "A"), ("g", "C", "B")], name="span")


def _discrete(n: int) -> FinCat:
    return build([str(i) for i in range(n)], name=f"discrete{n}")


def _same_base(items):
    bases = [x.base if isinstance(x, Presheaf) else x.source.base for x in items]
    if any(b != bases[0] for b in bases):
        raise BaseMismatch("inputs live on different bases")


def finite_limit(shape: str, *items, base: FinCat | None = None) -> Limit:
    """``shape`` is one of ``terminal`` (needs ``base``), ``product`` (presheaves),
    ``equalizer`` (two parallel maps) or ``pullback`` (two maps into one object)."""
    if items:
        _same_base(items)
    if shape == "terminal":
        return limit_of_diagram(Diagram(_discrete(0), {}), base=base)
    if shape == "product":
        return limit_of_diagram(Diagram(_discrete(len(items)), {str(i): P for i, P in enumerate(items)}), base=base)
    f, g = items
    if shape == "equalizer":
        if f.source != g.source or f.target != g.target:
            raise PresheafError("equalizer needs parallel maps")
        return limit_of_diagram(Diagram(_PARALLEL, {"A": f.source, "B": f.target}, {"f": f, "g": g}))
    if shape == "pullback":
        if f.target != g.target:
            raise PresheafError("pullback needs maps with a common target")
        return limit_of_diagram(Diagram(_COSPAN, {"A": f.source, "B": g.source, "C": f.target}, {"f": f, "g": g}))
    raise ValueError(f"unknown limit shape {shape!r}")


def finite_colimit(shape: str, *items, base: FinCat | None = None) -> Colimit:
    """``shape`` is one of ``initial``, ``coproduct``, ``coequalizer`` or ``pushout``."""
    if items:
        _same_base(items)
    if shape == "initial":
        return colimit_of_diagram(Diagram(_discrete(0), {}), base=base)
    if shape == "coproduct":
        return colimit_of_diagram(Diagram(_discrete(len(items)), {str(i): P for i, P in enumerate(items)}), base=base)
    f, g = items
    if shape == "coequalizer":
        if f.source != g.source or f.target != g.target:
            raise PresheafError("coequalizer needs parallel maps")
        return colimit_of_diagram(Diagram(_PARALLEL, {"A": f.source, "B": f.target}, {"f": f, "g": g}))
    if shape == "pushout":
        if f.source != g.source:
            raise PresheafError("pushout needs maps with a common source")
        return colimit_of_diagram(Diagram(_SPAN, {"C": f.source, "A": f.target, "B": g.target}, {"f": f, "g": g}))
    raise ValueError(f"unknown colimit shape {shape!r}")


def product(*Ps: Presheaf) -> Limit:
    return finite_limit("product", *Ps)


def coproduct(*Ps: Presheaf, base: FinCat | None = None) -> Colimit:
    return finite_colimit("coproduct", *Ps, base=base)


# ---------------------------------------------------------------- natural transformations


def nat_transformations(F: Presheaf, G: Presheaf) -> list[PresheafMap]:
    """Every natural map ``F -> G``, ordered by their component tables."""
    if F.base != G.base:
        raise BaseMismatch("Nat(F, G) needs a common base")
    C = F.base
    # objects with many incoming arrows first: their values force the most
    order = sorted(C.objects, key=lambda c: -len(C.into(c)))
    elems = [(c, x) for c in order for x in range(F.sizes[c])]
    assign = {c: [-1] * F.sizes[c] for c in C.objects}
    into: dict = {c: [] for c in C.objects}
    for f in C.generators():
        a, b = C.morphisms[f]
        into[b].append((a, F.actions[f], G.actions[f]))
    found = []
    trail: list = []

    def put(c, x, y) -> bool:
        stack = [(c, x, y)]
        while stack:
            c, x, y = stack.pop()
            cur = assign[c][x]
            if cur == y:
                continue
            if cur != -1:
                return False
            assign[c][x] = y
            trail.append((c, x))
            for d, Ff, Gf in into[c]:
                stack.append((d, Ff[x], Gf[y]))
        return True

    def go(i):
        while i < len(elems) and assign[elems[i][0]][elems[i][1]] != -1:
            i += 1
        if i == len(elems):
            found.append({c: tuple(v) for c, v in assign.items()})
            return
        c, x = elems[i]
        for y in range(G.sizes[c]):
            mark = len(trail)
            if put(c, x, y):
                go(i + 1)
            while len(trail) > mark:
                d, z = trail.pop()
                assign[d][z] = -1

    go(0)
    maps = [PresheafMap(F, G, comps, check=False) for comps in found]
    maps.sort(key=PresheafMap.key)
    return maps


def isomorphic(P: Presheaf, Q: Presheaf) -> PresheafMap | None:
    if P.base != Q.base or any(P.sizes[c] != Q.sizes[c] for c in P.base.objects):
        return None
    for alpha in nat_transformations(P, Q):
        if alpha.is_iso():
            return alpha
    return None


# ---------------------------------------------------------------- exponentials


@dataclass
class Exponential:
    apex: Presheaf
    maps: dict  # c -> list of PresheafMap y(c) x F -> G
    products: dict  # c -> Limit for y(c) x F
    evaluation: PresheafMap  # apex x F -> G
    domain: Limit  # apex x F


def exponential(F: Presheaf, G: Presheaf) -> Exponential:
    """``G^F`` with ``G^F(c) = Nat(y(c) × F, G)`` and its evaluation map."""
    if F.base != G.base:
        raise BaseMismatch("exponential needs a common base")
    C = F.base
    prods = {c: product(representable(C, c), F) for c in C.objects}
    maps = {c: nat_transformations(prods[c].apex, G) for c in C.objects}
    index = {c: {m.key(): i for i, m in enumerate(maps[c])} for c in C.objects}
    actions = {}
    for f, (d, c) in C.morphisms.items():
        # alpha ↦ alpha ∘ (y(f) × F), as a map y(d)×F -> G
        src, tgt = prods[d], prods[c]
        reindex = {}
        for e in C.objects:
            pos = {t: i for i, t in enumerate(tgt.tuples[e])}
            hom_c = C.hom(e, c)
            hom_d = C.hom(e, d)
            reindex[e] = [pos[(hom_c.index(C.comp(f, hom_d[u])), x)] for u, x in src.tuples[e]]
        row = []
        for alpha in maps[c]:
            comps = {e: tuple(alpha.components[e][k] for k in reindex[e]) for e in C.objects}
            row.append(index[d][tuple(comps[e] for e in C.objects)])
        actions[f] = tuple(row)
    apex = Presheaf(C, {c: len(maps[c]) for c in C.objects}, actions, name=f"{G.name or 'G'}^{F.name or 'F'}", check=False)
    dom = product(apex, F)
    ev = {}
    for e in C.objects:
        ide = C.hom(e, e).index(C.id(e))
        pos = {t: i for i, t in enumerate(prods[e].tuples[e])}
        ev[e] = tuple(maps[e][a].components[e][pos[(ide, x)]] for a, x in dom.tuples[e])
    evaluation = PresheafMap(dom.apex, G, ev, check=False)
    return Exponential(apex, maps, prods, evaluation, dom)


def curry(beta: PresheafMap, HF: Limit, exp: Exponential) -> PresheafMap:
    """Transpose ``β: H × F -> G`` to ``H -> G^F``; ``HF`` is the product ``H × F``."""
    H = HF.diagram.objects["0"]
    C = H.base
    comps = {}
    for c in C.objects:
        pos_hf = {e: {t: i for i, t in enumerate(HF.tuples[e])} for e in C.objects}
        index = {m.key(): i for i, m in enumerate(exp.maps[c])}
        row = []
        for h in range(H.sizes[c]):
            alpha = []
            for e in C.objects:
                hom = C.hom(e, c)
                alpha.append(
                    tuple(beta.components[e][pos_hf[e][(H.act(hom[u], h), x)]] for u, x in exp.products[c].tuples[e])
                )
            row.append(index[tuple(alpha)])
        comps[c] = row
    return PresheafMap(H, exp.apex, comps)


# ---------------------------------------------------------------- weighted colimits and Kan extensions


@dataclass
class WeightedColimit:
    size: int
    pairs: list  # (a, w, d) triples in canonical order
    quotient: tuple  # class of each triple

    def cls(self, a, w, d) -> int:
        return self.quotient[self._pos[a, w, d]]

    def __post_init__(self):
        self._pos = {t: i for i, t in enumerate(self.pairs)}


def weighted_colimit(W: Presheaf, D: Presheaf) -> WeightedColimit:
    """``W * D`` for a weight ``W`` on ``A`` and ``D: A -> FinSet`` (a presheaf on
    ``A.op()``), as the coend: ``Σ_a W(a) × D(a)`` modulo the action relation."""
    A = W.base
    if D.base != A.op():
        raise IndexMismatch("weight and diagram must share the index category")
    pairs = [(a, w, d) for a in A.objects for w in range(W.sizes[a]) for d in range(D.sizes[a])]
    pos = {t: i for i, t in enumerate(pairs)}
    uf = finset.UnionFind(len(pairs))
    for f, (a, b) in A.morphisms.items():
        for w in range(W.sizes[b]):
            for d in range(D.sizes[a]):
                uf.union(pos[a, W.act(f, w), d], pos[b, w, D.act(f, d)])
    n, q = uf.classes()
    return WeightedColimit(n, pairs, q)


def conical_colimit(D: Presheaf) -> WeightedColimit:
    return weighted_colimit(terminal(D.base.op()), D)


@dataclass
class LeftKan:
    extension: Presheaf  # on J.target.op()
    unit: PresheafMap  # F -> extension ∘ J
    triples: dict  # b -> list of (a, u, x) representatives
    classes: dict  # b -> {(a, u, x): class}


def left_kan_extension(F: Presheaf, J: FinFunctor) -> LeftKan:
    """Pointwise ``Lan_J F`` for ``F: A -> FinSet`` (a presheaf on ``A.op()``) along
    ``J: A -> B``; ``(Lan_J F)(b)`` is the colimit of ``F`` over ``J ↓ b``."""
    A, B = J.source, J.target
    if F.base != A.op():
        raise IndexMismatch("F must be a functor on the source of J")
    sizes, reps, classes = {}, {}, {}
    for b in B.objects:
        triples = [(a, u, x) for a in A.objects for u in B.hom(J.obj[a], b) for x in range(F.sizes[a])]
        pos = {t: i for i, t in enumerate(triples)}
        uf = finset.UnionFind(len(triples))
        for g, (a, a2) in A.morphisms.items():
            Jg = J.mor[g]
            for u2 in B.hom(J.obj[a2], b):
                u = B.comp(u2, Jg)
                for x in range(F.sizes[a]):
                    uf.union(pos[a, u, x], pos[a2, u2, F.act(g, x)])
        n, q = uf.classes()
        sizes[b] = n
        classes[b] = dict(zip(triples, q))
        r: list = [None] * n
        for t, k in zip(triples, q):
            if r[k] is None:
                r[k] = t
        reps[b] = r
    actions = {}
    for v, (b, b2) in B.morphisms.items():
        actions[v] = tuple(classes[b2][a, B.comp(v, u), x] for a, u, x in reps[b])
    labels = {b: [f"[{a},{u},{F.label(a, x)}]" for a, u, x in reps[b]] for b in B.objects}
    ext = Presheaf(B.op(), sizes, actions, labels, name="Lan", check=False)
    restricted = restrict(ext, J.op())
    unit = PresheafMap(
        F,
        restricted,
        {a: tuple(classes[J.obj[a]][a, B.id(J.obj[a]), x] for x in range(F.sizes[a])) for a in A.objects},
        check=False,
    )
    return LeftKan(ext, unit, reps, classes)


def weight_extension(W: Presheaf, J: FinFunctor) -> LeftKan:
    """Left Kan extension of a weight ``W`` on ``A`` along ``J: A -> B``, a weight on ``B``."""
    return left_kan_extension(W, J.op())


# ---------------------------------------------------------------- decomposition


@dataclass
class Decomposition:
    summands: tuple
    generators: tuple  # (c, x) per summand
    iso: PresheafMap  # coproduct of representables -> P
    coproduct: Colimit

    def formula(self) -> str:
        return " + ".join(self.summands) if self.summands else "0"


def components(P: Presheaf) -> list[list[tuple[str, int]]]:
    """Connected components of the elements, linked by the presheaf actions."""
    elems = P.elements()
    pos = {e: i for i, e in enumerate(elems)}
    uf = finset.UnionFind(len(elems))
    for f in P.base.generators():
        a, b = P.base.morphisms[f]
        for x in range(P.sizes[b]):
            uf.union(pos[b, x], pos[a, P.act(f, x)])
    n, q = uf.classes()
    out: list[list] = [[] for _ in range(n)]
    for e, k in zip(elems, q):
        out[k].append(e)
    return out


def orbit(P: Presheaf, c: str, x: int) -> set[tuple[str, int]]:
    """Elements ``P(u)(x)`` for all ``u: d -> c``: the image of the Yoneda map of ``x``."""
    C = P.base
    into: dict = {d: [] for d in C.objects}
    for f in C.generators():
        a, b = C.morphisms[f]
        into[b].append((a, P.actions[f]))
    seen = {(c, x)}
    stack = [(c, x)]
    while stack:
        d, y = stack.pop()
        for a, act in into[d]:
            z = (a, act[y])
            if z not in seen:
                seen.add(z)
                stack.append(z)
    return seen


def _generator(P: Presheaf, comp) -> tuple[str, int] | None:
    # (c, x) generates the component freely iff its Yoneda map is onto the
    # component and the hom-set sizes match the component sizes
    C = P.base
    counts = {c: 0 for c in C.objects}
    for c, _ in comp:
        counts[c] += 1
    for c, x in comp:
        if any(len(C.hom(d, c)) != counts[d] for d in C.objects):
            continue
        if len(orbit(P, c, x)) == len(comp):
            return c, x
    return None


def decompose_into_representables(P: Presheaf) -> Decomposition:
    """Write ``P`` as a finite coproduct of representables, or raise
    :class:`NotDecomposable` with the first component that is not one."""
    C = P.base
    rank = {c: i for i, c in enumerate(C.objects)}
    gens = []
    for comp in components(P):
        g = _generator(P, comp)
        if g is None:
            raise NotDecomposable(comp)
        gens.append(g)
    gens.sort(key=lambda g: (rank[g[0]], g[1]))
    summands = tuple(c for c, _ in gens)
    cop = coproduct(*[representable(C, c) for c in summands], base=C)
    iso = cop.factor({str(i): yoneda_map(P, c, x) for i, (c, x) in enumerate(gens)}) if gens else PresheafMap(
        cop.apex, P, {c: () for c in C.objects}
    )
    if not iso.is_iso():
        raise PresheafError("decomposition map is not an isomorphism")
    return Decomposition(summands, tuple(gens), iso, cop)


def transport_to_karoubi(P: Presheaf, kar: Karoubi) -> Presheaf:
    """Extend ``P`` along the idempotent completion: ``(c, e) ↦`` fixed points of ``P(e)``."""
    K = kar.category
    fixed = {X: [x for x in range(P.sizes[c]) if P.act(e, x) == x] for X, (c, e) in kar.pairs.items()}
    pos = {X: {x: i for i, x in enumerate(v)} for X, v in fixed.items()}
    actions = {}
    for phi, (X, Y) in K.morphisms.items():
        f = kar.underlying[phi]
        actions[phi] = tuple(pos[X][P.act(f, y)] for y in fixed[Y])
    labels = {X: [P.label(kar.pairs[X][0], x) for x in fixed[X]] for X in K.objects}
    return Presheaf(K, {X: len(v) for X, v in fixed.items()}, actions, labels, name=P.name)


def is_strongly_finitely_presentable(P: Presheaf) -> bool:
    """Whether ``P`` is a finite coproduct of representables once the base has
    its idempotents split (the ordinary, unenriched notion).

    On the graph base the terminal graph is not, although it is strongly
    finitely presentable for the Gph-enriched notion; that distinction is
    exercised through :func:`exponential` and :func:`preserves_colimit`.
    """
    kar = split_idempotents(P.base)
    try:
        decompose_into_representables(transport_to_karoubi(P, kar))
    except NotDecomposable:
        return False
    return True


# ---------------------------------------------------------------- preservation and commutation


@dataclass
class Preservation:
    preserved: bool
    colimit_of_homs: int
    hom_into_colimit: int
    comparison: tuple  # class of Nat(P, D_j) colimit -> index in Nat(P, apex)
    missing: list  # elements of Nat(P, apex) outside the image
    collisions: list  # pairs of classes with the same image

    def witness(self) -> dict:
        return {
            "colimit_of_homs": self.colimit_of_homs,
            "hom_into_colimit": self.hom_into_colimit,
            "missing": self.missing,
            "collisions": self.collisions,
        }


def preserves_colimit(P: Presheaf, colim: Colimit) -> Preservation:
    """Does ``Nat(P, -)`` send the given colimit cocone to a colimit in FinSet?"""
    D = colim.diagram
    J = D.shape
    homs = {j: nat_transformations(P, D.objects[j]) for j in J.objects}
    index = {j: {m.key(): i for i, m in enumerate(homs[j])} for j in J.objects}
    maps = []
    for u in J.nonidentity():
        a, b = J.morphisms[u]
        maps.append((a, b, tuple(index[b][m.then(D.maps[u]).key()] for m in homs[a])))
    n, cop = finset.colimit(J.objects, {j: len(homs[j]) for j in J.objects}, maps)
    top = nat_transformations(P, colim.apex)
    top_index = {m.key(): i for i, m in enumerate(top)}
    comparison: list = [None] * n
    collisions = []
    for j in J.objects:
        for i, m in enumerate(homs[j]):
            k = cop[j][i]
            img = top_index[m.then(colim.cocone[j]).key()]
            if comparison[k] is None:
                comparison[k] = img
            elif comparison[k] != img:
                raise PresheafError("cocone image is not a cocone")
    seen: dict = {}
    for k, img in enumerate(comparison):
        if img in seen:
            collisions.append((seen[img], k))
        seen.setdefault(img, k)
    missing = [i for i in range(len(top)) if i not in seen]
    ok = not missing and not collisions
    return Preservation(ok, n, len(top), tuple(comparison), missing, collisions)


def set_functors(J: FinCat, max_size: int) -> list[Presheaf]:
    """Every functor ``J -> FinSet`` with all sets of size at most ``max_size``,
    ordered by total size. Returned as presheaves on ``J.op()``."""
    mors = J.nonidentity()
    out = []
    size_vectors = sorted(_product(range(max_size + 1), repeat=len(J.objects)), key=lambda v: (sum(v), v))
    for vec in size_vectors:
        sizes = dict(zip(J.objects, vec))
        maps: dict = {J.id(a): tuple(range(sizes[a])) for a in J.objects}

        def go(i):
            if i == len(mors):
                out.append(copresheaf(J, sizes, dict(maps)))
                return
            u = mors[i]
            a, b = J.morphisms[u]
            for f in finset.all_functions(sizes[a], sizes[b]):
                maps[u] = f
                if _functorial_so_far(J, maps):
                    go(i + 1)
            maps.pop(u, None)

        go(0)
    return out


def _functorial_so_far(J, maps):
    for (g, f), h in J.composition.items():
        if g in maps and f in maps and h in maps and maps[h] != finset.compose(maps[g], maps[f]):
            return False
    return True


def set_colimit(D: Presheaf) -> tuple[int, dict]:
    """Colimit in FinSet of a covariant ``D`` (presheaf on ``J.op()``)."""
    Jop = D.base
    maps = [(Jop.dst(u), Jop.src(u), D.actions[u]) for u in Jop.nonidentity()]
    return finset.colimit(Jop.objects, D.sizes, maps)


@dataclass
class CommutationVerdict:
    commutes: bool
    checked: int
    witness: dict | None = None

    def __bool__(self):
        return self.commutes


def product_colimit_comparison(D1: Presheaf, D2: Presheaf):
    """The canonical map ``colim(D1 × D2) -> colim D1 × colim D2``; returns its
    table and the two sizes."""
    prod = product(D1, D2)
    n1, q1 = set_colimit(D1)
    n2, q2 = set_colimit(D2)
    n, q = set_colimit(prod.apex)
    table: list = [None] * n
    for j in D1.base.objects:
        for i, (x, y) in enumerate(prod.tuples[j]):
            table[q[j][i]] = q1[j][x] * n2 + q2[j][y]
    return table, n, n1 * n2


def commutes_products_colimit(J: FinCat, diagrams: Iterable[tuple[Presheaf, Presheaf]]) -> CommutationVerdict:
    """Compare ``colim(D1 × D2)`` with ``colim D1 × colim D2`` for each sampled pair;
    stops at the first failure."""
    checked = 0
    for D1, D2 in diagrams:
        if D1.base != J.op() or D2.base != J.op():
            raise IndexMismatch("diagrams must be functors on J")
        checked += 1
        table, n, m = product_colimit_comparison(D1, D2)
        if not finset.is_bijection(table, m):
            return CommutationVerdict(
                False,
                checked,
                {
                    "D1": [D1.sizes[j] for j in J.objects],
                    "D2": [D2.sizes[j] for j in J.objects],
                    "colim_of_product": n,
                    "product_of_colims": m,
                },
            )
    return CommutationVerdict(True, checked)


def all_pairs(diagrams: Sequence[Presheaf]):
    for D1 in diagrams:
        for D2 in diagrams:
            yield D1, D2
