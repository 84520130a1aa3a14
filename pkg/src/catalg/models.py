"""Models of a presented theory in finite sets.

A model stores, for each sort, a carrier ``range(n)`` with element labels and,
for each operation ``op: s1..sk -> s``, a table indexed row-major by the
argument tuple. Structures that fail the equations can be built with
``check=False``; only :func:`quotient_by_congruence` accepts them.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from math import prod
from typing import Iterable, Mapping, Sequence

from . import finset
from . import rewrite as rw
from .fincat import FinCat, is_sifted
from .rewrite import App, Term, Var
from .theory import Equation, TheoryMorphism, TheoryPresentation

DEFAULT_HOM_BOUND = 10**7
DEFAULT_CERT_BOUND = 4
DEFAULT_MAX_MODELS = 200


class ModelError(ValueError):
    def __init__(self, msg, witness=None):
        super().__init__(msg)
        self.witness = witness


class SearchSpaceTooLarge(RuntimeError):
    pass


class InducedOpIllDefined(ModelError):
    pass


class NotSifted(ModelError):
    pass


class Truncated(RuntimeError):
    def __init__(self, msg, partial=None):
        super().__init__(msg)
        self.partial = partial


# ---------------------------------------------------------------- models


class Model:
    def __init__(self, theory: TheoryPresentation, carriers, tables, labels=None, name="", check=True):
        self.theory = theory
        sig = theory.signature
        self.carriers = {s: int(carriers[s]) for s in sig.sorts}
        self.labels = {
            s: tuple(map(str, labels[s])) if labels and s in labels else tuple(map(str, range(self.carriers[s])))
            for s in sig.sorts
        }
        self.tables: dict[str, tuple] = {}
        for op, d in sig.ops.items():
            t = tuple(tables[op]) if op in tables else None
            n = prod(self.carriers[s] for s in d.arity)
            if t is None or len(t) != n or any(not 0 <= v < self.carriers[d.sort] for v in t):
                raise ModelError(f"table for {op!r} is not a total function")
            self.tables[op] = t
        self.name = name
        self._strides = {
            op: _strides([self.carriers[s] for s in d.arity]) for op, d in sig.ops.items()
        }
        if check:
            v = check_model(self)
            if not v.ok:
                raise ModelError(f"equation fails: {v.describe()}", v.witness)

    def apply(self, op: str, args: Sequence[int]) -> int:
        i = 0
        for a, st in zip(args, self._strides[op]):
            i += a * st
        return self.tables[op][i]

    def eval(self, t: Term, env: Mapping) -> int:
        if isinstance(t, Var):
            return env[t]
        vals = [self.eval(a, env) for a in t.args]
        if len(vals) > len(self.theory.signature.ops[t.op].arity):
            # flattened AC application, evaluated right-nested
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = self.apply(t.op, (v, out))
            return out
        return self.apply(t.op, vals)

    def size(self) -> int:
        return sum(self.carriers.values())

    def key(self):
        sig = self.theory.signature
        return tuple(self.carriers[s] for s in sig.sorts), tuple(self.tables[o] for o in sig.ops)

    def __eq__(self, other):
        return isinstance(other, Model) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        sizes = " ".join(f"{s}:{n}" for s, n in self.carriers.items())
        return f"<Model {self.name + ' ' if self.name else ''}{sizes}>"


def _strides(sizes):
    out = []
    acc = 1
    for n in reversed(sizes):
        out.append(acc)
        acc *= n
    return tuple(reversed(out))


def model_from_function(theory, carriers, fn, labels=None, name="", check=True) -> Model:
    """Tables from ``fn(op, args)``."""
    sig = theory.signature
    tables = {}
    for op, d in sig.ops.items():
        tables[op] = [fn(op, args) for args in product(*(range(carriers[s]) for s in d.arity))]
    return Model(theory, carriers, tables, labels, name=name, check=check)


@dataclass
class ModelVerdict:
    ok: bool
    witness: tuple | None = None  # (equation, assignment by variable name, lhs value, rhs value)

    def __bool__(self):
        return self.ok

    def describe(self) -> str:
        if self.ok:
            return "all equations hold"
        eq, env, a, b = self.witness
        where = ", ".join(f"{k}={v}" for k, v in env.items())
        return f"{eq} fails at {where or 'the empty assignment'}: {a} != {b}"


def check_model(M: Model, equations: Sequence[Equation] | None = None) -> ModelVerdict:
    """Every equation under every assignment; the first failure is the witness."""
    for eq in equations if equations is not None else M.theory.equations():
        vs = sorted(rw.variables(eq.lhs) | rw.variables(eq.rhs), key=lambda v: (v.name, v.sort))
        for vals in product(*(range(M.carriers[v.sort]) for v in vs)):
            env = dict(zip(vs, vals))
            a, b = M.eval(eq.lhs, env), M.eval(eq.rhs, env)
            if a != b:
                named = {v.name: M.labels[v.sort][x] for v, x in env.items()}
                return ModelVerdict(False, (eq, named, M.labels[eq.lhs.sort][a], M.labels[eq.lhs.sort][b]))
    return ModelVerdict(True)


def terminal_model(theory: TheoryPresentation) -> Model:
    sig = theory.signature
    return Model(theory, {s: 1 for s in sig.sorts}, {op: (0,) for op in sig.ops}, name="1")


# ---------------------------------------------------------------- homomorphisms


class ModelHom:
    def __init__(self, source: Model, target: Model, maps, check=True):
        self.source = source
        self.target = target
        self.maps = {s: tuple(maps[s]) for s in source.carriers}
        if check:
            bad = hom_failure(source, target, self.maps)
            if bad is not None:
                raise ModelError(f"not a homomorphism at {bad}", bad)

    def key(self):
        return tuple(self.maps[s] for s in self.source.theory.signature.sorts)

    def __eq__(self, other):
        return isinstance(other, ModelHom) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def then(self, other: ModelHom) -> ModelHom:
        """``other ∘ self``."""
        return ModelHom(
            self.source, other.target, {s: finset.compose(other.maps[s], self.maps[s]) for s in self.maps}, check=False
        )

    def __repr__(self):
        return f"<ModelHom {self.key()}>"


def hom_failure(A: Model, B: Model, maps) -> tuple | None:
    sig = A.theory.signature
    for op, d in sig.ops.items():
        for args in product(*(range(A.carriers[s]) for s in d.arity)):
            lhs = maps[d.sort][A.apply(op, args)]
            rhs = B.apply(op, [maps[s][x] for s, x in zip(d.arity, args)])
            if lhs != rhs:
                return (op, args)
    return None


def identity_hom(M: Model) -> ModelHom:
    return ModelHom(M, M, {s: range(n) for s, n in M.carriers.items()}, check=False)


def hom_models(A: Model, B: Model, bound: int = DEFAULT_HOM_BOUND) -> list[ModelHom]:
    """All homomorphisms ``A -> B`` in lexicographic order of their maps.

    The naive candidate count ``Π |B_s|^|A_s|`` must not exceed ``bound``;
    the search itself propagates values forced by the operation tables.
    """
    sig = A.theory.signature
    if A.theory.signature != B.theory.signature:
        raise ModelError("models of different theories")
    space = prod(B.carriers[s] ** A.carriers[s] for s in sig.sorts)
    if space > bound:
        raise SearchSpaceTooLarge(f"{space} candidate maps exceed the bound {bound}")
    elems = [(s, x) for s in sig.sorts for x in range(A.carriers[s])]
    h = {s: [-1] * A.carriers[s] for s in sig.sorts}
    # table entries (op, args, result) grouped by the elements they mention
    entries = []
    for op, d in sig.ops.items():
        for args in product(*(range(A.carriers[s]) for s in d.arity)):
            entries.append((op, d, args, A.apply(op, args)))
    watch: dict = {}
    for e in entries:
        op, d, args, r = e
        for s, x in zip(d.arity, args):
            watch.setdefault((s, x), []).append(e)
    constants = [e for e in entries if not e[1].arity]
    found = []
    trail: list = []

    def put(s, x, y) -> bool:
        stack = [(s, x, y)]
        while stack:
            s, x, y = stack.pop()
            cur = h[s][x]
            if cur == y:
                continue
            if cur != -1:
                return False
            h[s][x] = y
            trail.append((s, x))
            for op, d, args, r in watch.get((s, x), ()):
                vals = [h[t][a] for t, a in zip(d.arity, args)]
                if -1 not in vals:
                    stack.append((d.sort, r, B.apply(op, vals)))
        return True

    def go(i):
        while i < len(elems) and h[elems[i][0]][elems[i][1]] != -1:
            i += 1
        if i == len(elems):
            found.append({s: tuple(v) for s, v in h.items()})
            return
        s, x = elems[i]
        for y in range(B.carriers[s]):
            mark = len(trail)
            if put(s, x, y):
                go(i + 1)
            _undo(h, trail, mark)

    ok = True
    for op, d, args, r in constants:
        ok = ok and put(d.sort, r, B.apply(op, ()))
    if ok:
        go(0)
    out = [ModelHom(A, B, m, check=False) for m in found]
    out.sort(key=ModelHom.key)
    return out


def _undo(h, trail, mark):
    while len(trail) > mark:
        s, x = trail.pop()
        h[s][x] = -1


# ---------------------------------------------------------------- limits


@dataclass
class ModelLimit:
    model: Model
    projections: list  # ModelHom per factor (or the inclusion, for equalizers)
    elements: dict  # sort -> list of tuples / original elements


def product_of_models(*Ms: Model) -> ModelLimit:
    if not Ms:
        raise ModelError("empty product: use terminal_model")
    T = Ms[0].theory
    sig = T.signature
    elems = {s: list(product(*(range(M.carriers[s]) for M in Ms))) for s in sig.sorts}
    index = {s: {t: i for i, t in enumerate(v)} for s, v in elems.items()}

    def fn(op, args):
        d = sig.ops[op]
        comps = tuple(
            M.apply(op, [elems[s][a][k] for s, a in zip(d.arity, args)]) for k, M in enumerate(Ms)
        )
        return index[d.sort][comps]

    labels = {s: ["(" + ",".join(M.labels[s][x] for M, x in zip(Ms, t)) + ")" for t in v] for s, v in elems.items()}
    # equations hold componentwise, so the product needs no re-check
    P = model_from_function(T, {s: len(v) for s, v in elems.items()}, fn, labels, check=False)
    projs = [
        ModelHom(P, M, {s: [t[k] for t in elems[s]] for s in sig.sorts}, check=False) for k, M in enumerate(Ms)
    ]
    return ModelLimit(P, projs, elems)


def equalizer_of_models(f: ModelHom, g: ModelHom) -> ModelLimit:
    A = f.source
    sig = A.theory.signature
    keep = {s: [x for x in range(A.carriers[s]) if f.maps[s][x] == g.maps[s][x]] for s in sig.sorts}
    index = {s: {x: i for i, x in enumerate(v)} for s, v in keep.items()}

    def fn(op, args):
        d = sig.ops[op]
        r = A.apply(op, [keep[s][a] for s, a in zip(d.arity, args)])
        if r not in index[d.sort]:
            raise ModelError("equalizer not closed under operations")
        return index[d.sort][r]

    labels = {s: [A.labels[s][x] for x in v] for s, v in keep.items()}
    # a submodel satisfies every equation its ambient model does
    E = model_from_function(A.theory, {s: len(v) for s, v in keep.items()}, fn, labels, check=False)
    return ModelLimit(E, [ModelHom(E, A, keep, check=False)], keep)


def limit_of_models(shape: str, *items) -> ModelLimit:
    if shape == "product":
        return product_of_models(*items)
    if shape == "equalizer":
        return equalizer_of_models(*items)
    raise ValueError(f"unknown limit shape {shape!r}")


# ---------------------------------------------------------------- sifted colimits


@dataclass
class ModelColimit:
    model: Model
    injections: dict  # index object -> ModelHom


def sifted_colimit_of_models(J: FinCat, objects: Mapping[str, Model], maps: Mapping[str, ModelHom]) -> ModelColimit:
    """Colimit of a ``J``-shaped diagram of models, computed on carriers.

    ``J`` must be sifted. Each operation is induced on the colimit of carriers
    by choosing, for every tuple of classes, arguments living in one model of
    the diagram; any disagreement raises :class:`InducedOpIllDefined`.
    """
    verdict = is_sifted(J)
    if not verdict:
        raise NotSifted(f"index category is not sifted: {verdict.reason} at {verdict.pair}")
    T = next(iter(objects.values())).theory
    sig = T.signature
    quot, sizes = {}, {}
    for s in sig.sorts:
        n, q = finset.colimit(
            J.objects,
            {j: objects[j].carriers[s] for j in J.objects},
            [(J.src(u), J.dst(u), maps[u].maps[s]) for u in J.nonidentity()],
        )
        sizes[s], quot[s] = n, q
    tables = {}
    for op, d in sig.ops.items():
        table: dict = {}
        for j in J.objects:
            M = objects[j]
            for args in product(*(range(M.carriers[s]) for s in d.arity)):
                key = tuple(quot[s][j][a] for s, a in zip(d.arity, args))
                val = quot[d.sort][j][M.apply(op, args)]
                if table.setdefault(key, val) != val:
                    raise InducedOpIllDefined(f"{op} is not well defined on classes {key}", key)
        full = []
        for key in product(*(range(sizes[s]) for s in d.arity)):
            if key not in table:
                raise InducedOpIllDefined(f"{op} has no representative for classes {key}", key)
            full.append(table[key])
        tables[op] = full
    labels = {}
    for s in sig.sorts:
        lab: list = [None] * sizes[s]
        for j in J.objects:
            for x, k in enumerate(quot[s][j]):
                if lab[k] is None:
                    lab[k] = f"{j}.{objects[j].labels[s][x]}"
        labels[s] = lab
    C = Model(T, sizes, tables, labels)
    inj = {j: ModelHom(objects[j], C, {s: quot[s][j] for s in sig.sorts}) for j in J.objects}
    return ModelColimit(C, inj)


# ---------------------------------------------------------------- congruences


@dataclass
class Congruence:
    structure: Model
    classes: dict  # sort -> tuple of class indices

    def size(self, s) -> int:
        return max(self.classes[s], default=-1) + 1


@dataclass
class Quotient:
    model: Model
    hom: ModelHom | None  # None when the input was a raw structure
    congruence: Congruence
    map: dict  # sort -> class of each element


def congruence_closure(M: Model, pairs: Iterable[tuple], with_equations: bool = False) -> dict:
    """Smallest congruence containing ``pairs`` (``(sort, a, b)`` triples); with
    ``with_equations`` it also contains every equation instance, so the
    quotient satisfies the theory. Returns union-find structures per sort."""
    sig = M.theory.signature
    uf = {s: finset.UnionFind(M.carriers[s]) for s in sig.sorts}
    for s, a, b in pairs:
        uf[s].union(a, b)
    eqs = M.theory.equations() if with_equations else []
    changed = True
    while changed:
        changed = False
        for op, d in sig.ops.items():
            seen: dict = {}
            for args in product(*(range(M.carriers[s]) for s in d.arity)):
                key = tuple(uf[s].find(a) for s, a in zip(d.arity, args))
                r = M.apply(op, args)
                if key in seen:
                    changed |= uf[d.sort].union(seen[key], r)
                else:
                    seen[key] = r
        for eq in eqs:
            vs = sorted(rw.variables(eq.lhs) | rw.variables(eq.rhs), key=lambda v: (v.name, v.sort))
            reps = [sorted({uf[v.sort].find(x) for x in range(M.carriers[v.sort])}) for v in vs]
            for vals in product(*reps):
                env = dict(zip(vs, vals))
                a = _eval_mod(M, eq.lhs, env, uf)
                b = _eval_mod(M, eq.rhs, env, uf)
                changed |= uf[eq.lhs.sort].union(a, b)
    return uf


def _eval_mod(M, t, env, uf):
    # evaluation on class representatives; valid once the relation is compatible
    if isinstance(t, Var):
        return uf[t.sort].find(env[t])
    d = M.theory.signature.ops[t.op]
    vals = [_eval_mod(M, a, env, uf) for a in t.args]
    if len(vals) > len(d.arity):
        out = vals[-1]
        for v in reversed(vals[:-1]):
            out = uf[d.sort].find(M.apply(t.op, (v, out)))
        return out
    return uf[d.sort].find(M.apply(t.op, vals))


def quotient_by_congruence(M: Model, pairs: Iterable[tuple] = ()) -> Quotient:
    """Quotient by the congruence generated by ``pairs``. A raw structure (one
    failing the equations) also has every equation instance imposed, which
    reflects it into models."""
    raw = not check_model(M).ok
    uf = congruence_closure(M, list(pairs), with_equations=raw)
    sig = M.theory.signature
    classes, reps = {}, {}
    for s in sig.sorts:
        n, q = uf[s].classes()
        classes[s] = q
        r: list = [None] * n
        for x, k in enumerate(q):
            if r[k] is None:
                r[k] = x
        reps[s] = r

    def fn(op, args):
        d = sig.ops[op]
        return classes[d.sort][M.apply(op, [reps[s][a] for s, a in zip(d.arity, args)])]

    labels = {s: [M.labels[s][x] for x in reps[s]] for s in sig.sorts}
    Q = model_from_function(M.theory, {s: len(reps[s]) for s in sig.sorts}, fn, labels)
    hom = None if raw else ModelHom(M, Q, classes)
    return Quotient(Q, hom, Congruence(M, classes), classes)


def is_congruence(M: Model, classes: Mapping[str, Sequence[int]]) -> bool:
    sig = M.theory.signature
    for op, d in sig.ops.items():
        seen: dict = {}
        for args in product(*(range(M.carriers[s]) for s in d.arity)):
            key = tuple(classes[s][a] for s, a in zip(d.arity, args))
            r = classes[d.sort][M.apply(op, args)]
            if seen.setdefault(key, r) != r:
                return False
    return True


# ---------------------------------------------------------------- free models


@dataclass
class FreeModel:
    """Normal forms over the generators. ``model`` is set when they are closed
    under the operations; otherwise ``partial`` holds the tables with ``None``
    where a result lies beyond the depth bound."""

    theory: TheoryPresentation
    generators: dict  # sort -> list of generator variables
    terms: dict  # sort -> list of normal forms
    depth: int
    truncated: bool
    model: Model | None
    partial: dict

    def element(self, t: Term) -> int:
        return self._index[t.sort][t]

    def __post_init__(self):
        self._index = {s: {t: i for i, t in enumerate(v)} for s, v in self.terms.items()}

    def unit(self) -> dict:
        """Generator ↦ element."""
        return {v: self.element(v) for vs in self.generators.values() for v in vs}


def _generator_vars(theory, generators) -> dict:
    if isinstance(generators, int) or (isinstance(generators, Sequence) and not isinstance(generators, Mapping)):
        s = theory.signature.single_sort
        if s is None:
            raise ModelError("generators must be given per sort for a many-sorted theory")
        generators = {s: generators}
    out = {s: [] for s in theory.sorts}
    for s, names in generators.items():
        if isinstance(names, int):
            names = [f"g{i}" for i in range(names)]
        out[s] = [Var(str(n), s) for n in names]
    return out


def free_model(theory: TheoryPresentation, generators, depth: int) -> FreeModel:
    """Free model on the generators, exact when its normal forms saturate by
    ``depth``. ``generators`` is a count, a list of names, or a sort-indexed
    mapping of either."""
    gens = _generator_vars(theory, generators)
    variables = [v for s in theory.sorts for v in gens[s]]
    by_sort, closed = theory.normal_forms(variables, depth)
    sig = theory.signature
    index = {s: {t: i for i, t in enumerate(v)} for s, v in by_sort.items()}
    partial = {}
    for op, d in sig.ops.items():
        row = []
        for args in product(*(by_sort[s] for s in d.arity)):
            r = theory.nf(rw.app(sig, op, *args))
            row.append(index[d.sort].get(r))
        partial[op] = row
    model = None
    if closed:
        labels = {s: [rw.show(t) for t in by_sort[s]] for s in theory.sorts}
        model = Model(theory, {s: len(v) for s, v in by_sort.items()}, partial, labels, name="free")
    return FreeModel(theory, gens, by_sort, depth, not closed, model, partial)


# ---------------------------------------------------------------- model enumeration


def enumerate_models(theory: TheoryPresentation, carriers: Mapping[str, int]) -> list[Model]:
    """Every model with the given carrier sizes (labelled, not up to iso).

    Table entries are filled in order; after each choice the equation
    instances whose evaluation became possible are checked.
    """
    sig = theory.signature
    ops = list(sig.ops.items())
    cells = []  # (op, flat index, result sort)
    for op, d in ops:
        n = prod(carriers[s] for s in d.arity)
        cells.extend((op, i, d.sort) for i in range(n))
    if any(carriers[d.sort] == 0 and prod(carriers[s] for s in d.arity) > 0 for _, d in ops):
        return []
    tables = {op: [-1] * prod(carriers[s] for s in d.arity) for op, d in ops}
    strides = {op: _strides([carriers[s] for s in d.arity]) for op, d in ops}
    instances = []
    for eq in theory.equations():
        vs = sorted(rw.variables(eq.lhs) | rw.variables(eq.rhs), key=lambda v: (v.name, v.sort))
        for vals in product(*(range(carriers[v.sort]) for v in vs)):
            instances.append((eq, dict(zip(vs, vals))))
    arity = {op: len(d.arity) for op, d in ops}

    def ev(t, env):
        if isinstance(t, Var):
            return env[t]
        vals = []
        for a in t.args:
            v = ev(a, env)
            if v < 0:
                return -1
            vals.append(v)
        if len(vals) > arity[t.op]:
            out = vals[-1]
            for v in reversed(vals[:-1]):
                out = tables[t.op][v * strides[t.op][0] + out * strides[t.op][1]]
                if out < 0:
                    return -1
            return out
        i = sum(v * st for v, st in zip(vals, strides[t.op]))
        return tables[t.op][i]

    found = []

    def go(k, pending):
        still = []
        for inst in pending:
            eq, env = inst
            a = ev(eq.lhs, env)
            if a < 0:
                still.append(inst)
                continue
            b = ev(eq.rhs, env)
            if b < 0:
                still.append(inst)
                continue
            if a != b:
                return
        if k == len(cells):
            found.append({op: tuple(t) for op, t in tables.items()})
            return
        op, i, s = cells[k]
        for v in range(carriers[s]):
            tables[op][i] = v
            go(k + 1, still)
        tables[op][i] = -1

    go(0, instances)
    return [Model(theory, carriers, t, check=False) for t in found]


def canonical_key(M: Model):
    """Smallest table key over all relabellings: equal keys iff isomorphic."""
    sig = M.theory.signature
    best = None
    for perms in product(*(permutations(range(M.carriers[s])) for s in sig.sorts)):
        p = dict(zip(sig.sorts, perms))
        key = []
        for op, d in sig.ops.items():
            row = [0] * len(M.tables[op])
            st = M._strides[op]
            for args in product(*(range(M.carriers[s]) for s in d.arity)):
                i = sum(p[s][a] * k for s, a, k in zip(d.arity, args, st))
                row[i] = p[d.sort][M.apply(op, args)]
            key.append(tuple(row))
        key = tuple(key)
        if best is None or key < best:
            best = key
    return tuple(M.carriers[s] for s in sig.sorts), best


def models_up_to(theory: TheoryPresentation, bound: int, up_to_iso: bool = True, max_models: int | None = None):
    """Models with every carrier of size ``1..bound`` (and empty carriers where
    no constant forces an element); returns ``(models, capped)``."""
    sig = theory.signature
    sizes = range(0, bound + 1)
    out, keys = [], set()
    for vec in sorted(product(sizes, repeat=len(sig.sorts)), key=lambda v: (sum(v), v)):
        carriers = dict(zip(sig.sorts, vec))
        for M in enumerate_models(theory, carriers):
            if up_to_iso:
                k = canonical_key(M)
                if k in keys:
                    continue
                keys.add(k)
            out.append(M)
            if max_models is not None and len(out) >= max_models:
                return out, True
    return out, False


# ---------------------------------------------------------------- algebraic functors and adjoints


def restrict_model(G: TheoryMorphism, B: Model) -> Model:
    """``G*B``: the source theory acting on ``B`` through the translated operations."""
    S = G.source
    sig = S.signature
    carriers = {s: B.carriers[G.sort_map[s]] for s in S.sorts}
    labels = {s: B.labels[G.sort_map[s]] for s in S.sorts}

    def fn(op, args):
        d = sig.ops[op]
        env = {Var(f"x{i + 1}", G.sort_map[s]): a for i, (s, a) in enumerate(zip(d.arity, args))}
        return B.eval(G.op_map[op], env)

    return model_from_function(S, carriers, fn, labels, name=f"G*{B.name}", check=False)


@dataclass
class Certificate:
    bound: int
    models_checked: int
    capped: bool
    bijective: bool
    natural: bool
    naturality_checks: int
    failure: dict | None = None

    @property
    def ok(self) -> bool:
        return self.bijective and self.natural


@dataclass
class AdjointResult:
    model: Model
    unit: ModelHom  # A -> G*(model)
    certificate: Certificate | None
    depth: int
    generators: dict  # (sort, element of A) -> generator variable


def _present(G: TheoryMorphism, A: Model, depth: int):
    """Normal forms over generators for A's elements, identified by A's
    operation instances and closed as a congruence on the partial tables."""
    T = G.target
    sig = T.signature
    gens = {}
    for s in G.source.sorts:
        for x in range(A.carriers[s]):
            gens[s, x] = Var(f"[{A.labels[s][x]}]", G.sort_map[s])
    variables = sorted(set(gens.values()), key=rw.term_key)
    by_sort, _ = T.normal_forms(variables, depth)
    terms = [t for s in T.sorts for t in by_sort[s]]
    index = {t: i for i, t in enumerate(terms)}
    uf = finset.UnionFind(len(terms))
    entries = []
    for op, d in sig.ops.items():
        for args in product(*(by_sort[s] for s in d.arity)):
            r = index.get(T.nf(rw.app(sig, op, *args)))
            if r is not None:
                entries.append((op, tuple(index[a] for a in args), r))
    for op, d in G.source.signature.ops.items():
        for args in product(*(range(A.carriers[s]) for s in d.arity)):
            env = {f"x{i + 1}": gens[s, a] for i, (s, a) in enumerate(zip(d.arity, args))}
            t = T.nf(rw.substitute(sig, G.op_map[op], env))
            if t not in index:
                return None
            uf.union(index[t], index[gens[d.sort, A.apply(op, args)]])
    changed = True
    while changed:
        changed = False
        seen: dict = {}
        for op, args, r in entries:
            key = (op, tuple(uf.find(a) for a in args))
            if key in seen:
                changed |= uf.union(seen[key], r)
            else:
                seen[key] = r
    n, q = uf.classes()
    # per sort numbering of classes
    sort_of = [t.sort for t in terms]
    per_sort: dict = {s: [] for s in T.sorts}
    local = {}
    for i, k in enumerate(q):
        if k not in local:
            local[k] = len(per_sort[sort_of[i]])
            per_sort[sort_of[i]].append(i)
    tables = {}
    table_map = {}
    for op, args, r in entries:
        table_map[op, tuple(local[q[a]] for a in args)] = local[q[r]]
    for op, d in sig.ops.items():
        row = []
        for key in product(*(range(len(per_sort[s])) for s in d.arity)):
            v = table_map.get((op, key))
            if v is None:
                return None
            row.append(v)
        tables[op] = row
    labels = {s: [rw.show(terms[i]) for i in per_sort[s]] for s in T.sorts}
    Q = Model(T, {s: len(v) for s, v in per_sort.items()}, tables, labels, name="Lan")
    unit = {s: [local[q[index[gens[s, x]]]] for x in range(A.carriers[s])] for s in G.source.sorts}
    return Q, unit, gens


def left_adjoint_algebraic(
    G: TheoryMorphism,
    A: Model,
    depth: int = 4,
    bound: int | None = DEFAULT_CERT_BOUND,
    max_models: int = DEFAULT_MAX_MODELS,
    naturality: bool = True,
) -> AdjointResult:
    """The free target model on ``A`` along ``G``, with a certificate of the
    bijection ``hom_T(result, B) ≅ hom_S(A, G*B)`` over every target model
    ``B`` with carriers of size at most ``bound`` (``None`` skips it).

    Depths ``0..depth`` are tried in turn until the generated congruence
    closes up into a total model; otherwise :class:`Truncated` is raised.
    """
    found = None
    for d in range(depth + 1):
        found = _present(G, A, d)
        if found is not None:
            break
    if found is None:
        raise Truncated(f"no finite presentation closed up by depth {depth}")
    Q, unit_maps, gens = found
    unit = ModelHom(A, restrict_model(G, Q), unit_maps)
    cert = certify_adjoint(G, A, Q, unit, bound, max_models, naturality) if bound is not None else None
    return AdjointResult(Q, unit, cert, d, gens)


def certify_adjoint(G, A, Q, unit, bound, max_models=DEFAULT_MAX_MODELS, naturality=True) -> Certificate:
    models, capped = models_up_to(G.target, bound, up_to_iso=True, max_models=max_models)
    transposes = {}
    for k, B in enumerate(models):
        GB = restrict_model(G, B)
        left = hom_models(Q, B)
        right = hom_models(A, GB)
        image = [ModelHom(A, GB, unit.then(ModelHom(unit.target, GB, phi.maps, check=False)).maps) for phi in left]
        keys = [h.key() for h in image]
        if len(set(keys)) != len(keys) or set(keys) != {h.key() for h in right}:
            return Certificate(bound, k + 1, capped, False, False, 0, {"model": B, "left": len(left), "right": len(right)})
        transposes[k] = (B, GB, left, {h.key(): phi for h, phi in zip(image, left)})
    checks = 0
    if naturality:
        for k1, (B1, GB1, left1, _) in transposes.items():
            for k2, (B2, GB2, _, back2) in transposes.items():
                for beta in hom_models(B1, B2):
                    for phi in left1:
                        # transpose of (beta ∘ phi) == G*beta ∘ transpose of phi
                        lhs = unit.then(ModelHom(unit.target, GB2, phi.then(beta).maps, check=False))
                        rhs = unit.then(ModelHom(unit.target, GB1, phi.maps, check=False)).then(
                            ModelHom(GB1, GB2, beta.maps, check=False)
                        )
                        checks += 1
                        if lhs.key() != rhs.key() or back2.get(lhs.key()) != phi.then(beta):
                            return Certificate(
                                bound, len(models), capped, True, False, checks, {"models": (k1, k2)}
                            )
    return Certificate(bound, len(models), capped, True, True, checks)
