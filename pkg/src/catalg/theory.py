"""Finitely presented finite-product theories.

The category of a presentation has sort contexts as objects (a natural number
``m`` stands for ``m`` copies of the single sort) and, as morphisms ``m -> n``,
``n``-tuples of normal forms over the variables ``x1..xm``. Composition is
substitution followed by normalization.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Mapping, Sequence

from . import rewrite as rw
from .rewrite import App, Rule, Signature, Term, Var


class TheoryError(ValueError):
    pass


class NonConfluent(TheoryError):
    def __init__(self, report):
        super().__init__("rules are not locally confluent: " + "; ".join(map(str, report)))
        self.report = report


class UnsafeTheory(TheoryError):
    pass


def raw(sig: Signature, op: str, *args: Term) -> App:
    """An application kept exactly as written (no AC canonicalization); used
    for equations that must be checked literally, such as commutativity."""
    d = sig.ops[op]
    return App(op, tuple(args), d.sort, 1 + max((rw.depth(a) for a in args), default=-1))


@dataclass
class Equation:
    lhs: Term
    rhs: Term
    label: str

    def __str__(self):
        return f"{self.label}: {rw.show(self.lhs)} = {rw.show(self.rhs)}"


class TheoryPresentation:
    """A signature with oriented rules. Loading runs the local confluence
    check; a non-empty report is an error unless ``unsafe`` waives it, in which
    case hom-set computations refuse to run."""

    def __init__(
        self,
        signature: Signature,
        rules: Iterable[Rule],
        name: str = "",
        unsafe: bool = False,
        confluence_depth: int = 2,
    ):
        self.signature = signature
        self.source_rules = list(rules)
        self.system = rw.RewriteSystem(signature, self.source_rules)
        self.name = name
        self.report = rw.local_confluence_report(self.system, confluence_depth)
        if self.report and not unsafe:
            raise NonConfluent(self.report)
        self.unsafe = bool(self.report)
        self._nf_cache: dict = {}

    @property
    def sorts(self) -> tuple:
        return self.signature.sorts

    @property
    def rules(self) -> list[Rule]:
        return self.system.rules

    def nf(self, t: Term, budget: int = rw.DEFAULT_BUDGET) -> Term:
        return self.system.nf(t, budget)

    def context(self, ctx) -> tuple:
        """Normalize a context given as a count or a list of sorts."""
        if isinstance(ctx, int):
            s = self.signature.single_sort
            if s is None:
                raise TheoryError("a numeric context needs a single-sorted theory")
            return (s,) * ctx
        ctx = tuple(ctx)
        for s in ctx:
            if s not in self.sorts:
                raise TheoryError(f"unknown sort {s!r}")
        return ctx

    def variables(self, ctx) -> list[Var]:
        return [Var(f"x{i + 1}", s) for i, s in enumerate(self.context(ctx))]

    def equations(self) -> list[Equation]:
        """Rules plus the AC laws, as equations to check in models."""
        sig = self.signature
        out = [Equation(r.lhs, r.rhs, f"rule {i + 1}") for i, r in enumerate(self.rules)]
        for op, unit in sig.ac.items():
            s = sig.ops[op].sort
            x, y, z = Var("x", s), Var("y", s), Var("z", s)
            out.append(Equation(raw(sig, op, x, y), raw(sig, op, y, x), f"{op} commutative"))
            out.append(
                Equation(raw(sig, op, raw(sig, op, x, y), z), raw(sig, op, x, raw(sig, op, y, z)), f"{op} associative")
            )
            if unit is not None:
                out.append(Equation(raw(sig, op, x, raw(sig, unit)), x, f"{unit} unit for {op}"))
        return out

    def normal_forms(self, variables: Sequence[Var], depth: int):
        """Normal forms over ``variables`` of depth at most ``depth``, grouped by
        sort, and whether they are all the normal forms (closed under every
        operation up to normalization)."""
        if self.unsafe:
            raise UnsafeTheory(f"theory {self.name!r} was loaded with its confluence check waived")
        key = (tuple(variables), depth)
        hit = self._nf_cache.get(key)
        if hit is None:
            R = self.system
            terms = rw.enumerate_terms(
                self.signature, variables, depth, keep=lambda t: isinstance(t, Var) or R.is_root_normal(t)
            )
            by_sort: dict = {s: [] for s in self.sorts}
            for t in terms:
                by_sort[t.sort].append(t)
            hit = (by_sort, self._closed(terms))
            self._nf_cache[key] = hit
        return hit

    def _closed(self, terms) -> bool:
        sig = self.signature
        have = set(terms)
        by_sort: dict = {}
        for t in terms:
            by_sort.setdefault(t.sort, []).append(t)
        for op, d in sig.ops.items():
            for args in product(*(by_sort.get(s, []) for s in d.arity)):
                if self.nf(rw.app(sig, op, *args)) not in have:
                    return False
        return True

    def __repr__(self):
        return f"<Theory {self.name or '?'}: {len(self.signature.ops)} ops, {len(self.rules)} rules>"


# ---------------------------------------------------------------- homs


@dataclass(frozen=True)
class TheoryHom:
    source: tuple
    target: tuple
    terms: tuple

    def __str__(self):
        return "(" + ", ".join(rw.show(t) for t in self.terms) + ")"


@dataclass
class HomSet:
    source: tuple
    target: tuple
    homs: list
    depth: int
    truncated: bool

    def __len__(self):
        return len(self.homs)

    def index(self) -> dict:
        return {h.terms: i for i, h in enumerate(self.homs)}


def hom_enumerate(T: TheoryPresentation, m, n, depth: int) -> HomSet:
    """Every ``n``-tuple of normal forms of depth at most ``depth`` over the
    variables of ``m``, in canonical order."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    src, tgt = T.context(m), T.context(n)
    by_sort, closed = T.normal_forms(T.variables(src), depth)
    homs = [TheoryHom(src, tgt, ts) for ts in product(*(by_sort[s] for s in tgt))]
    return HomSet(src, tgt, homs, depth, truncated=not closed and bool(tgt))


def identity_hom(T: TheoryPresentation, m) -> TheoryHom:
    ctx = T.context(m)
    return TheoryHom(ctx, ctx, tuple(T.variables(ctx)))


def make_hom(T: TheoryPresentation, m, terms: Sequence[str | Term]) -> TheoryHom:
    """A hom from text or terms over ``x1..xm``, normalized."""
    src = T.context(m)
    sorts = {v.name: v.sort for v in T.variables(src)}
    out = []
    for t in terms:
        if isinstance(t, str):
            t = rw.parse_term(T.signature, t, dict(sorts))
        for v in rw.variables(t):
            if sorts.get(v.name) != v.sort:
                raise TheoryError(f"variable {v.name} is not in the source context")
        out.append(T.nf(t))
    return TheoryHom(src, tuple(t.sort for t in out), tuple(out))


def compose_hom(T: TheoryPresentation, f: TheoryHom, g: TheoryHom, budget: int = rw.DEFAULT_BUDGET) -> TheoryHom:
    """``g ∘ f`` for ``f: m -> n`` and ``g: n -> k``: substitute ``f`` into ``g``."""
    if f.target != g.source:
        raise TheoryError(f"cannot compose: {f.target} != {g.source}")
    binding = {v: t for v, t in zip(T.variables(g.source), f.terms)}
    terms = tuple(T.system.nf(rw.substitute(T.signature, t, binding), budget) for t in g.terms)
    return TheoryHom(f.source, g.target, terms)


@dataclass
class ProductVerdict:
    ok: bool
    sizes: tuple  # |hom(k, m+n)|, |hom(k, m)|, |hom(k, n)|
    truncated: bool


def finite_product_check(T: TheoryPresentation, k, m, n, depth: int) -> ProductVerdict:
    """``hom(k, m+n) -> hom(k, m) × hom(k, n)``, splitting tuples, is a bijection."""
    mn = T.context(m) + T.context(n)
    whole = hom_enumerate(T, k, mn, depth)
    left, right = hom_enumerate(T, k, m, depth), hom_enumerate(T, k, n, depth)
    cut = len(T.context(m))
    li, ri = left.index(), right.index()
    seen = set()
    ok = True
    for h in whole.homs:
        a, b = h.terms[:cut], h.terms[cut:]
        if a not in li or b not in ri or (a, b) in seen:
            ok = False
            break
        seen.add((a, b))
    ok = ok and len(seen) == len(left) * len(right)
    return ProductVerdict(ok, (len(whole), len(left), len(right)), whole.truncated or left.truncated or right.truncated)


# ---------------------------------------------------------------- theory morphisms


class TheoryMorphism:
    """Sends each source operation ``op: s1..sk -> s`` to a target term over
    ``x1..xk``; sorts are mapped by ``sort_map`` (identity by default)."""

    def __init__(self, source: TheoryPresentation, target: TheoryPresentation, op_map: Mapping[str, Term | str], sort_map=None):
        self.source = source
        self.target = target
        self.sort_map = dict(sort_map or {s: s for s in source.sorts})
        self.op_map: dict[str, Term] = {}
        for op, d in source.signature.ops.items():
            if op not in op_map:
                raise TheoryError(f"operation {op!r} has no image")
            ctx = [self.sort_map[s] for s in d.arity]
            img = op_map[op]
            if isinstance(img, str):
                img = rw.parse_term(target.signature, img, {f"x{i + 1}": s for i, s in enumerate(ctx)})
            if img.sort != self.sort_map[d.sort]:
                raise rw.SortMismatch(f"image of {op!r} has sort {img.sort!r}")
            allowed = {Var(f"x{i + 1}", s) for i, s in enumerate(ctx)}
            if not rw.variables(img) <= allowed:
                raise TheoryError(f"image of {op!r} uses variables outside x1..x{len(ctx)}")
            self.op_map[op] = img
        extra = set(op_map) - set(source.signature.ops)
        if extra:
            raise TheoryError(f"unknown source operations {sorted(extra)}")

    def translate(self, t: Term) -> Term:
        if isinstance(t, Var):
            return Var(t.name, self.sort_map[t.sort])
        img = self.op_map[t.op]
        args = [self.translate(a) for a in t.args]
        d = self.source.signature.ops[t.op]
        if len(args) > len(d.arity):  # a flattened AC application
            out = args[-1]
            for a in reversed(args[:-1]):
                out = rw.substitute(self.target.signature, img, {"x1": a, "x2": out})
            return out
        return rw.substitute(self.target.signature, img, {f"x{i + 1}": a for i, a in enumerate(args)})

    def on_hom(self, h: TheoryHom) -> TheoryHom:
        terms = tuple(self.target.nf(self.translate(t)) for t in h.terms)
        return TheoryHom(
            tuple(self.sort_map[s] for s in h.source), tuple(self.sort_map[s] for s in h.target), terms
        )


def identity_morphism(T: TheoryPresentation) -> TheoryMorphism:
    sig = T.signature
    op_map = {}
    for op, d in sig.ops.items():
        op_map[op] = raw(sig, op, *(Var(f"x{i + 1}", s) for i, s in enumerate(d.arity)))
    return TheoryMorphism(T, T, op_map)


@dataclass
class MorphismVerdict:
    ok: bool
    witness: tuple | None = None  # (equation, lhs normal form, rhs normal form)

    def __bool__(self):
        return self.ok


def check_theory_morphism(G: TheoryMorphism, budget: int = rw.DEFAULT_BUDGET) -> MorphismVerdict:
    """Every source equation (rules and AC laws) must translate to target terms
    with equal normal forms."""
    for eq in G.source.equations():
        a = G.target.system.nf(G.translate(eq.lhs), budget)
        b = G.target.system.nf(G.translate(eq.rhs), budget)
        if a != b:
            return MorphismVerdict(False, (eq, a, b))
    return MorphismVerdict(True)
