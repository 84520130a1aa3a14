"""The finitary monad of a single-sorted presented theory, and back.

``T(X)`` is the set of normal forms over variables named by ``X``. Elements of
``T(T(X))`` are terms over variables ``@i`` standing for the ``i``-th element
of the slice ``T(X)``; ``μ`` substitutes and normalizes. Everything is cut at
a term depth, and every result says whether the cut lost anything.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from itertools import product
from typing import Mapping, Sequence

from . import rewrite as rw
from .models import Model, enumerate_models, hom_models
from .rewrite import App, Term, Var
from .theory import TheoryError, TheoryPresentation, compose_hom, hom_enumerate, identity_hom


class Escaped(RuntimeError):
    """A result left the depth-bounded slice."""


@dataclass
class Slice:
    """``T(X)`` up to a depth: ``terms`` in canonical order."""

    names: tuple
    terms: list
    index: dict
    depth: int
    saturated: bool

    def __len__(self):
        return len(self.terms)

    def var(self, i: int) -> Var:
        return Var(f"@{i}", self.terms[i].sort)


class TermMonad:
    def __init__(self, theory: TheoryPresentation, depth: int):
        sort = theory.signature.single_sort
        if sort is None:
            raise TheoryError("the term monad needs a single-sorted theory")
        self.theory = theory
        self.sort = sort
        self.depth = depth
        self._slices: dict = {}

    def slice(self, X) -> Slice:
        """``T(X)``; ``X`` is a count (names ``0..n-1``) or a list of names."""
        names = tuple(str(x) for x in (range(X) if isinstance(X, int) else X))
        hit = self._slices.get(names)
        if hit is None:
            hit = self._slices[names] = self._close(names)
        return hit

    def _close(self, names) -> Slice:
        # close the generators under the operations, keeping results within the depth
        T, sig = self.theory, self.theory.signature
        have = {Var(n, self.sort) for n in names}
        have |= {T.nf(rw.app(sig, c)) for c in sig.constants()}
        have = {t for t in have if rw.depth(t) <= self.depth}
        frontier = set(have)
        lost = False
        ops = [(op, len(d.arity)) for op, d in sig.ops.items() if d.arity]
        while frontier:
            new = set()
            pool = sorted(have, key=rw.term_key)
            for op, k in ops:
                for args in product(pool, repeat=k):
                    if not any(a in frontier for a in args):
                        continue
                    t = T.nf(rw.app(sig, op, *args))
                    if t in have or t in new:
                        continue
                    if rw.depth(t) > self.depth:
                        lost = True
                        continue
                    new.add(t)
            have |= new
            frontier = new
        terms = sorted(have, key=rw.term_key)
        return Slice(names, terms, {t: i for i, t in enumerate(terms)}, self.depth, not lost)

    # ---------------------------------------------------------------- structure

    def eta(self, X, x) -> int:
        S = self.slice(X)
        return S.index[Var(str(x), self.sort)]

    def mu(self, X, phi: Term) -> Term:
        """Flatten an element of ``T(T(X))`` (a term over ``@i``)."""
        S = self.slice(X)
        binding = {S.var(i): S.terms[i] for i in _at_indices(phi)}
        return self.theory.nf(rw.substitute(self.theory.signature, phi, binding))

    def fmap(self, f: Mapping, t: Term) -> Term:
        """``T(f)`` on one term: rename variables by ``f`` (name -> term or name) and normalize."""
        binding = {}
        for v in rw.variables(t):
            img = f[v.name]
            binding[v] = img if isinstance(img, Term) else Var(str(img), self.sort)
        return self.theory.nf(rw.substitute(self.theory.signature, t, binding))

    def lookup(self, X, t: Term) -> int:
        S = self.slice(X)
        if t not in S.index:
            raise Escaped(f"{rw.show(t)} is deeper than {self.depth}")
        return S.index[t]

    def kleisli(self, f: Sequence[Term], g: Sequence[Term], X) -> tuple:
        """``g ∘ f`` for ``f`` in ``T(X)^n`` and ``g`` in ``T(n)^k``: apply ``T(f)``
        to land in ``T(T(X))``, then ``μ``. ``n`` is named ``x1..xn``."""
        S = self.slice(X)
        at = {f"x{j + 1}": S.var(self.lookup(X, t)) for j, t in enumerate(f)}
        return tuple(self.mu(X, self.fmap(at, t)) for t in g)


def _at_indices(t: Term) -> set:
    return {int(v.name[1:]) for v in rw.variables(t) if v.name.startswith("@")}


def monad_from_theory(T: TheoryPresentation, depth: int) -> TermMonad:
    return TermMonad(T, depth)


# ---------------------------------------------------------------- monad laws


@dataclass
class LawReport:
    unit_left: bool
    unit_right: bool
    associative: bool
    checked: int
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.unit_left and self.unit_right and self.associative


def _random_term(rng, sig, sort, leaves, depth):
    ops = [d for d in sig.ops.values() if d.sort == sort]
    if depth == 0 or not ops or rng.random() < 0.3:
        consts = [d for d in ops if not d.arity]
        if consts and rng.random() < 0.15:
            return rw.app(sig, rng.choice(consts).name)
        return rng.choice(leaves)
    d = rng.choice(ops)
    return rw.app(sig, d.name, *(_random_term(rng, sig, s, leaves, depth - 1) for s in d.arity))


def check_monad_laws(M: TermMonad, X, samples: int = 200, seed: int = 0) -> LawReport:
    """``μ∘ηT = id`` and ``μ∘Tη = id`` on all of the slice ``T(X)``; ``μ∘μT =
    μ∘Tμ`` on seeded random elements of ``T(T(T(X)))``."""
    S = M.slice(X)
    sig = M.theory.signature
    rep = LawReport(True, True, True, 0)
    for i, t in enumerate(S.terms):
        if M.mu(X, S.var(i)) != t:  # η_T(t) is the variable @i
            rep.unit_left = False
            rep.failures.append(("unit-left", rw.show(t)))
        t_eta = M.fmap({n: S.var(S.index[Var(n, M.sort)]) for n in S.names}, t)
        if M.mu(X, t_eta) != t:
            rep.unit_right = False
            rep.failures.append(("unit-right", rw.show(t)))
        rep.checked += 2
    rng = random.Random(seed)
    leaves1 = [S.var(i) for i in range(len(S))]
    for _ in range(samples if leaves1 else 0):
        # Ψ over "@@j", where the j-th inner element is a term over T(X)
        inner = [_random_term(rng, sig, M.sort, leaves1, 2) for _ in range(3)]
        psi = _random_term(rng, sig, M.sort, [Var(f"@@{j}", M.sort) for j in range(3)], 2)
        # μ ∘ T(μ): flatten each inner element first
        flat_inner = [M.mu(X, phi) for phi in inner]
        a = M.theory.nf(rw.substitute(sig, psi, {Var(f"@@{j}", M.sort): flat_inner[j] for j in range(3)}))
        # μ ∘ μ_T: splice the inner terms into Ψ, then flatten once
        spliced = rw.substitute(sig, psi, {Var(f"@@{j}", M.sort): inner[j] for j in range(3)})
        b = M.mu(X, spliced)
        rep.checked += 1
        if a != b:
            rep.associative = False
            rep.failures.append(("associativity", rw.show(psi)))
    return rep


# ---------------------------------------------------------------- the theory of a monad


class KleisliTheory:
    """``hom(m, n) = T(m)^n`` with Kleisli composition."""

    def __init__(self, monad: TermMonad):
        self.monad = monad

    def context(self, m) -> tuple:
        return tuple(f"x{i + 1}" for i in range(m))

    def hom(self, m: int, n: int) -> list[tuple]:
        S = self.monad.slice(self.context(m))
        return list(product(S.terms, repeat=n))

    def saturated(self, m: int) -> bool:
        return self.monad.slice(self.context(m)).saturated

    def identity(self, m: int) -> tuple:
        return tuple(Var(x, self.monad.sort) for x in self.context(m))

    def compose(self, f: tuple, g: tuple, m: int) -> tuple:
        return self.monad.kleisli(f, g, self.context(m))


def theory_from_monad(M: TermMonad) -> KleisliTheory:
    return KleisliTheory(M)


@dataclass
class RoundtripReport:
    ok: bool
    exact: bool
    sizes: dict  # (m, n) -> (|theory hom|, |monad hom|)
    compositions: int
    failures: list = field(default_factory=list)


def roundtrip_check(
    T: TheoryPresentation, max_arity: int, depth: int, max_pairs: int | None = 2000, seed: int = 0
) -> RoundtripReport:
    """Compare the theory's hom-sets with those of the theory of its monad:
    the canonical bijection must match identities and composition. Pairs of
    composable homs are checked exhaustively up to ``max_pairs`` per triple of
    arities, otherwise on a seeded sample of that many; ``None`` means always
    exhaustively."""
    K = theory_from_monad(monad_from_theory(T, depth))
    rng = random.Random(seed)
    sizes, fails = {}, []
    exact = True
    theory_homs, monad_homs = {}, {}
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            H = hom_enumerate(T, m, n, depth)
            L = K.hom(m, n)
            theory_homs[m, n], monad_homs[m, n] = H.homs, L
            sizes[m, n] = (len(H), len(L))
            exact = exact and not H.truncated and (n == 0 or K.saturated(m))
            if {h.terms for h in H.homs} != set(L) or len(L) != len(set(L)):
                fails.append(("bijection", m, n))
        ident = identity_hom(T, m)
        if ident.terms != K.identity(m):
            fails.append(("identity", m))
    count = 0
    for m in range(max_arity + 1):
        for n in range(max_arity + 1):
            for k in range(max_arity + 1):
                F, G = theory_homs[m, n], theory_homs[n, k]
                total = len(F) * len(G)
                if max_pairs is None or total <= max_pairs:
                    pairs = ((f, g) for f in F for g in G)
                else:
                    pairs = ((rng.choice(F), rng.choice(G)) for _ in range(max_pairs))
                for f, g in pairs:
                    count += 1
                    a = compose_hom(T, f, g).terms
                    b = K.compose(f.terms, g.terms, m)
                    if a != b:
                        fails.append(("composition", str(f), str(g)))
    return RoundtripReport(not fails, exact and not fails, sizes, count, fails)


# ---------------------------------------------------------------- Eilenberg-Moore algebras


@dataclass
class EMAlgebra:
    """A structure map ``a: T(X) -> X`` on the depth-bounded slice, stored as
    the value of each slice element."""

    carrier: int
    values: tuple

    def __call__(self, i: int) -> int:
        return self.values[i]


def _em_constraints(M: TermMonad, X: tuple):
    S = M.slice(X)
    sig = M.theory.signature
    out = []
    for op, d in sig.ops.items():
        if not d.arity:
            continue
        for args in product(range(len(S)), repeat=len(d.arity)):
            L = M.theory.nf(rw.app(sig, op, *(S.terms[i] for i in args)))
            if L in S.index:
                out.append((op, args, S.index[L]))
    return out


def enumerate_em_algebras(M: TermMonad, n: int) -> list[EMAlgebra]:
    """Structure maps ``a`` on ``T(n)`` with ``a∘η = id`` and ``a∘μ = a∘T(a)`` on
    every element ``op([t1], .., [tk])`` of ``T(T(n))`` whose flattening stays
    in the slice. Found by constraint propagation and backtracking."""
    X = tuple(str(i) for i in range(n))
    S = M.slice(X)
    sig = M.theory.signature
    T = M.theory
    N = len(S)
    cons = _em_constraints(M, X)
    watch: list = [[] for _ in range(N)]
    for c in cons:
        for i in set(c[1]):
            watch[i].append(c)
    a = [-1] * N
    trail: list = []
    eq_watch: dict = {}  # pending equalities a(i) = a(j)
    eq_trail: list = []
    rhs_cache: dict = {}

    def rhs(op, vals):
        key = (op, vals)
        r = rhs_cache.get(key)
        if r is None:
            t = T.nf(rw.app(sig, op, *(Var(X[v], M.sort) for v in vals)))
            r = rhs_cache[key] = S.index.get(t, -2)
        return r

    def put(i, v) -> bool:
        stack = [(i, v)]
        while stack:
            i, v = stack.pop()
            if a[i] == v:
                continue
            if a[i] != -1:
                return False
            a[i] = v
            trail.append(i)
            for j in eq_watch.get(i, ()):
                stack.append((j, v))
            for op, args, L in watch[i]:
                vals = tuple(a[k] for k in args)
                if -1 in vals:
                    continue
                R = rhs(op, vals)
                if R == -2:
                    continue
                if a[R] != -1 and a[L] != -1:
                    if a[R] != a[L]:
                        return False
                elif a[R] != -1:
                    stack.append((L, a[R]))
                elif a[L] != -1:
                    stack.append((R, a[L]))
                else:
                    eq_watch.setdefault(L, []).append(R)
                    eq_watch.setdefault(R, []).append(L)
                    eq_trail.append((L, R))
        return True

    def undo(mark, emark):
        while len(trail) > mark:
            a[trail.pop()] = -1
        while len(eq_trail) > emark:
            L, R = eq_trail.pop()
            eq_watch[L].pop()
            eq_watch[R].pop()

    found = []

    def go(start):
        i = start
        while i < N and a[i] != -1:
            i += 1
        if i == N:
            found.append(EMAlgebra(n, tuple(a)))
            return
        for v in range(n):
            mark, emark = len(trail), len(eq_trail)
            if put(i, v):
                go(i + 1)
            undo(mark, emark)

    if all(put(S.index[Var(x, M.sort)], k) for k, x in enumerate(X)):
        go(0)
    return found


def algebra_of_model(M: TermMonad, model: Model) -> EMAlgebra:
    n = model.carriers[M.sort]
    S = M.slice(tuple(str(i) for i in range(n)))
    env = {Var(str(i), M.sort): i for i in range(n)}
    return EMAlgebra(n, tuple(model.eval(t, env) for t in S.terms))


def model_of_algebra(M: TermMonad, alg: EMAlgebra) -> Model:
    """Operation tables read off the structure map: ``op(x⃗) = a(op(x⃗))``."""
    n = alg.carrier
    X = tuple(str(i) for i in range(n))
    S = M.slice(X)
    sig = M.theory.signature
    tables = {}
    for op, d in sig.ops.items():
        row = []
        for args in product(range(n), repeat=len(d.arity)):
            t = M.theory.nf(rw.app(sig, op, *(Var(X[x], M.sort) for x in args)))
            row.append(alg(S.index[t]))
        tables[op] = row
    return Model(M.theory, {M.sort: n}, tables, check=False)


def algebra_maps(M: TermMonad, A: EMAlgebra, B: EMAlgebra) -> list[tuple]:
    """Functions ``h`` with ``h∘a = b∘T(h)`` on every slice element whose image
    under ``T(h)`` stays in the slice."""
    SA = M.slice(tuple(str(i) for i in range(A.carrier)))
    SB = M.slice(tuple(str(i) for i in range(B.carrier)))
    out = []
    for h in product(range(B.carrier), repeat=A.carrier):
        ren = {str(i): str(h[i]) for i in range(A.carrier)}
        ok = True
        for i, t in enumerate(SA.terms):
            j = SB.index.get(M.fmap(ren, t))
            if j is not None and h[A(i)] != B(j):
                ok = False
                break
        if ok:
            out.append(h)
    return out


@dataclass
class EMReport:
    ok: bool
    counts: dict  # carrier size -> (models, algebras)
    hom_pairs: int
    failures: list = field(default_factory=list)


def em_model_correspondence(T: TheoryPresentation, max_carrier: int, depth: int = 2) -> EMReport:
    """Models on ``n`` elements against EM algebras on ``n`` elements, for
    ``1 <= n <= max_carrier``: the two passages must be mutually inverse, and
    model homomorphisms must be exactly the algebra maps."""
    M = monad_from_theory(T, depth)
    counts, fails = {}, []
    pairs = []
    for n in range(1, max_carrier + 1):
        models = enumerate_models(T, {M.sort: n})
        algebras = enumerate_em_algebras(M, n)
        counts[n] = (len(models), len(algebras))
        from_models = [algebra_of_model(M, A) for A in models]
        if sorted(a.values for a in from_models) != sorted(a.values for a in algebras):
            fails.append(("algebras", n))
        for A, alg in zip(models, from_models):
            if model_of_algebra(M, alg) != A:
                fails.append(("model-roundtrip", n))
        for alg in algebras:
            if algebra_of_model(M, model_of_algebra(M, alg)).values != alg.values:
                fails.append(("algebra-roundtrip", n))
        pairs.extend(zip(models, from_models))
    for A, a in pairs:
        for B, b in pairs:
            homs = {h.maps[M.sort] for h in hom_models(A, B)}
            maps = set(algebra_maps(M, a, b))
            if homs != maps:
                fails.append(("homs", A.carriers[M.sort], B.carriers[M.sort]))
    return EMReport(not fails, counts, len(pairs) ** 2, fails)
