"""Many-sorted terms and rewriting modulo associativity-commutativity.

Terms built through :func:`app` are kept in canonical form: arguments of an
associative-commutative (AC) operation are flattened, the unit (if declared)
is dropped, and the remaining arguments are sorted by :func:`term_key`. So an
AC application may carry any number (>= 2) of arguments internally; it prints
as the right-nested binary term.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from itertools import product
from typing import Iterable, Iterator, Mapping

DEFAULT_BUDGET = 10_000


class RewriteError(ValueError):
    pass


class SortMismatch(RewriteError):
    pass


class UnboundVariable(RewriteError):
    pass


class ParseError(RewriteError):
    pass


class UnorientableRule(RewriteError):
    pass


class BudgetExceeded(RuntimeError):
    def __init__(self, partial, steps):
        super().__init__(f"rewrite budget exhausted after {steps} steps")
        self.partial = partial
        self.steps = steps


# ---------------------------------------------------------------- terms


class Term:
    __slots__ = ()


class Var(Term):
    __slots__ = ("name", "sort", "_hash")

    def __init__(self, name: str, sort: str):
        self.name = name
        self.sort = sort
        self._hash = hash(("v", name, sort))

    def __eq__(self, other):
        return self is other or (isinstance(other, Var) and self.name == other.name and self.sort == other.sort)

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return self.name


class App(Term):
    __slots__ = ("op", "args", "sort", "_hash", "_key", "depth")

    def __init__(self, op: str, args: tuple, sort: str, depth: int):
        self.op = op
        self.args = args
        self.sort = sort
        self.depth = depth
        self._hash = hash((op, args))
        self._key = None

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, App) and self._hash == other._hash and self.op == other.op and self.args == other.args

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return show(self)


def depth(t: Term) -> int:
    return 0 if isinstance(t, Var) else t.depth


def term_key(t: Term):
    """Total order on terms: depth, then variables before applications, then
    names, arity and children."""
    if isinstance(t, Var):
        return (0, 0, t.name, t.sort, ())
    if t._key is None:
        t._key = (t.depth, 1, t.op, len(t.args), tuple(term_key(a) for a in t.args))
    return t._key


def variables(t: Term) -> set[Var]:
    if isinstance(t, Var):
        return {t}
    out: set = set()
    for a in t.args:
        out |= variables(a)
    return out


def size(t: Term) -> int:
    return 1 if isinstance(t, Var) else 1 + sum(size(a) for a in t.args)


# ---------------------------------------------------------------- signatures


@dataclass(frozen=True)
class OpDecl:
    name: str
    arity: tuple
    sort: str


class Signature:
    """Sorts, operations ``name: s1 ... sn -> s`` and AC declarations
    ``ac[op] = unit`` (the unit is a constant name or ``None``)."""

    def __init__(self, sorts, ops: Iterable[OpDecl], ac: Mapping[str, str | None] | None = None):
        self.sorts = tuple(sorts)
        self.ops: dict[str, OpDecl] = {}
        for d in ops:
            if d.name in self.ops:
                raise RewriteError(f"operation {d.name!r} declared twice")
            for s in (*d.arity, d.sort):
                if s not in self.sorts:
                    raise SortMismatch(f"operation {d.name!r} uses unknown sort {s!r}")
            self.ops[d.name] = OpDecl(d.name, tuple(d.arity), d.sort)
        self.ac = dict(ac or {})
        for op, unit in self.ac.items():
            d = self.ops.get(op)
            if d is None or len(d.arity) != 2 or d.arity[0] != d.arity[1] or d.arity[0] != d.sort:
                raise RewriteError(f"AC operation {op!r} must be binary on a single sort")
            if unit is not None:
                u = self.ops.get(unit)
                if u is None or u.arity or u.sort != d.sort:
                    raise RewriteError(f"unit {unit!r} of {op!r} must be a constant of sort {d.sort!r}")
        self._units = {u: op for op, u in self.ac.items() if u is not None}

    @property
    def single_sort(self) -> str | None:
        return self.sorts[0] if len(self.sorts) == 1 else None

    def constants(self, sort: str | None = None) -> list[str]:
        return [d.name for d in self.ops.values() if not d.arity and (sort is None or d.sort == sort)]

    def __eq__(self, other):
        return (
            isinstance(other, Signature)
            and self.sorts == other.sorts
            and self.ops == other.ops
            and self.ac == other.ac
        )

    def __repr__(self):
        return f"<Signature {len(self.sorts)} sorts, {len(self.ops)} ops>"


def _ac_depth(args) -> int:
    # depth of the right-nested binary term op(a1, op(a2, ... op(a_{k-1}, a_k)))
    k = len(args)
    d = k - 1 + depth(args[-1])
    for i, a in enumerate(args[:-1], start=1):
        d = max(d, i + depth(a))
    return d


def app(sig: Signature, op: str, *args: Term) -> Term:
    """Sort-checked application, returned in canonical form."""
    d = sig.ops.get(op)
    if d is None:
        raise RewriteError(f"unknown operation {op!r}")
    if op in sig.ac:
        if len(args) < 2:
            if len(args) == 1 and args[0].sort == d.sort:
                return args[0]
            if not args and sig.ac[op] is not None:
                return app(sig, sig.ac[op])
            raise SortMismatch(f"{op!r} applied to {len(args)} arguments")
        for a in args:
            if a.sort != d.sort:
                raise SortMismatch(f"argument of sort {a.sort!r} passed to {op!r}")
        return _ac_build(sig, op, args)
    if len(args) != len(d.arity):
        raise SortMismatch(f"{op!r} takes {len(d.arity)} arguments, got {len(args)}")
    for a, s in zip(args, d.arity):
        if a.sort != s:
            raise SortMismatch(f"argument of sort {a.sort!r} where {op!r} expects {s!r}")
    return App(op, tuple(args), d.sort, 1 + max((depth(a) for a in args), default=-1))


def _ac_build(sig: Signature, op: str, args) -> Term:
    unit = sig.ac[op]
    flat = []
    for a in args:
        if isinstance(a, App) and a.op == op:
            flat.extend(a.args)
        elif not (isinstance(a, App) and a.op == unit and not a.args):
            flat.append(a)
    if not flat:
        return App(unit, (), sig.ops[op].sort, 0)
    if len(flat) == 1:
        return flat[0]
    flat.sort(key=term_key)
    flat = tuple(flat)
    return App(op, flat, sig.ops[op].sort, _ac_depth(flat))


def rebuild(sig: Signature, t: App, args) -> Term:
    """``t`` with its arguments replaced (and re-canonicalized)."""
    if t.op in sig.ac:
        return _ac_build(sig, t.op, args)
    args = tuple(args)
    if args == t.args:
        return t
    return App(t.op, args, t.sort, 1 + max((depth(a) for a in args), default=-1))


def canonical(sig: Signature, t: Term) -> Term:
    if isinstance(t, Var):
        return t
    return rebuild(sig, t, [canonical(sig, a) for a in t.args])


def substitute(sig: Signature, t: Term, binding: Mapping[Var | str, Term]) -> Term:
    """Simultaneous substitution; ``binding`` may be keyed by variables or names."""
    if isinstance(t, Var):
        s = binding.get(t, binding.get(t.name))
        if s is None:
            raise UnboundVariable(f"no binding for {t.name}")
        if s.sort != t.sort:
            raise SortMismatch(f"{t.name}: {t.sort} bound to a term of sort {s.sort}")
        return s
    return rebuild(sig, t, [substitute(sig, a, binding) for a in t.args])


def _subst(sig, t, sigma):
    # substitution that leaves unbound variables alone
    if isinstance(t, Var):
        return sigma.get(t, t)
    return rebuild(sig, t, [_subst(sig, a, sigma) for a in t.args])


# ---------------------------------------------------------------- printing and parsing


def show(t: Term) -> str:
    """Prefix syntax; AC applications print right-nested binary."""
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.op
    if len(t.args) > 2:
        inner = show(t.args[-1])
        for a in reversed(t.args[:-1]):
            inner = f"{t.op}({show(a)},{inner})"
        return inner
    return f"{t.op}(" + ",".join(show(a) for a in t.args) + ")"


_TOKEN = re.compile(r"\s*(?:([A-Za-z_@][A-Za-z0-9_'@.]*)|(.))")


def _tokens(text: str):
    pos = 0
    out = []
    text = text.rstrip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m:
            break
        if m.group(1):
            out.append(m.group(1))
        elif m.group(2) in "(),":
            out.append(m.group(2))
        else:
            raise ParseError(f"unexpected character {m.group(2)!r} in {text!r}")
        pos = m.end()
    return out


def parse_term(sig: Signature, text: str, var_sorts: dict | None = None, sort: str | None = None) -> Term:
    """Parse prefix syntax. Identifiers that are not operations are variables;
    their sorts are inferred from position and recorded in ``var_sorts``."""
    var_sorts = {} if var_sorts is None else var_sorts
    toks = _tokens(text)
    pos = 0

    def parse(expected):
        nonlocal pos
        if pos >= len(toks):
            raise ParseError(f"unexpected end of {text!r}")
        name = toks[pos]
        if name in "(),":
            raise ParseError(f"unexpected {name!r} in {text!r}")
        pos += 1
        if name in sig.ops:
            args = []
            if pos < len(toks) and toks[pos] == "(":
                pos += 1
                if toks[pos:pos + 1] == [")"]:
                    pos += 1
                else:
                    while True:
                        args.append(None)
                        args[-1] = parse(_arg_sort(sig, name, len(args) - 1))
                        if pos < len(toks) and toks[pos] == ",":
                            pos += 1
                            continue
                        if pos < len(toks) and toks[pos] == ")":
                            pos += 1
                            break
                        raise ParseError(f"expected ',' or ')' in {text!r}")
            t = app(sig, name, *args)
            if expected is not None and t.sort != expected:
                raise SortMismatch(f"{name!r} has sort {t.sort!r}, expected {expected!r}")
            return t
        s = var_sorts.get(name) or expected or sig.single_sort
        if s is None:
            raise SortMismatch(f"cannot infer the sort of variable {name!r}")
        if expected is not None and s != expected:
            raise SortMismatch(f"variable {name!r} used at sorts {s!r} and {expected!r}")
        var_sorts[name] = s
        return Var(name, s)

    t = parse(sort)
    if pos != len(toks):
        raise ParseError(f"trailing input in {text!r}")
    return t


def _arg_sort(sig, op, i):
    d = sig.ops[op]
    if op in sig.ac:
        return d.sort
    if i >= len(d.arity):
        raise SortMismatch(f"too many arguments for {op!r}")
    return d.arity[i]


# ---------------------------------------------------------------- rules and matching


@dataclass(frozen=True)
class Rule:
    lhs: Term
    rhs: Term
    name: str = ""

    def __str__(self):
        return f"{show(self.lhs)} -> {show(self.rhs)}"


def parse_rule(sig: Signature, text: str, name: str = "") -> Rule:
    if "->" not in text:
        raise ParseError(f"rule {text!r} has no '->'")
    left, right = text.split("->", 1)
    var_sorts: dict = {}
    lhs = parse_term(sig, left, var_sorts)
    rhs = parse_term(sig, right, var_sorts, sort=lhs.sort if isinstance(lhs, App) else None)
    if isinstance(lhs, Var) and isinstance(rhs, App) and lhs.sort != rhs.sort:
        raise SortMismatch(f"rule {text!r} relates different sorts")
    return Rule(lhs, rhs, name)


def _remove(pool: tuple, items) -> tuple | None:
    """``pool`` minus the multiset ``items`` (both sorted), or ``None``."""
    rest = list(pool)
    for x in items:
        try:
            rest.remove(x)
        except ValueError:
            return None
    return tuple(rest)


def _pieces(sig, op, t):
    return t.args if isinstance(t, App) and t.op == op else (t,)


def match(sig: Signature, pat: Term, t: Term, sigma: dict | None = None) -> Iterator[dict]:
    """All substitutions ``σ ⊇ sigma`` with ``pat σ = t`` modulo AC."""
    sigma = {} if sigma is None else sigma
    if isinstance(pat, Var):
        bound = sigma.get(pat)
        if bound is None:
            if pat.sort == t.sort:
                s = dict(sigma)
                s[pat] = t
                yield s
        elif bound == t:
            yield sigma
        return
    if not isinstance(t, App) or t.op != pat.op:
        return
    if pat.op in sig.ac:
        for s, rest in match_ac(sig, pat, t.args, sigma):
            if not rest:
                yield s
        return
    if len(pat.args) != len(t.args):
        return
    yield from _match_seq(sig, pat.args, t.args, sigma)


def _match_seq(sig, pats, ts, sigma):
    if not pats:
        yield sigma
        return
    for s in match(sig, pats[0], ts[0], sigma):
        yield from _match_seq(sig, pats[1:], ts[1:], s)


def match_ac(sig: Signature, pat: App, args: tuple, sigma: dict) -> Iterator[tuple[dict, tuple]]:
    """Match the AC pattern ``pat`` against a sub-multiset of ``args``; yields
    the substitution and the unmatched arguments."""
    op = pat.op
    rigid = [p for p in pat.args if not isinstance(p, Var)]
    flexible = [p for p in pat.args if isinstance(p, Var)]
    seen = set()
    for s, rest in _match_rigid(sig, rigid, args, sigma):
        for s2, rest2 in _match_flexible(sig, op, flexible, rest, s):
            key = (tuple(sorted((v.name, show(x)) for v, x in s2.items())), rest2)
            if key not in seen:
                seen.add(key)
                yield s2, rest2


def _match_rigid(sig, pats, pool, sigma):
    if not pats:
        yield sigma, pool
        return
    p = pats[0]
    tried = set()
    for i, t in enumerate(pool):
        if t in tried:
            continue
        tried.add(t)
        for s in match(sig, p, t, sigma):
            yield from _match_rigid(sig, pats[1:], pool[:i] + pool[i + 1:], s)


def _match_flexible(sig, op, vars_, pool, sigma):
    if not vars_:
        yield sigma, pool
        return
    v = vars_[0]
    bound = sigma.get(v)
    if bound is not None:
        rest = _remove(pool, _pieces(sig, op, bound))
        if rest is not None:
            yield from _match_flexible(sig, op, vars_[1:], rest, sigma)
        return
    # bind v to each non-empty sub-multiset of the pool
    n = len(pool)
    seen = set()
    for mask in range(1, 1 << n):
        chosen = tuple(pool[i] for i in range(n) if mask >> i & 1)
        if chosen in seen:
            continue
        seen.add(chosen)
        value = chosen[0] if len(chosen) == 1 else _ac_build(sig, op, chosen)
        if value.sort != v.sort:
            continue
        s = dict(sigma)
        s[v] = value
        rest = tuple(pool[i] for i in range(n) if not mask >> i & 1)
        yield from _match_flexible(sig, op, vars_[1:], rest, s)


# ---------------------------------------------------------------- rewrite systems


@dataclass
class Step:
    rule: int
    redex: Term
    contractum: Term


@dataclass
class NormalForm:
    term: Term
    steps: int
    trace: list = field(default_factory=list)


class RewriteSystem:
    """Oriented rules over a signature. Rules are checked for sorts and the
    variable condition; rules made trivial by AC canonicalization (such as
    the unit laws of an AC operation with declared unit) are dropped and
    listed in ``absorbed``."""

    def __init__(self, sig: Signature, rules: Iterable[Rule]):
        self.sig = sig
        self.rules: list[Rule] = []
        self.absorbed: list[Rule] = []
        for r in rules:
            lhs, rhs = canonical(sig, r.lhs), canonical(sig, r.rhs)
            if lhs.sort != rhs.sort:
                raise SortMismatch(f"rule {r} relates sorts {lhs.sort} and {rhs.sort}")
            if lhs == rhs:
                self.absorbed.append(r)
                continue
            if isinstance(lhs, Var):
                raise UnorientableRule(f"rule {r}: left-hand side is a variable")
            if not variables(rhs) <= variables(lhs):
                raise UnorientableRule(f"rule {r}: right-hand side has variables not on the left")
            if _is_variant(lhs, rhs):
                raise UnorientableRule(f"rule {r}: both sides are the same up to renaming; declare the operation AC instead")
            self.rules.append(Rule(lhs, rhs, r.name))
        self._index: dict[str, list[int]] = {}
        for i, r in enumerate(self.rules):
            self._index.setdefault(r.lhs.op, []).append(i)
        self._cache: dict[Term, tuple[Term, int]] = {}

    def rules_for(self, op: str) -> list[int]:
        return self._index.get(op, [])

    def root_rewrites(self, t: App) -> Iterator[tuple[int, Term]]:
        """Every one-step rewrite of ``t`` at its root (with AC extension)."""
        sig = self.sig
        for i in self.rules_for(t.op):
            r = self.rules[i]
            if t.op in sig.ac:
                for s, rest in match_ac(sig, r.lhs, t.args, {}):
                    out = _subst(sig, r.rhs, s)
                    yield i, _ac_build(sig, t.op, (out, *rest)) if rest else out
            else:
                for s in match(sig, r.lhs, t):
                    yield i, _subst(sig, r.rhs, s)

    def rewrites(self, t: Term) -> Iterator[tuple[int, Term]]:
        """Every one-step rewrite of ``t`` at any position."""
        if isinstance(t, Var):
            return
        yield from self.root_rewrites(t)
        for k, a in enumerate(t.args):
            for i, a2 in self.rewrites(a):
                yield i, rebuild(self.sig, t, t.args[:k] + (a2,) + t.args[k + 1:])

    def is_normal(self, t: Term) -> bool:
        return next(self.rewrites(t), None) is None

    def is_root_normal(self, t: App) -> bool:
        return next(self.root_rewrites(t), None) is None

    def normalize(self, t: Term, budget: int = DEFAULT_BUDGET, trace: bool = False) -> NormalForm:
        """Innermost-leftmost rewriting to a normal form."""
        steps = [0]
        log: list = [] if trace else None  # type: ignore[assignment]
        out = self._norm(canonical(self.sig, t), budget, steps, log)
        return NormalForm(out, steps[0], log or [])

    def nf(self, t: Term, budget: int = DEFAULT_BUDGET) -> Term:
        # cache keys are canonical, so a hit needs no canonicalization
        hit = self._cache.get(t)
        if hit is not None and hit[1] <= budget:
            return hit[0]
        return self.normalize(t, budget).term

    def _norm(self, t, budget, steps, log):
        if isinstance(t, Var):
            return t
        if log is None:
            hit = self._cache.get(t)
            if hit is not None:
                if steps[0] + hit[1] > budget:
                    raise BudgetExceeded(t, steps[0])
                steps[0] += hit[1]
                return hit[0]
        start = steps[0]
        cur = t
        while True:
            if cur.args:
                args = [self._norm(a, budget, steps, log) for a in cur.args]
                cur = rebuild(self.sig, cur, args)
            if isinstance(cur, Var):
                break
            step = next(self.root_rewrites(cur), None)
            if step is None:
                break
            if steps[0] >= budget:
                raise BudgetExceeded(cur, steps[0])
            steps[0] += 1
            i, nxt = step
            if log is not None:
                log.append(Step(i, cur, nxt))
            cur = nxt
            if isinstance(cur, Var):
                break
        if log is None:
            self._cache[t] = (cur, steps[0] - start)
        return cur

    def replay(self, start: Term, trace: list[Step]) -> Term:
        """Re-check a trace: each step must be a rule instance at some position."""
        cur = canonical(self.sig, start)
        for st in trace:
            if not _occurs_as_redex(self, cur, st):
                raise RewriteError(f"step {st} is not a rule instance in {show(cur)}")
            cur = _replace(self.sig, cur, st.redex, st.contractum)
        return cur


def _occurs_as_redex(R, t, st):
    if t == st.redex:
        return any(i == st.rule and out == st.contractum for i, out in R.root_rewrites(t))
    if isinstance(t, App):
        return any(_occurs_as_redex(R, a, st) for a in t.args)
    return False


def _replace(sig, t, old, new):
    # only the leftmost-innermost occurrence, matching the order of normalization
    done = [False]

    def go(u):
        if done[0] or isinstance(u, Var):
            return u
        args = [go(a) for a in u.args]
        if done[0]:
            return rebuild(sig, u, args)
        if u == old:
            done[0] = True
            return new
        return u

    return go(t)


def _is_variant(a: Term, b: Term) -> bool:
    ren: dict = {}

    def go(x, y):
        if isinstance(x, Var) and isinstance(y, Var):
            if x.sort != y.sort:
                return False
            if ren.setdefault(x, y) != y:
                return False
            return True
        if isinstance(x, App) and isinstance(y, App):
            return x.op == y.op and len(x.args) == len(y.args) and all(go(p, q) for p, q in zip(x.args, y.args))
        return False

    return go(a, b) and len(set(ren.values())) == len(ren)


# ---------------------------------------------------------------- confluence


def _rename(sig, t, suffix):
    if isinstance(t, Var):
        return Var(t.name + suffix, t.sort)
    return rebuild(sig, t, [_rename(sig, a, suffix) for a in t.args])


def _walk(t, sigma):
    while isinstance(t, Var) and t in sigma:
        t = sigma[t]
    return t


def _occurs(v, t, sigma):
    t = _walk(t, sigma)
    if isinstance(t, Var):
        return t == v
    return any(_occurs(v, a, sigma) for a in t.args)


def unify(a: Term, b: Term, sigma: dict | None = None) -> dict | None:
    """Syntactic most general unifier (AC applications compared by arity)."""
    sigma = dict(sigma or {})
    stack = [(a, b)]
    while stack:
        x, y = stack.pop()
        x, y = _walk(x, sigma), _walk(y, sigma)
        if x == y:
            continue
        if isinstance(x, Var) or isinstance(y, Var):
            if not isinstance(x, Var):
                x, y = y, x
            if x.sort != y.sort or _occurs(x, y, sigma):
                return None
            sigma[x] = y
            continue
        if x.op != y.op or len(x.args) != len(y.args):
            return None
        stack.extend(zip(x.args, y.args))
    return sigma


def _resolve(sig, t, sigma):
    if isinstance(t, Var):
        u = _walk(t, sigma)
        return u if isinstance(u, Var) else _resolve(sig, u, sigma)
    return rebuild(sig, t, [_resolve(sig, a, sigma) for a in t.args])


def _positions(t, path=()):
    if isinstance(t, App):
        yield path, t
        for i, a in enumerate(t.args):
            yield from _positions(a, path + (i,))


def _put(sig, t, path, new):
    if not path:
        return new
    i = path[0]
    return rebuild(sig, t, t.args[:i] + (_put(sig, t.args[i], path[1:], new),) + t.args[i + 1:])


@dataclass
class CriticalPair:
    left: Term
    right: Term
    source: str  # description of the overlap or the sampled term

    def __str__(self):
        return f"{show(self.left)} <- {self.source} -> {show(self.right)}"


def critical_pairs(R: RewriteSystem) -> list[tuple[Term, Term, str]]:
    sig = R.sig
    out = []
    for i, r1 in enumerate(R.rules):
        for j, r2 in enumerate(R.rules):
            l2, rhs2 = _rename(sig, r2.lhs, "'"), _rename(sig, r2.rhs, "'")
            for path, sub in _positions(r1.lhs):
                if not path and i == j:
                    continue
                sigma = unify(sub, l2)
                if sigma is None:
                    continue
                peak = _resolve(sig, r1.lhs, sigma)
                a = _resolve(sig, r1.rhs, sigma)
                b = _resolve(sig, _put(sig, r1.lhs, path, rhs2), sigma)
                out.append((a, b, show(peak)))
    return out


def local_confluence_report(R: RewriteSystem, depth: int = 2, budget: int = DEFAULT_BUDGET) -> list[CriticalPair]:
    """Critical pairs whose normal forms differ. With AC operations present,
    every term up to ``depth`` over two variables per sort is also checked:
    all its one-step rewrites must reach the same normal form."""
    bad: list[CriticalPair] = []
    seen = set()

    def record(a, b, src):
        try:
            na, nb = R.nf(a, budget), R.nf(b, budget)
        except BudgetExceeded:
            na, nb = a, b
        if na != nb:
            key = tuple(sorted((show(na), show(nb))))
            if key not in seen:
                seen.add(key)
                bad.append(CriticalPair(na, nb, src))

    for a, b, src in critical_pairs(R):
        record(a, b, src)
    if R.sig.ac:
        context = [Var(f"{v}{i}" if len(R.sig.sorts) > 1 else v, s) for i, s in enumerate(R.sig.sorts) for v in "xy"]
        for t in enumerate_terms(R.sig, context, depth):
            outs = [t2 for _, t2 in R.rewrites(t)]
            for t2 in outs[1:]:
                record(outs[0], t2, show(t))
    return bad


# ---------------------------------------------------------------- enumeration


def enumerate_terms(sig: Signature, context, depth: int, keep=None) -> list[Term]:
    """Canonical terms over ``context`` of depth at most ``depth``, sorted by
    :func:`term_key`. ``keep`` optionally filters terms (it must be closed
    under taking subterms, as irreducibility is)."""
    if depth < 0:
        raise ValueError("depth must be >= 0")
    layers = _layers(sig, context, depth, keep)
    return sorted(layers[-1], key=term_key)


def _layers(sig, context, max_depth, keep=None) -> list[set]:
    level: set = set(context)
    for c in sig.constants():
        t = app(sig, c)
        if keep is None or keep(t):
            level.add(t)
    layers = [level]
    for d in range(1, max_depth + 1):
        prev = layers[-1]
        by_sort: dict = {}
        for t in prev:
            by_sort.setdefault(t.sort, []).append(t)
        new = set(prev)
        for op, decl in sig.ops.items():
            if not decl.arity:
                continue
            for args in product(*(by_sort.get(s, []) for s in decl.arity)):
                t = app(sig, op, *args)
                if depth(t) <= d and t not in new and (keep is None or keep(t)):
                    new.add(t)
        layers.append(new)
    return layers
