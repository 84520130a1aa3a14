"""Finite sets as ranges ``0..n-1`` and the few set-level constructions the
rest of the package is built on: quotients, colimits and limits of finite
diagrams of sets, and bijection tests.

A function ``f: m -> n`` is a tuple of length ``m`` with entries in ``range(n)``.
"""

from __future__ import annotations

from itertools import product
from typing import Iterable, Mapping, Sequence


class UnionFind:
    """Union-find over ``range(n)`` with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, x: int, y: int) -> bool:
        x, y = self.find(x), self.find(y)
        if x == y:
            return False
        if self.size[x] < self.size[y]:
            x, y = y, x
        self.parent[y] = x
        self.size[x] += self.size[y]
        return True

    def classes(self) -> tuple[int, tuple[int, ...]]:
        """Return ``(k, q)`` where ``q[x]`` is the class of ``x`` in ``range(k)``.

        Classes are numbered by their least element, so the result depends
        only on the partition and not on the order of unions.
        """
        label: dict[int, int] = {}
        q = []
        for x in range(len(self.parent)):
            r = self.find(x)
            if r not in label:
                label[r] = len(label)
            q.append(label[r])
        return len(label), tuple(q)


def compose(g: Sequence[int], f: Sequence[int]) -> tuple[int, ...]:
    """``g ∘ f``."""
    return tuple(g[x] for x in f)


def identity(n: int) -> tuple[int, ...]:
    return tuple(range(n))


def is_injective(f: Sequence[int]) -> bool:
    return len(set(f)) == len(f)


def is_bijection(f: Sequence[int], n: int) -> bool:
    return len(f) == n and sorted(f) == list(range(n))


def inverse(f: Sequence[int]) -> tuple[int, ...]:
    inv = [0] * len(f)
    for x, y in enumerate(f):
        inv[y] = x
    return tuple(inv)


def all_functions(m: int, n: int) -> Iterable[tuple[int, ...]]:
    return product(range(n), repeat=m)


def colimit(objects: Sequence, sizes: Mapping, maps: Iterable) -> tuple[int, dict]:
    """Colimit of a finite diagram of finite sets.

    ``maps`` yields ``(j, k, f)`` with ``f: sizes[j] -> sizes[k]``. Returns the
    size of the colimit and the coprojections ``{j: tuple}``.
    """
    offset = {}
    total = 0
    for j in objects:
        offset[j] = total
        total += sizes[j]
    uf = UnionFind(total)
    for j, k, f in maps:
        oj, ok = offset[j], offset[k]
        for x, y in enumerate(f):
            uf.union(oj + x, ok + y)
    n, q = uf.classes()
    return n, {j: q[offset[j]:offset[j] + sizes[j]] for j in objects}


def limit(objects: Sequence, sizes: Mapping, maps: Sequence) -> tuple[list, dict]:
    """Limit of a finite diagram of finite sets, as the list of compatible tuples.

    ``maps`` holds ``(j, k, f)`` as in :func:`colimit`. Tuples are listed in
    lexicographic order of their components (in ``objects`` order); returns the
    tuples and the projections ``{j: tuple}``.
    """
    index = {j: i for i, j in enumerate(objects)}
    # constraint (f, i, k) checked once both coordinates i < k are chosen
    checks: list[list] = [[] for _ in objects]
    for j, k, f in maps:
        a, b = index[j], index[k]
        checks[max(a, b)].append((a, b, f))
    out: list[tuple[int, ...]] = []
    cur: list[int] = []

    def go(i: int) -> None:
        if i == len(objects):
            out.append(tuple(cur))
            return
        for x in range(sizes[objects[i]]):
            cur.append(x)
            if all(f[cur[a]] == cur[b] for a, b, f in checks[i]):
                go(i + 1)
            cur.pop()

    go(0)
    proj = {j: tuple(t[index[j]] for t in out) for j in objects}
    return out, proj
