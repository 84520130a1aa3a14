from __future__ import annotations

from hypothesis import given
from hypothesis import strategies as st

from catalg import finset


def test_union_find_classes_are_numbered_by_first_occurrence():
    uf = finset.UnionFind(5)
    assert uf.union(3, 1)
    assert not uf.union(1, 3)
    uf.union(4, 0)
    n, q = uf.classes()
    assert n == 3
    assert q == (0, 1, 2, 1, 0)


@given(st.lists(st.tuples(st.integers(0, 9), st.integers(0, 9)), max_size=20))
def test_union_find_matches_transitive_closure(pairs):
    uf = finset.UnionFind(10)
    for a, b in pairs:
        uf.union(a, b)
    # naive closure as the oracle
    rel = {(i, i) for i in range(10)} | set(pairs) | {(b, a) for a, b in pairs}
    changed = True
    while changed:
        extra = {(a, d) for a, b in rel for c, d in rel if b == c} - rel
        rel |= extra
        changed = bool(extra)
    _, q = uf.classes()
    for a in range(10):
        for b in range(10):
            assert (q[a] == q[b]) == ((a, b) in rel)


def test_function_helpers():
    f = (1, 2, 0)
    assert finset.compose(f, finset.inverse(f)) == finset.identity(3)
    assert finset.is_bijection(f, 3)
    assert not finset.is_injective((0, 0))
    assert len(list(finset.all_functions(2, 3))) == 9


def test_colimit_of_a_parallel_pair_is_the_coequalizer():
    # 0 -> 1 and 0 -> 0 glue elements 0 and 1 of a 3-element set
    n, cop = finset.colimit(["A", "B"], {"A": 1, "B": 3}, [("A", "B", (0,)), ("A", "B", (1,))])
    assert n == 2
    assert cop["B"][0] == cop["B"][1] != cop["B"][2]
