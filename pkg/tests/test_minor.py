import itertools
import random

import pytest
from hypothesis import given, strategies as st

from conftest import ft, rand_tree
from treemt._matching import max_matching, min_vertex_cover, saturating_matching
from treemt.enumeration import count_rooted_trees, free_trees, free_trees_upto, random_rooted_tree, rooted_trees, rooted_trees_upto
from treemt.errors import BudgetExceeded, PreconditionError
from treemt.iso import iso_rooted, iso_unrooted
from treemt.minor import (
    ComparabilityCache,
    MinorWitness,
    antichain_search,
    brute_force_rooted_minor,
    centroid,
    comparability_matrix,
    equiv_sharp,
    increasing_subsequence,
    is_minor_unrooted,
    is_rooted_minor,
    iter_rooted_minor_witnesses,
    maximum_antichain,
    root_rigidity_check,
    rooted_minor_at,
    verify_witness,
    verify_witness_unrooted,
    wqo_find_comparable,
)
from treemt.trees import FiniteTree, RootedFiniteTree, path_tree, star_tree, subdivide_edge


def P(n):
    return path_tree(n)


# -- matching ------------------------------------------------------------------


def _brute_matching(adj):
    best = 0
    rights = sorted({v for row in adj for v in row})
    for k in range(len(adj), 0, -1):
        for rows in itertools.combinations(range(len(adj)), k):
            for cols in itertools.permutations(rights, k):
                if all(c in adj[r] for r, c in zip(rows, cols)):
                    return k
    return best


@given(st.lists(st.lists(st.integers(0, 4), max_size=4), max_size=5))
def test_max_matching_size(adj):
    size, assignment = max_matching(adj)
    assert size == _brute_matching(adj)
    assert len(set(assignment.values())) == len(assignment) == size
    assert all(v in adj[u] for u, v in assignment.items())
    left, right = min_vertex_cover(adj, 5, assignment)
    assert len(left) + len(right) == size
    assert all(u in left or v in right for u, row in enumerate(adj) for v in row)


def test_saturating_matching():
    assert saturating_matching([[0], [0, 1]]) == {0: 0, 1: 1}
    assert saturating_matching([[0], [0]]) is None
    assert saturating_matching([]) == {}


# -- enumeration ---------------------------------------------------------------


def test_enumeration_counts():
    assert [count_rooted_trees(n) for n in range(1, 11)] == [1, 1, 2, 4, 9, 20, 48, 115, 286, 719]
    assert [len(free_trees(n)) for n in range(1, 11)] == [1, 1, 1, 2, 3, 6, 11, 23, 47, 106]
    assert len(rooted_trees_upto(7)) == 85
    assert len(rooted_trees_upto(6)) == 37
    assert all(len(t) == 6 for t in rooted_trees(6))


def test_random_tree_is_seeded():
    a = random_rooted_tree(9, random.Random(5))
    b = random_rooted_tree(9, random.Random(5))
    assert a == b and len(a) == 9


# -- decision ------------------------------------------------------------------


def test_rooted_minor_examples():
    w = is_rooted_minor(P(2), P(5))
    assert w is not None and verify_witness(P(2), P(5), w)
    assert is_rooted_minor(star_tree(3), P(7)) is None
    assert brute_force_rooted_minor(P(2), P(3)) is not None
    assert brute_force_rooted_minor(star_tree(3), P(5)) is None


def test_witness_root_image_is_meet_of_image():
    t = ft("(r (a) (b))")
    s = ft("(x (y (p) (q)))")
    w = is_rooted_minor(t, s)
    assert w.mapping == {"r": "y", "a": "p", "b": "q"}


def test_minor_at_fixed_image():
    t = ft("(r (a))")
    s = ft("(x (y (z)) (u))")
    assert rooted_minor_at(t, s, "y").mapping == {"r": "y", "a": "z"}
    assert rooted_minor_at(t, s, "u") is None


def test_verify_witness_rejects_bad_maps():
    t = ft("(r (a) (b))")
    assert verify_witness(t, t, MinorWitness({"r": "r", "a": "a", "b": "b"}))
    s = ft("(x (y (z)))")
    assert not verify_witness(t, s, MinorWitness({"r": "x", "a": "y", "b": "z"}))
    assert not verify_witness(t, s, MinorWitness({"r": "x", "a": "y", "b": "y"}))
    assert not verify_witness(t, s, MinorWitness({"r": "x", "a": "y"}))


@pytest.mark.parametrize("n", range(1, 6))
def test_oracle_agreement_small(n):
    trees = rooted_trees_upto(n)
    for t, s in itertools.product(trees, repeat=2):
        fast = is_rooted_minor(t, s)
        slow = brute_force_rooted_minor(t, s)
        assert (fast is None) == (slow is None)
        if fast is not None:
            assert verify_witness(t, s, fast)


def test_oracle_budget():
    with pytest.raises(BudgetExceeded):
        brute_force_rooted_minor(P(9), P(9))


def test_oracle_enumerates_every_witness():
    # P2 into P3 rooted at an end: r must go to the top two vertices
    ws = list(iter_rooted_minor_witnesses(P(2), P(3)))
    assert sorted(tuple(sorted(w.mapping.items())) for w in ws) == [
        ((0, 0), (1, 1)),
        ((0, 0), (1, 2)),
        ((0, 1), (1, 2)),
    ]


def test_unrooted_examples():
    assert is_minor_unrooted(P(5).tree, star_tree(3).tree) is None
    spider = star_tree(3)
    for leaf in (1, 2, 3):
        spider = subdivide_edge(spider, (0, leaf), 1)
    w = is_minor_unrooted(star_tree(3).tree, spider.tree)
    assert w is not None and verify_witness_unrooted(star_tree(3).tree, spider.tree, w)


def _brute_unrooted(t, s):
    for b in s.vertices:
        for a in t.vertices:
            if brute_force_rooted_minor(t.rooted_at(a), s.rooted_at(b), budget=(10, 10)) is not None:
                return True
    return False


@given(st.integers(0, 10**6))
def test_unrooted_against_oracle(seed):
    rng = random.Random(seed)
    t = random_rooted_tree(rng.randint(2, 6), rng).tree
    s = random_rooted_tree(rng.randint(4, 9), rng).tree
    w = is_minor_unrooted(t, s)
    assert (w is not None) == _brute_unrooted(t, s)
    if w is not None:
        assert verify_witness_unrooted(t, s, w)


def test_centroid():
    assert centroid(P(5).tree) == 2
    assert centroid(star_tree(4).tree) == 0


def test_equiv_sharp_examples():
    t = ft("(r (a (b)) (c))")
    assert equiv_sharp(t, t)
    assert not equiv_sharp(P(2), P(3))


@pytest.mark.parametrize("n", range(1, 7))
def test_equiv_is_iso(n):
    trees = rooted_trees_upto(n)
    for t, s in itertools.combinations(trees, 2):
        assert not equiv_sharp(t, s)
    frees = free_trees_upto(n)
    for t, s in itertools.combinations(frees, 2):
        assert not equiv_sharp(t, s, rooted=False)


@given(st.integers(1, 9), st.integers(0, 10**6), st.integers(0, 3))
def test_minor_monotone_under_subdivision(n, seed, k):
    t = rand_tree(n, seed)
    for v in t.vertices:
        if v != t.root:
            s = subdivide_edge(t, (t.parent(v), v), k)
            assert is_rooted_minor(t, s) is not None


@given(st.integers(0, 10**6))
def test_witnesses_compose(seed):
    rng = random.Random(seed)
    a, b, c = (random_rooted_tree(rng.randint(1, 8), rng) for _ in range(3))
    w1 = is_rooted_minor(a, b)
    w2 = is_rooted_minor(b, c)
    if w1 is not None and w2 is not None:
        w = w1.compose(w2)
        assert verify_witness(a, c, w)
        assert is_rooted_minor(a, c) is not None


# -- wqo harness ---------------------------------------------------------------


def test_wqo_examples():
    pair = wqo_find_comparable([P(1), P(2), P(3)])
    assert (pair.i, pair.j) == (0, 1)
    assert verify_witness(P(1), P(2), pair.witness)
    assert wqo_find_comparable([star_tree(3), P(5)]) is None


def test_increasing_subsequence():
    assert increasing_subsequence([P(3), P(1), P(2)]) == [1, 2]
    same = [P(2)] * 4
    assert increasing_subsequence(same) == [0, 1, 2, 3]
    assert len(increasing_subsequence([star_tree(3), P(5)])) == 1


def test_comparability_matrix_cache():
    cache = ComparabilityCache()
    seq = [P(1), P(2), P(2), star_tree(2)]
    m = comparability_matrix(seq, cache=cache)
    assert m[0] == [True] * 4
    assert m[1][2] and m[2][1]
    assert not m[3][1]
    assert len(cache) <= 9


def _max_independent(n, bad):
    best = []

    def grow(chosen, rest):
        nonlocal best
        if len(chosen) + len(rest) <= len(best):
            return
        if not rest:
            best = chosen
            return
        v, tail = rest[0], rest[1:]
        grow(chosen + [v], [u for u in tail if not bad(u, v)])
        grow(chosen, tail)

    grow([], list(range(n)))
    return best


def test_antichain_examples():
    assert len(antichain_search(2)) == 1
    assert len(antichain_search(5)) >= 2


@pytest.mark.parametrize("n", [5, 6, 7])
def test_antichain_is_maximum(n):
    got = antichain_search(n)
    trees = free_trees_upto(n)
    cache = ComparabilityCache(rooted=False)
    for a, b in itertools.combinations(got, 2):
        assert not cache.leq(a, b) and not cache.leq(b, a)
    best = _max_independent(len(trees), lambda i, j: cache.leq(trees[i], trees[j]) or cache.leq(trees[j], trees[i]))
    assert len(got) == len(best)


def test_antichain_budget():
    with pytest.raises(BudgetExceeded):
        antichain_search(11)


def test_maximum_antichain_on_divisibility():
    items = list(range(1, 13))
    picked = maximum_antichain(items, lambda a, b: b % a == 0)
    assert len(picked) == 6


def test_root_rigidity():
    assert root_rigidity_check(star_tree(3), star_tree(3))
    assert root_rigidity_check(P(3), P(3))
    with pytest.raises(PreconditionError):
        root_rigidity_check(P(2), P(3))
