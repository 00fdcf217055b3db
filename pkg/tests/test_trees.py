import itertools

import pytest
from hypothesis import given, strategies as st

from conftest import ft, rand_tree
from treemt.errors import InputError, PreconditionError
from treemt.iso import ahu_code, iso_rooted, iso_unrooted
from treemt.minor import brute_force_rooted_minor, equiv_sharp
from treemt.trees import (
    BarePathRecord,
    FiniteTree,
    RootedFiniteTree,
    full_subtree,
    is_bare_path,
    maximal_bare_path,
    meet,
    path_tree,
    prepend_bare_path,
    prune_and_graft,
    replace_equivalent_children,
    splitting_number,
    star_tree,
    subdivide_edge,
    suppress_path,
    tree_order_leq,
)


def binary(depth):
    children = {}
    frontier = ["r"]
    for _ in range(depth):
        nxt = []
        for v in frontier:
            children[v] = [v + "0", v + "1"]
            nxt += children[v]
        frontier = nxt
    return RootedFiniteTree("r", children)


def test_finite_tree_rejects_cycles_and_disconnection():
    with pytest.raises(InputError):
        FiniteTree([1, 2, 3], [(1, 2), (2, 3), (3, 1)])
    with pytest.raises(InputError):
        FiniteTree([1, 2, 3, 4], [(1, 2), (3, 4)])
    with pytest.raises(InputError):
        FiniteTree([1], [(1, 1)])


def test_levels_follow_parents():
    t = ft("(r (a (b)) (c))")
    assert t.level("r") == 0 and t.level("b") == 2
    assert t.parent("b") == "a" and t.parent("r") is None
    assert sorted(t.level_set(1)) == ["a", "c"]


def test_meet_examples():
    p = ft("(r (a (b)))")
    assert meet(p, "a", "b") == "a"
    s = ft("(r (a) (b))")
    assert meet(s, "a", "b") == "r"
    b = binary(3)
    assert meet(b, "r000", "r111") == "r"
    assert meet(b, "r010", "r011") == "r01"


def test_meet_unknown_vertex():
    with pytest.raises(InputError):
        meet(ft("(r (a))"), "a", "zz")


def _ancestors(t, v):
    out = [v]
    while t.parent(v) is not None:
        v = t.parent(v)
        out.append(v)
    return out


@given(st.integers(1, 10), st.integers(0, 10**6))
def test_meet_is_greatest_common_lower_bound(n, seed):
    t = rand_tree(n, seed)
    for u, v in itertools.product(t.vertices, repeat=2):
        w = meet(t, u, v)
        assert tree_order_leq(t, w, u) and tree_order_leq(t, w, v)
        common = [x for x in t.vertices if tree_order_leq(t, x, u) and tree_order_leq(t, x, v)]
        assert max(common, key=t.level) == w
        # independent oracle: last common element of root paths
        pu, pv = _ancestors(t, u)[::-1], _ancestors(t, v)[::-1]
        last = [a for a, b in zip(pu, pv) if a == b][-1]
        assert last == w


def test_tree_order():
    t = ft("(r (a (b)) (c))")
    assert all(tree_order_leq(t, "r", v) for v in t.vertices)
    assert not tree_order_leq(t, "a", "c")
    assert tree_order_leq(t, "a", "b")
    assert not tree_order_leq(t, "b", "a")


def test_splitting_number():
    s = star_tree(3)
    assert splitting_number(s, 0) == 3
    assert splitting_number(s, 1) == 0
    assert splitting_number(ft("(r (a (b)))"), "a") == 1


@given(st.integers(1, 12), st.integers(0, 10**6))
def test_splitting_numbers_sum_to_edge_count(n, seed):
    t = rand_tree(n, seed)
    assert sum(splitting_number(t, v) for v in t.vertices) == len(t.tree.edges)


def test_full_subtree():
    t = binary(2)
    assert full_subtree(t, "r") == t
    leaf = full_subtree(t, "r01")
    assert leaf.vertices == ("r01",)
    sub = full_subtree(t, "r0")
    assert set(sub.vertices) == {v for v in t.vertices if tree_order_leq(t, "r0", v)}
    assert sub.root == "r0"


def test_maximal_bare_path_examples():
    p = path_tree(5)
    assert maximal_bare_path(p, 1).vertices == (1, 2, 3, 4)
    t = ft("(r (v (w (x) (y) (z))))")
    assert maximal_bare_path(t, "v").vertices == ("v",)
    with pytest.raises(PreconditionError):
        maximal_bare_path(t, "w")


def _all_bare_paths(t):
    out = []
    for v in t.vertices:
        path = [v]
        while True:
            if is_bare_path(t, path):
                out.append(tuple(path))
            kids = t.children(path[-1])
            if len(kids) != 1:
                break
            path.append(kids[0])
    return out


def test_maximal_bare_path_against_scan():
    from treemt.regular import unfold_truncate

    from conftest import rtp

    t = unfold_truncate(rtp("root A; A = leaf A*2"), 9)
    paths = _all_bare_paths(t)
    for v in t.vertices:
        if t.degree(v) > 2:
            continue
        got = maximal_bare_path(t, v).vertices
        starting = [p for p in paths if p[0] == v]
        assert got == max(starting, key=len)


def test_subdivide_edge():
    e = FiniteTree([0, 1], [(0, 1)])
    p = subdivide_edge(e, (0, 1), 1)
    assert len(p) == 3 and sorted(p.degree(v) for v in p) == [1, 1, 2]
    t = star_tree(3)
    assert subdivide_edge(t, (0, 1), 0) is t
    spider = t
    for leaf in (1, 2, 3):
        spider = subdivide_edge(spider, (0, leaf), 2)
    assert len(spider) == 10
    assert sorted(spider.degree(v) for v in spider.vertices) == [1, 1, 1] + [2] * 6 + [3]
    with pytest.raises(InputError):
        subdivide_edge(t, (1, 2), 1)


def test_suppress_path():
    t = ft("(r (a (b (c))))")
    out = suppress_path(t, BarePathRecord("a", ("a", "b")))
    assert out == ft("(r (c))")
    with pytest.raises(PreconditionError):
        suppress_path(t, BarePathRecord("r", ("r", "a")))
    with pytest.raises(PreconditionError):
        suppress_path(t, BarePathRecord("b", ("b", "c")))


@given(st.integers(2, 10), st.integers(0, 10**6), st.integers(1, 4))
def test_subdivide_then_suppress_is_identity(n, seed, k):
    t = rand_tree(n, seed)
    v = t.vertices[-1]
    u = t.parent(v)
    sub = subdivide_edge(t, (u, v), k)
    new = [x for x in sub.vertices if x not in t.vertices]
    path = BarePathRecord(new[0], tuple(new))
    assert iso_rooted(suppress_path(sub, path), t)


def test_prepend_bare_path():
    out = prepend_bare_path(RootedFiniteTree("x"), 2)
    assert len(out) == 3 and out.level("x") == 2
    assert iso_rooted(out, path_tree(3))
    assert prepend_bare_path(out, 0) is out


@given(st.integers(1, 10), st.integers(0, 10**6), st.integers(1, 5))
def test_prepend_bare_path_properties(n, seed, k):
    t = rand_tree(n, seed)
    out = prepend_bare_path(t, k)
    assert len(out) == len(t) + k
    for v in t.vertices:
        assert out.level(v) == t.level(v) + k
    new = [v for v in out.vertices if v not in t.vertices]
    assert len(new) == k and all(splitting_number(out, v) == 1 for v in new)
    assert len(maximal_bare_path(out, out.root)) >= k


def test_replace_equivalent_children():
    t = ft("(r (a (b)) (c))")
    star = ft("(s (x) (y) (z))")
    assert replace_equivalent_children(t, star, iso_rooted) is t
    same = ft("(u (w))")
    assert iso_rooted(replace_equivalent_children(t, same, iso_rooted), t)
    # both children are subdivided stars equivalent to u, so both are swapped
    t2 = ft("(r (a (a1 (p) (q) (s))) (b (b1 (p2) (q2) (s2))))")
    u = ft("(u (w (x) (y) (z)))")
    out = replace_equivalent_children(t2, u, equiv_sharp)
    assert not set(out.children(out.root)) & {"a", "b"}
    assert brute_force_rooted_minor(out, t2, budget=(11, 11)) is not None
    assert brute_force_rooted_minor(t2, out, budget=(11, 11)) is not None


def test_prune_and_graft():
    t = ft("(r (a) (b (c)))")
    assert prune_and_graft(t, [], RootedFiniteTree("g"), 0) is t
    assert iso_rooted(prune_and_graft(t, ["a"], RootedFiniteTree("g"), 1), t)
    g = ft("(g (h))")
    three = prune_and_graft(t, ["b"], g, 3)
    four = prune_and_graft(t, ["b"], g, 4)
    assert ahu_code(three) != ahu_code(four)
    with pytest.raises(PreconditionError):
        prune_and_graft(t, ["c"], g, 1)


def test_rooted_equality_ignores_child_order():
    assert ft("(r (a) (b))") == ft("(r (b) (a))")
    assert iso_unrooted(ft("(r (a) (b))", False), ft("(a (r (b)))", False))
