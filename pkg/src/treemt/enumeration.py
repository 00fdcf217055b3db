"""Enumeration and random generation of small unlabeled trees."""

from functools import lru_cache

from .iso import unrooted_code
from .trees import RootedFiniteTree


@lru_cache(maxsize=None)
def _shapes(n):
    """All rooted shapes with ``n`` vertices.

    A shape is a tuple of child keys ``(size, index)`` in non-increasing
    order, ``index`` pointing into ``_shapes(size)``. Ordering the children
    makes each unordered tree appear exactly once.
    """
    if n == 1:
        return ((),)
    out = []
    acc = []

    def rec(remaining, bound):
        if remaining == 0:
            out.append(tuple(acc))
            return
        for size in range(min(remaining, bound[0]), 0, -1):
            top = len(_shapes(size)) - 1 if size < bound[0] else bound[1]
            for idx in range(top, -1, -1):
                acc.append((size, idx))
                rec(remaining - size, (size, idx))
                acc.pop()

    rec(n - 1, (n - 1, len(_shapes(n - 1)) - 1))
    return tuple(out)


def _build(n, idx):
    children = {}
    counter = [0]

    def make(size, i):
        me = counter[0]
        counter[0] += 1
        kids = []
        for key in _shapes(size)[i]:
            kids.append(make(*key))
        children[me] = kids
        return me

    make(n, idx)
    t = RootedFiniteTree(0, children)
    # renumber in breadth-first order so ids read naturally
    ren = {v: i for i, v in enumerate(t.vertices)}
    return RootedFiniteTree(0, {ren[v]: [ren[c] for c in cs] for v, cs in children.items()})


def count_rooted_trees(n: int) -> int:
    return len(_shapes(n))


def rooted_trees(n: int):
    """Every unlabeled rooted tree with exactly ``n`` vertices, once each."""
    return [_build(n, i) for i in range(len(_shapes(n)))]


def rooted_trees_upto(n: int):
    return [t for k in range(1, n + 1) for t in rooted_trees(k)]


def free_trees(n: int):
    """Every unlabeled unrooted tree with exactly ``n`` vertices, once each."""
    seen = set()
    out = []
    for t in rooted_trees(n):
        code = unrooted_code(t.tree)
        if code not in seen:
            seen.add(code)
            out.append(t.tree)
    return out


def free_trees_upto(n: int):
    return [t for k in range(1, n + 1) for t in free_trees(k)]


def random_rooted_tree(n: int, rng) -> RootedFiniteTree:
    """Random recursive tree: vertex ``i`` attaches below a uniform earlier vertex."""
    parent = {i: rng.randrange(i) for i in range(1, n)}
    return RootedFiniteTree.from_parent(0, parent)
