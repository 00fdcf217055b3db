"""Finite trees, rooted trees and the surgeries used on them.

Vertices are arbitrary hashable ids. Every operation here is pure: it returns
a new tree and never mutates its argument. Surgeries keep the id of every
vertex that survives and allocate fresh integer ids for vertices they create,
so a map defined on the input stays meaningful on the output.
"""

from collections import deque
from dataclasses import dataclass
from typing import Hashable, Iterable, Mapping, Optional, Sequence, Tuple

from .errors import InputError, PreconditionError

Vertex = Hashable


class FiniteTree:
    """An unrooted finite tree given by its vertices and edges."""

    __slots__ = ("_adj",)

    def __init__(self, vertices: Iterable[Vertex], edges: Iterable[Tuple[Vertex, Vertex]]):
        adj = {}
        for v in vertices:
            if v in adj:
                raise InputError(f"duplicate vertex {v!r}")
            adj[v] = []
        if not adj:
            raise InputError("a tree needs at least one vertex")
        seen = set()
        for a, b in edges:
            if a == b:
                raise InputError(f"self-loop at {a!r}")
            for x in (a, b):
                if x not in adj:
                    raise InputError(f"edge endpoint {x!r} is not a vertex")
            key = frozenset((a, b))
            if key in seen:
                raise InputError(f"duplicate edge {a!r}-{b!r}")
            seen.add(key)
            adj[a].append(b)
            adj[b].append(a)
        if len(seen) != len(adj) - 1:
            raise InputError(f"{len(adj)} vertices need {len(adj) - 1} edges, got {len(seen)}")
        start = next(iter(adj))
        reached = {start}
        stack = [start]
        while stack:
            x = stack.pop()
            for y in adj[x]:
                if y not in reached:
                    reached.add(y)
                    stack.append(y)
        if len(reached) != len(adj):
            raise InputError("graph is not connected")
        self._adj = {v: tuple(ns) for v, ns in adj.items()}

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        return tuple(self._adj)

    @property
    def edges(self) -> Tuple[Tuple[Vertex, Vertex], ...]:
        out = []
        done = set()
        for a, ns in self._adj.items():
            for b in ns:
                if b not in done:
                    out.append((a, b))
            done.add(a)
        return tuple(out)

    def neighbors(self, v):
        self._check(v)
        return self._adj[v]

    def degree(self, v) -> int:
        self._check(v)
        return len(self._adj[v])

    def has_edge(self, a, b) -> bool:
        return a in self._adj and b in self._adj[a]

    def rooted_at(self, root) -> "RootedFiniteTree":
        self._check(root)
        children = {}
        seen = {root}
        queue = deque([root])
        while queue:
            x = queue.popleft()
            kids = [y for y in self._adj[x] if y not in seen]
            seen.update(kids)
            children[x] = kids
            queue.extend(kids)
        return RootedFiniteTree(root, children)

    def _check(self, v):
        if v not in self._adj:
            raise InputError(f"unknown vertex {v!r}")

    def __len__(self):
        return len(self._adj)

    def __iter__(self):
        return iter(self._adj)

    def __contains__(self, v):
        return v in self._adj

    def __eq__(self, other):
        if not isinstance(other, FiniteTree):
            return NotImplemented
        return set(self._adj) == set(other._adj) and {frozenset(e) for e in self.edges} == {
            frozenset(e) for e in other.edges
        }

    __hash__ = None

    def __repr__(self):
        return f"FiniteTree({len(self)} vertices)"


class RootedFiniteTree:
    """A finite tree with a distinguished root.

    ``children`` maps each vertex to its children; vertices missing from the
    mapping are leaves. Children are stored in the given order, but nothing in
    the package depends on that order except tie-breaking.
    """

    __slots__ = ("root", "_children", "_parent", "_level", "_order", "_cache")

    def __init__(self, root: Vertex, children: Mapping[Vertex, Sequence[Vertex]] = None):
        children = children or {}
        kids = {}
        parent = {}
        level = {root: 0}
        order = [root]
        queue = deque([root])
        while queue:
            x = queue.popleft()
            cs = tuple(children.get(x, ()))
            for c in cs:
                if c in level:
                    raise InputError(f"vertex {c!r} reached twice (cycle or shared child)")
                level[c] = level[x] + 1
                parent[c] = x
                order.append(c)
                queue.append(c)
            kids[x] = cs
        for v in children:
            if v not in level:
                raise InputError(f"vertex {v!r} is not reachable from the root")
        self.root = root
        self._children = kids
        self._parent = parent
        self._level = level
        self._order = tuple(order)
        self._cache = {}

    @classmethod
    def from_parent(cls, root, parent: Mapping[Vertex, Vertex]) -> "RootedFiniteTree":
        children = {}
        for c, p in parent.items():
            children.setdefault(p, []).append(c)
        return cls(root, children)

    @classmethod
    def from_edges(cls, root, edges) -> "RootedFiniteTree":
        edges = list(edges)
        verts = {root}
        for a, b in edges:
            verts.update((a, b))
        return FiniteTree(verts, edges).rooted_at(root)

    @property
    def vertices(self) -> Tuple[Vertex, ...]:
        """Vertices in breadth-first order from the root."""
        return self._order

    @property
    def tree(self) -> FiniteTree:
        if "tree" not in self._cache:
            self._cache["tree"] = FiniteTree(self._order, self._parent.items())
        return self._cache["tree"]

    @property
    def height(self) -> int:
        return max(self._level.values())

    def children(self, v) -> Tuple[Vertex, ...]:
        self._check(v)
        return self._children[v]

    def parent(self, v) -> Optional[Vertex]:
        self._check(v)
        return self._parent.get(v)

    def level(self, v) -> int:
        self._check(v)
        return self._level[v]

    def degree(self, v) -> int:
        self._check(v)
        return len(self._children[v]) + (v != self.root)

    def level_set(self, n: int) -> Tuple[Vertex, ...]:
        return tuple(v for v in self._order if self._level[v] == n)

    def children_map(self):
        return dict(self._children)

    def _check(self, v):
        if v not in self._level:
            raise InputError(f"unknown vertex {v!r}")

    def __len__(self):
        return len(self._order)

    def __iter__(self):
        return iter(self._order)

    def __contains__(self, v):
        return v in self._level

    def __eq__(self, other):
        if not isinstance(other, RootedFiniteTree):
            return NotImplemented
        return (
            self.root == other.root
            and self._parent == other._parent
        )

    __hash__ = None

    def __repr__(self):
        return f"RootedFiniteTree(root={self.root!r}, {len(self)} vertices)"


@dataclass(frozen=True)
class BarePathRecord:
    head: Vertex
    vertices: Tuple[Vertex, ...]
    closing_edge: Optional[Tuple[Vertex, Vertex]] = None

    def __len__(self):
        return len(self.vertices)


# -- order structure ---------------------------------------------------------


def meet(t: RootedFiniteTree, u, v):
    """Deepest common ancestor of ``u`` and ``v``."""
    lu, lv = t.level(u), t.level(v)
    while lu > lv:
        u = t._parent[u]
        lu -= 1
    while lv > lu:
        v = t._parent[v]
        lv -= 1
    while u != v:
        u = t._parent[u]
        v = t._parent[v]
    return u


def tree_order_leq(t: RootedFiniteTree, u, v) -> bool:
    lu, lv = t.level(u), t.level(v)
    while lv > lu:
        v = t._parent[v]
        lv -= 1
    return u == v


def splitting_number(t: RootedFiniteTree, v) -> int:
    return len(t.children(v))


def distance(t: RootedFiniteTree, u, v) -> int:
    """Number of edges on the path from ``u`` to ``v``."""
    w = meet(t, u, v)
    return t.level(u) + t.level(v) - 2 * t.level(w)


def full_subtree(t: RootedFiniteTree, v) -> RootedFiniteTree:
    t._check(v)
    children = {}
    stack = [v]
    while stack:
        x = stack.pop()
        children[x] = t._children[x]
        stack.extend(t._children[x])
    return RootedFiniteTree(v, children)


def subtree_vertices(t: RootedFiniteTree, v) -> Tuple[Vertex, ...]:
    return full_subtree(t, v).vertices


# -- bare paths --------------------------------------------------------------


def maximal_bare_path(t: RootedFiniteTree, v) -> BarePathRecord:
    """Longest bare path starting at ``v`` and running away from the root."""
    if t.degree(v) > 2:
        raise PreconditionError(f"vertex {v!r} has degree {t.degree(v)} > 2")
    path = [v]
    cur = v
    while len(t._children[cur]) == 1:
        nxt = t._children[cur][0]
        if t.degree(nxt) > 2:
            break
        path.append(nxt)
        cur = nxt
    closing = None
    tail_kids = t._children[path[-1]]
    if v != t.root and len(tail_kids) == 1:
        closing = (t._parent[v], tail_kids[0])
    return BarePathRecord(v, tuple(path), closing)


def is_bare_path(t: RootedFiniteTree, vertices: Sequence[Vertex]) -> bool:
    if not vertices:
        return False
    for a, b in zip(vertices, vertices[1:]):
        if t.parent(b) != a:
            return False
    return all(t.degree(x) <= 2 for x in vertices)


# -- surgeries ---------------------------------------------------------------


def _fresh_ids(used: set, count: int):
    out = []
    i = len(used)
    while len(out) < count:
        if i not in used:
            out.append(i)
            used.add(i)
        i += 1
    return out


def _attach_copy(children: dict, used: set, sub: RootedFiniteTree):
    """Add a disjoint copy of ``sub`` to ``children``; return the copy's root."""
    ids = dict(zip(sub.vertices, _fresh_ids(used, len(sub))))
    for x in sub.vertices:
        children[ids[x]] = [ids[c] for c in sub._children[x]]
    return ids[sub.root]


def _drop_subtree(children: dict, v):
    stack = [v]
    while stack:
        x = stack.pop()
        stack.extend(children.pop(x, ()))


def subdivide_edge(t, e, k: int):
    """Replace edge ``e`` by a path with ``k`` new interior vertices.

    Works on both :class:`FiniteTree` and :class:`RootedFiniteTree`; a rooted
    input keeps its root.
    """
    a, b = e
    if k < 0:
        raise InputError("k must be non-negative")
    if isinstance(t, RootedFiniteTree):
        if t._parent.get(b) == a:
            up, down = a, b
        elif t._parent.get(a) == b:
            up, down = b, a
        else:
            raise InputError(f"unknown edge {a!r}-{b!r}")
        if k == 0:
            return t
        children = {x: list(cs) for x, cs in t._children.items()}
        new = _fresh_ids(set(t.vertices), k)
        children[up] = [new[0] if c == down else c for c in children[up]]
        for x, y in zip(new, new[1:]):
            children[x] = [y]
        children[new[-1]] = [down]
        return RootedFiniteTree(t.root, children)
    if not t.has_edge(a, b):
        raise InputError(f"unknown edge {a!r}-{b!r}")
    if k == 0:
        return t
    new = _fresh_ids(set(t.vertices), k)
    chain = [a, *new, b]
    edges = [x for x in t.edges if frozenset(x) != frozenset((a, b))]
    edges.extend(zip(chain, chain[1:]))
    return FiniteTree(list(t.vertices) + new, edges)


def suppress_path(t: RootedFiniteTree, p: BarePathRecord) -> RootedFiniteTree:
    """Delete the vertices of ``p`` and join its two neighbours by an edge."""
    verts = p.vertices
    if not is_bare_path(t, verts):
        raise PreconditionError("not a bare path of this tree")
    head, last = verts[0], verts[-1]
    if head == t.root:
        raise PreconditionError("bare path starts at the root")
    if len(t._children[last]) != 1:
        raise PreconditionError("bare path has no successor vertex")
    above = t._parent[head]
    below = t._children[last][0]
    children = {x: list(cs) for x, cs in t._children.items() if x not in verts}
    children[above] = [below if c == head else c for c in children[above]]
    return RootedFiniteTree(t.root, children)


def prepend_bare_path(t: RootedFiniteTree, n: int) -> RootedFiniteTree:
    """New root followed by a bare path of ``n`` vertices ending above the old root."""
    if n < 0:
        raise InputError("n must be non-negative")
    if n == 0:
        return t
    new = _fresh_ids(set(t.vertices), n)
    children = {x: list(cs) for x, cs in t._children.items()}
    for x, y in zip(new, new[1:]):
        children[x] = [y]
    children[new[-1]] = [t.root]
    return RootedFiniteTree(new[0], children)


def replace_equivalent_children(t: RootedFiniteTree, u: RootedFiniteTree, equiv) -> RootedFiniteTree:
    """Swap every root-child subtree ``w`` with ``equiv(w, u)`` for a fresh copy of ``u``."""
    children = {x: list(cs) for x, cs in t._children.items()}
    used = set(t.vertices)
    new_kids = []
    changed = False
    for c in t._children[t.root]:
        if equiv(full_subtree(t, c), u):
            _drop_subtree(children, c)
            new_kids.append(_attach_copy(children, used, u))
            changed = True
        else:
            new_kids.append(c)
    if not changed:
        return t
    children[t.root] = new_kids
    return RootedFiniteTree(t.root, children)


def prune_and_graft(t: RootedFiniteTree, removed: Iterable[Vertex], graft: RootedFiniteTree, copies: int) -> RootedFiniteTree:
    """Remove the listed root-child subtrees, then hang ``copies`` copies of ``graft`` on the root."""
    removed = list(removed)
    for v in removed:
        if t.parent(v) != t.root:
            raise PreconditionError(f"{v!r} is not a child of the root")
    if copies < 0:
        raise InputError("copies must be non-negative")
    if not removed and copies == 0:
        return t
    children = {x: list(cs) for x, cs in t._children.items()}
    for v in removed:
        _drop_subtree(children, v)
    gone = set(removed)
    kids = [c for c in children[t.root] if c not in gone]
    used = set(children) | {c for cs in children.values() for c in cs}
    for _ in range(copies):
        kids.append(_attach_copy(children, used, graft))
    children[t.root] = kids
    return RootedFiniteTree(t.root, children)


def relabel(t: RootedFiniteTree, mapping: Mapping[Vertex, Vertex]) -> RootedFiniteTree:
    children = {mapping[x]: [mapping[c] for c in cs] for x, cs in t._children.items()}
    return RootedFiniteTree(mapping[t.root], children)


def path_tree(n: int) -> RootedFiniteTree:
    """Path with ``n`` vertices ``0..n-1`` rooted at ``0``."""
    return RootedFiniteTree(0, {i: [i + 1] for i in range(n - 1)})


def star_tree(leaves: int) -> RootedFiniteTree:
    """Star K_{1,leaves} rooted at its centre ``0``."""
    return RootedFiniteTree(0, {0: list(range(1, leaves + 1))})
