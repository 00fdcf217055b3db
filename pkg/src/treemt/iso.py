"""Canonical forms, isomorphism and automorphisms of finite trees.

Rooted trees get an AHU-style parenthesis code: a vertex's code is ``(``, its
optional label, the sorted codes of its children, then ``)``. Two rooted trees
have equal codes exactly when a root-preserving isomorphism exists.
"""

from dataclasses import dataclass
from itertools import permutations, product
from typing import Hashable, Mapping, Optional

from .config import budget_override
from .errors import BudgetExceeded, InputError
from .trees import FiniteTree, RootedFiniteTree

DEFAULT_AUTOMORPHISM_BUDGET = 12


def _child_lists(t: FiniteTree, root, exclude=None):
    """BFS children lists of ``t`` hung from ``root``, never entering ``exclude``."""
    children = {}
    order = [root]
    seen = {root}
    if exclude is not None:
        seen.add(exclude)
    i = 0
    while i < len(order):
        x = order[i]
        i += 1
        kids = [y for y in t.neighbors(x) if y not in seen]
        seen.update(kids)
        children[x] = kids
        order.extend(kids)
    return order, children


def _codes(order, children, labels=None):
    codes = {}
    for v in reversed(order):
        inner = "".join(sorted(codes[c] for c in children[v]))
        tag = "" if labels is None else f"<{labels[v]}>"
        codes[v] = "(" + tag + inner + ")"
    return codes


def ahu_code(t: RootedFiniteTree, labels: Optional[Mapping[Hashable, Hashable]] = None) -> str:
    """Canonical code of a rooted tree, optionally respecting vertex labels."""
    if labels is None and "ahu" in t._cache:
        return t._cache["ahu"]
    codes = _codes(t.vertices, t._children, labels)
    if labels is None:
        t._cache["ahu"] = codes[t.root]
    return codes[t.root]


def subtree_codes(t: RootedFiniteTree, labels=None):
    """Code of every full subtree of ``t``, keyed by its root."""
    return _codes(t.vertices, t._children, labels)


def tree_center(t: FiniteTree):
    """The one or two central vertices, found by peeling leaves."""
    if len(t) <= 2:
        return tuple(t.vertices)
    deg = {v: t.degree(v) for v in t}
    removed = set()
    layer = [v for v in t if deg[v] == 1]
    while len(t) - len(removed) > 2:
        removed.update(layer)
        nxt = []
        for v in layer:
            for w in t.neighbors(v):
                if w not in removed:
                    deg[w] -= 1
                    if deg[w] == 1:
                        nxt.append(w)
        layer = nxt
    return tuple(v for v in t if v not in removed)


def unrooted_code(t: FiniteTree, labels=None) -> str:
    """Canonical code of an unrooted tree (rooted at its centre)."""
    c = tree_center(t)
    if len(c) == 1:
        order, ch = _child_lists(t, c[0])
        return "V" + _codes(order, ch, labels)[c[0]]
    a, b = c
    oa, cha = _child_lists(t, a, exclude=b)
    ob, chb = _child_lists(t, b, exclude=a)
    halves = sorted((_codes(oa, cha, labels)[a], _codes(ob, chb, labels)[b]))
    return "E" + halves[0] + halves[1]


def iso_rooted(t: RootedFiniteTree, s: RootedFiniteTree) -> bool:
    return len(t) == len(s) and ahu_code(t) == ahu_code(s)


def iso_unrooted(t: FiniteTree, s: FiniteTree) -> bool:
    if isinstance(t, RootedFiniteTree):
        t = t.tree
    if isinstance(s, RootedFiniteTree):
        s = s.tree
    return len(t) == len(s) and unrooted_code(t) == unrooted_code(s)


# -- automorphisms -----------------------------------------------------------


def _isomorphisms(a, ch1, codes1, b, ch2, codes2):
    """Yield every isomorphism from the subtree at ``a`` onto the one at ``b``.

    Candidate images are restricted to children carrying the same code, which
    is what keeps the enumeration proportional to the output size.
    """
    groups = {}
    for c in ch1[a]:
        groups.setdefault(codes1[c], ([], []))[0].append(c)
    for c in ch2[b]:
        groups.setdefault(codes2[c], ([], []))[1].append(c)
    pairings = []
    for left, right in groups.values():
        pairings.append([list(zip(left, p)) for p in permutations(right)])

    for choice in product(*pairings):
        pairs = [pair for block in choice for pair in block]
        subs = [list(_isomorphisms(x, ch1, codes1, y, ch2, codes2)) for x, y in pairs]
        for parts in product(*subs):
            m = {a: b}
            for part in parts:
                m.update(part)
            yield m


def _budget(budget):
    return budget_override(DEFAULT_AUTOMORPHISM_BUDGET if budget is None else budget)


def iter_automorphisms(t: FiniteTree, labels=None, budget: Optional[int] = None):
    """Generate the label-preserving automorphisms of ``t`` as dicts."""
    if isinstance(t, RootedFiniteTree):
        t = t.tree
    limit = _budget(budget)
    if len(t) > limit:
        raise BudgetExceeded(f"{len(t)} vertices exceeds automorphism budget {limit}")
    c = tree_center(t)
    if len(c) == 1:
        order, ch = _child_lists(t, c[0])
        codes = _codes(order, ch, labels)
        yield from _isomorphisms(c[0], ch, codes, c[0], ch, codes)
        return
    a, b = c
    oa, cha = _child_lists(t, a, exclude=b)
    ob, chb = _child_lists(t, b, exclude=a)
    ca = _codes(oa, cha, labels)
    cb = _codes(ob, chb, labels)
    for ma in _isomorphisms(a, cha, ca, a, cha, ca):
        for mb in _isomorphisms(b, chb, cb, b, chb, cb):
            yield {**ma, **mb}
    if ca[a] == cb[b]:
        for ma in _isomorphisms(a, cha, ca, b, chb, cb):
            for mb in _isomorphisms(b, chb, cb, a, cha, ca):
                yield {**ma, **mb}


def automorphisms(t: FiniteTree, labels=None, budget: Optional[int] = None):
    """All automorphisms of ``t`` (as vertex dicts).

    Raises :class:`BudgetExceeded` above ``budget`` vertices (default 12,
    overridable through ``TREEMT_BUDGET``).
    """
    return list(iter_automorphisms(t, labels, budget))


# -- frames and fixed loci ---------------------------------------------------


@dataclass(frozen=True)
class BranchFrame:
    frame_vertices: frozenset
    spanned: frozenset


def branch_frame(t: FiniteTree, degree=None) -> BranchFrame:
    """Vertices of degree > 2 and the subtree spanned by paths between them.

    ``degree`` may override the degree function, which is how decorated
    finite cores of infinite trees report their true degrees.
    """
    if isinstance(t, RootedFiniteTree):
        t = t.tree
    deg = degree or t.degree
    frame = frozenset(v for v in t if deg(v) > 2)
    if not frame:
        return BranchFrame(frame, frozenset())
    # peel leaves that are not frame vertices until none remain
    alive = set(t)
    d = {v: t.degree(v) for v in t}
    stack = [v for v in t if d[v] <= 1 and v not in frame]
    while stack:
        v = stack.pop()
        if v not in alive:
            continue
        alive.discard(v)
        for w in t.neighbors(v):
            if w in alive:
                d[w] -= 1
                if d[w] <= 1 and w not in frame:
                    stack.append(w)
    return BranchFrame(frame, frozenset(alive))


def induced_subtree(t: FiniteTree, keep) -> FiniteTree:
    keep = set(keep)
    edges = [(a, b) for a, b in t.edges if a in keep and b in keep]
    return FiniteTree([v for v in t if v in keep], edges)


@dataclass(frozen=True)
class FixedLocus:
    kind: str  # "vertex" or "edge"
    value: object

    def is_fixed_by(self, perm) -> bool:
        if self.kind == "vertex":
            return perm[self.value] == self.value
        return frozenset(perm[x] for x in self.value) == self.value


def fixed_locus(t: FiniteTree, labels=None) -> FixedLocus:
    """A vertex or edge fixed by every (label-preserving) automorphism.

    The centre of a tree is invariant under all automorphisms. A central
    vertex is returned directly. For a central edge, a vertex is still
    returned when no automorphism swaps the two halves; otherwise the edge is
    the answer and no vertex is fixed.
    """
    if isinstance(t, RootedFiniteTree):
        t = t.tree
    c = tree_center(t)
    if len(c) == 1:
        return FixedLocus("vertex", c[0])
    a, b = c
    oa, cha = _child_lists(t, a, exclude=b)
    ob, chb = _child_lists(t, b, exclude=a)
    ca = _codes(oa, cha, labels)[a]
    cb = _codes(ob, chb, labels)[b]
    if ca == cb:
        return FixedLocus("edge", frozenset((a, b)))
    return FixedLocus("vertex", a if ca < cb else b)


def fixed_vertices(t: FiniteTree, labels=None, budget=None):
    """Vertices fixed by every automorphism, by enumeration."""
    if isinstance(t, RootedFiniteTree):
        t = t.tree
    fixed = set(t)
    for perm in iter_automorphisms(t, labels, budget):
        fixed = {v for v in fixed if perm[v] == v}
    return fixed


def check_labels(t, labels):
    if labels is None:
        return
    missing = [v for v in t if v not in labels]
    if missing:
        raise InputError(f"no label for vertices {missing[:5]!r}")
