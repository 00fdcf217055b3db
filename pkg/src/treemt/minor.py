"""The topological-minor relation on finite trees.

``(T, r) <=# (S, s)`` holds when some subdivision of ``T`` is isomorphic to
the smallest rooted subtree of ``S`` spanned by the image. Equivalently there
is an injective vertex map that preserves meets in the tree order; that map
is the witness every decision procedure here returns.

The decision procedure is the classical subtree-homeomorphism dynamic
programme. ``emb(a, b)`` says the full subtree at ``a`` embeds with ``a``
sent to ``b``; it holds when the children of ``a`` can be matched to
distinct children of ``b`` such that each child's subtree embeds somewhere
at or below its partner.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import Mapping, Optional, Sequence

from ._matching import max_matching, min_vertex_cover, saturating_matching
from .config import budget_override
from .errors import BudgetExceeded, PreconditionError
from .iso import ahu_code, unrooted_code
from .trees import FiniteTree, RootedFiniteTree, meet

ORACLE_BUDGET = (8, 10)
ANTICHAIN_BUDGET = 10


@dataclass(frozen=True)
class MinorWitness:
    """An injective vertex map claimed to be a minor embedding."""

    mapping: Mapping

    def __getitem__(self, v):
        return self.mapping[v]

    def __len__(self):
        return len(self.mapping)

    def compose(self, after: "MinorWitness") -> "MinorWitness":
        """The map ``after . self``."""
        return MinorWitness({v: after.mapping[x] for v, x in self.mapping.items()})

    def pairs(self):
        return list(self.mapping.items())


@dataclass(frozen=True)
class ComparablePair:
    i: int
    j: int
    witness: MinorWitness


class _Indexed:
    """Array view of a rooted tree in breadth-first order."""

    __slots__ = ("order", "index", "children", "parent", "level", "size", "desc")

    def __init__(self, t: RootedFiniteTree):
        self.order = t.vertices
        self.index = {v: i for i, v in enumerate(self.order)}
        n = len(self.order)
        self.children = [[self.index[c] for c in t.children(v)] for v in self.order]
        self.parent = [-1] * n
        for i, cs in enumerate(self.children):
            for c in cs:
                self.parent[c] = i
        self.level = [t.level(v) for v in self.order]
        self.size = [1] * n
        self.desc = [0] * n
        for i in reversed(range(n)):
            mask = 1 << i
            for c in self.children[i]:
                self.size[i] += self.size[c]
                mask |= self.desc[c]
            self.desc[i] = mask


def _indexed(t: RootedFiniteTree) -> _Indexed:
    idx = t._cache.get("idx")
    if idx is None:
        idx = t._cache["idx"] = _Indexed(t)
    return idx


def _table(T: _Indexed, S: _Indexed):
    """``emb[a]`` and ``reach[a]`` as bitmasks over the vertices of ``S``."""
    n_s = len(S.order)
    full = (1 << n_s) - 1
    emb = [0] * len(T.order)
    reach = [0] * len(T.order)
    for a in reversed(range(len(T.order))):
        kids = T.children[a]
        if not kids:
            e = full
        else:
            e = 0
            k = len(kids)
            need = T.size[a]
            rk = [reach[c] for c in kids]
            for b in range(n_s):
                bk = S.children[b]
                if len(bk) < k or S.size[b] < need:
                    continue
                adj = [[j for j, y in enumerate(bk) if r >> y & 1] for r in rk]
                if saturating_matching(adj) is not None:
                    e |= 1 << b
        emb[a] = e
        r = 0
        if e:
            for y in range(n_s):
                if S.desc[y] & e:
                    r |= 1 << y
        reach[a] = r
    return emb, reach


def _shallowest(S: _Indexed, start: int, mask: int) -> int:
    """First vertex at or below ``start`` (breadth-first) whose bit is set."""
    queue = [start]
    i = 0
    while i < len(queue):
        y = queue[i]
        i += 1
        if mask >> y & 1:
            return y
        queue.extend(S.children[y])
    raise AssertionError("no viable vertex below a reachable branch")


def _extract(T: _Indexed, S: _Indexed, emb, reach, root_image: int):
    phi = {0: root_image}
    stack = [0]
    while stack:
        a = stack.pop()
        b = phi[a]
        kids = T.children[a]
        if not kids:
            continue
        bk = S.children[b]
        adj = [[j for j, y in enumerate(bk) if reach[c] >> y & 1] for c in kids]
        assignment = saturating_matching(adj)
        for i, c in enumerate(kids):
            phi[c] = _shallowest(S, bk[assignment[i]], emb[c])
            stack.append(c)
    return MinorWitness({T.order[a]: S.order[x] for a, x in phi.items()})


def is_rooted_minor(t: RootedFiniteTree, s: RootedFiniteTree) -> Optional[MinorWitness]:
    """Witness for ``(t, root) <=# (s, root)`` or ``None``.

    The root of ``t`` goes to the shallowest vertex of ``s`` that works; each
    child is sent into its matched branch at the shallowest viable vertex.
    """
    if len(t) > len(s):
        return None
    T, S = _indexed(t), _indexed(s)
    emb, reach = _table(T, S)
    roots = emb[0]
    if not roots:
        return None
    return _extract(T, S, emb, reach, (roots & -roots).bit_length() - 1)


def rooted_minor_at(t: RootedFiniteTree, s: RootedFiniteTree, image) -> Optional[MinorWitness]:
    """Witness sending the root of ``t`` to the vertex ``image`` of ``s``, if any."""
    if len(t) > len(s):
        return None
    T, S = _indexed(t), _indexed(s)
    emb, reach = _table(T, S)
    b = S.index[image]
    if not emb[0] >> b & 1:
        return None
    return _extract(T, S, emb, reach, b)


def centroid(t: FiniteTree):
    """A vertex minimising the largest component left after deleting it."""
    r = t.rooted_at(next(iter(t)))
    idx = _indexed(r)
    n = len(idx.order)
    best, best_v = n + 1, None
    for i, v in enumerate(idx.order):
        parts = [idx.size[c] for c in idx.children[i]]
        parts.append(n - idx.size[i])
        worst = max(parts)
        if worst < best:
            best, best_v = worst, v
    return best_v


def _as_free(t):
    return t.tree if isinstance(t, RootedFiniteTree) else t


def is_minor_unrooted(t: FiniteTree, s: FiniteTree) -> Optional[MinorWitness]:
    """Witness for ``t <=# s`` as unrooted trees, or ``None``.

    A centroid ``a0`` of ``t`` is fixed; ``t`` embeds in ``s`` exactly when
    for some ``b`` the tree ``(t, a0)`` embeds in ``(s, b)`` with ``a0 -> b``.
    """
    t, s = _as_free(t), _as_free(s)
    if len(t) > len(s):
        return None
    a0 = centroid(t)
    T = _indexed(t.rooted_at(a0))
    need = t.degree(a0)
    for b in s:
        if s.degree(b) < need:
            continue
        S = _indexed(s.rooted_at(b))
        emb, reach = _table(T, S)
        if emb[0] & 1:
            return _extract(T, S, emb, reach, 0)
    return None


def verify_witness(t: RootedFiniteTree, s: RootedFiniteTree, w) -> bool:
    """True iff ``w`` is injective and ``w(u ^ v) == w(u) ^ w(v)`` for all pairs."""
    m = w.mapping if isinstance(w, MinorWitness) else w
    if set(m) != set(t.vertices):
        return False
    if any(x not in s for x in m.values()):
        return False
    if len(set(m.values())) != len(m):
        return False
    verts = t.vertices
    for u, v in combinations(verts, 2):
        if m[meet(t, u, v)] != meet(s, m[u], m[v]):
            return False
    return True


def verify_witness_unrooted(t: FiniteTree, s: FiniteTree, w) -> bool:
    t, s = _as_free(t), _as_free(s)
    m = w.mapping if isinstance(w, MinorWitness) else w
    a = next(iter(t))
    if a not in m or m[a] not in s:
        return False
    return verify_witness(t.rooted_at(a), s.rooted_at(m[a]), m)


# -- brute-force oracle ------------------------------------------------------


def _oracle_limits(budget):
    if budget is None:
        budget = ORACLE_BUDGET
    lt, ls = budget
    override = budget_override(0)
    if override:
        lt = ls = override
    return lt, ls


def iter_rooted_minor_witnesses(t: RootedFiniteTree, s: RootedFiniteTree, budget=None):
    """Every meet-preserving injective map from ``t`` into ``s``.

    Plain backtracking over injective maps, vertices of ``t`` taken in
    breadth-first order so every meet of assigned vertices is itself
    assigned; partial maps that already break a meet are abandoned.
    """
    lt, ls = _oracle_limits(budget)
    if len(t) > lt or len(s) > ls:
        raise BudgetExceeded(f"oracle budget {lt}/{ls} exceeded by {len(t)}/{len(s)} vertices")
    tv, sv = t.vertices, s.vertices
    n, m = len(tv), len(sv)
    if n > m:
        return
    mt = [[tv.index(meet(t, a, b)) for b in tv] for a in tv]
    ms = [[sv.index(meet(s, a, b)) for b in sv] for a in sv]
    phi = [-1] * n
    used = [False] * m

    def rec(i):
        if i == n:
            yield MinorWitness({tv[k]: sv[phi[k]] for k in range(n)})
            return
        row_t = mt[i]
        for x in range(m):
            if used[x]:
                continue
            row_s = ms[x]
            if all(row_s[phi[k]] == phi[row_t[k]] for k in range(i)):
                phi[i] = x
                used[x] = True
                yield from rec(i + 1)
                used[x] = False
        phi[i] = -1

    yield from rec(0)


def brute_force_rooted_minor(t: RootedFiniteTree, s: RootedFiniteTree, budget=None) -> Optional[MinorWitness]:
    """Exhaustive-search ground truth for :func:`is_rooted_minor`."""
    for w in iter_rooted_minor_witnesses(t, s, budget):
        return w
    return None


# -- derived relations -------------------------------------------------------


def equiv_sharp(t, s, rooted: bool = True) -> bool:
    if rooted:
        return is_rooted_minor(t, s) is not None and is_rooted_minor(s, t) is not None
    return is_minor_unrooted(t, s) is not None and is_minor_unrooted(s, t) is not None


def _code(t, rooted):
    return ahu_code(t) if rooted else unrooted_code(_as_free(t))


class ComparabilityCache:
    """Minor verdicts keyed by canonical codes; safe to share between calls."""

    def __init__(self, rooted: bool = True):
        self.rooted = rooted
        self._table = {}

    def leq(self, t, s) -> bool:
        key = (_code(t, self.rooted), _code(s, self.rooted))
        hit = self._table.get(key)
        if hit is None:
            if key[0] == key[1]:
                hit = True
            elif self.rooted:
                hit = is_rooted_minor(t, s) is not None
            else:
                hit = is_minor_unrooted(t, s) is not None
            self._table[key] = hit
        return hit

    def __len__(self):
        return len(self._table)


def _witness(t, s, rooted):
    return is_rooted_minor(t, s) if rooted else is_minor_unrooted(t, s)


def wqo_find_comparable(seq: Sequence, rooted: bool = True, cache: ComparabilityCache = None) -> Optional[ComparablePair]:
    """First pair ``i < j`` (ordered by ``j``, then ``i``) with ``seq[i] <=# seq[j]``.

    Indices are 0-based.
    """
    cache = cache or ComparabilityCache(rooted)
    for j in range(1, len(seq)):
        for i in range(j):
            if cache.leq(seq[i], seq[j]):
                return ComparablePair(i, j, _witness(seq[i], seq[j], rooted))
    return None


def comparability_matrix(seq: Sequence, rooted: bool = True, cache: ComparabilityCache = None):
    """``m[i][j]`` is True when ``seq[i] <=# seq[j]``."""
    cache = cache or ComparabilityCache(rooted)
    return [[cache.leq(a, b) for b in seq] for a in seq]


def increasing_subsequence(seq: Sequence, rooted: bool = True, cache: ComparabilityCache = None):
    """Indices of a longest chain ``seq[i1] <=# seq[i2] <=# ...`` with ``i1 < i2 < ...``."""
    if not seq:
        return []
    m = comparability_matrix(seq, rooted, cache)
    best = [1] * len(seq)
    prev = [-1] * len(seq)
    for j in range(len(seq)):
        for i in range(j):
            if m[i][j] and best[i] + 1 > best[j]:
                best[j] = best[i] + 1
                prev[j] = i
    end = max(range(len(seq)), key=lambda k: (best[k], -k))
    chain = []
    while end != -1:
        chain.append(end)
        end = prev[end]
    return chain[::-1]


def maximum_antichain(items: Sequence, leq) -> list:
    """Largest pairwise-incomparable subset of a finite poset.

    Uses Dilworth's theorem: the maximum antichain has size ``n - |M|`` for a
    maximum matching ``M`` of the strict-order bipartite graph, and is read
    off a König vertex cover.
    """
    n = len(items)
    adj = [[j for j in range(n) if j != i and leq(items[i], items[j])] for i in range(n)]
    _, assignment = max_matching(adj)
    left_cover, right_cover = min_vertex_cover(adj, n, assignment)
    return [i for i in range(n) if i not in left_cover and i not in right_cover]


def antichain_search(n: int, budget: Optional[int] = None):
    """A maximum ``<=#``-antichain among unlabeled trees with at most ``n`` vertices."""
    from .enumeration import free_trees_upto

    limit = budget_override(ANTICHAIN_BUDGET if budget is None else budget)
    if n > limit:
        raise BudgetExceeded(f"antichain search over {n} vertices exceeds budget {limit}")
    trees = free_trees_upto(n)
    cache = ComparabilityCache(rooted=False)
    picked = maximum_antichain(trees, cache.leq)
    return [trees[i] for i in picked]


def root_rigidity_check(t: RootedFiniteTree, s: RootedFiniteTree, budget=None) -> bool:
    """Whether every witness in either direction sends root to root."""
    if not equiv_sharp(t, s):
        raise PreconditionError("trees are not topologically equivalent")
    for a, b in ((t, s), (s, t)):
        for w in iter_rooted_minor_witnesses(a, b, budget):
            if w.mapping[a.root] != b.root:
                return False
    return True
