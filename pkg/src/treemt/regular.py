"""Regular rooted trees given by finite presentations.

A presentation is a finite set of nonterminals, each with a production listing
its children. An entry ``B*k`` hangs a copy of ``B`` below the current vertex
through ``k`` extra degree-2 vertices. The unfolding from the root nonterminal
is a finitely branching rooted tree, possibly infinite.

Internally every presentation is expanded into a graph whose nodes are the
nonterminals plus one node per subdivision vertex; each node of the graph
stands for an orbit of vertices of the unfolding that share the same full
subtree. All decisions below (shape, minor, isomorphism) are finite
computations over these graphs.
"""

import re
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property, lru_cache
from typing import Mapping, Optional, Tuple

from ._matching import saturating_matching
from .errors import InputError, PreconditionError
from .iso import FixedLocus, branch_frame, fixed_locus, induced_subtree
from .minor import MinorWitness
from .trees import FiniteTree, RootedFiniteTree

LEAF = "leaf"
NAME_RE = re.compile(r"[A-Za-z0-9_]+\Z")


@dataclass(frozen=True)
class Entry:
    child: str
    subdiv: int = 0

    def __str__(self):
        return self.child if self.subdiv == 0 else f"{self.child}*{self.subdiv}"


def _entry(e):
    if isinstance(e, Entry):
        return e
    if isinstance(e, tuple):
        return Entry(e[0], int(e[1]))
    name, _, k = str(e).partition("*")
    return Entry(name, int(k) if k else 0)


@dataclass(frozen=True)
class Presentation:
    """Root nonterminal plus productions.

    ``productions`` accepts a mapping ``name -> entries`` where an entry is an
    :class:`Entry`, a ``(name, k)`` pair or a string such as ``"A*3"``. It is
    normalised to a tuple so presentations are hashable. ``leaf`` never needs
    a production.
    """

    root: str
    productions: tuple = field(default=())

    def __post_init__(self):
        prods = self.productions
        items = prods.items() if isinstance(prods, Mapping) else prods
        norm = tuple((str(name), tuple(_entry(e) for e in entries)) for name, entries in items)
        object.__setattr__(self, "productions", norm)

    @cached_property
    def rules(self):
        return dict(self.productions)

    def production(self, name) -> Tuple[Entry, ...]:
        if name == LEAF and name not in self.rules:
            return ()
        try:
            return self.rules[name]
        except KeyError:
            raise InputError(f"no production for nonterminal {name!r}") from None

    @property
    def nonterminals(self):
        return tuple(self.rules)

    def with_root(self, root) -> "Presentation":
        return prune(Presentation(root, self.productions))

    @cached_property
    def graph(self) -> "_Graph":
        errors = validation_errors(self)
        if errors:
            raise InputError("; ".join(errors))
        return _Graph(self)

    def __str__(self):
        from .formats import format_rtp

        return format_rtp(self)


def validation_errors(p: Presentation):
    """Human-readable invariant violations, each naming its nonterminal."""
    errs = []
    rules = p.rules
    if p.root != LEAF and p.root not in rules:
        errs.append(f"root nonterminal {p.root!r} has no production")
    for name, entries in p.productions:
        if not NAME_RE.match(name):
            errs.append(f"nonterminal {name!r}: invalid name")
        if name == LEAF and entries:
            errs.append("nonterminal 'leaf': must have an empty production")
        for e in entries:
            if e.child != LEAF and e.child not in rules:
                errs.append(f"nonterminal {name!r}: child {e.child!r} has no production")
            if e.subdiv < 0:
                errs.append(f"nonterminal {name!r}: negative subdivision on {e.child!r}")
    if len(rules) != len(p.productions):
        seen = set()
        for name, _ in p.productions:
            if name in seen:
                errs.append(f"nonterminal {name!r}: more than one production")
            seen.add(name)
    if not errs:
        reach = _reachable_names(p)
        for name in rules:
            if name not in reach and name != LEAF:
                errs.append(f"nonterminal {name!r}: unreachable from root {p.root!r}")
    return errs


def validate(p: Presentation) -> bool:
    return not validation_errors(p)


def _reachable_names(p: Presentation):
    seen = {p.root}
    queue = deque([p.root])
    while queue:
        x = queue.popleft()
        for e in p.rules.get(x, ()):
            if e.child not in seen:
                seen.add(e.child)
                queue.append(e.child)
    return seen


def prune(p: Presentation) -> Presentation:
    """Drop nonterminals unreachable from the root."""
    reach = _reachable_names(p)
    return Presentation(p.root, tuple((n, es) for n, es in p.productions if n in reach))


class _Graph:
    """Expanded presentation: one node per nonterminal and per subdivision vertex."""

    def __init__(self, p: Presentation):
        self.names = []
        self.children = []
        self.nt_node = {}
        self.slot_node = {}
        self.origin = []

        def node(label, origin):
            self.names.append(label)
            self.children.append([])
            self.origin.append(origin)
            return len(self.names) - 1

        def nt(name):
            if name not in self.nt_node:
                self.nt_node[name] = node(name, name)
                queue.append(name)
            return self.nt_node[name]

        queue = deque()
        self.root = nt(p.root)
        while queue:
            name = queue.popleft()
            me = self.nt_node[name]
            for i, e in enumerate(p.production(name)):
                target = nt(e.child)
                prev = me
                first = target
                for j in range(1, e.subdiv + 1):
                    s = node(f"{name}[{i}].{j}", (name, i, j))
                    self.children[prev].append(s)
                    if j == 1:
                        first = s
                    prev = s
                self.children[prev].append(target)
                self.slot_node[(name, i)] = first
        self.n = len(self.names)
        desc = [1 << x for x in range(self.n)]
        changed = True
        while changed:
            changed = False
            for x in range(self.n):
                m = desc[x]
                for c in self.children[x]:
                    m |= desc[c]
                if m != desc[x]:
                    desc[x] = m
                    changed = True
        self.desc = desc
        self.strict = []
        for x in range(self.n):
            m = 0
            for c in self.children[x]:
                m |= desc[c]
            self.strict.append(m)

    def on_cycle(self, x) -> bool:
        return bool(self.strict[x] >> x & 1)

    def is_bare_ray(self, x) -> bool:
        """Whether the subtree at ``x`` is a ray with no branching at all."""
        m = self.desc[x]
        return all(len(self.children[y]) == 1 for y in range(self.n) if m >> y & 1)

    def is_finite(self, x) -> bool:
        m = self.desc[x]
        return not any(self.on_cycle(y) for y in range(self.n) if m >> y & 1)

    def bits(self, m):
        while m:
            low = m & -m
            yield low.bit_length() - 1
            m ^= low


# -- unfolding ---------------------------------------------------------------


@dataclass(frozen=True)
class Truncation:
    """A truncated unfolding plus bookkeeping about where each vertex came from."""

    tree: RootedFiniteTree
    node_of: Mapping  # vertex id -> graph node index
    labels: Mapping  # vertex id -> node name
    frontier: frozenset


def _child_id(v, i):
    return f"{v}_{i}"


def unfold(p: Presentation, d: int, max_vertices: Optional[int] = None) -> Truncation:
    """Levels ``0..d`` of the unfolding; vertices are named by their child-index path."""
    if d < 0:
        raise InputError("depth must be non-negative")
    g = p.graph
    children = {}
    node_of = {"v": g.root}
    frontier = set()
    queue = deque([("v", g.root, 0)])
    count = 1
    while queue:
        v, x, lvl = queue.popleft()
        kids = g.children[x]
        if lvl == d:
            if kids:
                frontier.add(v)
            continue
        ids = []
        for i, c in enumerate(kids):
            cid = _child_id(v, i)
            ids.append(cid)
            node_of[cid] = c
            queue.append((cid, c, lvl + 1))
        count += len(ids)
        if max_vertices is not None and count > max_vertices:
            raise InputError(f"truncation exceeds {max_vertices} vertices")
        children[v] = ids
    tree = RootedFiniteTree("v", children)
    return Truncation(tree, node_of, {v: g.names[x] for v, x in node_of.items()}, frozenset(frontier))


def unfold_truncate(p: Presentation, d: int, max_vertices: Optional[int] = None) -> RootedFiniteTree:
    return unfold(p, d, max_vertices).tree


def id_depth(vertex_id: str) -> int:
    return vertex_id.count("_")


# -- shape ---------------------------------------------------------------------


FINITE = "Finite"
BARE_RAY = "BareRay"
SMALL_INFINITE = "SmallInfinite"
LARGE = "Large"
SHAPE_CLASSES = (FINITE, BARE_RAY, SMALL_INFINITE, LARGE)


def _shape_at(g: _Graph, x: int) -> str:
    m = g.desc[x]
    nodes = list(g.bits(m))
    cyclic = [y for y in nodes if g.on_cycle(y)]
    if not cyclic:
        return FINITE
    if any(len(g.children[y]) >= 2 for y in cyclic):
        return LARGE
    if all(len(g.children[y]) <= 1 for y in nodes):
        return BARE_RAY
    return SMALL_INFINITE


def shape_classify(p: Presentation) -> str:
    """One of ``Finite``, ``BareRay``, ``SmallInfinite`` or ``Large``.

    Large exactly when some cycle of the presentation passes through a
    nonterminal with two or more children: the ray looping that cycle meets a
    branching vertex on every turn.
    """
    g = p.graph
    return _shape_at(g, g.root)


# -- the minor relation --------------------------------------------------------


def _reach(Q: _Graph, e):
    """Nodes ``y`` of ``Q`` with some node of ``e`` at or below ``y``."""
    r = 0
    if e:
        for y in range(Q.n):
            if Q.desc[y] & e:
                r |= 1 << y
    return r


def _step(P: _Graph, Q: _Graph, E):
    reach = [_reach(Q, e) for e in E]
    out = []
    for a in range(P.n):
        kids = P.children[a]
        if not kids:
            out.append(E[a])
            continue
        e = 0
        rk = [reach[c] for c in kids]
        for b in Q.bits(E[a]):
            bk = Q.children[b]
            if len(bk) < len(kids):
                continue
            adj = [[j for j, y in enumerate(bk) if r >> y & 1] for r in rk]
            if saturating_matching(adj) is not None:
                e |= 1 << b
        out.append(e)
    return out


@lru_cache(maxsize=512)
def _approximants(p: Presentation, q: Presentation):
    """Descending chain ``E_0 >= E_1 >= ...`` ending at the greatest fixpoint.

    ``E_k[a]`` has bit ``b`` set iff the depth-``k`` truncation of the
    subtree at ``a`` embeds into the full subtree at ``b`` with root sent to
    root; the limit is the exact embedding relation.
    """
    P, Q = p.graph, q.graph
    E = [(1 << Q.n) - 1] * P.n
    chain = [tuple(E)]
    while True:
        nxt = _step(P, Q, E)
        if nxt == E:
            return tuple(chain)
        E = nxt
        chain.append(tuple(E))


def _gfp(p, q):
    return _approximants(p, q)[-1]


def _descent(Q: _Graph, start: int, mask: int):
    """Shortest child-index path from ``start`` to a node in ``mask``."""
    queue = deque([(start, ())])
    seen = {start}
    while queue:
        y, path = queue.popleft()
        if mask >> y & 1:
            return path, y
        for i, c in enumerate(Q.children[y]):
            if c not in seen:
                seen.add(c)
                queue.append((c, path + (i,)))
    return None


@dataclass(frozen=True, eq=False)
class RegMinorWitness:
    """Greatest-fixpoint relation plus the choices needed to expand it.

    ``choices[(a, b)][i]`` is ``(path, z)``: child ``i`` of node ``a`` goes
    to node ``z`` reached from ``b`` by the child-index ``path`` (first step
    picks the branch). ``root_path`` leads from the root of ``q`` to the image
    of the root of ``p``.
    """

    p: Presentation
    q: Presentation
    relation: frozenset
    root_path: tuple
    root_image: int
    choices: Mapping

    def named_relation(self):
        P, Q = self.p.graph, self.q.graph
        return sorted((P.names[a], Q.names[b]) for a, b in self.relation)


def _choices(P, Q, E):
    reach = [_reach(Q, e) for e in E]
    out = {}
    for a in range(P.n):
        kids = P.children[a]
        for b in Q.bits(E[a]):
            bk = Q.children[b]
            adj = [[j for j, y in enumerate(bk) if reach[c] >> y & 1] for c in kids]
            assignment = saturating_matching(adj) if kids else {}
            row = []
            for i, c in enumerate(kids):
                j = assignment[i]
                path, z = _descent(Q, bk[j], E[c])
                row.append(((j,) + path, z))
            out[(a, b)] = tuple(row)
    return out


def reg_minor(p: Presentation, q: Presentation) -> Optional[RegMinorWitness]:
    """Witness that the unfolding of ``p`` is a rooted topological minor of ``q``'s."""
    P, Q = p.graph, q.graph
    E = _gfp(p, q)
    found = _descent(Q, Q.root, E[P.root])
    if found is None:
        return None
    path, z = found
    relation = frozenset((a, b) for a in range(P.n) for b in Q.bits(E[a]))
    return RegMinorWitness(p, q, relation, path, z, _choices(P, Q, E))


def reg_equiv(p: Presentation, q: Presentation) -> bool:
    return reg_minor(p, q) is not None and reg_minor(q, p) is not None


def refutation_depth(p: Presentation, q: Presentation) -> Optional[int]:
    """Least ``d`` whose truncation of ``p`` embeds nowhere in ``q``; ``None`` if ``p <=# q``."""
    P = p.graph
    for k, E in enumerate(_approximants(p, q)):
        if not E[P.root]:
            return k
    return None


def refutation_bound(p: Presentation, q: Presentation) -> int:
    """Upper bound on :func:`refutation_depth`: pairs of expanded nodes, plus one."""
    return p.graph.n * q.graph.n + 1


def host_depth_bound(p: Presentation, q: Presentation, d: int) -> int:
    """Depth of ``q`` searched by the finite refutation check at depth ``d``."""
    nts = len(_reachable_names(q))
    sub = max((e.subdiv for _, es in q.productions for e in es), default=0)
    return max(d, d * nts * (1 + sub))


def reg_iso_rooted(p: Presentation, q: Presentation) -> bool:
    """Isomorphism of unfoldings by counting bisimulation (partition refinement)."""
    P, Q = p.graph, q.graph
    children = [list(cs) for cs in P.children] + [[c + P.n for c in cs] for cs in Q.children]
    n = len(children)
    block = [0] * n
    count = 1
    while True:
        sigs = {}
        new = []
        for x in range(n):
            sig = (block[x], tuple(sorted(block[c] for c in children[x])))
            new.append(sigs.setdefault(sig, len(sigs)))
        block = new
        if len(sigs) == count:
            break
        count = len(sigs)
    return block[P.root] == block[Q.root + P.n]


# -- self-similarity -----------------------------------------------------------


def self_similar(p: Presentation) -> bool:
    """Whether the tree embeds into the full subtree of some vertex strictly below its root."""
    g = p.graph
    E = _gfp(p, p)
    return bool(E[g.root] & g.strict[g.root])


def self_similar_nodes(p: Presentation):
    """Graph nodes whose full subtree is self-similar."""
    g = p.graph
    E = _gfp(p, p)
    return [x for x in range(g.n) if E[x] & g.strict[x]]


def self_similar_subtree_exists(p: Presentation) -> bool:
    """Whether some full subtree is self-similar.

    Subtrees that are bare rays are not counted, since every bare ray is
    trivially self-similar; a presentation that is itself a bare ray is
    reported as ``True``.
    """
    g = p.graph
    if _shape_at(g, g.root) == BARE_RAY:
        return True
    return any(not g.is_bare_ray(x) for x in self_similar_nodes(p))


# -- helpers producing new presentations -----------------------------------------


def _fresh_name(taken, base):
    base = re.sub(r"[^A-Za-z0-9_]", "_", base)
    name = base
    i = 1
    while name in taken or name == LEAF:
        name = f"{base}_{i}"
        i += 1
    taken.add(name)
    return name


def subtree_presentation(p: Presentation, node) -> Presentation:
    """Presentation of the full subtree at a graph node (index or name)."""
    g = p.graph
    x = g.names.index(node) if isinstance(node, str) else node
    origin = g.origin[x]
    if isinstance(origin, str):
        return p.with_root(origin)
    name, i, j = origin
    e = p.production(name)[i]
    taken = set(p.rules)
    head = _fresh_name(taken, f"{name}_{i}_{j}")
    return prune(Presentation(head, p.productions + ((head, (Entry(e.child, e.subdiv - j),)),)))


def prepend_bare_chain(p: Presentation, n: int) -> Presentation:
    """New root followed by ``n`` bare vertices in total above the old root."""
    if n <= 0:
        return p
    taken = set(p.rules)
    head = _fresh_name(taken, "R0")
    return Presentation(head, ((head, (Entry(p.root, n - 1),)),) + p.productions)


# -- witness expansion -------------------------------------------------------------


def expand_reg_witness(p: Presentation, q: Presentation, w: RegMinorWitness, d: int) -> MinorWitness:
    """Finite witness from the depth-``d`` truncation of ``p`` into a truncation of ``q``.

    Vertex ids of both truncations are child-index paths, so the image of
    every vertex is spelled out directly. Use :func:`witness_host_depth` for
    the depth of ``q`` the images need.
    """
    if w.p != p or w.q != q:
        raise PreconditionError("witness was computed for different presentations")
    tr = unfold(p, d)
    t = tr.tree
    root_img = "v" + "".join(f"_{i}" for i in w.root_path)
    phi = {t.root: root_img}
    qnode = {t.root: w.root_image}
    for v in t.vertices:
        kids = t.children(v)
        if not kids:
            continue
        row = w.choices[(tr.node_of[v], qnode[v])]
        for i, c in enumerate(kids):
            path, z = row[i]
            phi[c] = phi[v] + "".join(f"_{k}" for k in path)
            qnode[c] = z
    return MinorWitness(phi)


def witness_host_depth(w: MinorWitness) -> int:
    return max(id_depth(x) for x in w.mapping.values())


# -- small trees: fixed locus ------------------------------------------------------


@dataclass(frozen=True)
class SmallCore:
    """Finite part of a small tree that every self-embedding must preserve.

    ``core`` is the span of the vertices of degree > 2; ``labels`` record each
    core vertex's true degree and how many rays hang off it.
    """

    core: FiniteTree
    labels: Mapping
    frame: frozenset


def lower_small(p: Presentation) -> SmallCore:
    """Reduce a small, infinite, locally finite presentation to its decorated branch frame."""
    g = p.graph
    shape = _shape_at(g, g.root)
    if shape != SMALL_INFINITE:
        raise PreconditionError(f"expected a SmallInfinite presentation, got {shape}")
    ray = {x for x in range(g.n) if g.is_bare_ray(x)}
    verts = ["v"]
    edges = []
    real_deg = {}
    is_ray = {}
    queue = deque([("v", g.root, None)])
    while queue:
        v, x, parent = queue.popleft()
        if x in ray:
            is_ray[v] = True
            real_deg[v] = 2 if parent is not None else 1
            continue
        is_ray[v] = False
        real_deg[v] = len(g.children[x]) + (parent is not None)
        for i, c in enumerate(g.children[x]):
            cid = _child_id(v, i)
            verts.append(cid)
            edges.append((v, cid))
            queue.append((cid, c, v))
    whole = FiniteTree(verts, edges)
    frame = branch_frame(whole, degree=real_deg.__getitem__)
    if not frame.frame_vertices:
        raise PreconditionError("no vertex of degree > 2: the tree is a ray or double ray")
    spanned = frame.spanned
    labels = {}
    for v in spanned:
        rays = 0
        for w0 in whole.neighbors(v):
            if w0 in spanned:
                continue
            stack = [w0]
            seen = {v, w0}
            found = False
            while stack and not found:
                y = stack.pop()
                if is_ray[y]:
                    found = True
                for z in whole.neighbors(y):
                    if z not in seen:
                        seen.add(z)
                        stack.append(z)
            rays += found
        labels[v] = (real_deg[v], rays)
    return SmallCore(induced_subtree(whole, spanned), labels, frame.frame_vertices)


def fixed_locus_regular(p: Presentation) -> FixedLocus:
    """Fixed vertex or edge of a finite or small locally finite regular tree.

    Finite trees are handled directly; small infinite ones through their
    decorated branch frame. Vertices are named by child-index paths as in
    :func:`unfold`.
    """
    g = p.graph
    shape = _shape_at(g, g.root)
    if shape == FINITE:
        return fixed_locus(unfold(p, g.n).tree.tree)
    if shape != SMALL_INFINITE:
        raise PreconditionError(f"fixed locus needs a finite or small tree, got {shape}")
    core = lower_small(p)
    return fixed_locus(core.core, core.labels)


def reg_root_rigidity_check(p: Presentation, q: Presentation) -> bool:
    """For equivalent trees: does every embedding in either direction map root to root?"""
    if not reg_equiv(p, q):
        raise PreconditionError("presentations are not topologically equivalent")
    for a, b in ((p, q), (q, p)):
        A, B = a.graph, b.graph
        if _gfp(a, b)[A.root] & B.strict[B.root]:
            return False
    return True
