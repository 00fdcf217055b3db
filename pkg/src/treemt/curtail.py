"""Curtailing presentations and the subdivided families built on a designated ray.

Curtailing ``p`` via a self-similar ``s`` collapses every maximal bare path
whose head roots a subtree equivalent to ``s`` (and hangs below a branching
vertex) into a single edge. On a presentation each such head is the first
vertex of some entry ``B*k`` of a branching nonterminal, so the rewrite is a
finite edit of those entries.

The family ``T'_f`` subdivides the edges entering successive visits of a
designated ray to a branching nonterminal, the ``n``-th getting ``f(n)``
extra vertices. Length functions derived from an almost disjoint family give
pairwise non-isomorphic members.
"""

import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Optional, Sequence, Tuple

from .errors import ConsistencyError, InputError, PreconditionError
from .iso import ahu_code
from .regular import (
    BARE_RAY,
    LARGE,
    Entry,
    Presentation,
    _fresh_name,
    _gfp,
    _shape_at,
    prune,
    reg_equiv,
    reg_iso_rooted,
    reg_minor,
    self_similar,
    shape_classify,
    unfold_truncate,
)


# -- curtailing --------------------------------------------------------------


@dataclass(frozen=True)
class SuppressedPath:
    """A bare path ``p_u`` removed by curtailing.

    ``parent``/``entry`` locate the slot in the input presentation, ``length``
    is the number of suppressed vertices and ``target`` the nonterminal the
    slot now points to directly.
    """

    parent: str
    entry: int
    length: int
    target: str


@dataclass(frozen=True)
class CurtailReport:
    result: Presentation
    suppressed: Tuple[SuppressedPath, ...]
    new_edges: Tuple[Tuple[str, str], ...]
    stripped_root: int = 0

    def summary(self) -> str:
        lines = [f"stripped root path: {self.stripped_root}"]
        for sp in self.suppressed:
            lines.append(f"suppressed {sp.parent}[{sp.entry}]: {sp.length} vertices -> {sp.target}")
        return "\n".join(lines)


def _equivalent_nodes(p: Presentation, s: Presentation):
    """Graph nodes of ``p`` whose full subtree is ``=#`` to the tree of ``s``."""
    P, S = p.graph, s.graph
    into = _gfp(p, s)
    back = _gfp(s, p)[S.root]
    return {x for x in range(P.n) if into[x] and back & P.desc[x]}


def _bare_chain(g, x):
    """Follow single-child nodes from ``x``; return (length, first node with != 1 child)."""
    seen = set()
    length = 0
    while len(g.children[x]) == 1:
        if x in seen:
            raise ConsistencyError("qualifying bare chain closes into a bare ray")
        seen.add(x)
        length += 1
        x = g.children[x][0]
    if not g.children[x]:
        raise ConsistencyError("qualifying bare chain ends in a leaf")
    return length, x


def curtail(p: Presentation, s: Presentation) -> CurtailReport:
    """Curtail ``p`` via the self-similar, non-ray presentation ``s``.

    A root of splitting number 1 whose tree is equivalent to ``s`` would be
    suppressed itself; its maximal bare path is stripped first so the new
    root is the first branching vertex.
    """
    if _shape_at(s.graph, s.graph.root) == BARE_RAY:
        raise PreconditionError("cannot curtail via a ray")
    if not self_similar(s):
        raise PreconditionError("curtailing needs a self-similar tree")
    g = p.graph
    stripped = 0
    eq = _equivalent_nodes(p, s)
    if len(g.children[g.root]) == 1 and g.root in eq:
        stripped, top = _bare_chain(g, g.root)
        p = p.with_root(g.names[top])
        g = p.graph
        eq = _equivalent_nodes(p, s)

    productions = []
    suppressed = []
    new_edges = []
    for name, entries in p.productions:
        if len(entries) < 2:
            productions.append((name, entries))
            continue
        row = []
        for i, e in enumerate(entries):
            head = g.slot_node[(name, i)]
            if len(g.children[head]) == 1 and head in eq:
                length, target = _bare_chain(g, head)
                tname = g.names[target]
                row.append(Entry(tname, 0))
                suppressed.append(SuppressedPath(name, i, length, tname))
                new_edges.append((name, tname))
            else:
                row.append(e)
        productions.append((name, tuple(row)))
    result = prune(Presentation(p.root, tuple(productions)))
    return CurtailReport(result, tuple(suppressed), tuple(new_edges), stripped)


def curtail_fixed_point(p: Presentation, s: Presentation) -> bool:
    once = curtail(p, s).result
    return reg_iso_rooted(curtail(once, s).result, once)


# -- the designated ray ------------------------------------------------------


@dataclass(frozen=True)
class DesignatedRay:
    """A ray that eventually loops a cycle through a branching nonterminal.

    ``approach`` leads from the root to the first visit of ``anchor`` and
    ``cycle`` from ``anchor`` back to itself; both are sequences of
    ``(nonterminal, entry index)`` steps. Marks ``r_1, r_2, ...`` are the
    visits of ``anchor`` strictly below the root.
    """

    anchor: str
    approach: Tuple[Tuple[str, int], ...]
    cycle: Tuple[Tuple[str, int], ...]

    def steps(self):
        """Infinite iterator of ``(nonterminal, entry, mark)``; ``mark`` is 0 off the marks."""
        n = 0
        for k, step in enumerate(self.approach):
            if k == len(self.approach) - 1:
                n += 1
                yield step + (n,)
            else:
                yield step + (0,)
        while True:
            for k, step in enumerate(self.cycle):
                if k == len(self.cycle) - 1:
                    n += 1
                    yield step + (n,)
                else:
                    yield step + (0,)

    def edge_slot(self, n: int) -> Tuple[str, int]:
        """The entry carrying ``e_n``, the edge entering mark ``n``."""
        if n < 1:
            raise InputError("marks are numbered from 1")
        if n == 1 and self.approach:
            return self.approach[-1]
        return self.cycle[-1]


def _bfs_path(p: Presentation, start: str, goal: str, min_steps: int):
    """Shortest entry path from ``start`` to ``goal`` with at least ``min_steps`` steps."""
    frontier = [(start, ())]
    seen = set()
    while frontier:
        nxt = []
        for name, path in frontier:
            for i, e in enumerate(p.production(name)):
                step = path + ((name, i),)
                if e.child == goal and len(step) >= min_steps:
                    return step
                if e.child not in seen:
                    seen.add(e.child)
                    nxt.append((e.child, step))
        frontier = nxt
    return None


def designated_ray(p: Presentation) -> DesignatedRay:
    """Pick the anchor first reached breadth-first from the root (file order)."""
    if shape_classify(p) != LARGE:
        raise PreconditionError("designated ray needs a Large presentation")
    g = p.graph
    order = [p.root]
    seen = {p.root}
    for name in order:
        for e in p.production(name):
            if e.child not in seen:
                seen.add(e.child)
                order.append(e.child)
    for name in order:
        if len(p.production(name)) >= 2 and g.on_cycle(g.nt_node[name]):
            approach = () if name == p.root else _bfs_path(p, p.root, name, 1)
            cycle = _bfs_path(p, name, name, 1)
            return DesignatedRay(name, approach, cycle)
    raise ConsistencyError("Large presentation without a branching cycle")


# -- length functions and almost disjoint families ---------------------------


def _ints(text):
    text = text.strip()
    return tuple(int(x) for x in text.split(",")) if text else ()


@dataclass(frozen=True)
class LengthFunction:
    """``f: N -> N`` as a finite prefix followed by a tail repeated forever.

    An empty tail means only the prefix is known; such functions can still
    build truncations that do not reach past the prefix.
    """

    prefix: Tuple[int, ...] = ()
    tail: Tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "prefix", tuple(int(x) for x in self.prefix))
        object.__setattr__(self, "tail", tuple(int(x) for x in self.tail))
        if not self.prefix and not self.tail:
            raise InputError("length function needs at least one value")
        if any(x < 1 for x in self.prefix + self.tail):
            raise InputError("length function values must be >= 1")

    @property
    def periodic(self) -> bool:
        return bool(self.tail)

    def __call__(self, n: int) -> int:
        if n < 1:
            raise InputError("length functions are indexed from 1")
        if n <= len(self.prefix):
            return self.prefix[n - 1]
        if not self.tail:
            raise InputError(f"value {n} lies beyond a prefix-only length function")
        return self.tail[(n - len(self.prefix) - 1) % len(self.tail)]

    def known(self, n: int) -> bool:
        return self.periodic or n <= len(self.prefix)

    @classmethod
    def parse(cls, text: str) -> "LengthFunction":
        """Parse ``prefix=1,2,3;period=4,5`` (either part may be omitted)."""
        fields = {}
        for part in text.split(";"):
            if not part.strip():
                continue
            key, sep, value = part.partition("=")
            if not sep or key.strip() not in ("prefix", "period"):
                raise InputError(f"bad length function field {part!r}")
            fields[key.strip()] = value
        try:
            prefix, tail = _ints(fields.get("prefix", "")), _ints(fields.get("period", ""))
        except ValueError:
            raise InputError(f"bad length function {text!r}") from None
        return cls(prefix, tail)

    def __str__(self):
        out = "prefix=" + ",".join(map(str, self.prefix))
        if self.tail:
            out += ";period=" + ",".join(map(str, self.tail))
        return out


@dataclass(frozen=True)
class AdfMember:
    """An infinite set ``X`` coded by an eventually periodic binary branch.

    ``X = {code(b|n) : n >= 1}`` where ``b|n`` is the first ``n`` bits of the
    branch and ``code(w)`` the integer with binary digits ``1w``. Distinct
    branches give sets meeting only in the codes of their common prefix.
    """

    branch: str
    period: str

    def __post_init__(self):
        if not self.period or set(self.branch + self.period) - {"0", "1"}:
            raise InputError("branch and period must be binary strings, period non-empty")

    def bits(self, n: int) -> str:
        out = self.branch[:n]
        while len(out) < n:
            out += self.period
        return out[:n]

    def value(self, n: int) -> int:
        """``x_n``, the ``n``-th smallest element of the set."""
        return int("1" + self.bits(n), 2)

    def values(self, limit: int):
        out = []
        n = 1
        while True:
            x = self.value(n)
            if x > limit:
                return out
            out.append(x)
            n += 1

    def length_function(self, terms: int) -> LengthFunction:
        return LengthFunction(tuple(self.value(n) for n in range(1, terms + 1)))

    @classmethod
    def parse(cls, text: str) -> "AdfMember":
        """Parse ``branch=01;period=10``."""
        fields = dict(part.split("=", 1) for part in text.split(";") if part.strip())
        return cls(fields.get("branch", "").strip(), fields.get("period", "").strip())

    def __str__(self):
        return f"branch={self.branch};period={self.period}"


def adf_family(k: int):
    """``k`` members with pairwise distinct branches.

    Branch ``i`` starts with ``i`` in binary, padded to a common width, so any
    two members share fewer bits than that width.
    """
    if k < 1:
        raise InputError("family size must be at least 1")
    width = max(1, math.ceil(math.log2(k)))
    return [AdfMember(format(i, f"0{width}b"), "01" if i % 2 else "0") for i in range(k)]


def tail_alignment_check(f, g, shift_bound: int, depth: int) -> bool:
    """True iff for every shift ``s <= shift_bound`` the sequences ``f(n+s)`` and ``g(n)`` differ for some ``n <= depth``."""
    for s in range(shift_bound + 1):
        if all(f(n + s) == g(n) for n in range(1, depth + 1)):
            return False
    return True


# -- T'_f ----------------------------------------------------------------------


def _mark_levels(p: Presentation, ray: DesignatedRay, f: LengthFunction, upto: int):
    """``(source_level, mark_level)`` for marks ``1..upto`` in ``T'_f``."""
    level = 0
    out = []
    for name, i, mark in ray.steps():
        e = p.production(name)[i]
        sub = f(mark) if mark else e.subdiv
        if mark:
            out.append((level, level + 1 + sub))
            if len(out) == upto:
                return out
        level += 1 + sub
    return out


def mark_level(p: Presentation, ray: DesignatedRay, f: LengthFunction, n: int) -> int:
    """Level of mark ``r_n`` in ``T'_f``."""
    return _mark_levels(p, ray, f, n)[-1][1]


def _unrolled(p: Presentation, ray: DesignatedRay, f: LengthFunction, marks: int, loop_to: Optional[int]):
    """Copy the ray's nonterminals up to mark ``marks``; close the loop onto mark ``loop_to``."""
    taken = set(p.rules)
    extra = []
    at_mark = {}

    def copy_of(name, k):
        return _fresh_name(taken, f"{name}_t{k}")

    root_copy = copy_of(p.root, 0)
    cur = root_copy
    for k, (name, i, mark) in enumerate(ray.steps(), 1):
        entries = list(p.production(name))
        e = entries[i]
        sub = f(mark) if mark else e.subdiv
        if mark == marks and loop_to is not None:
            nxt = at_mark[loop_to]
        elif mark == marks:
            nxt = e.child
        else:
            nxt = copy_of(e.child, k)
            if mark:
                at_mark[mark] = nxt
        entries[i] = Entry(nxt, sub)
        extra.append((cur, tuple(entries)))
        if mark == marks:
            break
        cur = nxt
    return prune(Presentation(root_copy, tuple(extra) + p.productions))


def build_tf(p: Presentation, ray: DesignatedRay, f: LengthFunction):
    """``T'_f``: the edge entering mark ``n`` gets ``f(n)`` subdivision vertices.

    An eventually periodic ``f`` gives a :class:`Presentation`; a prefix-only
    ``f`` gives a :class:`TruncationGenerator`.
    """
    if not f.periodic:
        return TruncationGenerator(p, ray, f)
    m, t = len(f.prefix), len(f.tail)
    return _unrolled(p, ray, f, m + t + 1, m + 1)


class TruncationGenerator:
    """Truncations of ``T'_f`` for a prefix-only ``f``, on demand."""

    def __init__(self, p: Presentation, ray: DesignatedRay, f: LengthFunction):
        self.p = p
        self.ray = ray
        self.f = f

    def max_depth(self) -> int:
        """Deepest truncation the known prefix determines."""
        m = len(self.f.prefix)
        padded = LengthFunction(self.f.prefix, (1,))
        source, _ = _mark_levels(self.p, self.ray, padded, m + 1)[-1]
        return source + 1

    def truncate(self, depth: int):
        if depth > self.max_depth():
            raise InputError(f"prefix of {len(self.f.prefix)} values only determines depth <= {self.max_depth()}")
        padded = LengthFunction(self.f.prefix, (1,))
        m = len(self.f.prefix)
        # the tail is never visible at this depth, so cut the unrolling after it
        pres = _unrolled(self.p, self.ray, padded, m + 1, None)
        return unfold_truncate(pres, depth)


def _as_length_function(member, p, ray, depth):
    if isinstance(member, LengthFunction):
        return member
    terms = 1
    while True:
        f = member.length_function(terms)
        if TruncationGenerator(p, ray, f).max_depth() >= depth:
            return f
        terms += 1


def tf_truncation(p: Presentation, ray: DesignatedRay, member, depth: int):
    """Depth-``depth`` truncation of ``T'_f`` for a length function or a.d.f. member."""
    f = _as_length_function(member, p, ray, depth)
    if f.periodic:
        return unfold_truncate(build_tf(p, ray, f), depth)
    return TruncationGenerator(p, ray, f).truncate(depth)


def depth_covering_marks(p: Presentation, ray: DesignatedRay, members, n: int) -> int:
    """Smallest depth whose truncations show the first ``n`` marks of every member."""
    best = 0
    for member in members:
        if isinstance(member, LengthFunction):
            f = member
        else:
            f = member.length_function(n)
        best = max(best, mark_level(p, ray, f, n))
    return best


@dataclass
class FamilyReport:
    labels: list
    distinct: list  # distinct[i][j]: truncation codes differ (None on the diagonal)
    equivalent: dict  # member index -> reg_equiv(T'_f, p) for periodic members
    depth: int
    pairs: list = field(default_factory=list)

    @property
    def all_distinct(self) -> bool:
        return all(d for _, _, d in self.pairs)

    def summary(self) -> dict:
        return {
            "members": len(self.labels),
            "depth": self.depth,
            "pairs": len(self.pairs),
            "distinct_pairs": sum(1 for _, _, d in self.pairs if d),
            "isomorphic_pairs": [[i, j] for i, j, d in self.pairs if not d],
            "equivalent_to_base": {str(k): v for k, v in sorted(self.equivalent.items())},
        }

    def to_text(self) -> str:
        """Tab-separated matrix (``D`` distinct, ``=`` same code) then a JSON summary."""
        n = len(self.labels)
        lines = ["\t" + "\t".join(str(i) for i in range(n))]
        for i in range(n):
            row = [str(i)]
            for j in range(n):
                row.append("-" if i == j else ("D" if self.distinct[i][j] else "="))
            lines.append("\t".join(row))
        lines.append("# members")
        for i, label in enumerate(self.labels):
            lines.append(f"{i}\t{label}")
        lines.append("# summary")
        lines.append(json.dumps(self.summary(), sort_keys=True))
        return "\n".join(lines) + "\n"


def _code_job(args):
    p, ray, member, depth = args
    return ahu_code(tf_truncation(p, ray, member, depth))


def family_report(p: Presentation, ray: DesignatedRay, members: Sequence, depth: int, jobs: int = 1) -> FamilyReport:
    """Pairwise non-isomorphism evidence for a family of ``T'_f`` trees.

    Each member is truncated at ``depth``; two members are reported distinct
    when their AHU codes differ, which proves the infinite trees differ too.
    Periodic members are also checked for equivalence with ``p``.
    """
    if shape_classify(p) != LARGE:
        raise PreconditionError("family report needs a Large presentation")
    work = [(p, ray, m, depth) for m in members]
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            codes = list(pool.map(_code_job, work))
    else:
        codes = [_code_job(w) for w in work]
    n = len(members)
    distinct = [[None if i == j else codes[i] != codes[j] for j in range(n)] for i in range(n)]
    pairs = [(i, j, distinct[i][j]) for i in range(n) for j in range(i + 1, n)]
    equivalent = {}
    for i, m in enumerate(members):
        if isinstance(m, LengthFunction) and m.periodic:
            equivalent[i] = reg_equiv(build_tf(p, ray, m), p)
    return FamilyReport([str(m) for m in members], distinct, equivalent, depth, pairs)


# -- setting up the construction -------------------------------------------------


@dataclass(frozen=True)
class CurtailedBase:
    """Everything the family construction starts from."""

    original: Presentation
    s: Presentation
    curtailed: Presentation
    ray: DesignatedRay


def curtailed_base(p: Presentation) -> CurtailedBase:
    """Find ``s`` on a designated ray, curtail ``p`` via it and re-pick the ray.

    ``s`` is the subtree at the first nonterminal visited strictly below the
    root whose subtree embeds into the subtree of a later visit on the ray.
    """
    ray = designated_ray(p)
    visits = [p.root]
    for name, i, _ in ray.steps():
        visits.append(p.production(name)[i].child)
        if len(visits) > len(ray.approach) + 2 * len(ray.cycle) + 1:
            break
    cycle_names = {name for name, _ in ray.cycle}
    for k in range(1, len(visits)):
        here = p.with_root(visits[k])
        later = set(visits[k + 1:]) | cycle_names
        if any(reg_minor(here, p.with_root(b)) is not None for b in sorted(later)):
            s = here
            break
    else:
        raise ConsistencyError("no self-similar vertex found along the designated ray")
    result = curtail(p, s).result
    return CurtailedBase(p, s, result, designated_ray(result))
