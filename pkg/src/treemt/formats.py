"""Text formats: ``.ftree`` nested parentheses, ``.rtp`` presentations, DOT export.

``.ftree`` holds one tree written as nested parentheses with optional
labels, e.g. ``(r (a) (b (c) (d)))``. Unlabeled vertices are named ``n0``,
``n1``, ... avoiding any label already present.

``.rtp`` is line oriented::

    # caterpillar
    root A
    A = leaf A

Each entry is ``NAME``, ``NAME*k`` (``k`` extra degree-2 vertices on the
connecting edge) or ``leaf``.
"""

import re

from .errors import ParseError
from .regular import LEAF, NAME_RE, Entry, Presentation, Truncation, unfold, validation_errors
from .trees import RootedFiniteTree

_LABEL = re.compile(r"[A-Za-z0-9_]+")


def _position(text, offset):
    line = text.count("\n", 0, offset) + 1
    col = offset - (text.rfind("\n", 0, offset) + 1) + 1
    return line, col


def parse_ftree(text: str, rooted: bool = True):
    """Parse ``.ftree`` text; ``rooted=False`` returns the underlying unrooted tree."""
    pos = 0
    n = len(text)

    def skip():
        nonlocal pos
        while pos < n and text[pos].isspace():
            pos += 1

    def fail(msg):
        raise ParseError(msg, *_position(text, min(pos, n)))

    children = {}
    labels = {}
    order = []

    def vertex():
        nonlocal pos
        skip()
        if pos >= n or text[pos] != "(":
            fail("expected '('")
        pos += 1
        skip()
        me = len(order)
        order.append(me)
        m = _LABEL.match(text, pos)
        if m:
            labels[me] = (m.group(), pos)
            pos = m.end()
        kids = []
        while True:
            skip()
            if pos >= n:
                fail("unexpected end of input, expected ')'")
            if text[pos] == ")":
                pos += 1
                break
            if text[pos] != "(":
                fail(f"unexpected character {text[pos]!r}")
            kids.append(vertex())
        children[me] = kids
        return me

    root = vertex()
    skip()
    if pos != n:
        fail("trailing text after tree")
    names = {}
    taken = set()
    for v, (label, at) in labels.items():
        if label in taken:
            raise ParseError(f"duplicate label {label!r}", *_position(text, at))
        taken.add(label)
        names[v] = label
    k = 0
    for v in order:
        if v not in names:
            while f"n{k}" in taken:
                k += 1
            names[v] = f"n{k}"
            taken.add(names[v])
    t = RootedFiniteTree(names[root], {names[v]: [names[c] for c in cs] for v, cs in children.items()})
    return t if rooted else t.tree


def _label(v):
    s = str(v)
    if not _LABEL.fullmatch(s):
        raise ValueError(f"vertex id {v!r} cannot be written as an .ftree label")
    return s


def format_ftree(t) -> str:
    """Serialise a rooted tree (or an unrooted one, rooted at its first vertex)."""
    if not isinstance(t, RootedFiniteTree):
        t = t.rooted_at(next(iter(t)))
    parts = []

    def emit(v):
        parts.append("(" + _label(v))
        for c in t.children(v):
            parts.append(" ")
            emit(c)
        parts.append(")")

    # iterative would be needed only for very deep trees
    import sys

    limit = sys.getrecursionlimit()
    if t.height + 50 > limit:
        sys.setrecursionlimit(t.height + 100)
    emit(t.root)
    return "".join(parts)


def read_ftree(path, rooted: bool = True):
    with open(path) as fh:
        return parse_ftree(fh.read(), rooted)


_ENTRY = re.compile(r"([A-Za-z0-9_]+)(?:\*(\d+))?\Z")


def parse_rtp(text: str) -> Presentation:
    """Parse and validate ``.rtp`` text."""
    root = None
    prods = []
    seen = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            words = line.split()
            if len(words) == 2 and words[0] == "root":
                if root is not None:
                    raise ParseError("duplicate root declaration", lineno)
                if not NAME_RE.match(words[1]):
                    raise ParseError(f"invalid nonterminal name {words[1]!r}", lineno)
                root = words[1]
                continue
            raise ParseError(f"expected 'root NAME' or 'NAME = entries', got {line!r}", lineno)
        lhs, rhs = line.split("=", 1)
        name = lhs.strip()
        if not NAME_RE.match(name):
            raise ParseError(f"invalid nonterminal name {name!r}", lineno)
        if name == LEAF:
            raise ParseError("'leaf' is reserved and cannot have a production", lineno)
        if name in seen:
            raise ParseError(f"nonterminal {name!r} already defined on line {seen[name]}", lineno)
        seen[name] = lineno
        entries = []
        for tok in rhs.split():
            m = _ENTRY.match(tok)
            if not m:
                col = raw.find(tok) + 1
                raise ParseError(f"bad entry {tok!r} in production of {name!r}", lineno, col)
            entries.append(Entry(m.group(1), int(m.group(2) or 0)))
        prods.append((name, tuple(entries)))
    if root is None:
        raise ParseError("missing 'root NAME' declaration")
    p = Presentation(root, tuple(prods))
    errors = validation_errors(p)
    if errors:
        raise ParseError("; ".join(errors))
    return p


def format_rtp(p: Presentation) -> str:
    lines = [f"root {p.root}"]
    for name, entries in p.productions:
        rhs = " ".join(str(e) for e in entries)
        lines.append(f"{name} = {rhs}".rstrip())
    return "\n".join(lines) + "\n"


def read_rtp(path) -> Presentation:
    with open(path) as fh:
        return parse_rtp(fh.read())


def export_dot(obj, depth: int = None, name: str = "tree") -> str:
    """DOT digraph of a rooted tree, a :class:`Truncation` or a truncated presentation.

    The root is drawn bold and filled; frontier vertices of a truncation are
    dashed. Output order is breadth-first, so it is stable for a given input.
    """
    labels = {}
    frontier = frozenset()
    if isinstance(obj, Presentation):
        if depth is None:
            raise ValueError("a presentation needs a truncation depth")
        obj = unfold(obj, depth)
    if isinstance(obj, Truncation):
        labels = obj.labels
        frontier = obj.frontier
        t = obj.tree
    elif isinstance(obj, RootedFiniteTree):
        t = obj
    else:
        t = obj.rooted_at(next(iter(obj)))
    lines = [f"digraph {name} {{"]
    for v in t.vertices:
        attrs = [f'label="{labels.get(v, v)}"']
        if v == t.root:
            attrs.append("style=filled, penwidth=2")
        elif v in frontier:
            attrs.append("style=dashed")
        lines.append(f'  "{v}" [{", ".join(attrs)}];')
    for v in t.vertices:
        for c in t.children(v):
            lines.append(f'  "{v}" -> "{c}";')
    lines.append("}")
    return "\n".join(lines) + "\n"


def format_witness(w) -> str:
    """One ``source -> image`` line per vertex."""
    m = w.mapping if hasattr(w, "mapping") else w
    return "".join(f"{a} -> {b}\n" for a, b in m.items())


def parse_witness(text: str) -> dict:
    out = {}
    for line in text.splitlines():
        if line.strip():
            a, b = (x.strip() for x in line.split("->"))
            out[a] = b
    return out
