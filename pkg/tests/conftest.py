import random

import pytest
from hypothesis import settings

from treemt.enumeration import random_rooted_tree
from treemt.formats import parse_ftree, parse_rtp

settings.register_profile("treemt", max_examples=60, deadline=None)
settings.load_profile("treemt")


def rtp(text):
    """Presentation from a one-line form like ``root A; A = leaf A``."""
    return parse_rtp(text.replace(";", "\n"))


def ft(text, rooted=True):
    return parse_ftree(text, rooted)


def rand_tree(n, seed):
    return random_rooted_tree(n, random.Random(seed))


CATERPILLAR = "root A; A = leaf A"
RAY = "root A; A = A"
BINARY = "root C; C = C C"


@pytest.fixture
def caterpillar():
    return rtp(CATERPILLAR)


def brute_automorphisms(t):
    """Adjacency-preserving bijections by plain backtracking (test oracle)."""
    verts = list(t.vertices)
    adj = {v: set(t.neighbors(v)) for v in verts}
    out = []
    image = {}
    used = set()

    def rec(i):
        if i == len(verts):
            out.append(dict(image))
            return
        v = verts[i]
        for w in verts:
            if w in used or len(adj[w]) != len(adj[v]):
                continue
            if all((image[x] in adj[w]) == (x in adj[v]) for x in verts[:i]):
                image[v] = w
                used.add(w)
                rec(i + 1)
                used.discard(w)
                del image[v]

    rec(0)
    return out


# criterion number -> (passed, detail); filled by test_acceptance, shown at the end
ACCEPTANCE = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[k]
        terminalreporter.write_line(f"criterion {k}: {'PASS' if ok else 'FAIL'}  {detail}")
