import pytest
from hypothesis import given, strategies as st

from conftest import CATERPILLAR, rand_tree, rtp
from treemt.errors import ParseError
from treemt.formats import (
    export_dot,
    format_ftree,
    format_rtp,
    format_witness,
    parse_ftree,
    parse_rtp,
    parse_witness,
)
from treemt.minor import is_rooted_minor
from treemt.regular import Entry, unfold, unfold_truncate
from treemt.trees import FiniteTree, relabel


def test_parse_ftree_examples():
    assert len(parse_ftree("(r)")) == 1
    t = parse_ftree("(r (a) (b))")
    assert t.root == "r" and sorted(t.children("r")) == ["a", "b"]


def test_parse_ftree_auto_names_avoid_labels():
    t = parse_ftree("( (n0) () )")
    assert set(t.vertices) == {"n0", "n1", "n2"}


def test_parse_ftree_unrooted():
    t = parse_ftree("(r (a) (b))", rooted=False)
    assert isinstance(t, FiniteTree) and len(t.edges) == 2


@pytest.mark.parametrize(
    "text, line, col",
    [
        ("(r (a)", 1, 7),
        ("(r)\n(x)", 2, 1),
        ("(r (a) x)", 1, 8),
        ("(r (a) (a))", 1, 9),
        ("r", 1, 1),
    ],
)
def test_parse_ftree_errors_are_positioned(text, line, col):
    with pytest.raises(ParseError) as info:
        parse_ftree(text)
    assert (info.value.line, info.value.column) == (line, col)
    assert f"line {line}, column {col}" in str(info.value)


@given(st.integers(1, 30), st.integers(0, 10**6))
def test_ftree_round_trip(n, seed):
    t = relabel(rand_tree(n, seed), {i: f"x{i}" for i in range(n)})
    text = format_ftree(t)
    assert parse_ftree(text) == t
    assert parse_ftree(text.replace(" ", "\n  ")) == t


def test_parse_rtp_examples():
    p = parse_rtp("root A\nA = leaf A\n")
    assert p.root == "A" and p.production("A") == (Entry("leaf"), Entry("A"))
    q = parse_rtp("# comment\nroot A\nA = B*2  # trailing\nB = leaf\n")
    assert q.production("A") == (Entry("B", 2),)


@pytest.mark.parametrize(
    "text, needle",
    [
        ("root A\nA = B\n", "'B'"),
        ("root A\nA = leaf\nA = leaf\n", "'A'"),
        ("A = leaf\n", "root"),
        ("root A\nA = B**2\nB = leaf\n", "'A'"),
        ("root A\nleaf = A\nA = leaf\n", "reserved"),
        ("root A\nA = leaf\nB = leaf\n", "'B'"),
    ],
)
def test_parse_rtp_errors_name_the_problem(text, needle):
    with pytest.raises(ParseError) as info:
        parse_rtp(text)
    assert needle in str(info.value)


def test_rtp_round_trip():
    for text in (CATERPILLAR, "root R; R = leaf A*3 leaf*1; A = leaf A", "root R; R ="):
        p = rtp(text)
        assert parse_rtp(format_rtp(p)) == p


def test_export_dot():
    single = export_dot(parse_ftree("(r)"))
    assert single.count("[label=") == 1
    dot = export_dot(rtp(CATERPILLAR), 3)
    assert dot.count("[label=") == 7
    assert dot.count("style=dashed") == len(unfold(rtp(CATERPILLAR), 3).frontier) == 1
    assert "penwidth=2" in dot
    assert dot == export_dot(rtp(CATERPILLAR), 3)
    with pytest.raises(ValueError):
        export_dot(rtp(CATERPILLAR))


def test_witness_serialisation():
    t = parse_ftree("(r (a))")
    s = parse_ftree("(x (y (z)))")
    w = is_rooted_minor(t, s)
    text = format_witness(w)
    assert text == "r -> x\na -> y\n"
    assert parse_witness(text) == w.mapping
