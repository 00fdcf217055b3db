"""``treemt`` command line.

Every verb loads its inputs, makes one library call and prints the result.
Decision verbs print ``yes`` or ``no``; with ``--exit-status`` they also exit
0 for yes and 1 for no. Errors exit 2 (bad input or precondition) or 3
(enumeration budget exceeded).
"""

import argparse
import os
import sys
from concurrent.futures import ProcessPoolExecutor

from .corpus import CorpusSpec, corpus_generate
from .curtail import (
    LengthFunction,
    adf_family,
    build_tf,
    curtail,
    depth_covering_marks,
    designated_ray,
    family_report,
)
from .errors import BudgetExceeded, TreemtError
from .formats import export_dot, format_ftree, format_rtp, format_witness, read_ftree, read_rtp
from .iso import fixed_locus, iso_rooted, iso_unrooted
from .minor import (
    ComparabilityCache,
    antichain_search,
    equiv_sharp,
    is_minor_unrooted,
    is_rooted_minor,
    wqo_find_comparable,
)
from .regular import (
    fixed_locus_regular,
    reg_equiv,
    reg_iso_rooted,
    reg_minor,
    self_similar,
    self_similar_subtree_exists,
    shape_classify,
    unfold_truncate,
)

_RTP = ".rtp"


def _is_rtp(path):
    return path.endswith(_RTP)


def _pair(args, rooted=True):
    """Load two inputs of the same kind; returns (kind, a, b)."""
    if _is_rtp(args.a) != _is_rtp(args.b):
        raise TreemtError("both inputs must be .ftree files or both .rtp files")
    if _is_rtp(args.a):
        return "rtp", read_rtp(args.a), read_rtp(args.b)
    return "ftree", read_ftree(args.a, rooted), read_ftree(args.b, rooted)


def _verdict(args, ok):
    print("yes" if ok else "no")
    return 0 if ok or not args.exit_status else 1


def _format_locus(locus):
    if locus.kind == "vertex":
        return f"vertex {locus.value}"
    return "edge " + " ".join(sorted(map(str, locus.value)))


def cmd_check_minor(args):
    kind, t, s = _pair(args, rooted=not args.unrooted)
    if kind == "rtp":
        w = reg_minor(t, s)
    elif args.unrooted:
        w = is_minor_unrooted(t, s)
    else:
        w = is_rooted_minor(t, s)
    code = _verdict(args, w is not None)
    if w is not None and args.witness:
        if kind == "rtp":
            # presentation witnesses are relations between expanded nodes
            for a, b in sorted(w.named_relation(), key=str):
                print(f"{a} -> {b}")
        else:
            sys.stdout.write(format_witness(w))
    return code


def cmd_iso(args):
    kind, t, s = _pair(args, rooted=not args.unrooted)
    if kind == "rtp":
        return _verdict(args, reg_iso_rooted(t, s))
    return _verdict(args, iso_unrooted(t, s) if args.unrooted else iso_rooted(t, s))


def cmd_equiv(args):
    kind, t, s = _pair(args, rooted=not args.unrooted)
    if kind == "rtp":
        return _verdict(args, reg_equiv(t, s))
    return _verdict(args, equiv_sharp(t, s, rooted=not args.unrooted))


def cmd_classify(args):
    print(shape_classify(read_rtp(args.p)))
    return 0


def cmd_self_similar(args):
    p = read_rtp(args.p)
    return _verdict(args, self_similar_subtree_exists(p) if args.subtree else self_similar(p))


def cmd_curtail(args):
    r = curtail(read_rtp(args.p), read_rtp(args.via))
    sys.stdout.write(format_rtp(r.result))
    if args.report:
        for line in r.summary().splitlines():
            print("# " + line)
    return 0


def cmd_build_tf(args):
    p = read_rtp(args.p)
    f = LengthFunction.parse(args.f)
    out = build_tf(p, designated_ray(p), f)
    if args.depth is not None:
        t = unfold_truncate(out, args.depth) if f.periodic else out.truncate(args.depth)
        print(format_ftree(t))
    elif f.periodic:
        sys.stdout.write(format_rtp(out))
    else:
        raise TreemtError("a prefix-only length function needs --depth")
    return 0


def cmd_family(args):
    p = read_rtp(args.p)
    ray = designated_ray(p)
    members = adf_family(args.adf)
    depth = args.depth if args.depth is not None else depth_covering_marks(p, ray, members, args.marks)
    sys.stdout.write(family_report(p, ray, members, depth, jobs=args.jobs).to_text())
    return 0


def cmd_fixed_locus(args):
    if _is_rtp(args.t):
        locus = fixed_locus_regular(read_rtp(args.t))
    else:
        locus = fixed_locus(read_ftree(args.t, rooted=False))
    print(_format_locus(locus))
    return 0


def _row(job):
    seq, j, rooted = job
    cache = ComparabilityCache(rooted)
    return [i for i in range(j) if cache.leq(seq[i], seq[j])]


def cmd_wqo_scan(args):
    names = sorted(n for n in os.listdir(args.dir) if n.endswith(".ftree"))
    seq = [read_ftree(os.path.join(args.dir, n), not args.unrooted) for n in names]
    rooted = not args.unrooted
    if args.jobs > 1:
        # rows are independent; the first hit in (j, i) order is the same for any N
        with ProcessPoolExecutor(args.jobs) as pool:
            rows = list(pool.map(_row, [(seq, j, rooted) for j in range(len(seq))]))
        hit = next(((row[0], j) for j, row in enumerate(rows) if row), None)
    else:
        pair = wqo_find_comparable(seq, rooted)
        hit = None if pair is None else (pair.i, pair.j)
    if hit is None:
        print("none")
        return 1 if args.exit_status else 0
    i, j = hit
    print(f"{i}\t{j}\t{names[i]}\t{names[j]}")
    return 0


def cmd_antichain(args):
    trees = antichain_search(args.max_vertices)
    print(f"# antichain of {len(trees)} trees")
    for t in trees:
        print(format_ftree(t))
    return 0


def cmd_truncate(args):
    p = read_rtp(args.p)
    if args.dot:
        sys.stdout.write(export_dot(p, args.depth))
    else:
        print(format_ftree(unfold_truncate(p, args.depth)))
    return 0


def cmd_gen_corpus(args):
    spec = CorpusSpec(
        args.count,
        max_nonterminals=args.max_nonterminals,
        max_children=args.max_children,
        max_subdiv=args.max_subdiv,
        seed=args.seed,
    )
    corpus = corpus_generate(spec)
    width = max(3, len(str(len(corpus))))
    if args.out:
        os.makedirs(args.out, exist_ok=True)
        for i, p in enumerate(corpus):
            with open(os.path.join(args.out, f"p{i:0{width}d}.rtp"), "w") as fh:
                fh.write(format_rtp(p))
    else:
        for i, p in enumerate(corpus):
            print(f"# p{i:0{width}d}: {shape_classify(p)}")
            sys.stdout.write(format_rtp(p))
            print()
    return 0


def build_parser():
    ap = argparse.ArgumentParser(prog="treemt", description="Topological minors of finite and regular trees.")
    sub = ap.add_subparsers(dest="verb", required=True)

    def pair(name, fn, helptext):
        sp = sub.add_parser(name, help=helptext)
        sp.add_argument("a")
        sp.add_argument("b")
        mode = sp.add_mutually_exclusive_group()
        mode.add_argument("--rooted", dest="unrooted", action="store_false")
        mode.add_argument("--unrooted", dest="unrooted", action="store_true")
        sp.add_argument("--exit-status", action="store_true")
        sp.set_defaults(fn=fn)
        return sp

    pair("check-minor", cmd_check_minor, "decide A <=# B").add_argument("--witness", action="store_true")
    pair("iso", cmd_iso, "isomorphism of two trees")
    pair("equiv", cmd_equiv, "topological equivalence of two trees")

    sp = sub.add_parser("classify", help="shape class of a presentation")
    sp.add_argument("p")
    sp.set_defaults(fn=cmd_classify)

    sp = sub.add_parser("self-similar", help="is the presented tree self-similar")
    sp.add_argument("p")
    sp.add_argument("--subtree", action="store_true", help="ask for any self-similar non-ray subtree instead")
    sp.add_argument("--exit-status", action="store_true")
    sp.set_defaults(fn=cmd_self_similar)

    sp = sub.add_parser("curtail", help="curtail a presentation via a self-similar one")
    sp.add_argument("p")
    sp.add_argument("--via", required=True)
    sp.add_argument("--report", action="store_true")
    sp.set_defaults(fn=cmd_curtail)

    sp = sub.add_parser("build-tf", help="subdivide the designated ray by a length function")
    sp.add_argument("p")
    sp.add_argument("--f", required=True, help="e.g. prefix=1,2,3;period=4,5")
    sp.add_argument("--depth", type=int)
    sp.set_defaults(fn=cmd_build_tf)

    sp = sub.add_parser("family", help="non-isomorphism report for an almost disjoint family")
    sp.add_argument("p")
    sp.add_argument("--adf", type=int, required=True)
    depth = sp.add_mutually_exclusive_group(required=True)
    depth.add_argument("--depth", type=int)
    depth.add_argument("--marks", type=int, help="use the depth covering this many marks")
    sp.add_argument("--jobs", type=int, default=1)
    sp.set_defaults(fn=cmd_family)

    sp = sub.add_parser("fixed-locus", help="vertex or edge fixed by all automorphisms")
    sp.add_argument("t")
    sp.set_defaults(fn=cmd_fixed_locus)

    sp = sub.add_parser("wqo-scan", help="first comparable pair among the .ftree files of a directory")
    sp.add_argument("dir")
    sp.add_argument("--unrooted", action="store_true")
    sp.add_argument("--jobs", type=int, default=1)
    sp.add_argument("--exit-status", action="store_true")
    sp.set_defaults(fn=cmd_wqo_scan)

    sp = sub.add_parser("antichain", help="largest antichain among free trees up to n vertices")
    sp.add_argument("--max-vertices", type=int, required=True)
    sp.set_defaults(fn=cmd_antichain)

    sp = sub.add_parser("truncate", help="finite truncation of a presentation")
    sp.add_argument("p")
    sp.add_argument("--depth", type=int, required=True)
    sp.add_argument("--dot", action="store_true")
    sp.set_defaults(fn=cmd_truncate)

    sp = sub.add_parser("gen-corpus", help="seeded random presentations")
    sp.add_argument("--seed", type=int, required=True)
    sp.add_argument("--count", type=int, required=True)
    sp.add_argument("--max-nonterminals", type=int, default=5)
    sp.add_argument("--max-children", type=int, default=3)
    sp.add_argument("--max-subdiv", type=int, default=3)
    sp.add_argument("--out")
    sp.set_defaults(fn=cmd_gen_corpus)
    return ap


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 3
    except (TreemtError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
