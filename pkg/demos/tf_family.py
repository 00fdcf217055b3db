"""Sixteen pairwise non-isomorphic trees, all equivalent to the caterpillar.

Each member of an almost disjoint family of sets of integers fixes how far
apart the legs of the caterpillar are placed along its spine. Two members
share only finitely many spacings, so their trees eventually disagree.
"""

import sys

from treemt import adf_family, depth_covering_marks, designated_ray, family_report, parse_rtp

k = int(sys.argv[1]) if len(sys.argv) > 1 else 16
cat = parse_rtp("root A\nA = leaf A\n")
ray = designated_ray(cat)
members = adf_family(k)
depth = depth_covering_marks(cat, ray, members, 8)
report = family_report(cat, ray, members, depth)
for key, value in report.summary().items():
    print(f"{key}: {value}")
print("all distinct:", report.all_distinct)
