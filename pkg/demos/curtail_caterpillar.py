"""Curtail a subdivided caterpillar back to its self-similar base.

The tree R has a three-vertex bare path hanging between the root and the
caterpillar A. Curtailing via the caterpillar collapses that path to a
single edge, and the result is still topologically equivalent to R.
"""

from treemt import curtail, format_rtp, parse_rtp, reg_equiv, reg_iso_rooted

p = parse_rtp("root R\nR = leaf A*3\nA = leaf A\n")
s = parse_rtp("root A\nA = leaf A\n")

report = curtail(p, s)
print(format_rtp(report.result))
print(report.summary())
print("equivalent to the input:", reg_equiv(p, report.result))
print("isomorphic to the input:", reg_iso_rooted(p, report.result))
