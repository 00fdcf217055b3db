"""Every long enough sequence of trees has a comparable pair.

Random sequences of small rooted trees always contain an earlier tree that
is a topological minor of a later one. The largest antichain among small
free trees shows how far one can get without such a pair.
"""

import random

from treemt import antichain_search, format_ftree, wqo_find_comparable
from treemt.enumeration import random_rooted_tree

rng = random.Random(11)
seq = [random_rooted_tree(rng.randint(1, 7), rng) for _ in range(30)]
pair = wqo_find_comparable(seq)
print(f"tree {pair.i} embeds in tree {pair.j}")
print("  ", format_ftree(seq[pair.i]))
print("  ", format_ftree(seq[pair.j]))

for n in range(4, 9):
    chain = antichain_search(n)
    print(f"up to {n} vertices: antichain of {len(chain)} free trees")
