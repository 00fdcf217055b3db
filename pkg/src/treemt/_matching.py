"""Maximum bipartite matching by augmenting paths (Kuhn's algorithm).

Left vertices are ``0..len(adj)-1``; ``adj[u]`` lists the right vertices
adjacent to ``u`` in preference order. Left vertices are processed in index
order and candidates in list order, so results are deterministic.
"""


def max_matching(adj):
    """Return ``(size, assignment)`` with ``assignment[u] = v`` for matched ``u``."""
    owner = {}

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if v not in owner or augment(owner[v], seen):
                owner[v] = u
                return True
        return False

    size = 0
    for u in range(len(adj)):
        # a free candidate first, so earlier vertices keep their picks when possible
        free = next((v for v in adj[u] if v not in owner), None)
        if free is not None:
            owner[free] = u
            size += 1
        elif augment(u, set()):
            size += 1
    return size, {u: v for v, u in owner.items()}


def saturating_matching(adj):
    """Assignment covering every left vertex, or ``None`` if none exists."""
    if any(not row for row in adj):
        return None
    size, assignment = max_matching(adj)
    if size < len(adj):
        return None
    return assignment


def min_vertex_cover(adj, n_right, assignment=None):
    """König cover of the bipartite graph; returns ``(left_cover, right_cover)``.

    Built from a maximum matching by alternating search from the unmatched
    left vertices.
    """
    if assignment is None:
        _, assignment = max_matching(adj)
    matched_right = {v: u for u, v in assignment.items()}
    z_left = {u for u in range(len(adj)) if u not in assignment}
    z_right = set()
    stack = list(z_left)
    while stack:
        u = stack.pop()
        for v in adj[u]:
            if v in z_right or assignment.get(u) == v:
                continue
            z_right.add(v)
            w = matched_right.get(v)
            if w is not None and w not in z_left:
                z_left.add(w)
                stack.append(w)
    left_cover = set(range(len(adj))) - z_left
    return left_cover, z_right
