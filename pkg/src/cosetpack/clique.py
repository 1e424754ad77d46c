"""Maximum-clique search over bitmask adjacency.

Graphs here are small (a packing pool rarely exceeds a few hundred distinct
cosets) and come as a list of integer bitmasks: bit j of ``adj[i]`` set means
vertices i and j are adjacent.  Below ``exact_limit`` vertices a
branch-and-bound with greedy colouring runs to optimality; above it the
deterministic greedy clique is returned and flagged as inexact.
"""

from __future__ import annotations


def greedy_clique(adj: list[int] | tuple[int, ...], order=None) -> list[int]:
    """Grow a clique by scanning vertices in the given order (pool order by
    default) and keeping every vertex adjacent to all kept so far."""
    if order is None:
        order = range(len(adj))
    clique: list[int] = []
    common = ~0  # bitmask of vertices adjacent to every clique member
    for v in order:
        if common >> v & 1:
            clique.append(v)
            common &= adj[v]
    return clique


def max_clique(adj, exact_limit: int = 300) -> tuple[list[int], bool]:
    """Largest clique of the graph, with an exactness flag.

    Returns ``(vertices, exact)``.  Deterministic: ties break towards lower
    vertex indices, so repeated runs and runs across platforms agree.
    """
    n = len(adj)
    if n == 0:
        return [], True
    if n > exact_limit:
        return greedy_clique(adj), False

    best: list[int] = greedy_clique(adj)
    full = (1 << n) - 1

    def expand(r: list[int], cand: int) -> None:
        nonlocal best
        order, colours = _colour(adj, cand)
        for idx in range(len(order) - 1, -1, -1):
            v = order[idx]
            if len(r) + colours[idx] <= len(best):
                return
            r.append(v)
            if len(r) > len(best):
                best = list(r)
            nxt = cand & adj[v]
            if nxt:
                expand(r, nxt)
            r.pop()
            cand &= ~(1 << v)

    expand([], full)
    best.sort()
    return best, True


def _colour(adj, cand: int) -> tuple[list[int], list[int]]:
    """Greedy colouring of the candidate set.

    Returns vertices grouped by colour class with 1-based colour numbers; a
    clique inside a set coloured with c colours has at most c vertices, which
    is the pruning bound used by the search above.
    """
    order: list[int] = []
    colours: list[int] = []
    colour = 0
    rest = cand
    while rest:
        colour += 1
        avail = rest
        while avail:
            v = (avail & -avail).bit_length() - 1
            order.append(v)
            colours.append(colour)
            rest &= ~(1 << v)
            avail &= ~(1 << v)
            avail &= ~adj[v]
    return order, colours
