"""Shared test oracles.

Everything here is deliberately naive and written independently of the
library internals: plain frontier BFS instead of the cached layered
search, iterative deepening instead of ball lookups, subset enumeration
instead of branch and bound.  Slow is fine; these only run on small
inputs and exist so the fast implementations have something honest to
agree with.
"""

from __future__ import annotations

import random
from fractions import Fraction


def sym_gens(group, gens=None):
    out = []
    for g in gens if gens is not None else group.base_generators():
        for h in (g, group.inv(g)):
            if h not in out:
                out.append(h)
    return out


def naive_ball(group, radius, gens=None):
    """dict element -> word length, by the simplest possible BFS."""
    sym = sym_gens(group, gens)
    seen = {group.identity: 0}
    frontier = [group.identity]
    for r in range(1, radius + 1):
        nxt = []
        for u in frontier:
            for s in sym:
                v = group.mul(u, s)
                if v not in seen:
                    seen[v] = r
                    nxt.append(v)
        frontier = nxt
    return seen


def iddfs_length(group, target, cutoff, gens=None):
    """Word length by iterative deepening DFS; None if > cutoff."""
    if target == group.identity:
        return 0
    sym = sym_gens(group, gens)
    mul = group.mul

    def probe(current, remaining):
        if remaining == 0:
            return current == target
        return any(probe(mul(current, s), remaining - 1) for s in sym)

    for depth in range(1, cutoff + 1):
        if probe(group.identity, depth):
            return depth
    return None


def naive_coset_distance(group, sub_gens, g1, g2, sub_radius, ambient_lengths):
    """min |h1 * (g1^-1 g2) * h2| over the double loop of subgroup-ball
    pairs, with lengths looked up in a precomputed ambient table.
    Returns None if no product lands inside the table."""
    d = group.mul(group.inv(g1), g2)
    sub = list(naive_ball(group, sub_radius, gens=sub_gens))
    best = None
    for h1 in sub:
        left = group.mul(h1, d)
        for h2 in sub:
            n = ambient_lengths.get(group.mul(left, h2))
            if n is not None and (best is None or n < best):
                best = n
    return best


def brute_max_clique_size(adj):
    """Largest clique by checking every vertex subset (n <= ~16)."""
    n = len(adj)
    best = 0
    for mask in range(1 << n):
        if mask.bit_count() <= best:
            continue
        m, ok = mask, True
        while m:
            i = (m & -m).bit_length() - 1
            if mask & ~(adj[i] | (1 << i)):
                ok = False
                break
            m &= m - 1
        if ok:
            best = mask.bit_count()
    return best


def random_word(group, rng: random.Random, max_len=6):
    """Random element as a product of <= max_len generator letters.
    Works uniformly for every group in the registry."""
    sym = sym_gens(group)
    g = group.identity
    for _ in range(rng.randint(0, max_len)):
        g = group.mul(g, rng.choice(sym))
    return g


# Direct samplers reach coordinates far outside any small ball.

def rand_zn(rng: random.Random, rank, span=50):
    return tuple(rng.randint(-span, span) for _ in range(rank))


def rand_heis(rng: random.Random, span=30):
    from cosetpack.zoo import Heis

    return Heis(rng.randint(-span, span), rng.randint(-span, span),
                rng.randint(-span, span))


def rand_lamp(rng: random.Random, span=5):
    from cosetpack.zoo import Lamp

    positions = rng.sample(range(-span, span + 1), rng.randint(0, 4))
    lamps = tuple(sorted((p, rng.choice([-2, -1, 1, 2])) for p in positions))
    return Lamp(lamps, rng.randint(-span, span))


def rand_bs(rng: random.Random):
    from cosetpack.zoo import Bs

    return Bs(rng.randint(-4, 4),
              Fraction(rng.randint(-40, 40), 2 ** rng.randint(0, 4)))


def rand_split(group, rng: random.Random, span=20):
    from cosetpack.zoo import Sp

    return Sp(tuple(rng.randint(-span, span) for _ in range(group.rank)),
              rng.randint(-6, 6))
