"""Coset geometry: the double-coset distance and packing families.

For a subgroup H of G and left cosets g1 H, g2 H, the distance used
throughout is

    d(g1 H, g2 H) = min { |h1 · (g1^-1 g2) · h2| : h1, h2 in H }

— the least word length over the double coset H (g1^-1 g2) H.  It is
symmetric, left-invariant, and zero exactly on equal cosets.

Upper bounds come with verifiable witnesses: a witness (h1, h2, value, length)
satisfies h1, h2 in H, value = h1 (g1^-1 g2) h2, and |value| = length.
Anything that cannot be decided within budget is UNKNOWN, never guessed.
"""

from __future__ import annotations

import weakref
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .clique import max_clique
from .core import (
    DEFAULT_NODE_CAP,
    BfsCache,
    BudgetExceededError,
    GeneratingSet,
    Group,
    UNKNOWN,
)
from .subgroups import SubgroupDesc
from .zoo import WreathOverLine, two_transitive_witness


class Witness(NamedTuple):
    h1: Any
    h2: Any
    value: Any
    length: int


@dataclass(frozen=True)
class SearchBudget:
    max_len: int = 6          # longest value length the search will certify
    sub_depth: int = 4        # radius of the subgroup ball for the generic scan
    node_cap: int = DEFAULT_NODE_CAP


_SUB_BALLS: "weakref.WeakKeyDictionary[SubgroupDesc, BfsCache]" = weakref.WeakKeyDictionary()


def _sub_cache(H: SubgroupDesc) -> BfsCache:
    got = _SUB_BALLS.get(H)
    if got is None:
        gens = (
            GeneratingSet.symmetrized(H.group, H.sub_generators)
            if H.sub_generators
            else GeneratingSet(())
        )
        got = BfsCache(H.group, gens)
        _SUB_BALLS[H] = got
    return got


def coset_eq(group: Group, H: SubgroupDesc, g1, g2) -> bool:
    """g1 H == g2 H, decided exactly via membership of g1^-1 g2."""
    if g1 == g2:
        return True
    return H.member(group.mul(group.inv(g1), g2))


def _bfs_length(group: Group, value, cutoff: int, node_cap: int, stats=None):
    """Word length if decidable within cutoff and node budget, else None.

    Budget exhaustion degrades to None: the pair search stays sound (the pair
    just cannot be confirmed close) and ``stats[0]`` counts the trip so
    callers can tell genuine node-cap degradation from a plain too-far pair.
    """
    try:
        got = group.word_length(value, cutoff=cutoff, node_cap=node_cap)
    except BudgetExceededError:
        if stats is not None:
            stats[0] += 1
        return None
    return None if got is UNKNOWN else got


def coset_distance_upper(group: Group, H: SubgroupDesc, g1, g2,
                         budget: SearchBudget | None = None):
    """Smallest witnessed bound on d(g1 H, g2 H) within budget, or UNKNOWN.

    Returns ``(bound, Witness)``.  Strategy candidates from the subgroup
    descriptor run first; unless the strategy is declared complete, a generic
    scan over pairs from the subgroup ball of radius ``budget.sub_depth``
    follows.  A bound of 1 is optimal for distinct cosets, so the search
    stops there.
    """
    if budget is None:
        budget = SearchBudget()
    return _pair_upper(group, H, group.inv(g1), g2, budget)


def coset_distance_exact(group: Group, H: SubgroupDesc, g1, g2,
                         cutoff: int = 8, node_cap: int = DEFAULT_NODE_CAP):
    """Exact d(g1 H, g2 H) by scanning ambient balls of growing radius.

    Needs an exact double-coset membership test: either the descriptor's
    ``double_coset_member`` hook, or normality (H d H = d H, decided through
    coset equality).  Returns UNKNOWN if the distance exceeds ``cutoff``.
    """
    d = group.mul(group.inv(g1), g2)
    if H.member(d):
        return 0

    if H.double_coset_member is not None:
        def hit(u) -> bool:
            return H.double_coset_member(H, d, u)
    elif H.is_normal:
        if H.canonicalize_coset is not None:
            cd = H.canonicalize_coset(d)

            def hit(u) -> bool:
                return H.canonicalize_coset(u) == cd
        else:
            def hit(u) -> bool:
                return H.member(group.mul(group.inv(d), u))
    else:
        raise ValueError(
            f"{H!r} supports no exact double-coset membership decision"
        )

    for radius in range(1, cutoff + 1):
        for u in group.layer(radius, node_cap):
            if hit(u):
                return radius
    return UNKNOWN


def dedupe_cosets(group: Group, H: SubgroupDesc, pool) -> tuple:
    """Distinct-coset representatives, first occurrence wins.

    With a canonical form the representative *is* the canonical form, so the
    output is stable under re-ordering of equivalent pool entries.
    """
    if H.canonicalize_coset is not None:
        seen: dict = {}
        for g in pool:
            c = H.canonicalize_coset(g)
            if c not in seen:
                seen[c] = None
        return tuple(seen)
    reps: list = []
    for g in pool:
        if not any(coset_eq(group, H, r, g) for r in reps):
            reps.append(g)
    return tuple(reps)


@dataclass
class PackingInstance:
    """A pool of distinct cosets with all pairwise distance upper bounds
    confirmed at threshold D, plus the resulting clique lower bound."""

    group: Group
    subgroup: SubgroupDesc
    D: int
    family: tuple
    adjacency: tuple  # bitmask per vertex: confirmed pairs at distance <= D
    clique: tuple
    clique_lower: int
    clique_exact: bool
    max_witness_len: int
    # pairs never confirmed <= D; pairs that are simply far apart land here
    # too, because the capped search only ever certifies closeness
    unknown_pairs: int
    budget_hits: int = 0  # node caps tripped; > 0 means results may understate
    witnesses: dict | None = field(default=None, repr=False)

    @property
    def size(self) -> int:
        return len(self.family)


def build_packing_instance(group: Group, H: SubgroupDesc, D: int, pool,
                           budget: SearchBudget | None = None,
                           keep_witnesses: bool = True,
                           exact_clique_limit: int = 300) -> PackingInstance:
    """Confirm pairwise closeness over a pool and extract a large clique.

    Pairs whose distance cannot be bounded by D within budget count as
    non-edges (the clique lower bound stays sound).  The returned clique is
    re-verified against the adjacency it came from.
    """
    if D < 0:
        raise ValueError("D must be non-negative")
    if budget is None:
        budget = SearchBudget()
    pair_budget = SearchBudget(
        max_len=min(budget.max_len, D) if D > 0 else budget.max_len,
        sub_depth=budget.sub_depth,
        node_cap=budget.node_cap,
    )
    family = dedupe_cosets(group, H, pool)
    n = len(family)
    inverses = [group.inv(g) for g in family]
    adjacency = [0] * n
    witnesses: dict | None = {} if keep_witnesses else None
    max_wlen = 0
    unknown = 0
    stats = [0]
    for i in range(n):
        gi_inv = inverses[i]
        for j in range(i + 1, n):
            res = _pair_upper(group, H, gi_inv, family[j], pair_budget, stats)
            if res is UNKNOWN:
                unknown += 1
                continue
            bound, witness = res
            if bound <= D:
                adjacency[i] |= 1 << j
                adjacency[j] |= 1 << i
                if witness.length > max_wlen:
                    max_wlen = witness.length
                if witnesses is not None:
                    witnesses[(i, j)] = witness
    clique, exact = max_clique(adjacency, exact_limit=exact_clique_limit)
    for a_idx, a in enumerate(clique):
        for b in clique[a_idx + 1:]:
            assert adjacency[a] >> b & 1, "clique member pair lost its edge"
    if witnesses is not None:
        _reverify(group, H, family, clique, witnesses, D)
    return PackingInstance(
        group=group, subgroup=H, D=D, family=family,
        adjacency=tuple(adjacency), clique=tuple(clique),
        clique_lower=len(clique), clique_exact=exact,
        max_witness_len=max_wlen, unknown_pairs=unknown,
        budget_hits=stats[0], witnesses=witnesses,
    )


def _pair_upper(group: Group, H: SubgroupDesc, g1_inv, g2, budget: SearchBudget,
                stats=None):
    """coset_distance_upper with the left inverse precomputed."""
    mul = group.mul
    d = mul(g1_inv, g2)
    if H.member(d):
        ident = group.identity
        return 0, Witness(group.inv(d), ident, ident, 0)
    best: int | None = None
    best_witness: Witness | None = None
    max_len = budget.max_len
    node_cap = budget.node_cap
    vhook = H.value_length

    if H.witness_candidates is not None:
        for h1, h2 in H.witness_candidates(H, d):
            cutoff = max_len if best is None else best - 1
            if cutoff < 1:
                break
            value = mul(mul(h1, d), h2)
            if vhook is not None:
                length = vhook(group, value)
                if length is None:
                    length = _bfs_length(group, value, cutoff, node_cap, stats)
                elif length > cutoff:
                    length = None
            else:
                length = _bfs_length(group, value, cutoff, node_cap, stats)
            if length is not None and (best is None or length < best):
                best = length
                best_witness = Witness(h1, h2, value, length)
                if length == 1:
                    return best, best_witness
    # a complete candidate stream provably contains an optimal witness: when
    # none of its lengths fit the cutoff, no generic pair can do better
    if not H.strategy_complete and best != 1:
        cache = _sub_cache(H)
        try:
            sub_ball = cache.ball(budget.sub_depth, budget.node_cap)
        except BudgetExceededError:
            if stats is not None:
                stats[0] += 1
            sub_ball = cache.ball(cache.radius)
        members = tuple(sub_ball)
        for h1 in members:
            done = False
            for h2 in members:
                cutoff = max_len if best is None else best - 1
                if cutoff < 1:
                    done = True
                    break
                value = mul(mul(h1, d), h2)
                if vhook is not None:
                    length = vhook(group, value)
                    if length is None:
                        length = _bfs_length(group, value, cutoff, node_cap, stats)
                    elif length > cutoff:
                        length = None
                else:
                    length = _bfs_length(group, value, cutoff, node_cap, stats)
                if length is not None and (best is None or length < best):
                    best = length
                    best_witness = Witness(h1, h2, value, length)
                    if length == 1:
                        done = True
                        break
            if done:
                break
    if best is None:
        return UNKNOWN
    return best, best_witness


def _reverify(group: Group, H: SubgroupDesc, family, clique, witnesses, D: int) -> None:
    for idx, i in enumerate(clique):
        for j in clique[idx + 1:]:
            w = witnesses.get((i, j) if i < j else (j, i))
            if w is None:
                continue
            a, b = (i, j) if i < j else (j, i)
            d = group.mul(group.inv(family[a]), family[b])
            assert H.member(w.h1) and H.member(w.h2), "witness outside subgroup"
            assert group.mul(group.mul(w.h1, d), w.h2) == w.value, "witness value mismatch"
            assert w.length <= D, "witness too long for the threshold"


def packing_lower_bound(group: Group, H: SubgroupDesc, D: int, pool,
                        budget: SearchBudget | None = None) -> tuple[int, tuple]:
    """Size of the largest confirmed pairwise-D-close family found in a pool."""
    inst = build_packing_instance(group, H, D, pool, budget, keep_witnesses=False)
    return inst.clique_lower, tuple(inst.family[i] for i in inst.clique)


def two_transitive_coset_family(group: WreathOverLine, H: SubgroupDesc,
                                positions, payload_value: int = 1,
                                node_cap: int = 2_000_000) -> PackingInstance:
    """Pairwise-close payload cosets indexed by arbitrary line positions.

    The family member at position t is the coset of the payload generator
    placed at t.  For any two positions the 2-transitive acting group donates
    a conjugating pair (h1, h2) = (q, q^-1) with q(t_i) = 0, q(t_j) = 1, so
    every pairwise witness has the *same* value — the payload difference
    pulled back to positions 0 and 1 — and therefore one uniform length,
    independent of the positions chosen.
    """
    positions = tuple(positions)
    if len(set(positions)) != len(positions):
        raise ValueError("positions must be distinct")
    if payload_value == 0:
        raise ValueError("payload value must be non-zero")
    family = tuple(group.payload_at(t, payload_value) for t in positions)

    # the uniform witness value: payload -v at 0 and +v at 1, trivial q-part
    uniform_value = group.mul(
        group.inv(group.payload_at(0, payload_value)),
        group.payload_at(1, payload_value),
    )
    bound = group.word_length(uniform_value, cutoff=4 + 2 * abs(payload_value) + 2,
                              node_cap=node_cap)
    if bound is UNKNOWN:
        raise RuntimeError("uniform witness value escaped its length cutoff")

    n = len(family)
    adjacency = [0] * n
    witnesses: dict = {}
    moved: dict[int, tuple] = {}  # delta -> witness word with q(0)=0, q(delta)=1
    for i in range(n):
        for j in range(i + 1, n):
            ti, tj = positions[i], positions[j]
            delta = tj - ti
            p = moved.get(delta)
            if p is None:
                p = two_transitive_witness(0, delta, node_cap)
                moved[delta] = p
            # translate first so the pair (ti, tj) lands on (0, delta)
            q = group.acting.mul(p, (-ti,) if ti else ())
            h1 = group.emb_q(q)
            h2 = group.inv(h1)
            d = group.mul(group.inv(family[i]), family[j])
            value = group.mul(group.mul(h1, d), h2)
            assert value == uniform_value, "conjugated witness value drifted"
            witnesses[(i, j)] = Witness(h1, h2, value, bound)
            adjacency[i] |= 1 << j
            adjacency[j] |= 1 << i
    clique, exact = max_clique(adjacency, exact_limit=max(301, n + 1))
    return PackingInstance(
        group=group, subgroup=H, D=bound, family=family,
        adjacency=tuple(adjacency), clique=tuple(clique),
        clique_lower=len(clique), clique_exact=exact,
        max_witness_len=bound, unknown_pairs=0,
        witnesses=witnesses,
    )
