"""Subgroup descriptors.

A :class:`SubgroupDesc` packages everything the coset machinery can exploit
about a subgroup H of a registered group:

* ``member``             — exact membership predicate,
* ``sub_generators``     — generators of H (used for the generic witness
                           search and for finite-quotient images; see the
                           soundness note in :mod:`cosetpack.certificates`),
* ``canonicalize_coset`` — a canonical representative of g·H, when the coset
                           space has a clean transversal,
* ``witness_candidates`` — a cheap, group-specific stream of (h1, h2) pairs
                           likely to realize short elements of H·d·H,
* ``value_length``       — exact ambient word length for the special value
                           shapes the strategy produces (None = fall back to
                           breadth-first lookup),
* ``double_coset_member``— exact decision u ∈ H·d·H, enabling exact coset
                           distances for non-normal H,
* ``is_normal``          — normality flag (double cosets collapse to cosets),
* ``strategy_complete``  — the candidate stream provably contains an optimal
                           witness, so the upper-bound search may skip the
                           generic enumeration once it succeeds.

Names are resolved with :func:`subgroup`.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Any, Callable

from .core import Group
from .zoo import (
    Bs,
    CElem,
    Counterexample,
    FreeAbelian,
    Heis,
    Heisenberg,
    Lamp,
    Lamplighter,
    Sp,
    SplitByZ,
    Wr,
    WreathOverLine,
    base_of_int_ratio,
    base_of_rat,
    lamplighter_word_length,
    merge_assoc,
    neg_assoc,
    shift_assoc,
    shuffle_length,
)


@dataclass(frozen=True, eq=False)
class SubgroupDesc:
    group: Group
    name: str
    member: Callable[[Any], bool]
    sub_generators: tuple
    canonicalize_coset: Callable[[Any], Any] | None = None
    witness_candidates: Callable | None = None
    value_length: Callable | None = None
    double_coset_member: Callable | None = None
    is_normal: bool = False
    strategy_complete: bool = False

    def __repr__(self) -> str:
        return f"<subgroup {self.group.registry_key}/{self.name}>"


# ---------------------------------------------------------------------------
# Z^n subgroups
# ---------------------------------------------------------------------------


def _scale(v: tuple, t: int) -> tuple:
    return tuple(t * c for c in v)


def _cyclic_member(v):
    pivot = next(i for i, c in enumerate(v) if c)

    def member(g) -> bool:
        q, r = divmod(g[pivot], v[pivot])
        if r:
            return False
        return all(g[i] == q * v[i] for i in range(len(g)))

    return member, pivot


def _zn_cyclic(group: FreeAbelian, name: str, v: tuple) -> SubgroupDesc:
    member, pivot = _cyclic_member(v)
    ident = group.identity

    def canonicalize(g):
        q = g[pivot] // v[pivot]
        return tuple(g[i] - q * v[i] for i in range(len(g)))

    def candidates(desc, d):
        # |d + t v| is eventually increasing in |t|, so a bounded scan is
        # guaranteed to contain the minimizer.
        bound = 2 * sum(abs(c) for c in d) + 1
        for t in range(-bound, bound + 1):
            yield (_scale(v, t), ident)

    def value_length(g, value):
        return sum(abs(c) for c in value)

    return SubgroupDesc(
        group, name, member, (v,),
        canonicalize_coset=canonicalize,
        witness_candidates=candidates,
        value_length=value_length,
        is_normal=True,
        strategy_complete=True,
    )


def _zn_trivial(group: FreeAbelian) -> SubgroupDesc:
    ident = group.identity
    return SubgroupDesc(
        group, "trivial",
        member=lambda g: g == ident,
        sub_generators=(),
        canonicalize_coset=lambda g: g,
        witness_candidates=lambda desc, d: ((ident, ident),),
        value_length=lambda g, value: sum(abs(c) for c in value),
        is_normal=True,
        strategy_complete=True,
    )


def _zn_full(group: FreeAbelian) -> SubgroupDesc:
    ident = group.identity
    return SubgroupDesc(
        group, "full",
        member=lambda g: True,
        sub_generators=group.base_generators(),
        canonicalize_coset=lambda g: ident,
        is_normal=True,
        strategy_complete=True,
    )


def _zn_index2(group: FreeAbelian) -> SubgroupDesc:
    # <(2,0),(0,1)> in Z^2: everything with even first coordinate
    ident = group.identity

    def candidates(desc, d):
        dx, dy = d
        for s in (-(dx // 2), -(dx // 2) - 1, -(dx // 2) + 1):
            yield ((2 * s, -dy), ident)

    return SubgroupDesc(
        group, "index2",
        member=lambda g: g[0] % 2 == 0,
        sub_generators=((2, 0), (0, 1)),
        canonicalize_coset=lambda g: (g[0] % 2, 0),
        witness_candidates=candidates,
        value_length=lambda g, value: sum(abs(c) for c in value),
        is_normal=True,
        strategy_complete=True,
    )


# ---------------------------------------------------------------------------
# Heisenberg subgroups
# ---------------------------------------------------------------------------


def _heis_center(group: Heisenberg) -> SubgroupDesc:
    ident = group.identity

    def candidates(desc, d):
        # h = (0,0,k) commutes past everything it needs to here:
        # value = (dx, dy, dz + k); aim dz + k into the interleaving interval
        # so the value costs exactly |dx| + |dy| letters.
        lo, hi = min(0, d.x * d.y), max(0, d.x * d.y)
        target = min(hi, max(lo, d.z))
        yield (Heis(0, 0, target - d.z), ident)

    def value_length(g, value):
        return shuffle_length(value.x, value.y, value.z)

    return SubgroupDesc(
        group, "center",
        member=lambda g: g.x == 0 and g.y == 0,
        sub_generators=(Heis(0, 0, 1),),
        canonicalize_coset=lambda g: Heis(g.x, g.y, 0),
        witness_candidates=candidates,
        value_length=value_length,
        is_normal=True,
        strategy_complete=True,
    )


def _heis_x_axis(group: Heisenberg) -> SubgroupDesc:
    ident = group.identity

    def candidates(desc, d):
        yield (ident, ident)
        if d.y == 0:
            yield (Heis(-d.x, 0, 0), ident)
            return
        # value(a1, x') = (x', dy, dz + a1*dy) with a2 = x' - dx - a1 free;
        # the optimum lives at a1 near -dz/dy with |x'| <= 1.
        base = -(d.z // d.y)
        for a1 in (base, base + 1, base - 1):
            z2 = d.z + a1 * d.y
            for xp in (0, 1, -1):
                if shuffle_length(xp, d.y, z2) is not None:
                    yield (Heis(a1, 0, 0), Heis(xp - d.x - a1, 0, 0))

    def dc_member(desc, d, u):
        # H d H = {(dx + a1 + a2, dy, dz + a1*dy)}
        if u.y != d.y:
            return False
        if d.y == 0:
            return u.z == d.z
        return (u.z - d.z) % d.y == 0

    return SubgroupDesc(
        group, "x-axis",
        member=lambda g: g.y == 0 and g.z == 0,
        sub_generators=(Heis(1, 0, 0),),
        canonicalize_coset=lambda g: Heis(0, g.y, g.z - g.x * g.y),
        witness_candidates=candidates,
        value_length=lambda g, value: shuffle_length(value.x, value.y, value.z),
        double_coset_member=dc_member,
    )


# ---------------------------------------------------------------------------
# lamplighter subgroups
# ---------------------------------------------------------------------------


def _lamp_base(group: Lamplighter) -> SubgroupDesc:
    ident = group.identity

    def candidates(desc, d):
        yield (Lamp(neg_assoc(d.lamps), 0), ident)

    return SubgroupDesc(
        group, "base",
        member=lambda g: g.shift == 0,
        sub_generators=(Lamp(((0, 1),), 0),),
        canonicalize_coset=lambda g: Lamp((), g.shift),
        witness_candidates=candidates,
        value_length=lambda g, value: lamplighter_word_length(value),
        is_normal=True,
        strategy_complete=True,
    )


def _lamp_shift(group: Lamplighter) -> SubgroupDesc:
    def candidates(desc, d):
        f = d.lamps
        if not f:
            return
        lo, hi = f[0][0], f[-1][0]
        for j1, m in ((-lo, hi - lo), (-hi, lo - hi)):
            yield (Lamp((), j1), Lamp((), m - j1 - d.shift))

    def dc_member(desc, d, u):
        # shifts on both sides: lamp patterns must agree up to translation
        f, g = d.lamps, u.lamps
        if len(f) != len(g):
            return False
        if not f:
            return True
        off = g[0][0] - f[0][0]
        return all(gp == fp + off and gv == fv for (fp, fv), (gp, gv) in zip(f, g))

    return SubgroupDesc(
        group, "shift",
        member=lambda g: g.lamps == (),
        sub_generators=(Lamp((), 1),),
        canonicalize_coset=lambda g: Lamp(g.lamps, 0),
        witness_candidates=candidates,
        value_length=lambda g, value: lamplighter_word_length(value),
        double_coset_member=dc_member,
        strategy_complete=True,
    )


# ---------------------------------------------------------------------------
# bs12 subgroups
# ---------------------------------------------------------------------------


def _bs_a_cyclic(group) -> SubgroupDesc:
    zero = Fraction(0)

    def candidates(desc, d):
        for j1 in range(-4, 5):
            yield (Bs(j1, zero), Bs(-j1 - d.k, zero))
            yield (Bs(j1, zero), Bs(-j1, zero))

    return SubgroupDesc(
        group, "a-cyclic",
        member=lambda g: g.q == 0,
        sub_generators=(Bs(1, zero),),
        canonicalize_coset=lambda g: Bs(0, g.q),
        witness_candidates=candidates,
    )


def _bs_b_integers(group) -> SubgroupDesc:
    zero = Fraction(0)

    def candidates(desc, d):
        for n1 in range(-3, 4):
            for n2 in range(-3, 4):
                yield (Bs(0, Fraction(n1)), Bs(0, Fraction(n2)))

    def canonicalize(g):
        step = Fraction(2 ** g.k) if g.k >= 0 else Fraction(1, 2 ** (-g.k))
        return Bs(g.k, g.q - (g.q // step) * step)

    return SubgroupDesc(
        group, "b-integers",
        member=lambda g: g.k == 0 and g.q.denominator == 1,
        sub_generators=(Bs(0, Fraction(1)),),
        canonicalize_coset=canonicalize,
        witness_candidates=candidates,
    )


# ---------------------------------------------------------------------------
# counterexample subgroups
# ---------------------------------------------------------------------------


def _ce_t_base(group: Counterexample) -> SubgroupDesc:
    """The multiplicative-base subgroup: pure lamp stacks, no shift, no payload.

    Its elements conjugate a payload x at coordinate m to u*x for the positive
    rational u their lamps encode around m, which is where the short witnesses
    for payload pairs come from.
    """
    ident = group.identity
    c_plus = group.base_generators()[2]
    c_minus = group.inv(c_plus)

    def member(g) -> bool:
        return g.w == () and g.q.shift == 0

    id_lamp = Lamp((), 0)

    def candidates(desc, d):
        if d.q == id_lamp and len(d.w) == 1:
            idx, x = d.w[0]
            # lamp stack encoding 1/|x|, recentred on the payload coordinate
            lamps = base_of_int_ratio(x.denominator, abs(x.numerator))
            if idx:
                lamps = tuple((p + idx, e) for p, e in lamps)
            return (
                (CElem((), Lamp(lamps, 0)), CElem((), Lamp(neg_assoc(lamps), 0))),
                (ident, ident),
            )
        return ((ident, ident),)

    def value_length(g, value):
        if value == c_plus or value == c_minus:
            return 1
        if value.w == ():
            return lamplighter_word_length(value.q)
        return None

    return SubgroupDesc(
        group, "t-base",
        member=member,
        sub_generators=tuple(group.emb_t(p) for p in (2, 3, 5)),
        canonicalize_coset=lambda g: CElem(g.w, Lamp((), g.q.shift)),
        witness_candidates=candidates,
        value_length=value_length,
    )


def _ce_w_normal(group: Counterexample) -> SubgroupDesc:
    ident = group.identity
    id_lamp = Lamp((), 0)

    def candidates(desc, d):
        yield (CElem(neg_assoc(d.w), id_lamp), ident)

    def value_length(g, value):
        if value.w == ():
            # no payload: the word never needs the payload letter, so the
            # length is the lamplighter length of the acting part
            return lamplighter_word_length(value.q)
        return None

    return SubgroupDesc(
        group, "w-normal",
        member=lambda g: g.q == id_lamp,
        sub_generators=(group.base_generators()[2],),
        canonicalize_coset=lambda g: CElem((), g.q),
        witness_candidates=candidates,
        value_length=value_length,
        is_normal=True,
        strategy_complete=True,
    )


def _ce_q_top(group: Counterexample) -> SubgroupDesc:
    id_lamp = Lamp((), 0)
    return SubgroupDesc(
        group, "q-top",
        member=lambda g: g.w == (),
        sub_generators=(
            CElem((), Lamp((), 1)),
            CElem((), Lamp(((0, 1),), 0)),
        ),
        canonicalize_coset=lambda g: CElem(g.w, id_lamp),
    )


def _ce_pullback_shift(group: Counterexample) -> SubgroupDesc:
    """Preimage of the shift subgroup under the quotient killing the payload:
    arbitrary payload, arbitrary walker shift, but no lamps."""
    gens = group.base_generators()

    def member(g) -> bool:
        return g.q.lamps == ()

    def canonicalize(g):
        return CElem((), Lamp(g.q.lamps, 0))

    def candidates(desc, d):
        f = d.q.lamps
        if not f:
            return
        lo, hi = f[0][0], f[-1][0]
        for k1, m in ((-lo, hi - lo), (-hi, lo - hi)):
            move = Lamp((), k1)
            h1 = CElem(neg_assoc(group.act_q_on_w(move, d.w)), move)
            h2 = CElem((), Lamp((), m - k1 - d.q.shift))
            yield (h1, h2)

    def value_length(g, value):
        if value.w == ():
            return lamplighter_word_length(value.q)
        return None

    def dc_member(desc, d, u):
        f, g_ = d.q.lamps, u.q.lamps
        if len(f) != len(g_):
            return False
        if not f:
            return True
        off = g_[0][0] - f[0][0]
        return all(gp == fp + off and gv == fv for (fp, fv), (gp, gv) in zip(f, g_))

    return SubgroupDesc(
        group, "pullback-shift",
        member=member,
        sub_generators=(gens[0], gens[2]),
        canonicalize_coset=canonicalize,
        witness_candidates=candidates,
        value_length=value_length,
        double_coset_member=dc_member,
        strategy_complete=True,
    )


# ---------------------------------------------------------------------------
# wreath-over-line subgroup
# ---------------------------------------------------------------------------


def _wr_q_top(group: WreathOverLine) -> SubgroupDesc:
    return SubgroupDesc(
        group, "q-top",
        member=lambda g: g.pay == (),
        sub_generators=(Wr((), (1,)), Wr((), ("s",))),
        canonicalize_coset=lambda g: Wr(g.pay, ()),
    )


# ---------------------------------------------------------------------------
# split-extension subgroups
# ---------------------------------------------------------------------------


def _split_acting(group: SplitByZ) -> SubgroupDesc:
    zero = (0,) * group.rank

    def candidates(desc, d):
        for a in range(-6, 7):
            yield (Sp(zero, a), Sp(zero, -a - d.h))
            yield (Sp(zero, a), Sp(zero, -a))

    def dc_member(desc, d, u):
        # u in H d H iff u.m = phi^a d.m for some a.  Nonzero integer vectors
        # cannot sit exactly in an irrational eigenspace, so |phi^a d.m| blows
        # up in both directions; 64 steps each way either finds the match,
        # detects a periodic orbit, or overshoots any small target for good.
        if d.m == zero or u.m == zero:
            return d.m == u.m
        if group.phi_power(1) == group.phi_power(0):
            return u.m == d.m
        for direction in (1, -1):
            vec = d.m
            for _ in range(64):
                if vec == u.m:
                    return True
                vec = group.apply_phi(direction, vec)
                if vec == d.m:  # finite orbit, fully scanned
                    return False
            if sum(abs(c) for c in vec) <= sum(abs(c) for c in u.m):
                raise RuntimeError("split orbit walk exhausted its step cap")
        return False

    return SubgroupDesc(
        group, "acting-z",
        member=lambda g: g.m == zero,
        sub_generators=(Sp(zero, 1),),
        canonicalize_coset=lambda g: Sp(g.m, 0),
        witness_candidates=candidates,
        double_coset_member=dc_member,
    )


def _split_m_normal(group: SplitByZ) -> SubgroupDesc:
    zero = (0,) * group.rank
    ident = group.identity

    def candidates(desc, d):
        yield (Sp(tuple(-c for c in d.m), 0), ident)

    def value_length(g, value):
        if value.m == zero:
            return abs(value.h)
        return None

    return SubgroupDesc(
        group, "m-normal",
        member=lambda g: g.h == 0,
        sub_generators=group.base_generators()[:-1],
        canonicalize_coset=lambda g: Sp(zero, g.h),
        witness_candidates=candidates,
        value_length=value_length,
        is_normal=True,
        strategy_complete=True,
    )


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------


def _build(group: Group, name: str) -> SubgroupDesc:
    key = group.registry_key
    if isinstance(group, FreeAbelian):
        if name == "diag":
            return _zn_cyclic(group, "diag", (1,) * group.rank)
        if name == "trivial":
            return _zn_trivial(group)
        if name == "full":
            return _zn_full(group)
        if group.rank == 2:
            if name == "antidiag":
                return _zn_cyclic(group, "antidiag", (1, -1))
            if name == "axis0":
                return _zn_cyclic(group, "axis0", (1, 0))
            if name == "index2":
                return _zn_index2(group)
            if name == "even-diag":
                return _zn_cyclic(group, "even-diag", (2, 2))
    elif isinstance(group, Heisenberg):
        if name == "center":
            return _heis_center(group)
        if name == "x-axis":
            return _heis_x_axis(group)
    elif isinstance(group, Lamplighter):
        if name == "base":
            return _lamp_base(group)
        if name == "shift":
            return _lamp_shift(group)
    elif key == "bs12":
        if name == "a-cyclic":
            return _bs_a_cyclic(group)
        if name == "b-integers":
            return _bs_b_integers(group)
    elif isinstance(group, Counterexample):
        if name == "t-base":
            return _ce_t_base(group)
        if name == "w-normal":
            return _ce_w_normal(group)
        if name == "q-top":
            return _ce_q_top(group)
        if name == "pullback-shift":
            return _ce_pullback_shift(group)
    elif isinstance(group, WreathOverLine):
        if name == "q-top":
            return _wr_q_top(group)
    elif isinstance(group, SplitByZ):
        if name == "acting-z":
            return _split_acting(group)
        if name == "m-normal":
            return _split_m_normal(group)
    raise KeyError(f"no subgroup named {name!r} for group {key!r}")


def subgroup(group: Group, name: str) -> SubgroupDesc:
    """Resolve (and cache) a named subgroup of a registered group."""
    cache = group.__dict__.setdefault("_subgroup_cache", {})
    got = cache.get(name)
    if got is None:
        got = _build(group, name)
        cache[name] = got
    return got


def subgroup_names(group: Group) -> tuple[str, ...]:
    if isinstance(group, FreeAbelian):
        names = ["diag", "trivial", "full"]
        if group.rank == 2:
            names += ["antidiag", "axis0", "index2", "even-diag"]
        return tuple(names)
    table = {
        "heisenberg": ("center", "x-axis"),
        "lamplighter": ("base", "shift"),
        "bs12": ("a-cyclic", "b-integers"),
        "counterexample": ("t-base", "w-normal", "q-top", "pullback-shift"),
        "zstarz2-wreath": ("q-top",),
    }
    if group.registry_key.startswith("split:"):
        return ("acting-z", "m-normal")
    return table.get(group.registry_key, ())
