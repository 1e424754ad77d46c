"""Packing-number upper bounds certified through finite quotients.

The method: collect every non-member of H with word length between 1 and D
(the separation set), then look for a homomorphism q onto a finite group
under which no separation element lands in q(H).  When q exists, any
pairwise-D-close family of distinct H-cosets stays distinct in the quotient
modulo q(H)'s preimage — a finite-index subgroup — so the family has at most
[target_order : |q(H)|] members.  That index is the certified bound, and the
per-element checks are kept as a transcript.

Soundness precondition: the image subgroup is computed as the closure of the
*images of H.sub_generators*, so those generators must generate a subgroup
with the same image as H under every quotient they are paired with.  All
registered pairings satisfy this (most sub_generators generate H itself; the
one deliberate exception maps the missing generators to the identity, which
can only enlarge the separation failure, never fake a success).
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Callable

from .core import DEFAULT_NODE_CAP, BudgetExceededError, Group
from .subgroups import SubgroupDesc
from .zoo import BaumslagSolitar12, Counterexample, FreeAbelian, Heisenberg, \
    Lamplighter, SplitByZ, WreathOverLine


@dataclass(frozen=True)
class FiniteQuotient:
    """A homomorphism from a registered group onto a finite group.

    ``apply`` maps ambient elements to hashable finite-group elements with
    decidable equality; ``mul`` is the finite group's law (needed to close
    the subgroup image); ``k`` is the congruence parameter the quotient was
    built from, kept for serialization.
    """

    description: str
    target_order: int
    apply: Callable[[Any], Any]
    mul: Callable[[Any, Any], Any]
    identity: Any
    k: int

    def image_subgroup(self, H: SubgroupDesc, node_cap: int = DEFAULT_NODE_CAP) -> frozenset:
        """Closure of the sub-generator images under the finite law.

        In a finite group the multiplicative closure of a generating set is
        already a subgroup (inverses arise as powers), so plain forward BFS
        suffices.
        """
        gens = [self.apply(s) for s in H.sub_generators]
        seen = {self.identity}
        frontier = [self.identity]
        level = 0
        while frontier:
            grown = []
            for x in frontier:
                for g in gens:
                    y = self.mul(x, g)
                    if y not in seen:
                        seen.add(y)
                        grown.append(y)
            if len(seen) > node_cap:
                raise BudgetExceededError(
                    f"image closure of {H!r} under {self.description} "
                    f"exceeded {node_cap} elements",
                    partial_radius=level,
                )
            frontier = grown
            level += 1
        return frozenset(seen)


@dataclass(frozen=True)
class SeparationSet:
    D: int
    elements: tuple  # non-members of H with 0 < word length <= D

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)


@dataclass(frozen=True)
class Certificate:
    group: Group
    subgroup: SubgroupDesc
    D: int
    quotient: FiniteQuotient
    subgroup_image_order: int
    bound: int
    transcript: tuple  # (element, image) per separation element

    def to_json_dict(self) -> dict:
        return {
            "group": self.group.registry_key,
            "subgroup": self.subgroup.name,
            "D": self.D,
            "quotient_description": self.quotient.description,
            "k": self.quotient.k,
            "bound": self.bound,
            "transcript": [
                {
                    "element": self.group.format_element(g),
                    "image": str(img),
                    "in_image_subgroup": False,
                }
                for g, img in self.transcript
            ],
        }


@dataclass(frozen=True)
class Attempt:
    description: str
    separated: bool
    failing_element: Any = None


@dataclass(frozen=True)
class CertificationOutcome:
    subgroup: SubgroupDesc
    D: int
    certificate: Certificate | None
    attempts: tuple


def build_separation_set(H: SubgroupDesc, D: int,
                         node_cap: int = DEFAULT_NODE_CAP) -> SeparationSet:
    """All non-members of H in the punctured ball of radius D, sorted by
    (length, formatted element) for a stable transcript order."""
    group = H.group
    ball = group.ball(D, node_cap)
    picked = [
        g for g in ball
        if g != group.identity and not H.member(g)
    ]
    picked.sort(key=lambda g: (ball.length(g), group.format_element(g)))
    return SeparationSet(D=D, elements=tuple(picked))


def certify_packing_upper(H: SubgroupDesc, D: int,
                          quotients=None,
                          node_cap: int = DEFAULT_NODE_CAP) -> CertificationOutcome:
    """First quotient separating the whole separation set, as a Certificate.

    Quotients are tried in the given order (the standard family for H's
    group when omitted).  Each failure is recorded with the element whose
    image fell inside the subgroup image; if no quotient separates, the
    outcome carries ``certificate=None`` — never an unsound bound.
    """
    group = H.group
    if quotients is None:
        quotients = standard_quotients(group)
    sep = build_separation_set(H, D, node_cap)
    attempts: list[Attempt] = []
    for quotient in quotients:
        image = quotient.image_subgroup(H, node_cap)
        failing = None
        for s in sep:
            if quotient.apply(s) in image:
                failing = s
                break
        if failing is not None:
            attempts.append(Attempt(quotient.description, False, failing))
            continue
        attempts.append(Attempt(quotient.description, True))
        image_order = len(image)
        bound, remainder = divmod(quotient.target_order, image_order)
        assert remainder == 0, "subgroup image order must divide the group order"
        return CertificationOutcome(
            subgroup=H, D=D,
            certificate=Certificate(
                group=group, subgroup=H, D=D, quotient=quotient,
                subgroup_image_order=image_order, bound=bound,
                transcript=tuple((s, quotient.apply(s)) for s in sep),
            ),
            attempts=tuple(attempts),
        )
    return CertificationOutcome(subgroup=H, D=D, certificate=None,
                                attempts=tuple(attempts))


# --------------------------------------------------------------------------
# quotient constructors


def zn_mod_k(group: FreeAbelian, k: int) -> FiniteQuotient:
    rank = group.rank
    return FiniteQuotient(
        description=f"coordinates mod {k}",
        target_order=k ** rank,
        apply=lambda g, k=k: tuple(x % k for x in g),
        mul=lambda a, b, k=k: tuple((x + y) % k for x, y in zip(a, b)),
        identity=(0,) * rank,
        k=k,
    )


def heisenberg_mod_k(k: int) -> FiniteQuotient:
    def mul(a, b, k=k):
        return ((a[0] + b[0]) % k, (a[1] + b[1]) % k,
                (a[2] + b[2] + a[0] * b[1]) % k)

    return FiniteQuotient(
        description=f"entries mod {k}",
        target_order=k ** 3,
        apply=lambda g, k=k: (g.x % k, g.y % k, g.z % k),
        mul=mul,
        identity=(0, 0, 0),
        k=k,
    )


def _phi_order_mod_k(group: SplitByZ, k: int) -> int:
    if k == 1:
        return 1
    rank = len(group.matrix)
    ident = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    mat = tuple(tuple(v % k for v in row) for row in group.matrix)
    power = mat
    order = 1
    while power != ident:
        power = tuple(
            tuple(sum(power[i][m] * mat[m][j] for m in range(rank)) % k
                  for j in range(rank))
            for i in range(rank)
        )
        order += 1
        if order > k ** (rank * rank):
            raise RuntimeError("matrix order search runaway (non-invertible mod k?)")
    return order


def split_mod_k(group: SplitByZ, k: int) -> FiniteQuotient:
    rank = len(group.matrix)
    order = _phi_order_mod_k(group, k)
    # powers of the action matrix mod k, indexed by the exponent mod its order
    powers = []
    mat = tuple(tuple(v % k for v in row) for row in group.matrix)
    cur = tuple(tuple(1 if i == j else 0 for j in range(rank)) for i in range(rank))
    for _ in range(order):
        powers.append(cur)
        cur = tuple(
            tuple(sum(cur[i][m] * mat[m][j] for m in range(rank)) % k
                  for j in range(rank))
            for i in range(rank)
        )

    def act(h, vec, k=k):
        p = powers[h]
        return tuple(sum(p[i][j] * vec[j] for j in range(rank)) % k
                     for i in range(rank))

    def mul(a, b, k=k, order=order):
        m1, h1 = a
        m2, h2 = b
        moved = act(h1, m2)
        return (tuple((x + y) % k for x, y in zip(m1, moved)), (h1 + h2) % order)

    return FiniteQuotient(
        description=f"lattice mod {k}, twist exponent mod {order}",
        target_order=(k ** rank) * order,
        apply=lambda g, k=k, order=order: (
            tuple(x % k for x in g.m), g.h % order),
        mul=mul,
        identity=((0,) * rank, 0),
        k=k,
    )


def bs12_mod(p: int) -> FiniteQuotient:
    """BS(1,2) onto Z/ord ⋉ Z/p for odd p, where ord is the multiplicative
    order of 2 mod p.  Dyadic denominators are invertible mod p, so the
    fraction part reduces soundly."""
    if p % 2 == 0:
        raise ValueError("modulus must be odd so that 2 is invertible")
    ord2 = 1
    acc = 2 % p
    while acc != 1:
        acc = acc * 2 % p
        ord2 += 1

    def apply(g, p=p, ord2=ord2):
        num = g.q.numerator
        den = g.q.denominator
        return (g.k % ord2, num * pow(den, -1, p) % p)

    def mul(a, b, p=p, ord2=ord2):
        k1, r1 = a
        k2, r2 = b
        return ((k1 + k2) % ord2, (r1 + pow(2, k1, p) * r2) % p)

    return FiniteQuotient(
        description=f"exponent mod {ord2}, dyadic part mod {p}",
        target_order=ord2 * p,
        apply=apply,
        mul=mul,
        identity=(0, 0),
        k=p,
    )


def lamplighter_congruence(k: int, j: int) -> FiniteQuotient:
    """Lamplighter onto (Z/k)^j ≀-style congruence: lamp values are summed
    within each shift residue class mod j, then reduced mod k; the shift
    survives mod j."""

    def apply(g, k=k, j=j):
        sums = [0] * j
        for pos, v in g.lamps:
            sums[pos % j] = (sums[pos % j] + v) % k
        return (tuple(sums), g.shift % j)

    def mul(a, b, k=k, j=j):
        f1, s1 = a
        f2, s2 = b
        merged = tuple((f1[r] + f2[(r - s1) % j]) % k for r in range(j))
        return (merged, (s1 + s2) % j)

    return FiniteQuotient(
        description=f"lamp sums mod {k} over residues mod {j}",
        target_order=(k ** j) * j,
        apply=apply,
        mul=mul,
        identity=((0,) * j, 0),
        k=k,
    )


def counterexample_congruence(k: int, j: int) -> FiniteQuotient:
    """The lamplighter congruence pulled through the projection that forgets
    the payload coordinate entirely."""
    base = lamplighter_congruence(k, j)
    return FiniteQuotient(
        description=f"payload killed; {base.description}",
        target_order=base.target_order,
        apply=lambda g, inner=base.apply: inner(g.q),
        mul=base.mul,
        identity=base.identity,
        k=k,
    )


def standard_quotients(group: Group) -> tuple[FiniteQuotient, ...]:
    """The congruence family tried, in order, by certify_packing_upper."""
    if isinstance(group, FreeAbelian):
        return tuple(zn_mod_k(group, k) for k in range(2, 9))
    if isinstance(group, Heisenberg):
        return tuple(heisenberg_mod_k(k) for k in range(2, 9))
    if isinstance(group, SplitByZ):
        return tuple(split_mod_k(group, k) for k in range(2, 9))
    if isinstance(group, BaumslagSolitar12):
        return tuple(bs12_mod(p) for p in (3, 5, 7, 9, 11))
    if isinstance(group, Lamplighter):
        grid = sorted(
            ((k, j) for k in (2, 3, 4) for j in (2, 3, 4)),
            key=lambda kj: (kj[0] ** kj[1] * kj[1], kj[0], kj[1]),
        )
        return tuple(lamplighter_congruence(k, j) for k, j in grid)
    if isinstance(group, Counterexample):
        grid = sorted(
            ((k, j) for k in (2, 3, 4) for j in (2, 3, 4)),
            key=lambda kj: (kj[0] ** kj[1] * kj[1], kj[0], kj[1]),
        )
        return tuple(counterexample_congruence(k, j) for k, j in grid)
    if isinstance(group, WreathOverLine):
        return ()
    raise KeyError(f"no standard quotient family for {group!r}")


def modk_certificate(group: SplitByZ, D: int,
                     node_cap: int = DEFAULT_NODE_CAP) -> Certificate:
    """The smallest-k congruence certificate for the acting subgroup of a
    split extension over a free abelian lattice.

    k is one more than the largest absolute lattice component over the
    separation set, so every nonzero component stays nonzero mod k and the
    separation check can never fail.  The bound equals |lattice / k·lattice|:
    quotient membership in the image of the acting subgroup is decided by the
    lattice coordinate alone, so no correction factor enters.
    """
    from .subgroups import subgroup

    H = subgroup(group, "acting-z")
    sep = build_separation_set(H, D, node_cap)
    worst = 0
    for s in sep:
        if all(v == 0 for v in s.m):
            raise ValueError(
                f"separation element {group.format_element(s)} has zero "
                "lattice part yet passed the non-membership filter — "
                "subgroup description bug"
            )
        worst = max(worst, max(abs(v) for v in s.m))
    k = worst + 1
    quotient = split_mod_k(group, k)
    image = quotient.image_subgroup(H, node_cap)
    transcript = []
    for s in sep:
        img = quotient.apply(s)
        assert img not in image, "mod-k image separation failed unexpectedly"
        transcript.append((s, img))
    image_order = len(image)
    bound, remainder = divmod(quotient.target_order, image_order)
    assert remainder == 0
    return Certificate(
        group=group, subgroup=H, D=D, quotient=quotient,
        subgroup_image_order=image_order, bound=bound,
        transcript=tuple(transcript),
    )
