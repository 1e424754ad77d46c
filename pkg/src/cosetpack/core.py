"""Shared group interface and word-metric machinery.

Every concrete group (see :mod:`cosetpack.zoo`) implements a tiny surface —
identity, multiplication, inversion, a finite defining generating set, and a
text codec for elements — and inherits breadth-first ball enumeration and
word-length queries from here.  All elements are exact, immutable, hashable
values; equal normal forms mean equal group elements.

Budget discipline: searches either answer exactly, return the ``UNKNOWN``
sentinel (ran out of *cutoff*), or raise :class:`BudgetExceededError`
(ran out of *nodes*).  Nothing is silently approximated.
"""

from __future__ import annotations

from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import Any, Callable, Iterator

DEFAULT_NODE_CAP = 500_000


class UnknownType:
    """Singleton returned when a bounded search could not decide.

    It deliberately has no truth value: code must compare with
    ``result is UNKNOWN`` instead of accidentally treating it as falsy.
    """

    _instance = None

    def __new__(cls) -> "UnknownType":
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self) -> str:
        return "UNKNOWN"

    def __bool__(self) -> bool:
        raise TypeError("UNKNOWN has no truth value; compare with `is UNKNOWN`")


UNKNOWN = UnknownType()


class BudgetExceededError(RuntimeError):
    """A breadth-first search hit its node cap before finishing.

    ``partial_radius`` is the largest radius that was *fully* enumerated
    before the cap triggered, so callers can report honest partial results.
    """

    def __init__(self, message: str, partial_radius: int) -> None:
        super().__init__(message)
        self.partial_radius = partial_radius


class MixedElementError(TypeError):
    """Elements of two different group instances were combined."""


class ElementFormatError(ValueError):
    """An element literal could not be parsed."""


@dataclass(frozen=True)
class GeneratingSet:
    """A finite, ordered, inverse-closed generating set without the identity."""

    elements: tuple

    @classmethod
    def symmetrized(cls, group: "Group", base) -> "GeneratingSet":
        """Close ``base`` under inverses, rejecting the identity and duplicates.

        Order is preserved (each generator immediately followed by its inverse
        unless already present); this order is what makes ball enumeration and
        every downstream tie-break deterministic.
        """
        out = []
        seen = set()
        ident = group.identity
        for g in base:
            if g == ident:
                raise ValueError("the identity is not allowed in a generating set")
            for h in (g, group.inv(g)):
                if h not in seen:
                    seen.add(h)
                    out.append(h)
        return cls(tuple(out))

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, g) -> bool:
        return g in self.elements


@dataclass(frozen=True)
class Ball:
    """All elements of word length <= radius, each mapped to its exact length.

    ``elements`` is insertion-ordered by breadth-first discovery (layer by
    layer); treat it as read-only.
    """

    radius: int
    elements: dict

    def __contains__(self, g) -> bool:
        return g in self.elements

    def __iter__(self) -> Iterator:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def length(self, g) -> int:
        return self.elements[g]


class BfsCache:
    """Layered breadth-first enumeration over a fixed generating set.

    Grows one full layer at a time and memoizes everything, so repeated
    ball/length queries against the same group+generators share work.
    Frontier states are deduplicated through canonical normal forms (element
    equality), which is what keeps exponentially-growing groups tractable
    at the radii we use.
    """

    def __init__(self, group: "Group", gens: GeneratingSet) -> None:
        self.group = group
        self.gens = tuple(gens)
        self.lengths: dict = {group.identity: 0}
        self._layers: list[tuple] = [(group.identity,)]
        self._exhausted = not self.gens
        self._ball_cache: dict[int, Ball] = {}

    @property
    def radius(self) -> int:
        return len(self._layers) - 1

    @property
    def exhausted(self) -> bool:
        """True once the whole generated subgroup has been enumerated."""
        return self._exhausted

    def _grow_layer(self, node_cap: int) -> None:
        frontier = self._layers[-1]
        mul = self.group.mul
        lens = self.lengths
        fresh: dict = {}
        for g in frontier:
            for s in self.gens:
                h = mul(g, s)
                if h not in lens and h not in fresh:
                    fresh[h] = None
                    if len(lens) + len(fresh) > node_cap:
                        raise BudgetExceededError(
                            f"ball enumeration exceeded {node_cap} nodes "
                            f"(radius {self.radius} was completed)",
                            partial_radius=self.radius,
                        )
        r = self.radius + 1
        for h in fresh:
            lens[h] = r
        self._layers.append(tuple(fresh))
        if not fresh:
            self._exhausted = True

    def extend_to(self, radius: int, node_cap: int = DEFAULT_NODE_CAP) -> None:
        while self.radius < radius and not self._exhausted:
            self._grow_layer(node_cap)

    def layer(self, r: int, node_cap: int = DEFAULT_NODE_CAP) -> tuple:
        """Exactly the elements of word length == r."""
        self.extend_to(r, node_cap)
        return self._layers[r] if r < len(self._layers) else ()

    def ball(self, radius: int, node_cap: int = DEFAULT_NODE_CAP) -> Ball:
        if radius < 0:
            raise ValueError("radius must be non-negative")
        self.extend_to(radius, node_cap)
        got = self._ball_cache.get(radius)
        if got is None:
            got = Ball(radius, {g: l for g, l in self.lengths.items() if l <= radius})
            self._ball_cache[radius] = got
        return got

    def length(self, g, cutoff: int | None = None, node_cap: int = DEFAULT_NODE_CAP):
        """Exact word length of ``g``, or UNKNOWN if not found within cutoff.

        With ``cutoff=None`` the search runs until the element is found, the
        generated set is exhausted (UNKNOWN: the element is not a product of
        these generators), or the node cap trips.
        """
        lens = self.lengths
        while True:
            if g in lens:
                return lens[g]
            if self._exhausted:
                return UNKNOWN
            if cutoff is not None and self.radius >= cutoff:
                return UNKNOWN
            self._grow_layer(node_cap)


class Group(ABC):
    """A countable group with exact element arithmetic and a fixed finite
    generating set.  The word metric for the symmetrized generating set is
    the proper left-invariant metric used everywhere downstream."""

    registry_key: str = "group"

    # --- group law (supplied per concrete group) ---------------------------

    @property
    @abstractmethod
    def identity(self):
        ...

    @abstractmethod
    def mul(self, a, b):
        """Product in canonical normal form; rejects foreign elements."""

    @abstractmethod
    def inv(self, a):
        ...

    @abstractmethod
    def base_generators(self) -> tuple:
        """The defining generators (not necessarily inverse-closed)."""

    @abstractmethod
    def parse_element(self, text: str):
        ...

    @abstractmethod
    def format_element(self, g) -> str:
        ...

    def check_element(self, g) -> None:
        """Raise MixedElementError unless ``g`` belongs to this group."""

    # --- derived machinery --------------------------------------------------

    def gens(self) -> GeneratingSet:
        cached = self.__dict__.get("_gens")
        if cached is None:
            cached = GeneratingSet.symmetrized(self, self.base_generators())
            self.__dict__["_gens"] = cached
        return cached

    def _bfs(self) -> BfsCache:
        cached = self.__dict__.get("_bfs_cache")
        if cached is None:
            cached = BfsCache(self, self.gens())
            self.__dict__["_bfs_cache"] = cached
        return cached

    def ball(self, radius: int, node_cap: int = DEFAULT_NODE_CAP) -> Ball:
        return self._bfs().ball(radius, node_cap)

    def layer(self, r: int, node_cap: int = DEFAULT_NODE_CAP) -> tuple:
        return self._bfs().layer(r, node_cap)

    def word_length(self, g, cutoff: int | None = None,
                    node_cap: int = DEFAULT_NODE_CAP):
        self.check_element(g)
        return self._bfs().length(g, cutoff, node_cap)

    def conjugate(self, g, by):
        """``by · g · by⁻¹``."""
        return self.mul(self.mul(by, g), self.inv(by))

    def __repr__(self) -> str:
        return f"<{type(self).__name__} {self.registry_key}>"


def ball_with_gens(group: Group, gens, radius: int,
                   node_cap: int = DEFAULT_NODE_CAP) -> Ball:
    """One-shot ball for a custom generating set (e.g. subgroup generators)."""
    if not isinstance(gens, GeneratingSet):
        gens = GeneratingSet.symmetrized(group, gens)
    return BfsCache(group, gens).ball(radius, node_cap)


def word_length_with_gens(group: Group, gens, g, cutoff: int | None = None,
                          node_cap: int = DEFAULT_NODE_CAP):
    if not isinstance(gens, GeneratingSet):
        gens = GeneratingSet.symmetrized(group, gens)
    return BfsCache(group, gens).length(g, cutoff, node_cap)
