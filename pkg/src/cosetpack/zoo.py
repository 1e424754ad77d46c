"""Concrete groups with exact element encodings.

All arithmetic is exact: integers, ``fractions.Fraction``, and reduced words.
Floating point never appears.  Element types are per-group NamedTuples (or
plain int tuples for free abelian groups) whose normal forms make equality,
hashing, and therefore BFS deduplication trivial.

Registry keys:

    zn:<rank>        free abelian Z^rank, unit-vector generators
    heisenberg       integer Heisenberg group, generators X, Y
    lamplighter      Z wr Z, generators a (shift), b (lamp at 0)
    bs12             the affine group <a, b | a b a^-1 = b^2> on Z[1/2]
    zstarz2-wreath   Z-payloads on the integer line permuted by Z * Z/2
    counterexample   rational payload line extended by the lamplighter,
                     lamps acting through prime exponents
    split:zxz        Z x Z presented as a (trivial) split extension by Z
    split:z2phi      Z^2 extended by Z acting via [[2,1],[1,1]]
"""

from __future__ import annotations

from array import array
from collections import deque
from fractions import Fraction
from math import isqrt
from typing import NamedTuple

from .core import (
    BudgetExceededError,
    ElementFormatError,
    Group,
    MixedElementError,
)

# ---------------------------------------------------------------------------
# primes on a zigzag: position 0, 1, -1, 2, -2, ... <-> prime 2, 3, 5, 7, 11, ...
# ---------------------------------------------------------------------------

_TRIAL_LIMIT = 10_000
_SPF_LIMIT = 1_100_001  # covers denominators from reciprocal pools up to 1/1001

_primes: list[int] = [2, 3, 5, 7, 11, 13]
_prime_pos: dict[int, int] = {}
_spf: array | None = None


def _zigzag_position(k: int) -> int:
    # index of a prime in the ordered prime list -> its integer position
    if k == 0:
        return 0
    return (k + 1) // 2 if k % 2 else -(k // 2)


def _sieve_list(limit: int) -> list[int]:
    limit = max(limit, 16)
    flags = bytearray(b"\x01") * (limit + 1)
    flags[0] = flags[1] = 0
    for i in range(2, isqrt(limit) + 1):
        if flags[i]:
            flags[i * i :: i] = bytearray(len(range(i * i, limit + 1, i)))
    return [i for i, f in enumerate(flags) if f]


def _sync_prime_positions() -> None:
    for k in range(len(_prime_pos), len(_primes)):
        _prime_pos[_primes[k]] = _zigzag_position(k)


_sync_prime_positions()


def _ensure_prime_count(n: int) -> None:
    global _primes
    while len(_primes) < n:
        _primes = _sieve_list(2 * _primes[-1])
    _sync_prime_positions()


def _ensure_primes_upto(limit: int) -> None:
    global _primes
    if _primes[-1] < limit:
        _primes = _sieve_list(2 * limit)
    _sync_prime_positions()


def prime_at(position: int) -> int:
    """The prime sitting at an integer position of the zigzag enumeration."""
    k = 0 if position == 0 else (2 * position - 1 if position > 0 else -2 * position)
    if k >= len(_primes):
        _ensure_prime_count(k + 1)
    return _primes[k]


def position_of_prime(p: int) -> int:
    pos = _prime_pos.get(p)
    if pos is not None:
        return pos
    _ensure_primes_upto(p)
    pos = _prime_pos.get(p)
    if pos is None:
        raise ValueError(f"{p} is not prime")
    return pos


def _build_spf() -> array:
    # smallest-prime-factor table; descending prime order lets C-level slice
    # assignment do the work (smaller primes overwrite larger ones last).
    n = _SPF_LIMIT
    spf = array("i", range(n))
    for p in reversed(_sieve_list(isqrt(n - 1))):
        count = len(range(p * p, n, p))
        spf[p * p :: p] = array("i", [p]) * count
    return spf


def factorize(n: int) -> dict[int, int]:
    """Prime factorization of a positive integer as {prime: exponent}."""
    global _spf
    if n <= 0:
        raise ValueError("factorize expects a positive integer")
    out: dict[int, int] = {}
    if n < _SPF_LIMIT and (_spf is not None or n >= _TRIAL_LIMIT):
        if _spf is None:
            _spf = _build_spf()
        spf = _spf
        while n > 1:
            p = spf[n]
            e = 0
            while n % p == 0:
                n //= p
                e += 1
            out[p] = e
        return out
    d = 2
    while d * d <= n:
        if n % d == 0:
            e = 0
            while n % d == 0:
                n //= d
                e += 1
            out[d] = e
        d += 1 if d == 2 else 2
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


def rat_of_base(entries) -> Fraction:
    """Positive rational encoded by exponent entries ((position, exp), ...).

    The group of finitely-supported integer exponent vectors over the zigzag
    prime enumeration is isomorphic (additively -> multiplicatively) to the
    positive rationals; this is one direction of that isomorphism.
    """
    num = den = 1
    for pos, e in entries:
        p = prime_at(pos)
        if e > 0:
            num *= p ** e
        else:
            den *= p ** (-e)
    return Fraction(num, den)


def base_of_rat(r) -> tuple[tuple[int, int], ...]:
    """Inverse of :func:`rat_of_base`; only positive rationals are in range."""
    if not isinstance(r, Fraction):
        r = Fraction(r)
    if r <= 0:
        raise ValueError("only positive rationals decompose over the prime base")
    return base_of_int_ratio(r.numerator, r.denominator)


def base_of_int_ratio(num: int, den: int) -> tuple[tuple[int, int], ...]:
    """Exponent entries of the positive rational num/den (not necessarily
    reduced; cancellation happens in exponent space)."""
    global _spf
    if num <= 0 or den <= 0:
        raise ValueError("both parts of the ratio must be positive")
    if _spf is None and _TRIAL_LIMIT <= max(num, den) < _SPF_LIMIT:
        _spf = _build_spf()
    acc: dict[int, int] = {}
    spf = _spf
    pos_get = _prime_pos.get
    for n, sign in ((num, 1), (den, -1)):
        if spf is not None and n < _SPF_LIMIT:
            while n > 1:
                p = spf[n]
                e = 0
                while n % p == 0:
                    n //= p
                    e += 1
                pos = pos_get(p)
                if pos is None:
                    pos = position_of_prime(p)
                got = acc.get(pos, 0) + sign * e
                if got:
                    acc[pos] = got
                else:
                    del acc[pos]
        else:
            for p, e in factorize(n).items():
                pos = position_of_prime(p)
                got = acc.get(pos, 0) + sign * e
                if got:
                    acc[pos] = got
                else:
                    del acc[pos]
    return tuple(sorted(acc.items()))


# ---------------------------------------------------------------------------
# finitely-supported association lists (shared by lamp stacks and payloads)
# ---------------------------------------------------------------------------


def merge_assoc(f1: tuple, f2: tuple) -> tuple:
    """Pointwise sum of two sorted (key, value) tuples, dropping zero sums."""
    if not f1:
        return f2
    if not f2:
        return f1
    out = []
    i = j = 0
    n1, n2 = len(f1), len(f2)
    while i < n1 and j < n2:
        k1, v1 = f1[i]
        k2, v2 = f2[j]
        if k1 < k2:
            out.append(f1[i])
            i += 1
        elif k2 < k1:
            out.append(f2[j])
            j += 1
        else:
            s = v1 + v2
            if s:
                out.append((k1, s))
            i += 1
            j += 1
    out.extend(f1[i:])
    out.extend(f2[j:])
    return tuple(out)


def neg_assoc(f: tuple) -> tuple:
    return tuple((k, -v) for k, v in f)


def shift_assoc(f: tuple, k: int) -> tuple:
    if k == 0:
        return f
    return tuple((p + k, v) for p, v in f)


def _normalize_assoc(pairs) -> tuple:
    acc: dict = {}
    for k, v in pairs:
        acc[k] = acc.get(k, 0) + v
    return tuple((k, v) for k, v in sorted(acc.items()) if v)


# ---------------------------------------------------------------------------
# Z^n
# ---------------------------------------------------------------------------


class FreeAbelian(Group):
    """Z^rank with unit-vector generators; elements are plain int tuples."""

    def __init__(self, rank: int) -> None:
        if rank < 1:
            raise ValueError("rank must be at least 1")
        self.rank = rank
        self.registry_key = f"zn:{rank}"
        self._identity = (0,) * rank

    @property
    def identity(self):
        return self._identity

    def check_element(self, g) -> None:
        if (
            type(g) is not tuple
            or len(g) != self.rank
            or not all(type(c) is int for c in g)
        ):
            raise MixedElementError(f"not a {self.registry_key} element: {g!r}")

    def mul(self, a, b):
        self.check_element(a)
        self.check_element(b)
        return tuple(x + y for x, y in zip(a, b))

    def inv(self, a):
        self.check_element(a)
        return tuple(-x for x in a)

    def base_generators(self) -> tuple:
        out = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            out.append(tuple(v))
        return tuple(out)

    def parse_element(self, text: str):
        parts = text.split(",")
        if len(parts) != self.rank:
            raise ElementFormatError(
                f"{self.registry_key} wants {self.rank} comma-separated integers"
            )
        try:
            return tuple(int(p.strip()) for p in parts)
        except ValueError as exc:
            raise ElementFormatError(f"bad integer in {text!r}") from exc

    def format_element(self, g) -> str:
        return ",".join(str(c) for c in g)


# ---------------------------------------------------------------------------
# discrete Heisenberg group
# ---------------------------------------------------------------------------


class Heis(NamedTuple):
    x: int
    y: int
    z: int


class Heisenberg(Group):
    """Upper unitriangular 3x3 integer matrices, coordinates (x, y, z).

    Law: (x,y,z)(x',y',z') = (x+x', y+y', z+z'+x*y'), generators
    X = (1,0,0) and Y = (0,1,0); the commutator [X,Y] is the central (0,0,1).
    """

    registry_key = "heisenberg"

    @property
    def identity(self):
        return Heis(0, 0, 0)

    def check_element(self, g) -> None:
        if type(g) is not Heis:
            raise MixedElementError(f"not a heisenberg element: {g!r}")

    def mul(self, a, b):
        if type(a) is not Heis or type(b) is not Heis:
            raise MixedElementError("heisenberg.mul on foreign elements")
        return Heis(a.x + b.x, a.y + b.y, a.z + b.z + a.x * b.y)

    def inv(self, a):
        if type(a) is not Heis:
            raise MixedElementError("heisenberg.inv on a foreign element")
        return Heis(-a.x, -a.y, a.x * a.y - a.z)

    def base_generators(self) -> tuple:
        return (Heis(1, 0, 0), Heis(0, 1, 0))

    def parse_element(self, text: str):
        parts = text.split(",")
        if len(parts) != 3:
            raise ElementFormatError("heisenberg wants `x,y,z`")
        try:
            return Heis(*(int(p.strip()) for p in parts))
        except ValueError as exc:
            raise ElementFormatError(f"bad integer in {text!r}") from exc

    def format_element(self, g) -> str:
        return f"{g.x},{g.y},{g.z}"


def shuffle_length(x: int, y: int, z: int) -> int | None:
    """|x|+|y| when (x,y,z) is writable with only |x|+|y| letters, else None.

    Interleaving |x| X-steps with |y| Y-steps realizes exactly the z values
    between 0 and x*y, so the word length of (x,y,z) equals the obvious lower
    bound |x|+|y| precisely on that interval.
    """
    lo, hi = min(0, x * y), max(0, x * y)
    return abs(x) + abs(y) if lo <= z <= hi else None


# ---------------------------------------------------------------------------
# lamplighter Z wr Z
# ---------------------------------------------------------------------------


class Lamp(NamedTuple):
    lamps: tuple  # sorted ((position, value != 0), ...)
    shift: int


class Lamplighter(Group):
    """Z wr Z: integer lamp stacks on the line plus a walker position.

    (f1,k1)(f2,k2) = (f1 + shift_{k1} f2, k1 + k2), generators a = bare shift
    and b = increment the lamp under the walker.
    """

    registry_key = "lamplighter"

    @property
    def identity(self):
        return Lamp((), 0)

    def check_element(self, g) -> None:
        if type(g) is not Lamp:
            raise MixedElementError(f"not a lamplighter element: {g!r}")
        for p, v in g.lamps:
            if v == 0:
                raise MixedElementError("zero lamp stored")

    def mul(self, a, b):
        if type(a) is not Lamp or type(b) is not Lamp:
            raise MixedElementError("lamplighter.mul on foreign elements")
        return Lamp(merge_assoc(a.lamps, shift_assoc(b.lamps, a.shift)), a.shift + b.shift)

    def inv(self, a):
        if type(a) is not Lamp:
            raise MixedElementError("lamplighter.inv on a foreign element")
        return Lamp(neg_assoc(shift_assoc(a.lamps, -a.shift)), -a.shift)

    def base_generators(self) -> tuple:
        return (Lamp((), 1), Lamp(((0, 1),), 0))

    def parse_element(self, text: str):
        lamps, shift = _parse_lamp_literal(text)
        return Lamp(lamps, shift)

    def format_element(self, g) -> str:
        return _format_lamp_literal(g.lamps, g.shift)


def _parse_lamp_literal(text: str) -> tuple[tuple, int]:
    # "lamps:0=1,3=-2;shift:2" (lamps part may be empty: "lamps:;shift:2")
    try:
        lamps_part, shift_part = text.split(";")
    except ValueError as exc:
        raise ElementFormatError(f"expected `lamps:...;shift:...`, got {text!r}") from exc
    if not lamps_part.startswith("lamps:") or not shift_part.startswith("shift:"):
        raise ElementFormatError(f"expected `lamps:...;shift:...`, got {text!r}")
    body = lamps_part[len("lamps:"):]
    entries = []
    if body:
        for chunk in body.split(","):
            try:
                pos, val = chunk.split("=")
                entries.append((int(pos), int(val)))
            except ValueError as exc:
                raise ElementFormatError(f"bad lamp entry {chunk!r}") from exc
    try:
        shift = int(shift_part[len("shift:"):])
    except ValueError as exc:
        raise ElementFormatError(f"bad shift in {text!r}") from exc
    return _normalize_assoc(entries), shift


def _format_lamp_literal(lamps: tuple, shift: int) -> str:
    body = ",".join(f"{p}={v}" for p, v in lamps)
    return f"lamps:{body};shift:{shift}"


def lamplighter_word_length(g: Lamp) -> int:
    """Exact word length in the generators a (shift) and b (lamp at 0).

    Cost = total lamp increments + shortest walk from 0 visiting every lit
    position and ending at the final shift; with all lamps in an interval
    [lo, hi] the walk is one of the two sweep orders.
    """
    toggles = sum(abs(v) for _, v in g.lamps)
    m = g.shift
    if not g.lamps:
        return toggles + abs(m)
    lo = g.lamps[0][0]
    hi = g.lamps[-1][0]
    sweep_left = abs(0 - lo) + (hi - lo) + abs(hi - m)
    sweep_right = abs(0 - hi) + (hi - lo) + abs(lo - m)
    return toggles + min(sweep_left, sweep_right)


# ---------------------------------------------------------------------------
# Baumslag–Solitar BS(1,2) as an affine group over Z[1/2]
# ---------------------------------------------------------------------------


class Bs(NamedTuple):
    k: int        # conjugation exponent (power of the doubling map)
    q: Fraction   # dyadic translation part


def _pow2(k: int) -> Fraction:
    return Fraction(2 ** k) if k >= 0 else Fraction(1, 2 ** (-k))


class BaumslagSolitar12(Group):
    """<a, b | a b a^-1 = b^2>, realized as pairs (k, q) with q dyadic.

    (k1,q1)(k2,q2) = (k1+k2, q1 + 2^{k1} q2); a = (1, 0) doubles, b = (0, 1)
    translates.  Fractions keep the dyadic part exact with minimal exponent.
    """

    registry_key = "bs12"

    @property
    def identity(self):
        return Bs(0, Fraction(0))

    def check_element(self, g) -> None:
        if type(g) is not Bs or type(g.k) is not int or not isinstance(g.q, Fraction):
            raise MixedElementError(f"not a bs12 element: {g!r}")
        d = g.q.denominator
        if d & (d - 1):
            raise MixedElementError(f"translation part {g.q} is not dyadic")

    def mul(self, a, b):
        if type(a) is not Bs or type(b) is not Bs:
            raise MixedElementError("bs12.mul on foreign elements")
        return Bs(a.k + b.k, a.q + _pow2(a.k) * b.q)

    def inv(self, a):
        if type(a) is not Bs:
            raise MixedElementError("bs12.inv on a foreign element")
        return Bs(-a.k, -a.q * _pow2(-a.k))

    def base_generators(self) -> tuple:
        return (Bs(1, Fraction(0)), Bs(0, Fraction(1)))

    def parse_element(self, text: str):
        try:
            k_part, q_part = text.split(";")
            if not k_part.startswith("k:") or not q_part.startswith("q:"):
                raise ValueError
            g = Bs(int(k_part[2:]), Fraction(q_part[2:]))
        except (ValueError, ZeroDivisionError) as exc:
            raise ElementFormatError(f"expected `k:<int>;q:<rational>`, got {text!r}") from exc
        self.check_element(g)
        return g

    def format_element(self, g) -> str:
        return f"k:{g.k};q:{g.q}"


# ---------------------------------------------------------------------------
# the free product Z * Z/2 acting 2-transitively on Z
# ---------------------------------------------------------------------------


class FreeProductZZ2(Group):
    """Z * Z/2 as reduced alternating words.

    Letters are nonzero ints (powers of the translation z) and the string
    "s" (the involution swapping 0 and 1).  A word acts on Z left-to-right
    as a composition: (l1 l2 ... lm)(x) = l1(l2(... lm(x))).
    """

    registry_key = "zstarz2"

    @property
    def identity(self):
        return ()

    def check_element(self, g) -> None:
        if type(g) is not tuple:
            raise MixedElementError(f"not a free-product word: {g!r}")
        prev_int = None
        for i, letter in enumerate(g):
            if letter == "s":
                if i > 0 and g[i - 1] == "s":
                    raise MixedElementError("unreduced word: s s")
                prev_int = False
            elif type(letter) is int and letter != 0:
                if prev_int:
                    raise MixedElementError("unreduced word: adjacent z powers")
                prev_int = True
            else:
                raise MixedElementError(f"bad letter {letter!r}")

    @staticmethod
    def _push(word: list, letter) -> None:
        if letter == "s":
            if word and word[-1] == "s":
                word.pop()
            else:
                word.append("s")
        else:
            if word and word[-1] != "s":
                m = word.pop() + letter
                if m:
                    word.append(m)
            else:
                word.append(letter)

    def mul(self, a, b):
        word = list(a)
        for letter in b:
            self._push(word, letter)
        return tuple(word)

    def inv(self, a):
        return tuple("s" if l == "s" else -l for l in reversed(a))

    def base_generators(self) -> tuple:
        return ((1,), ("s",))

    def act(self, word: tuple, x: int) -> int:
        for letter in reversed(word):
            if letter == "s":
                if x == 0:
                    x = 1
                elif x == 1:
                    x = 0
            else:
                x += letter
        return x

    def parse_element(self, text: str):
        if text == "e":
            return ()
        word: list = []
        for token in text.split("."):
            if token == "s":
                self._push(word, "s")
            elif token.startswith("z"):
                try:
                    n = int(token[1:])
                except ValueError as exc:
                    raise ElementFormatError(f"bad letter {token!r}") from exc
                if n == 0:
                    raise ElementFormatError("z0 is not a letter")
                self._push(word, n)
            else:
                raise ElementFormatError(f"bad letter {token!r}")
        return tuple(word)

    def format_element(self, g) -> str:
        if not g:
            return "e"
        return ".".join("s" if l == "s" else f"z{l}" for l in g)


def two_transitive_witness(t1: int, t2: int, node_cap: int = 2_000_000) -> tuple:
    """Shortest reduced word q over {z, z^-1, s} with q(t1) = 0 and q(t2) = 1.

    Breadth-first over reduced words, expanding letters in the fixed order
    z < z^-1 < s, so the result is the lexicographically least among the
    shortest.  The search state is the preimage pair (q^{-1}(0), q^{-1}(1));
    appending a letter m maps the pair through m^{-1}.
    """
    if t1 == t2:
        raise ValueError("a 2-transitive witness needs distinct targets")
    goal = (t1, t2)
    if goal == (0, 1):
        return ()

    def swapped(x: int) -> int:
        return 1 if x == 0 else 0 if x == 1 else x

    # state = (a, b, last-letter-class); class 0 none, 1 z, 2 z^-1, 3 s
    start = (0, 1, 0)
    parents: dict = {start: None}
    queue = deque([(start, 0)])
    while queue:
        state, depth = queue.popleft()
        a, b, last = state
        for code in (1, 2, 3):
            if (code == 1 and last == 2) or (code == 2 and last == 1) or (code == 3 and last == 3):
                continue
            if code == 1:
                ns = (a - 1, b - 1, 1)
            elif code == 2:
                ns = (a + 1, b + 1, 2)
            else:
                ns = (swapped(a), swapped(b), 3)
            if ns in parents:
                continue
            parents[ns] = state
            if (ns[0], ns[1]) == goal:
                letters = []
                cur = ns
                while parents[cur] is not None:
                    letters.append(cur[2])
                    cur = parents[cur]
                letters.reverse()
                fp = FreeProductZZ2()
                word: list = []
                for c in letters:
                    fp._push(word, 1 if c == 1 else -1 if c == 2 else "s")
                q = tuple(word)
                assert fp.act(q, t1) == 0 and fp.act(q, t2) == 1
                return q
            if len(parents) > node_cap:
                raise BudgetExceededError(
                    f"2-transitive witness search exceeded {node_cap} nodes",
                    partial_radius=depth,
                )
            queue.append((ns, depth + 1))
    raise RuntimeError("unreachable: the action is 2-transitive")


# ---------------------------------------------------------------------------
# wreath-like extension: Z-payloads on the line, permuted by Z * Z/2
# ---------------------------------------------------------------------------


class Wr(NamedTuple):
    pay: tuple  # sorted ((position, value != 0), ...)
    q: tuple    # reduced word in the acting free product


class WreathOverLine(Group):
    """Finitely-supported Z-payloads on Z, extended by the 2-transitive
    Z * Z/2 action.  (p1,q1)(p2,q2) = (p1 + q1·p2, q1 q2) where the action
    moves the payload entry at position x to q(x).

    Generators: n0 (payload +1 at position 0), z, s.
    """

    registry_key = "zstarz2-wreath"

    def __init__(self) -> None:
        self.acting = FreeProductZZ2()

    @property
    def identity(self):
        return Wr((), ())

    def check_element(self, g) -> None:
        if type(g) is not Wr:
            raise MixedElementError(f"not a zstarz2-wreath element: {g!r}")
        self.acting.check_element(g.q)

    def move_payload(self, q: tuple, pay: tuple) -> tuple:
        if not q or not pay:
            return pay
        act = self.acting.act
        return tuple(sorted((act(q, p), v) for p, v in pay))

    def mul(self, a, b):
        if type(a) is not Wr or type(b) is not Wr:
            raise MixedElementError("zstarz2-wreath mul on foreign elements")
        return Wr(
            merge_assoc(a.pay, self.move_payload(a.q, b.pay)),
            self.acting.mul(a.q, b.q),
        )

    def inv(self, a):
        qi = self.acting.inv(a.q)
        return Wr(neg_assoc(self.move_payload(qi, a.pay)), qi)

    def base_generators(self) -> tuple:
        return (Wr(((0, 1),), ()), Wr((), (1,)), Wr((), ("s",)))

    def payload_at(self, position: int, value: int = 1) -> Wr:
        if value == 0:
            return self.identity
        return Wr(((position, value),), ())

    def emb_q(self, word: tuple) -> Wr:
        self.acting.check_element(word)
        return Wr((), word)

    def parse_element(self, text: str):
        try:
            pay_part, q_part = text.split(";q:")
        except ValueError as exc:
            raise ElementFormatError(f"expected `pay:...;q:...`, got {text!r}") from exc
        if not pay_part.startswith("pay:"):
            raise ElementFormatError(f"expected `pay:...;q:...`, got {text!r}")
        body = pay_part[len("pay:"):]
        entries = []
        if body:
            for chunk in body.split(","):
                try:
                    pos, val = chunk.split("=")
                    entries.append((int(pos), int(val)))
                except ValueError as exc:
                    raise ElementFormatError(f"bad payload entry {chunk!r}") from exc
        return Wr(_normalize_assoc(entries), self.acting.parse_element(q_part))

    def format_element(self, g) -> str:
        body = ",".join(f"{p}={v}" for p, v in g.pay)
        return f"pay:{body};q:{self.acting.format_element(g.q)}"


# ---------------------------------------------------------------------------
# the main extension: rational payload line acted on through prime exponents
# ---------------------------------------------------------------------------


class CElem(NamedTuple):
    w: tuple  # sorted ((index, Fraction value != 0), ...)
    q: Lamp


class Counterexample(Group):
    """W ⋊ Q where W = finitely-supported rational sequences over Z and
    Q = the lamplighter Z wr Z.

    A lamp stack f with walker shift k scales and moves coordinates:

        ((f,k) · w)_m = (prod_j prime_at(j-m)^{f(j)}) * w_{m-k}

    i.e. the shift part translates the payload and each lamp j multiplies
    coordinate m by prime_at(j-m)^{f(j)} — the lamp pattern read relative to
    the coordinate.  Generators: a (shift), b (lamp at 0), c (payload 1 at
    coordinate 0).
    """

    registry_key = "counterexample"

    def __init__(self) -> None:
        self.lampl = Lamplighter()

    @property
    def identity(self):
        return CElem((), Lamp((), 0))

    def check_element(self, g) -> None:
        if type(g) is not CElem or type(g.q) is not Lamp:
            raise MixedElementError(f"not a counterexample element: {g!r}")
        for i, v in g.w:
            if not isinstance(v, Fraction) or v == 0:
                raise MixedElementError(f"bad payload entry ({i}, {v!r})")

    def act_q_on_w(self, q: Lamp, w: tuple) -> tuple:
        f, k = q.lamps, q.shift
        if not w:
            return ()
        if not f:
            return w if k == 0 else tuple((i + k, v) for i, v in w)
        if len(w) == 1:
            i, v = w[0]
            m = i + k
            num = den = 1
            for j, e in f:
                p = prime_at(j - m)
                if e > 0:
                    num *= p ** e
                else:
                    den *= p ** (-e)
            return ((m, Fraction(v.numerator * num, v.denominator * den)),)
        out = []
        for i, v in w:
            m = i + k
            num = den = 1
            for j, e in f:
                p = prime_at(j - m)
                if e > 0:
                    num *= p ** e
                else:
                    den *= p ** (-e)
            out.append((m, Fraction(v.numerator * num, v.denominator * den)))
        return tuple(out)

    def mul(self, a, b):
        if type(a) is not CElem or type(b) is not CElem:
            raise MixedElementError("counterexample.mul on foreign elements")
        return CElem(
            merge_assoc(a.w, self.act_q_on_w(a.q, b.w)),
            self.lampl.mul(a.q, b.q),
        )

    def inv(self, a):
        qi = self.lampl.inv(a.q)
        return CElem(neg_assoc(self.act_q_on_w(qi, a.w)), qi)

    def base_generators(self) -> tuple:
        return (
            CElem((), Lamp((), 1)),          # a: shift the lamplighter walker
            CElem((), Lamp(((0, 1),), 0)),   # b: lamp at 0
            CElem(((0, Fraction(1)),), Lamp((), 0)),  # c: payload 1 at coordinate 0
        )

    def emb_w(self, r) -> CElem:
        """Payload r at coordinate 0 (the multiplicative-base line W)."""
        r = Fraction(r)
        if r == 0:
            return self.identity
        return CElem(((0, r),), Lamp((), 0))

    def emb_t(self, r) -> CElem:
        """The lamp stack encoding a positive rational multiplier at 0.

        Conjugation acts as promised: emb_t(u) · emb_w(x) · emb_t(u)^-1 =
        emb_w(u*x).
        """
        return CElem((), Lamp(base_of_rat(r), 0))

    def parse_element(self, text: str):
        try:
            w_part, q_text = text.split(";q:")
        except ValueError as exc:
            raise ElementFormatError(f"expected `w:...;q:...`, got {text!r}") from exc
        if not w_part.startswith("w:"):
            raise ElementFormatError(f"expected `w:...;q:...`, got {text!r}")
        body = w_part[2:]
        entries: dict[int, Fraction] = {}
        if body:
            for chunk in body.split(","):
                try:
                    idx, val = chunk.split("=")
                    entries[int(idx)] = entries.get(int(idx), Fraction(0)) + Fraction(val)
                except (ValueError, ZeroDivisionError) as exc:
                    raise ElementFormatError(f"bad payload entry {chunk!r}") from exc
        w = tuple((i, v) for i, v in sorted(entries.items()) if v)
        return CElem(w, self.lampl.parse_element(q_text))

    def format_element(self, g) -> str:
        body = ",".join(f"{i}={v}" for i, v in g.w)
        return f"w:{body};q:{self.lampl.format_element(g.q)}"


# ---------------------------------------------------------------------------
# split extensions Z^n ⋊_phi Z
# ---------------------------------------------------------------------------


class Sp(NamedTuple):
    m: tuple  # lattice part, ints
    h: int    # acting part


def _mat_mul(a, b):
    n = len(a)
    return tuple(
        tuple(sum(a[i][k] * b[k][j] for k in range(n)) for j in range(n))
        for i in range(n)
    )


def _mat_identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def _invert_unimodular(mat):
    n = len(mat)
    if n == 1:
        d = mat[0][0]
        if d not in (1, -1):
            raise ValueError("matrix is not invertible over Z")
        return ((d,),)
    if n == 2:
        (a, b), (c, d) = mat
        det = a * d - b * c
        if det not in (1, -1):
            raise ValueError("matrix is not invertible over Z")
        return ((d // det, -b // det), (-c // det, a // det))
    raise ValueError("only ranks 1 and 2 are wired up")


class SplitByZ(Group):
    """Z^n ⋊ Z for an integer matrix invertible over Z.

    (m1,h1)(m2,h2) = (m1 + phi^{h1} m2, h1 + h2); generators are the lattice
    units plus the acting letter t = (0, 1).
    """

    def __init__(self, key: str, matrix) -> None:
        self.registry_key = key
        self.rank = len(matrix)
        self.matrix = tuple(tuple(int(c) for c in row) for row in matrix)
        self.matrix_inv = _invert_unimodular(self.matrix)
        self._pow_cache: dict[int, tuple] = {0: _mat_identity(self.rank)}
        self._identity = Sp((0,) * self.rank, 0)

    @property
    def identity(self):
        return self._identity

    def check_element(self, g) -> None:
        if (
            type(g) is not Sp
            or len(g.m) != self.rank
            or not all(type(c) is int for c in g.m)
            or type(g.h) is not int
        ):
            raise MixedElementError(f"not a {self.registry_key} element: {g!r}")

    def phi_power(self, h: int) -> tuple:
        got = self._pow_cache.get(h)
        if got is None:
            if h > 0:
                got = _mat_mul(self.phi_power(h - 1), self.matrix)
            else:
                got = _mat_mul(self.phi_power(h + 1), self.matrix_inv)
            self._pow_cache[h] = got
        return got

    def apply_phi(self, h: int, vec: tuple) -> tuple:
        if h == 0:
            return vec
        mat = self.phi_power(h)
        return tuple(sum(mat[i][j] * vec[j] for j in range(self.rank)) for i in range(self.rank))

    def mul(self, a, b):
        if type(a) is not Sp or type(b) is not Sp:
            raise MixedElementError("split mul on foreign elements")
        moved = self.apply_phi(a.h, b.m)
        return Sp(tuple(x + y for x, y in zip(a.m, moved)), a.h + b.h)

    def inv(self, a):
        h = -a.h
        moved = self.apply_phi(h, a.m)
        return Sp(tuple(-x for x in moved), h)

    def base_generators(self) -> tuple:
        units = []
        for i in range(self.rank):
            v = [0] * self.rank
            v[i] = 1
            units.append(Sp(tuple(v), 0))
        return (*units, Sp((0,) * self.rank, 1))

    def parse_element(self, text: str):
        try:
            m_part, h_part = text.split(";")
            if not m_part.startswith("m:") or not h_part.startswith("h:"):
                raise ValueError
            coords = tuple(int(c) for c in m_part[2:].split(","))
            h = int(h_part[2:])
        except ValueError as exc:
            raise ElementFormatError(f"expected `m:<ints>;h:<int>`, got {text!r}") from exc
        g = Sp(coords, h)
        self.check_element(g)
        return g

    def format_element(self, g) -> str:
        return "m:" + ",".join(str(c) for c in g.m) + f";h:{g.h}"


# ---------------------------------------------------------------------------
# registry
# ---------------------------------------------------------------------------

_GROUP_CACHE: dict[str, Group] = {}


def get_group(key: str) -> Group:
    """Instantiate (and cache) a group by registry key."""
    got = _GROUP_CACHE.get(key)
    if got is not None:
        return got
    if key.startswith("zn:"):
        try:
            rank = int(key.split(":", 1)[1])
        except ValueError:
            raise KeyError(f"bad rank in group key {key!r}") from None
        group: Group = FreeAbelian(rank)
    elif key == "heisenberg":
        group = Heisenberg()
    elif key == "lamplighter":
        group = Lamplighter()
    elif key == "bs12":
        group = BaumslagSolitar12()
    elif key == "counterexample":
        group = Counterexample()
    elif key == "zstarz2-wreath":
        group = WreathOverLine()
    elif key == "split:zxz":
        group = SplitByZ("split:zxz", [[1]])
    elif key == "split:z2phi":
        group = SplitByZ("split:z2phi", [[2, 1], [1, 1]])
    else:
        raise KeyError(
            f"unknown group {key!r}; try zn:<rank>, heisenberg, lamplighter, "
            f"bs12, counterexample, zstarz2-wreath, split:zxz, split:z2phi"
        )
    _GROUP_CACHE[key] = group
    return group


def group_keys() -> tuple[str, ...]:
    return (
        "zn:<rank>",
        "heisenberg",
        "lamplighter",
        "bs12",
        "counterexample",
        "zstarz2-wreath",
        "split:zxz",
        "split:z2phi",
    )
