import random
from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from cosetpack import (
    ElementFormatError,
    MixedElementError,
    base_of_rat,
    get_group,
    position_of_prime,
    prime_at,
    rat_of_base,
    two_transitive_witness,
)
from cosetpack.zoo import (
    Bs,
    CElem,
    Heis,
    Lamp,
    Sp,
    Wr,
    factorize,
    lamplighter_word_length,
    shuffle_length,
)
from helpers import (
    naive_ball,
    rand_bs,
    rand_heis,
    rand_lamp,
    rand_split,
    rand_zn,
    random_word,
)

GROUP_KEYS = [
    "zn:1",
    "zn:2",
    "zn:3",
    "heisenberg",
    "lamplighter",
    "bs12",
    "counterexample",
    "zstarz2-wreath",
    "split:zxz",
    "split:z2phi",
]


def sample_element(group, rng):
    """Half generic short words, half group-specific wide-coordinate draws."""
    key = group.registry_key
    if rng.random() < 0.5:
        if key.startswith("zn:"):
            return rand_zn(rng, group.rank)
        if key == "heisenberg":
            return rand_heis(rng)
        if key == "lamplighter":
            return rand_lamp(rng)
        if key == "bs12":
            return rand_bs(rng)
        if key.startswith("split:"):
            return rand_split(group, rng)
    return random_word(group, rng)


@pytest.mark.parametrize("key", GROUP_KEYS)
def test_group_axioms(key):
    group = get_group(key)
    ident = group.identity
    rng = random.Random(f"axioms:{key}")
    for _ in range(150):
        a = sample_element(group, rng)
        b = sample_element(group, rng)
        c = sample_element(group, rng)
        assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
        assert group.mul(a, ident) == a
        assert group.mul(ident, a) == a
        assert group.mul(a, group.inv(a)) == ident
        assert group.mul(group.inv(a), a) == ident
        assert group.inv(group.inv(a)) == a
        assert group.inv(group.mul(a, b)) == group.mul(group.inv(b), group.inv(a))
        group.check_element(group.mul(a, b))  # products stay in normal form


@pytest.mark.parametrize("key", GROUP_KEYS)
def test_element_text_roundtrip(key):
    group = get_group(key)
    rng = random.Random(f"codec:{key}")
    for _ in range(60):
        g = sample_element(group, rng)
        assert group.parse_element(group.format_element(g)) == g


@pytest.mark.parametrize(
    "key,literal",
    [
        ("zn:2", "1,x"),
        ("zn:2", "1"),
        ("heisenberg", "1,2"),
        ("lamplighter", "lamps:0=1"),
        ("lamplighter", "lamps:0=;shift:1"),
        ("bs12", "garbage"),
        ("counterexample", "w:0=1"),
        ("zstarz2-wreath", "pay:0=1;q:z0"),
    ],
)
def test_malformed_literals_raise(key, literal):
    with pytest.raises(ElementFormatError):
        get_group(key).parse_element(literal)


def test_bs12_rejects_non_dyadic_translation():
    with pytest.raises(MixedElementError):
        get_group("bs12").parse_element("k:0;q:1/3")


def test_mixed_elements_rejected():
    z2, z3 = get_group("zn:2"), get_group("zn:3")
    with pytest.raises(MixedElementError):
        z2.mul((1, 0), (1, 0, 0))
    with pytest.raises(MixedElementError):
        get_group("heisenberg").mul(Heis(0, 0, 0), (0, 0))
    with pytest.raises(MixedElementError):
        z3.word_length((1, 0))


def test_get_group_returns_cached_instances():
    assert get_group("heisenberg") is get_group("heisenberg")
    with pytest.raises(KeyError):
        get_group("no-such-group")


# --- individual group laws --------------------------------------------------


def test_heisenberg_commutator_is_central_generator():
    h = get_group("heisenberg")
    x, y = Heis(1, 0, 0), Heis(0, 1, 0)
    comm = h.mul(h.mul(h.mul(x, y), h.inv(x)), h.inv(y))
    assert comm == Heis(0, 0, 1)


@pytest.mark.parametrize("radius", [3, 4])
def test_heisenberg_shuffle_length_matches_bfs(radius):
    h = get_group("heisenberg")
    ball = h.ball(radius)
    for g, n in ball.elements.items():
        s = shuffle_length(*g)
        if s is not None:
            assert s == n
        else:
            assert n > abs(g.x) + abs(g.y)
    # and nothing with a short shuffle form is missing from the ball
    for x in range(-radius, radius + 1):
        for y in range(-(radius - abs(x)), radius - abs(x) + 1):
            for z in range(min(0, x * y), max(0, x * y) + 1):
                assert Heis(x, y, z) in ball


def test_lamplighter_ball_one_has_five_elements():
    assert len(get_group("lamplighter").ball(1)) == 5


@pytest.mark.parametrize("radius", [2, 3, 4, 5])
def test_lamplighter_length_formula_matches_bfs(radius):
    lam = get_group("lamplighter")
    oracle = naive_ball(lam, radius)
    for g, n in oracle.items():
        assert lamplighter_word_length(g) == n
    assert dict(lam.ball(radius).elements) == oracle


def test_lamplighter_distant_lamp_costs_travel_and_toggle():
    assert lamplighter_word_length(Lamp(((5, 1),), 0)) == 11  # out, light, back
    assert lamplighter_word_length(Lamp(((5, 1),), 5)) == 6   # out, light, stay
    assert lamplighter_word_length(Lamp(((-2, 1), (3, 2)), 0)) == 13


def test_bs12_conjugation_relation():
    bs = get_group("bs12")
    a, b = bs.base_generators()
    assert bs.mul(bs.mul(a, b), bs.inv(a)) == bs.mul(b, b)


@pytest.mark.parametrize("k", [1, 2, 3])
def test_bs12_iterated_relation_doubles_exponent(k):
    bs = get_group("bs12")
    a, b = bs.base_generators()
    ak = Bs(k, Fraction(0))
    lhs = bs.mul(bs.mul(ak, b), bs.inv(ak))
    expect = bs.identity
    for _ in range(2 ** k):
        expect = bs.mul(expect, b)
    assert lhs == expect == Bs(0, Fraction(2 ** k))


@pytest.mark.parametrize("radius", [1, 2, 3, 4])
def test_bs12_ball_matches_naive_bfs(radius):
    bs = get_group("bs12")
    assert dict(bs.ball(radius).elements) == naive_ball(bs, radius)


def test_split_z2phi_twist():
    sp = get_group("split:z2phi")
    t = Sp((0, 0), 1)
    m = Sp((1, 0), 0)
    # t (1,0) t^-1 = phi(1,0) = first matrix column
    assert sp.mul(sp.mul(t, m), sp.inv(t)) == Sp((2, 1), 0)
    assert sp.phi_power(-1) == sp.matrix_inv
    assert sp.apply_phi(-3, sp.apply_phi(3, (4, -7))) == (4, -7)


def test_split_zxz_is_direct_product():
    sp = get_group("split:zxz")
    rng = random.Random("zxz")
    for _ in range(50):
        a, b = rand_split(sp, rng), rand_split(sp, rng)
        assert sp.mul(a, b) == sp.mul(b, a)


# --- zigzag primes and the rational base codec -------------------------------


def test_prime_zigzag_layout():
    assert [prime_at(k) for k in (0, 1, -1, 2, -2, 3, -3)] == [2, 3, 5, 7, 11, 13, 17]
    for k in range(-25, 26):
        assert position_of_prime(prime_at(k)) == k
    with pytest.raises(ValueError):
        position_of_prime(4)


def test_base_codec_frozen_example():
    assert base_of_rat(Fraction(50, 21)) == ((-1, 2), (0, 1), (1, -1), (2, -1))
    assert rat_of_base(((-1, 2), (0, 1), (1, -1), (2, -1))) == Fraction(50, 21)


def test_base_codec_edge_cases():
    assert base_of_rat(Fraction(1)) == ()
    assert rat_of_base(()) == 1
    assert rat_of_base(((0, 2),)) == 4
    for bad in (0, Fraction(-2), Fraction(-1, 3)):
        with pytest.raises(ValueError):
            base_of_rat(bad)


@given(st.integers(1, 100000), st.integers(1, 100000))
def test_base_codec_roundtrip(num, den):
    r = Fraction(num, den)
    entries = base_of_rat(r)
    assert rat_of_base(entries) == r
    assert all(e != 0 for _, e in entries)
    assert entries == tuple(sorted(entries))


def test_base_codec_handles_large_and_unreduced_input():
    from cosetpack.zoo import base_of_int_ratio

    assert base_of_int_ratio(12, 18) == base_of_rat(Fraction(2, 3))
    big = 1_299_709  # prime beyond the sieve limit
    assert rat_of_base(base_of_rat(Fraction(big, 2))) == Fraction(big, 2)
    assert base_of_int_ratio(big * 4, big * 6) == base_of_rat(Fraction(2, 3))


@given(st.integers(2, 5_000_000))
def test_factorize_roundtrip(n):
    factors = factorize(n)
    prod = 1
    for p, e in factors.items():
        assert e > 0
        for q in factors:
            assert p == q or p % q != 0
        prod *= p ** e
    assert prod == n


# --- the 2-transitive action and both wreath-like extensions ----------------


def test_two_transitive_witness_frozen_values():
    assert two_transitive_witness(0, 1) == ()
    assert two_transitive_witness(1, 0) == ("s",)
    assert two_transitive_witness(0, 5) == (-1, "s", -1, "s", -1, "s", -1, "s")


def test_two_transitive_witness_moves_targets_and_is_minimal():
    fp = get_group("zstarz2-wreath").acting
    rng = random.Random("witness")
    pairs = {(t1, t2) for t1 in range(-4, 5) for t2 in range(-4, 5) if t1 != t2}
    for t1, t2 in sorted(pairs):
        q = two_transitive_witness(t1, t2)
        fp.check_element(q)
        assert fp.act(q, t1) == 0 and fp.act(q, t2) == 1
        # minimality: no strictly shorter word does the same job
        shorter = naive_ball(fp, len(q) - 1) if q else {}
        assert not any(
            fp.act(w, t1) == 0 and fp.act(w, t2) == 1 for w in shorter
        ), (t1, t2)
    with pytest.raises(ValueError):
        two_transitive_witness(3, 3)


def test_wreath_action_moves_payload_positions():
    wr = get_group("zstarz2-wreath")
    fp = wr.acting
    rng = random.Random("wr-action")
    for _ in range(200):
        q = random_word(fp, rng)
        t = rng.randint(-5, 5)
        v = rng.choice([-2, -1, 1, 2])
        moved = wr.conjugate(wr.payload_at(t, v), wr.emb_q(q))
        assert moved == wr.payload_at(fp.act(q, t), v)


def test_wreath_action_is_a_homomorphism_on_payloads():
    wr = get_group("zstarz2-wreath")
    fp = wr.acting
    rng = random.Random("wr-hom")
    for _ in range(200):
        q1, q2 = random_word(fp, rng), random_word(fp, rng)
        pay = wr.mul(
            wr.payload_at(rng.randint(-4, 4), rng.choice([-2, 1])),
            wr.payload_at(rng.randint(-4, 4), rng.choice([1, 3])),
        ).pay
        lhs = wr.move_payload(fp.mul(q1, q2), pay)
        rhs = wr.move_payload(q1, wr.move_payload(q2, pay))
        assert lhs == rhs


def test_counterexample_ball_one_has_seven_elements():
    assert len(get_group("counterexample").ball(1)) == 7


def rand_positive_rat(rng):
    return Fraction(rng.randint(1, 60), rng.randint(1, 60))


def rand_rat(rng):
    r = Fraction(rng.randint(1, 40), rng.randint(1, 40))
    return -r if rng.random() < 0.4 else r


def test_conjugation_by_lamp_stack_scales_payload():
    ce = get_group("counterexample")
    rng = random.Random("scale")
    for _ in range(200):
        u = rand_positive_rat(rng)
        x = rand_rat(rng)
        got = ce.mul(ce.mul(ce.emb_t(u), ce.emb_w(x)), ce.inv(ce.emb_t(u)))
        assert got == ce.emb_w(u * x)


def test_counterexample_action_frozen_example():
    ce = get_group("counterexample")
    h1 = ce.emb_t(6)
    assert h1.q.lamps == ((0, 1), (1, 1))  # 6 = 2^1 * 3^1
    d = ce.mul(ce.inv(ce.emb_w(Fraction(1, 3))), ce.emb_w(Fraction(1, 2)))
    assert d == ce.emb_w(Fraction(1, 6))
    value = ce.mul(ce.mul(h1, d), ce.emb_t(Fraction(1, 6)))
    assert value == ce.base_generators()[2]  # the payload generator itself
    assert ce.word_length(value) == 1


def rand_lamp_q(rng):
    positions = rng.sample(range(-3, 4), rng.randint(0, 3))
    lamps = tuple(sorted((p, rng.choice([-2, -1, 1, 2])) for p in positions))
    return Lamp(lamps, rng.randint(-3, 3))


def rand_payload(rng):
    idxs = rng.sample(range(-3, 4), rng.randint(0, 3))
    return tuple(sorted((i, rand_rat(rng)) for i in idxs))


def test_act_q_on_w_is_a_group_action():
    ce = get_group("counterexample")
    lam = ce.lampl
    rng = random.Random("action")
    for _ in range(250):
        q1, q2 = rand_lamp_q(rng), rand_lamp_q(rng)
        w = rand_payload(rng)
        assert ce.act_q_on_w(Lamp((), 0), w) == w
        assert ce.act_q_on_w(lam.mul(q1, q2), w) == ce.act_q_on_w(
            q1, ce.act_q_on_w(q2, w)
        )


def test_act_q_on_w_is_additive():
    from cosetpack.zoo import merge_assoc

    ce = get_group("counterexample")
    rng = random.Random("additive")
    for _ in range(250):
        q = rand_lamp_q(rng)
        w1, w2 = rand_payload(rng), rand_payload(rng)
        assert ce.act_q_on_w(q, merge_assoc(w1, w2)) == merge_assoc(
            ce.act_q_on_w(q, w1), ce.act_q_on_w(q, w2)
        )


def test_act_q_on_w_matches_definition_pointwise():
    ce = get_group("counterexample")
    rng = random.Random("pointwise")
    for _ in range(250):
        q = rand_lamp_q(rng)
        w = rand_payload(rng)
        got = dict(ce.act_q_on_w(q, w))
        for i, v in w:
            m = i + q.shift
            scale = Fraction(1)
            for j, e in q.lamps:
                scale *= Fraction(prime_at(j - m)) ** e
            assert got.pop(m) == scale * v
        assert not got
