import pytest
from hypothesis import given, strategies as st

from cosetpack import (
    BfsCache,
    BudgetExceededError,
    GeneratingSet,
    UNKNOWN,
    ball_with_gens,
    get_group,
    word_length_with_gens,
)
from helpers import naive_ball, iddfs_length

Z2 = get_group("zn:2")
HEIS = get_group("heisenberg")


def test_unknown_singleton_has_no_truth_value():
    with pytest.raises(TypeError):
        bool(UNKNOWN)
    assert repr(UNKNOWN) == "UNKNOWN"


def test_symmetrized_adds_inverses_once():
    gs = GeneratingSet.symmetrized(Z2, [(1, 0), (0, 1), (-1, 0)])
    assert gs.elements == ((1, 0), (-1, 0), (0, 1), (0, -1))
    assert (0, -1) in gs and (2, 2) not in gs


def test_symmetrized_rejects_identity():
    with pytest.raises(ValueError):
        GeneratingSet.symmetrized(Z2, [(0, 0)])


@pytest.mark.parametrize("radius", [0, 1, 2, 3, 4])
def test_z2_ball_matches_naive_bfs(radius):
    ball = Z2.ball(radius)
    oracle = naive_ball(Z2, radius)
    assert dict(ball.elements) == oracle
    # |B_r| in Z^2 under the diamond metric: 2r^2 + 2r + 1
    assert len(ball) == 2 * radius * radius + 2 * radius + 1


def test_z2_ball_two_has_thirteen_elements():
    assert len(Z2.ball(2)) == 13


@pytest.mark.parametrize("radius", [0, 1, 2, 3])
def test_heisenberg_ball_matches_naive_bfs(radius):
    assert dict(HEIS.ball(radius).elements) == naive_ball(HEIS, radius)


def test_heisenberg_ball_two_has_seventeen_elements():
    assert len(HEIS.ball(2)) == 17


def test_layers_partition_the_ball():
    ball = HEIS.ball(3)
    seen = {}
    for r in range(4):
        for g in HEIS.layer(r):
            assert g not in seen
            seen[g] = r
    assert seen == dict(ball.elements)


@given(st.integers(-7, 7), st.integers(-7, 7))
def test_z2_word_length_is_manhattan(x, y):
    assert Z2.word_length((x, y)) == abs(x) + abs(y)


@pytest.mark.parametrize("g", [(0, 0, 0), (1, 0, 0), (1, 1, 0), (0, 0, 1),
                               (1, 1, 1), (2, 2, 4), (0, 0, 2), (-1, 2, -1)])
def test_heisenberg_word_length_matches_iddfs(g):
    from cosetpack.zoo import Heis

    elem = Heis(*g)
    expect = iddfs_length(HEIS, elem, cutoff=6)
    assert HEIS.word_length(elem, cutoff=6) == expect


def test_word_length_cutoff_returns_unknown():
    # A fresh cache: the shared one may already know the answer, and a
    # cutoff bounds *new* work, never forgets what is memoized.
    fresh = BfsCache(Z2, Z2.gens())
    assert fresh.length((5, 5), cutoff=3) is UNKNOWN
    assert fresh.length((5, 5), cutoff=10) == 10
    assert fresh.length((5, 5), cutoff=3) == 10  # memoized now


def test_node_cap_raises_with_partial_radius():
    fresh = BfsCache(Z2, Z2.gens())
    with pytest.raises(BudgetExceededError) as info:
        fresh.ball(20, node_cap=20)
    # radius 2 holds 13 elements <= 20, radius 3 would need 25
    assert info.value.partial_radius == 2


def test_exhaustion_of_a_finite_generated_subgroup():
    # Only the identity is generated by an empty set.
    cache = BfsCache(Z2, GeneratingSet(()))
    assert cache.exhausted
    assert cache.length((1, 0)) is UNKNOWN
    assert cache.length((0, 0)) == 0


def test_ball_with_custom_generators_restricts_to_a_line():
    for r in range(4):
        ball = ball_with_gens(Z2, [(1, 0)], r)
        assert sorted(ball) == [(t, 0) for t in range(-r, r + 1)]
    assert word_length_with_gens(Z2, [(1, 0)], (3, 0)) == 3
    assert word_length_with_gens(Z2, [(1, 0)], (0, 1), cutoff=5) is UNKNOWN


def test_conjugate():
    from cosetpack.zoo import Heis

    x, y = Heis(1, 0, 0), Heis(0, 1, 0)
    assert HEIS.conjugate(y, x) == HEIS.mul(HEIS.mul(x, y), HEIS.inv(x))


def test_ball_is_cached_and_stable():
    b1 = Z2.ball(3)
    b2 = Z2.ball(3)
    assert b1 is b2
    assert list(b1)[0] == (0, 0)
