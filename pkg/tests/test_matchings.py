import itertools
import math

import pytest
from hypothesis import given, strategies as st

from oracles import loops
from wordint.matchings import (Matching, MatchingCapError, compose, coset_type, cycle_type,
                               enumerate_matchings, identity_matching, loop_lengths, partitions, pi,
                               permutation_sign, rho, sigma, sigma_sign)


def double_factorial(k):
    return math.prod(range(2 * k - 1, 0, -2))


@pytest.mark.parametrize("k", range(0, 6))
def test_counts(k):
    ms = enumerate_matchings(k)
    assert len(ms) == double_factorial(k)
    assert len(set(ms)) == len(ms)
    assert list(ms) == sorted(ms, key=lambda m: m.pairs)


def test_small_enumerations():
    assert enumerate_matchings(0) == (Matching(()),)
    assert [m.pairs for m in enumerate_matchings(2)] == [
        ((1, 2), (3, 4)), ((1, 3), (2, 4)), ((1, 4), (2, 3))]
    assert len(enumerate_matchings(4)) == 105


def test_cap():
    with pytest.raises(MatchingCapError):
        enumerate_matchings(6)
    assert len(enumerate_matchings(6, cap=6)) == 10395


def test_canonical_form():
    assert Matching(((4, 1), (3, 2))) == Matching(((2, 3), (1, 4)))
    with pytest.raises(ValueError):
        Matching(((1, 2), (2, 3)))


def test_avatars():
    m = Matching(((1, 3), (2, 4)))
    assert pi(m) == (3, 4, 1, 2)
    assert sigma(m) == (1, 3, 2, 4)
    assert sigma_sign(m) == -1
    assert sigma_sign(identity_matching(3)) == 1
    assert Matching.from_partner(m.partner) == m


def matching_strategy(k):
    return st.sampled_from(enumerate_matchings(k))


pairs_of_matchings = st.integers(1, 4).flatmap(
    lambda k: st.tuples(matching_strategy(k), matching_strategy(k), matching_strategy(k)))


@given(pairs_of_matchings)
def test_rho_is_a_metric(triple):
    a, b, c = triple
    assert rho(a, a) == 0
    assert rho(a, b) == rho(b, a)
    assert (rho(a, b) == 0) == (a == b)
    assert rho(a, c) <= rho(a, b) + rho(b, c)


@given(pairs_of_matchings)
def test_coset_type_two_ways(triple):
    a, b, _ = triple
    ct = coset_type(a, b)
    assert sum(ct) == a.k
    assert ct == loop_lengths(a.partner, b.partner)
    assert rho(a, b) == a.k - len(ct)
    assert len(ct) == loops(a.partner, b.partner)


def test_rho_from_transpositions():
    # rho is half the minimal number of transpositions in pi_a pi_b, counted by brute force.
    k = 3
    size = 2 * k
    transpositions = [(i, j) for i in range(1, size + 1) for j in range(i + 1, size + 1)]
    identity = tuple(range(1, size + 1))
    distance = {identity: 0}
    frontier = [identity]
    while frontier:
        nxt = []
        for p in frontier:
            for i, j in transpositions:
                q = list(p)
                q[i - 1], q[j - 1] = q[j - 1], q[i - 1]
                q = tuple(q)
                if q not in distance:
                    distance[q] = distance[p] + 1
                    nxt.append(q)
        frontier = nxt
    for a, b in itertools.product(enumerate_matchings(k), repeat=2):
        assert 2 * rho(a, b) == distance[compose(pi(a), pi(b))]


def test_permutation_helpers():
    assert cycle_type((2, 3, 1, 4)) == [3, 1]
    assert permutation_sign((2, 1, 3)) == -1
    assert permutation_sign((0, 1, 2)) == 1
    assert compose((2, 1, 3), (1, 3, 2)) == (2, 3, 1)


def test_partitions():
    assert partitions(4) == [(4,), (3, 1), (2, 2), (2, 1, 1), (1, 1, 1, 1)]
    assert [len(partitions(k)) for k in range(1, 7)] == [1, 2, 3, 5, 7, 11]
