import itertools

import pytest

from jackmoments.partitions import (
    conjugate,
    dominance_leq,
    make_partition,
    parse_partition,
    partitions_of,
)


def brute_force_count(k: int) -> int:
    """p(k) by backtracking over non-increasing part choices."""

    def go(rest, cap):
        if rest == 0:
            return 1
        return sum(go(rest - part, part) for part in range(min(rest, cap), 0, -1))

    return go(k, k)


def test_examples():
    assert partitions_of(4, 2) == [(4,), (3, 1), (2, 2)]
    assert partitions_of(0, 3) == [()]
    assert partitions_of(0, 0) == [()]
    assert len(partitions_of(8, 8)) == 22


@pytest.mark.parametrize("k", range(21))
def test_count_matches_brute_force(k):
    assert len(partitions_of(k, k)) == brute_force_count(k)


@pytest.mark.parametrize("k,max_parts", [(6, 2), (7, 3), (10, 4), (5, 0)])
def test_weight_length_and_order(k, max_parts):
    parts = partitions_of(k, max_parts)
    assert all(sum(p) == k and len(p) <= max_parts for p in parts)
    assert all(all(a >= b > 0 for a, b in zip(p, p[1:])) for p in parts)
    assert parts == sorted(parts, reverse=True)
    assert len(set(parts)) == len(parts)


def test_conjugate():
    assert conjugate((3, 1)) == (2, 1, 1)
    assert conjugate(()) == ()
    for k in range(11):
        for p in partitions_of(k):
            assert conjugate(conjugate(p)) == p
            assert sum(conjugate(p)) == k


def test_dominance_examples():
    assert dominance_leq((2, 2), (3, 1))
    assert not dominance_leq((3, 1), (2, 2))
    assert dominance_leq((3, 1), (3, 1))
    with pytest.raises(ValueError):
        dominance_leq((2,), (1, 1, 1))


@pytest.mark.parametrize("k", range(1, 11))
def test_dominance_is_partial_order(k):
    parts = partitions_of(k)
    leq = {(a, b): dominance_leq(a, b) for a in parts for b in parts}
    for a in parts:
        assert leq[a, a]
    for a, b in itertools.product(parts, repeat=2):
        if a != b:
            assert not (leq[a, b] and leq[b, a])
    for a, b, c in itertools.product(parts, repeat=3):
        if leq[a, b] and leq[b, c]:
            assert leq[a, c]


def test_dominance_reverses_under_conjugation():
    parts = partitions_of(7)
    for a, b in itertools.product(parts, repeat=2):
        assert dominance_leq(a, b) == dominance_leq(conjugate(b), conjugate(a))


def test_parse_and_validate():
    assert parse_partition("3,1") == (3, 1)
    assert parse_partition("") == ()
    assert make_partition([2, 1, 0, 0]) == (2, 1)
    with pytest.raises(ValueError):
        make_partition([1, 2])
    with pytest.raises(ValueError):
        parse_partition("2,-1")
