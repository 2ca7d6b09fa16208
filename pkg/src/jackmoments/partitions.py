"""Integer partitions as plain tuples of positive ints, largest part first."""
from __future__ import annotations

from functools import lru_cache
from itertools import accumulate, zip_longest
from typing import Iterable, Sequence

Partition = tuple[int, ...]


def make_partition(parts: Iterable[int]) -> Partition:
    """Validate and normalize; trailing zeros are dropped."""
    p = tuple(int(x) for x in parts)
    while p and p[-1] == 0:
        p = p[:-1]
    if any(x <= 0 for x in p) or any(a < b for a, b in zip(p, p[1:])):
        raise ValueError(f"not a partition: {p}")
    return p


def parse_partition(text: str) -> Partition:
    """Parse the CLI form ``"3,1"``; an empty string is the empty partition."""
    text = text.strip()
    if not text:
        return ()
    return make_partition(int(t) for t in text.split(","))


def weight(p: Sequence[int]) -> int:
    return sum(p)


@lru_cache(maxsize=None)
def _partitions(k: int, max_parts: int, max_part: int) -> tuple[Partition, ...]:
    if k == 0:
        return ((),)
    if max_parts == 0:
        return ()
    out: list[Partition] = []
    for head in range(min(k, max_part), 0, -1):
        for tail in _partitions(k - head, max_parts - 1, head):
            out.append((head,) + tail)
    return tuple(out)


def partitions_of(k: int, max_parts: int | None = None) -> list[Partition]:
    """All partitions of ``k`` with at most ``max_parts`` parts.

    The order is descending lexicographic, e.g. ``[(4,), (3, 1), (2, 2)]``
    for ``k=4, max_parts=2``; downstream tables rely on it being stable.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if max_parts is None:
        max_parts = k
    if max_parts < 0:
        raise ValueError("max_parts must be non-negative")
    return list(_partitions(k, min(max_parts, k), k))


def conjugate(p: Sequence[int]) -> Partition:
    if not p:
        return ()
    return tuple(sum(1 for x in p if x > i) for i in range(p[0]))


def dominance_leq(a: Sequence[int], b: Sequence[int]) -> bool:
    """True iff ``a`` is dominated by ``b`` (prefix sums of a never exceed b's)."""
    if sum(a) != sum(b):
        raise ValueError(f"dominance needs equal weights, got {sum(a)} and {sum(b)}")
    pa = accumulate(x for x, _ in zip_longest(a, b, fillvalue=0))
    pb = accumulate(y for _, y in zip_longest(a, b, fillvalue=0))
    return all(x <= y for x, y in zip(pa, pb))


def format_partition(p: Sequence[int]) -> str:
    return ",".join(str(x) for x in p)
