"""Vertex sets as Python integers.

Bit ``v`` of the integer is set iff vertex ``v`` is a member. Integers are
immutable, hashable and arbitrary width, which is exactly what the solver
needs for its survivor sets.
"""
from __future__ import annotations

from typing import Iterable, Iterator

EMPTY = 0


def from_iter(vertices: Iterable[int]) -> int:
    mask = 0
    for v in vertices:
        mask |= 1 << v
    return mask


def full(n: int) -> int:
    return (1 << n) - 1


def members(mask: int) -> Iterator[int]:
    """Yield member vertices in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def to_list(mask: int) -> list[int]:
    return list(members(mask))


def size(mask: int) -> int:
    return mask.bit_count()


def contains(mask: int, v: int) -> bool:
    return (mask >> v) & 1 == 1


def lowest(mask: int) -> int:
    if not mask:
        raise ValueError("empty vertex set has no lowest member")
    return (mask & -mask).bit_length() - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def to_bytes(mask: int, n: int) -> bytes:
    return mask.to_bytes((n + 7) // 8, "little")


def from_bytes(data: bytes) -> int:
    return int.from_bytes(data, "little")
