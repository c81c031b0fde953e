"""Bitmask helpers for subsets of index ranges.

Subsets of elements/arrows/filters are stored as Python ints; bit i set
means index i belongs to the subset.
"""

from __future__ import annotations

from typing import Iterable, Iterator


def mask_of(indices: Iterable[int]) -> int:
    m = 0
    for i in indices:
        m |= 1 << int(i)  # int() guards against numpy scalars, which overflow
    return m


def iter_bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bit_count(mask: int) -> int:
    return mask.bit_count()


def full_mask(n: int) -> int:
    return (1 << n) - 1


def has_bit(mask: int, i: int) -> bool:
    return bool((mask >> i) & 1)


def is_submask(a: int, b: int) -> bool:
    return a & ~b == 0
