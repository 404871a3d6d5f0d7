"""Element sets stored as int bitmasks over dense ground indices."""

from collections.abc import Iterable, Iterator


def popcount(mask: int) -> int:
    return mask.bit_count()


def from_indices(indices: Iterable[int]) -> int:
    mask = 0
    for i in indices:
        mask |= 1 << i
    return mask


def indices(mask: int) -> Iterator[int]:
    """Iterate over the set bits of `mask` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def key(mask: int) -> tuple[int, ...]:
    """Sort key for lexicographic order on element sets."""
    return tuple(indices(mask))


def lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


def is_subset(a: int, b: int) -> bool:
    return a & ~b == 0


def full(n: int) -> int:
    return (1 << n) - 1


def by_size(n: int) -> list[int]:
    """Nonempty subsets of an n-set ordered by size, then lexicographically."""
    return sorted(range(1, 1 << n), key=lambda m: (popcount(m), key(m)))
