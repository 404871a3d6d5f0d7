"""GF(2) linear algebra on int bit vectors."""

from collections.abc import Sequence


def rank(vectors: Sequence[int]) -> int:
    """Rank over GF(2) via elimination on a pivot table keyed by leading bit."""
    pivots: dict[int, int] = {}
    for vec in vectors:
        while vec:
            lead = vec.bit_length() - 1
            if lead not in pivots:
                pivots[lead] = vec
                break
            vec ^= pivots[lead]
    return len(pivots)


def is_independent(vectors: Sequence[int]) -> bool:
    return rank(vectors) == len(vectors)
