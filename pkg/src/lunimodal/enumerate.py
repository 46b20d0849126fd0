"""Brute-force generators and closed-form counts.

Everything here is deliberately naive: these are the ground-truth oracles the
recurrence engine is checked against.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations, permutations
from math import comb, factorial, prod
from typing import Iterable, Iterator, Sequence

from .perm import (
    Composition, Permutation, is_involution, is_lambda_unimodal,
    lambda_descent_set,
)

__all__ = [
    "all_permutations", "all_involutions", "all_lambda_unimodal",
    "unimodal_from_blocks", "multinomial",
    "count_lambda_unimodal_with_descents", "count_lambda_unimodal",
    "signed_sum_over_family", "in_I", "in_I_j", "in_D_i",
    "lambda_unimodal_involutions", "descent_histogram", "compositions",
]


def compositions(n: int, k: int | None = None) -> Iterator[Composition]:
    """All compositions of n (optionally with exactly k parts), lex order."""
    def rec(rest, slots):
        if rest == 0:
            if slots is None or slots == 0:
                yield ()
            return
        if slots == 0:
            return
        hi = rest if slots is None else rest - (slots - 1)
        for first in range(1, hi + 1):
            for tail in rec(rest - first, None if slots is None else slots - 1):
                yield (first,) + tail

    for parts in rec(n, k):
        yield Composition(parts)


def all_permutations(n: int) -> Iterator[Permutation]:
    for e in permutations(range(1, n + 1)):
        yield Permutation(e)


def _involutions(elems: tuple[int, ...]) -> Iterator[dict[int, int]]:
    if not elems:
        yield {}
        return
    *rest, top = elems
    rest = tuple(rest)
    # top is fixed
    for m in _involutions(rest):
        m[top] = top
        yield m
    # top swapped with some smaller element
    for j in rest:
        others = tuple(e for e in rest if e != j)
        for m in _involutions(others):
            m[top], m[j] = j, top
            yield m


def all_involutions(n: int) -> Iterator[Permutation]:
    if n < 0:
        raise ValueError("n must be nonnegative")
    for m in _involutions(tuple(range(1, n + 1))):
        yield Permutation(m[i] for i in range(1, n + 1))


def unimodal_from_blocks(blocks: Sequence[Iterable[int]],
                         right_of_max: Iterable[int]) -> Permutation:
    """Assemble a lambda-unimodal permutation.

    Each block is laid out increasing up to its maximum, followed by the block
    elements listed in ``right_of_max`` in decreasing order.
    """
    right = set(right_of_max)
    out: list[int] = []
    for block in blocks:
        block = sorted(block)
        top = block[-1]
        if top in right:
            raise ValueError(f"block maximum {top} cannot lie right of itself")
        out.extend(v for v in block if v not in right)
        out.extend(sorted((v for v in block if v in right), reverse=True))
    return Permutation(out)


def _ordered_set_partitions(elems: tuple[int, ...], sizes: Sequence[int]):
    if not sizes:
        yield ()
        return
    for block in combinations(elems, sizes[0]):
        chosen = set(block)
        rest = tuple(e for e in elems if e not in chosen)
        for tail in _ordered_set_partitions(rest, sizes[1:]):
            yield (block,) + tail


def _subsets(items: Sequence[int]):
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def all_lambda_unimodal(c: Composition) -> Iterator[Permutation]:
    """Every c-unimodal permutation exactly once.

    Choose an ordered set partition of [n] with block sizes c, then within each
    block the subset of non-maximal elements that sits after the maximum.
    """
    def rec(blocks, acc):
        if not blocks:
            yield Permutation(acc)
            return
        block, *others = blocks
        below_max = block[:-1]
        for right in _subsets(below_max):
            r = set(right)
            seg = [v for v in block if v not in r] + sorted(right, reverse=True)
            yield from rec(others, acc + seg)

    for blocks in _ordered_set_partitions(tuple(range(1, c.n + 1)), c.parts):
        yield from rec(list(blocks), [])


def multinomial(parts: Sequence[int]) -> int:
    return factorial(sum(parts)) // prod(factorial(p) for p in parts)


def count_lambda_unimodal_with_descents(c: Composition, d: int) -> int:
    if d < 0:
        return 0
    return multinomial(c.parts) * comb(c.n - c.k, d)


def count_lambda_unimodal(c: Composition) -> int:
    return multinomial(c.parts) * 2 ** (c.n - c.k)


def signed_sum_over_family(family: Iterable[Permutation], c: Composition) -> int:
    """Sum of (-1)^des_lambda over the family."""
    total = 0
    for p in family:
        total += -1 if len(lambda_descent_set(p, c)) % 2 else 1
    return total


# Set definitions of the three families counted by the recurrences.

def _first_segment_decreasing(p: Permutation, c: Composition) -> bool:
    e = p.entries[:c.parts[0]]
    return all(a > b for a, b in zip(e, e[1:]))


def in_I(p: Permutation, c: Composition) -> bool:
    return is_involution(p) and is_lambda_unimodal(p, c)


def in_I_j(p: Permutation, c: Composition, j: int) -> bool:
    """pi in I^c with (pi_1 <= s_j and first segment decreasing) or pi_1 > s_j."""
    if not 1 <= j <= c.k:
        raise ValueError(f"index {j} out of range 1..{c.k}")
    if not in_I(p, c):
        return False
    s = c.prefix_sum(j)
    return p[1] > s or _first_segment_decreasing(p, c)


def in_D_i(p: Permutation, c: Composition, i: int) -> bool:
    """pi in I^c with pi_1 <= s_i and first segment decreasing."""
    if not 1 <= i <= c.k:
        raise ValueError(f"index {i} out of range 1..{c.k}")
    if not in_I(p, c):
        return False
    return p[1] <= c.prefix_sum(i) and _first_segment_decreasing(p, c)


def lambda_unimodal_involutions(c: Composition) -> list[Permutation]:
    """I^c by filtering every involution of S_n."""
    return [p for p in all_involutions(c.n) if is_lambda_unimodal(p, c)]


def descent_histogram(family: Iterable[Permutation], c: Composition) -> list[int]:
    """coeffs[d] = number of family members with d lambda-descents.

    Trailing zeros are stripped; an empty family gives [].
    """
    counts = Counter(len(lambda_descent_set(p, c)) for p in family)
    if not counts:
        return []
    return [counts.get(d, 0) for d in range(max(counts) + 1)]
