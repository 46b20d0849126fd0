"""Permutations, compositions, and the descent/unimodality predicates.

Permutations are stored in one-line notation with 1-based values, and every
reported position is 1-based as well.

>>> p = Permutation.parse("129654873")
>>> sorted(descent_set(p))
[3, 4, 5, 7, 8]
>>> c = Composition.parse("5,4")
>>> sorted(lambda_descent_set(p, c)), is_lambda_unimodal(p, c)
([3, 4, 7, 8], True)
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Sequence

__all__ = [
    "Permutation", "Composition",
    "descent_set", "lambda_descent_set", "is_lambda_unimodal",
    "is_involution", "direct_sum", "is_unimodal",
]


@dataclass(frozen=True)
class Permutation:
    entries: tuple[int, ...]

    def __init__(self, entries: Iterable[int] = ()):
        entries = tuple(int(e) for e in entries)
        if sorted(entries) != list(range(1, len(entries) + 1)):
            raise ValueError(f"not a permutation of 1..{len(entries)}: {entries}")
        object.__setattr__(self, "entries", entries)

    @property
    def n(self) -> int:
        return len(self.entries)

    def __len__(self) -> int:
        return len(self.entries)

    def __getitem__(self, i: int) -> int:
        """1-based lookup: ``p[i]`` is pi(i)."""
        if not 1 <= i <= len(self.entries):
            raise IndexError(i)
        return self.entries[i - 1]

    def __iter__(self):
        return iter(self.entries)

    def inverse(self) -> Permutation:
        inv = [0] * self.n
        for pos, val in enumerate(self.entries, 1):
            inv[val - 1] = pos
        return Permutation(inv)

    def compose(self, other: Permutation) -> Permutation:
        """(self o other)(i) = self(other(i))."""
        if self.n != other.n:
            raise ValueError("length mismatch")
        return Permutation(self.entries[v - 1] for v in other.entries)

    @classmethod
    def identity(cls, n: int) -> Permutation:
        return cls(range(1, n + 1))

    @classmethod
    def parse(cls, text: str) -> Permutation:
        """Digit string ("312") for n <= 9, otherwise comma separated."""
        text = "".join(text.split())
        if not text:
            return cls(())
        if "," in text:
            return cls(int(tok) for tok in text.split(","))
        return cls(int(ch) for ch in text)

    def __str__(self) -> str:
        if self.n <= 9:
            return "".join(map(str, self.entries))
        return ",".join(map(str, self.entries))


@dataclass(frozen=True)
class Composition:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        object.__setattr__(self, "parts", parts)

    @property
    def n(self) -> int:
        return sum(self.parts)

    @property
    def k(self) -> int:
        return len(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def __getitem__(self, i):
        return self.parts[i]

    def prefix_sum(self, i: int) -> int:
        """lambda_1 + ... + lambda_i; ``prefix_sum(0) == 0``."""
        if not 0 <= i <= self.k:
            raise IndexError(i)
        return sum(self.parts[:i])

    def prefix_sums(self) -> list[int]:
        return list(accumulate(self.parts))

    def segments(self) -> list[range]:
        """0-based index ranges of the segments."""
        out, start = [], 0
        for part in self.parts:
            out.append(range(start, start + part))
            start += part
        return out

    @classmethod
    def parse(cls, text: str) -> Composition:
        text = "".join(text.split())
        if not text:
            return cls(())
        try:
            parts = [int(tok) for tok in text.split(",")]
        except ValueError:
            raise ValueError(f"malformed composition: {text!r}") from None
        return cls(parts)

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def _check_lengths(p: Permutation, c: Composition) -> None:
    if p.n != c.n:
        raise ValueError(f"permutation of length {p.n} vs composition of {c.n}")


def descent_set(p: Permutation) -> set[int]:
    e = p.entries
    return {i for i in range(1, len(e)) if e[i - 1] > e[i]}


def lambda_descent_set(p: Permutation, c: Composition) -> set[int]:
    _check_lengths(p, c)
    return descent_set(p) - set(c.prefix_sums()[:-1])


def is_unimodal(seq: Sequence[int]) -> bool:
    """Increasing then decreasing; either phase may be empty."""
    i, m = 1, len(seq)
    while i < m and seq[i - 1] < seq[i]:
        i += 1
    while i < m and seq[i - 1] > seq[i]:
        i += 1
    return i >= m


def is_lambda_unimodal(p: Permutation, c: Composition) -> bool:
    _check_lengths(p, c)
    e = p.entries
    return all(is_unimodal(e[seg.start:seg.stop]) for seg in c.segments())


def is_involution(p: Permutation) -> bool:
    e = p.entries
    return all(e[v - 1] == i for i, v in enumerate(e, 1))


def direct_sum(p: Permutation, q: Permutation) -> Permutation:
    return Permutation(p.entries + tuple(v + p.n for v in q.entries))
