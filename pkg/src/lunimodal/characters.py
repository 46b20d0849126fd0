"""Gelfand character values and an independent Murnaghan-Nakayama oracle.

The Gelfand character is the sum of all irreducible characters of S_n.  It is
computed here three ways that share no code beyond the composition type:

* ``recurrence``: the G/G_j/H_i recurrence system of :mod:`lunimodal.gf`;
* ``signed-sum``: (-1)^des_lambda summed over the lambda-unimodal involutions,
  found by filtering every involution of S_n (brute force, size-capped);
* ``murnaghan-nakayama``: the sum over mu |- n of chi^mu(lambda), each value
  obtained by border-strip removal.

>>> gelfand((1, 1, 3)).value
2
>>> irreducible_character(Partition((2, 1)), (1, 1, 1))
2
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from functools import lru_cache
from math import comb
from typing import Iterable, Iterator

from .enumerate import lambda_unimodal_involutions, multinomial, signed_sum_over_family
from .gf import Engine, gelfand_G
from .perm import Composition

__all__ = [
    "Partition", "CharacterValue", "Method", "BruteForceRefused",
    "DEFAULT_BRUTE_FORCE_LIMIT", "partitions", "gelfand",
    "irreducible_character", "regular_character", "border_strip_removals",
]

DEFAULT_BRUTE_FORCE_LIMIT = 10


class BruteForceRefused(RuntimeError):
    """A brute-force path was asked for a size above its configured limit."""


class Method(str, Enum):
    RECURRENCE = "recurrence"
    SIGNED_SUM = "signed-sum"
    MURNAGHAN_NAKAYAMA = "murnaghan-nakayama"

    @classmethod
    def parse(cls, name) -> Method:
        if isinstance(name, cls):
            return name
        aliases = {"mn": cls.MURNAGHAN_NAKAYAMA, "signed": cls.SIGNED_SUM,
                   "rec": cls.RECURRENCE}
        try:
            return aliases.get(name) or cls(name)
        except ValueError:
            choices = ", ".join(m.value for m in cls)
            raise ValueError(f"unknown method {name!r} (choose from {choices}, mn)") from None


@dataclass(frozen=True)
class Partition:
    parts: tuple[int, ...]

    def __init__(self, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"partition parts must be positive: {parts}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be non-increasing: {parts}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, parts: Iterable[int]) -> Partition:
        """Partition with the given parts in any order."""
        return cls(sorted(parts, reverse=True))

    @property
    def n(self) -> int:
        return sum(self.parts)

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self):
        return iter(self.parts)

    def conjugate(self) -> Partition:
        if not self.parts:
            return self
        return Partition(sum(1 for p in self.parts if p > j)
                         for j in range(self.parts[0]))

    def __str__(self) -> str:
        return ",".join(map(str, self.parts))


def partitions(n: int, largest: int | None = None) -> Iterator[Partition]:
    """Partitions of n in reverse lexicographic order."""
    def rec(rest, cap):
        if rest == 0:
            yield ()
            return
        for first in range(min(rest, cap), 0, -1):
            for tail in rec(rest - first, first):
                yield (first,) + tail

    if n < 0:
        return
    for parts in rec(n, n if largest is None else largest):
        yield Partition(parts)


@dataclass(frozen=True)
class CharacterValue:
    lambda_: Composition
    value: int
    method: Method


# Murnaghan-Nakayama on beta-sets: with beads at mu_i + (l - i), removing a
# border strip of length r moves one bead from b to b - r onto a free spot;
# the strip's height is the number of beads strictly between the two.

def _beta_set(parts: tuple[int, ...]) -> tuple[int, ...]:
    m = len(parts)
    return tuple(p + m - 1 - i for i, p in enumerate(parts))


def _from_beta(beads) -> tuple[int, ...]:
    beads = sorted(beads, reverse=True)
    m = len(beads)
    return tuple(p for p in (b - (m - 1 - i) for i, b in enumerate(beads)) if p)


def border_strip_removals(parts: tuple[int, ...], r: int):
    """(shape after removal, height) for every border strip of length r."""
    beads = _beta_set(parts)
    occupied = set(beads)
    for b in beads:
        target = b - r
        if target < 0 or target in occupied:
            continue
        height = sum(1 for c in beads if target < c < b)
        yield _from_beta([target if c == b else c for c in beads]), height


@lru_cache(maxsize=None)
def _mn(shape: tuple[int, ...], cycles: tuple[int, ...]) -> int:
    if not cycles:
        return 1 if not shape else 0
    r, rest = cycles[0], cycles[1:]
    total = 0
    for smaller, height in border_strip_removals(shape, r):
        value = _mn(smaller, rest)
        total += -value if height % 2 else value
    return total


def _parts(c) -> tuple[int, ...]:
    return tuple(c.parts if isinstance(c, (Composition, Partition)) else c)


def irreducible_character(mu, lam) -> int:
    """chi^mu at the class of cycle type lam."""
    mu = mu if isinstance(mu, Partition) else Partition.of(mu)
    cycles = Composition(_parts(lam)).parts
    if mu.n != sum(cycles):
        raise ValueError(f"size mismatch: partition of {mu.n}, class of {sum(cycles)}")
    # Any order of the cycles gives the same value; descending keeps the cache small.
    return _mn(mu.parts, tuple(sorted(cycles, reverse=True)))


def _signed_sum(c: Composition, limit: int) -> int:
    if c.n > limit:
        raise BruteForceRefused(
            f"signed-sum enumerates S_{c.n}; the brute-force limit is n = {limit}")
    return signed_sum_over_family(lambda_unimodal_involutions(c), c)


def gelfand(lam, method="recurrence", *, brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
            engine: Engine | None = None) -> CharacterValue:
    """The Gelfand character at the class lam."""
    c = lam if isinstance(lam, Composition) else Composition(lam)
    if c.n < 1:
        raise ValueError("the Gelfand character needs n >= 1")
    method = Method.parse(method)
    if method is Method.RECURRENCE:
        value = gelfand_G(c, engine)
    elif method is Method.SIGNED_SUM:
        value = _signed_sum(c, brute_force_limit)
    else:
        value = sum(irreducible_character(mu, c) for mu in partitions(c.n))
    return CharacterValue(c, value, method)


def regular_character(lam) -> int:
    """Regular representation character at the class lam.

    Summed over lambda-unimodal permutations by number of lambda-descents,
    (-1)^des gives multinomial(lam) * sum_d (-1)^d C(n-k, d), which vanishes
    unless every part is 1.
    """
    c = lam if isinstance(lam, Composition) else Composition(lam)
    if c.n < 1:
        raise ValueError("the regular character needs n >= 1")
    m = c.n - c.k
    return multinomial(c.parts) * sum((-1) ** d * comb(m, d) for d in range(m + 1))
