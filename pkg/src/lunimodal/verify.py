"""Cross-validation properties behind the ``verify`` command.

Each property compares two independently computed quantities for every
composition up to a size bound and stops at the first disagreement, which is
reported with the offending family, composition, index and both values.
Every property uses the engine it is handed, so corrupting one of its memo
entries makes the properties that read that entry fail.
"""

from __future__ import annotations

import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from itertools import permutations
from math import factorial
from typing import Callable, Iterator

from . import gf
from .characters import (
    DEFAULT_BRUTE_FORCE_LIMIT, irreducible_character, partitions, regular_character,
)
from .enumerate import (
    all_involutions, all_lambda_unimodal, compositions,
    count_lambda_unimodal_with_descents, descent_histogram, in_D_i, in_I_j,
    signed_sum_over_family,
)
from .perm import Composition, is_lambda_unimodal

__all__ = ["PropertyResult", "PROPERTIES", "PERMUTATION_SWEEP_LIMIT", "run_properties"]

# Sweeps over all lambda-unimodal permutations of every composition of n
# touch about 2.9 million permutations at n = 8, hence the lower cap.
PERMUTATION_SWEEP_LIMIT = 7

# (description, expected, actual)
Check = tuple[str, object, object]


@dataclass(frozen=True)
class PropertyResult:
    name: str
    passed: bool
    checked: int
    max_n: int
    detail: str | None
    seconds: float


def _label(family: str, c: Composition, index: int | None = None) -> str:
    where = f"{family} lambda=({c})"
    return where if index is None else f"{where} index={index}"


def _counts(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, min(max_n, limit) + 1):
        invs = list(all_involutions(n))
        for c in compositions(n):
            family = [p for p in invs if is_lambda_unimodal(p, c)]
            yield _label("L", c), len(family), gf.count_L(c, engine)
            for j in range(1, c.k + 1):
                yield (_label("Lj", c, j), sum(in_I_j(p, c, j) for p in family),
                       gf.count_Lj(c, j, engine))
                yield (_label("Di", c, j), sum(in_D_i(p, c, j) for p in family),
                       gf.count_Di(c, j, engine))


def _polys(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, min(max_n, limit) + 1):
        invs = list(all_involutions(n))
        for c in compositions(n):
            family = [p for p in invs if is_lambda_unimodal(p, c)]
            yield (_label("Lt", c), descent_histogram(family, c),
                   list(gf.poly_Lt(c, engine)))
            for j in range(1, c.k + 1):
                sub = [p for p in family if in_I_j(p, c, j)]
                yield (_label("Ltj", c, j), descent_histogram(sub, c),
                       list(gf.poly_Ltj(c, j, engine)))
                sub = [p for p in family if in_D_i(p, c, j)]
                yield (_label("Dti", c, j), descent_histogram(sub, c),
                       list(gf.poly_Dti(c, j, engine)))


def _specializations(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, max_n + 1):
        for c in compositions(n):
            lt = gf.poly_Lt(c, engine)
            yield _label("Lt(1) vs L", c), gf.count_L(c, engine), lt(1)
            yield _label("Lt(-1) vs G", c), gf.gelfand_G(c, engine), lt(-1)


def _three_way(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, max_n + 1):
        invs = list(all_involutions(n)) if n <= limit else None
        shapes = list(partitions(n))
        for c in compositions(n):
            value = gf.gelfand_G(c, engine)
            mn = sum(irreducible_character(mu, c) for mu in shapes)
            yield _label("G vs Murnaghan-Nakayama", c), mn, value
            if invs is not None:
                family = [p for p in invs if is_lambda_unimodal(p, c)]
                yield (_label("G vs signed sum", c),
                       signed_sum_over_family(family, c), value)


def _symmetry(max_n, engine, limit) -> Iterator[Check]:
    # Rearrangements are evaluated without sorting, so each one is an
    # independent computation rather than a cache hit.
    plain = gf.Engine(symmetric=False)
    for n in range(1, max_n + 1):
        for c in compositions(n):
            if list(c.parts) != sorted(c.parts):
                continue
            ref = {"L": gf.count_L(c, engine), "Lt": tuple(gf.poly_Lt(c, engine)),
                   "G": gf.gelfand_G(c, engine)}
            for perm in sorted(set(permutations(c.parts))):
                r = Composition(perm)
                for kind in ("L", "Lt", "G"):
                    yield (_label(kind, r), plain.value((kind, 0, r.parts)), ref[kind])


def _involution_counts(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, min(max_n, limit) + 1):
        ones = Composition((1,) * n)
        count = sum(1 for _ in all_involutions(n))
        yield _label("G", ones), count, gf.gelfand_G(ones, engine)
        yield _label("L", ones), count, gf.count_L(ones, engine)


def _unimodal_sweep(max_n, engine, limit) -> Iterator[Check]:
    for n in range(1, min(max_n, limit, PERMUTATION_SWEEP_LIMIT) + 1):
        for c in compositions(n):
            family = list(all_lambda_unimodal(c))
            hist = descent_histogram(family, c)
            closed = [count_lambda_unimodal_with_descents(c, d)
                      for d in range(c.n - c.k + 1)]
            yield _label("descent census", c), closed, hist
            yield (_label("regular character", c), regular_character(c),
                   signed_sum_over_family(family, c))
            yield (_label("regular character at 1^n", c),
                   factorial(n) if c.k == n else 0, regular_character(c))


def _engine_paths(max_n, engine, limit) -> Iterator[Check]:
    literal = gf.Engine(literal=True)
    unmemoized = gf.Engine(memo=False)
    for n in range(1, max_n + 1):
        for c in compositions(n):
            for kind in gf.KINDS:
                for idx in (range(1, c.k + 1) if kind in gf.INDEXED_KINDS else (None,)):
                    key = gf.FamilyKey.make(kind, c, idx)
                    value = engine.value(key)
                    yield _label(f"{kind} literal form", c, idx), literal.value(key), value
                    if n <= PERMUTATION_SWEEP_LIMIT:
                        yield (_label(f"{kind} without memo", c, idx),
                               unmemoized.value(key), value)


PROPERTIES: dict[str, Callable[..., Iterator[Check]]] = {
    "counts-vs-brute-force": _counts,
    "polys-vs-brute-force": _polys,
    "specializations": _specializations,
    "gelfand-three-way": _three_way,
    "symmetry": _symmetry,
    "involution-counts": _involution_counts,
    "unimodal-census-and-regular": _unimodal_sweep,
    "engine-paths": _engine_paths,
}


def _run_one(name, max_n, engine, limit) -> PropertyResult:
    start = time.perf_counter()
    checked = 0
    detail = None
    for what, expected, actual in PROPERTIES[name](max_n, engine, limit):
        checked += 1
        if expected != actual:
            detail = f"{what}: expected {expected}, got {actual}"
            break
    return PropertyResult(name, detail is None, checked, max_n, detail,
                          time.perf_counter() - start)


def run_properties(max_n: int, names=None, engine: gf.Engine | None = None,
                   brute_force_limit: int = DEFAULT_BRUTE_FORCE_LIMIT,
                   workers: int = 1) -> list[PropertyResult]:
    """Run the named properties (all by default) for compositions up to max_n."""
    if max_n < 1:
        raise ValueError("max_n must be at least 1")
    names = list(PROPERTIES) if names is None else list(names)
    unknown = [n for n in names if n not in PROPERTIES]
    if unknown:
        raise ValueError(f"unknown properties: {', '.join(unknown)}")
    engine = engine or gf.Engine()
    job = lambda name: _run_one(name, max_n, engine, brute_force_limit)
    if workers <= 1:
        return [job(name) for name in names]
    with ThreadPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(job, names))
