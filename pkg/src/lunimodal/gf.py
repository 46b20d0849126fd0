"""Coefficient-level evaluation of the recursive generating functions.

Three systems are implemented, each as a linear recurrence over family keys:

* counts (kinds ``L``, ``Lj``, ``Di``): sizes of I^c, I^c_j and D^c_i;
* descent polynomials (``Lt``, ``Ltj``, ``Dti``): the same sets refined by the
  number of lambda-descents, as integer coefficient lists in t;
* the Gelfand system (``G``, ``Gj``, ``Hi``).

Every generating-function identity is turned into a statement about the
coefficient of x^c.  A right-hand side term ``m * F(x; hat x_V)`` with monomial
``m = prod x_p^{e_p}`` contributes the coefficient of a reduced composition:
parts in the variable set are lowered by ``e_p`` (and must stay >= 1), parts
whose variable was removed must equal ``e_p`` exactly and are then deleted.
Fractions ``1/(1 - m)`` are cleared into an additive self-term ``m * F``,
which always lowers the total, so recursion on n terminates.

Subscripts on the right-hand side refer to positions in the reduced
composition, e.g. ``L_{i-1}^{k-1}(x; hat x_i)`` has part i deleted and
subscript i-1, which still addresses the same prefix of segments.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, NamedTuple, Sequence

from . import bulk
from .enumerate import compositions
from .perm import Composition

__all__ = [
    "FamilyKey", "DescentPolynomial", "SeriesTerm", "Engine",
    "KINDS", "INDEXED_KINDS",
    "count_L", "count_Lj", "count_Di",
    "poly_Lt", "poly_Ltj", "poly_Dti",
    "gelfand_G", "gelfand_Gj", "gelfand_Hi",
    "expand_family", "default_engine", "BULK_MIN_N",
]

KINDS = ("L", "Lj", "Di", "Lt", "Ltj", "Dti", "G", "Gj", "Hi")
INDEXED_KINDS = frozenset({"Lj", "Di", "Ltj", "Dti", "Gj", "Hi"})
POLY_KINDS = frozenset({"Lt", "Ltj", "Dti"})


class FamilyKey(NamedTuple):
    kind: str
    index: int          # 0 for the unsubscripted kinds
    comp: tuple[int, ...]

    @classmethod
    def make(cls, kind: str, comp, index: int | None = None) -> FamilyKey:
        if kind not in KINDS:
            raise ValueError(f"unknown family kind {kind!r}")
        parts = tuple(comp.parts if isinstance(comp, Composition) else comp)
        if any(p < 1 for p in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        if kind in INDEXED_KINDS:
            if index is None:
                raise ValueError(f"family {kind} needs an index")
            if not 1 <= index <= len(parts):
                raise ValueError(
                    f"index {index} out of range 1..{len(parts)} for {kind}")
            return cls(kind, int(index), parts)
        if index is not None:
            raise ValueError(f"family {kind} takes no index")
        return cls(kind, 0, parts)


@dataclass(frozen=True)
class DescentPolynomial:
    """coeffs[d] counts family members with exactly d lambda-descents."""
    coeffs: tuple[int, ...]

    def __call__(self, t: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * t + c
        return acc

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __len__(self):
        return len(self.coeffs)

    def __iter__(self):
        return iter(self.coeffs)

    def __getitem__(self, d):
        return self.coeffs[d]

    def __str__(self) -> str:
        terms = []
        for d, c in enumerate(self.coeffs):
            if c:
                terms.append(f"{c}" if d == 0 else f"{c}*t^{d}")
        return " + ".join(terms) or "0"


@dataclass(frozen=True)
class SeriesTerm:
    comp: Composition
    coefficient: object  # int, or DescentPolynomial for the refined kinds


def _reduce(parts: tuple[int, ...], shifts: dict[int, int],
            deleted: Sequence[int] = ()) -> tuple[int, ...] | None:
    """Coefficient extraction for a monomial prefactor.

    ``shifts`` maps 1-based positions to exponents; positions in ``deleted``
    are hatted variables.  Returns the reduced composition, or None when the
    term cannot contribute to x^parts.
    """
    out = list(parts)
    for p, e in shifts.items():
        if p in deleted:
            if parts[p - 1] != e:
                return None
        else:
            out[p - 1] -= e
            if out[p - 1] < 1:
                return None
    for p in deleted:
        if p not in shifts:
            return None
    if deleted:
        drop = set(deleted)
        return tuple(v for q, v in enumerate(out, 1) if q not in drop)
    return tuple(out)


class _Const(NamedTuple):
    value: object


# Small polynomials in t used as term multipliers (lowest degree first).
_ONE = (1,)
_T = (0, 1)
_T2 = (0, 0, 1)
_TM1 = (-1, 1)          # t - 1
_TP1 = (1, 1)           # t + 1
_T_TM1 = (0, -1, 1)     # t (t - 1)


class _Terms:
    """Accumulates (multiplier, key) pairs, skipping terms that vanish."""

    def __init__(self, parts):
        self.parts = parts
        self.items = []

    def add(self, mult, kind, shifts, deleted=(), index=0):
        red = _reduce(self.parts, shifts, deleted)
        if red is not None:
            self.items.append((mult, FamilyKey(kind, index, red)))


def _count_terms(key: FamilyKey):
    kind, idx, parts = key
    k = len(parts)
    T = _Terms(parts)
    if kind == "L":
        if k == 0:
            return _Const(1)
        if k == 1:
            return _Const(parts[0])
        T.add(1, "L", {1: 1})
        T.add(1, "Lj", {1: 2}, index=1)
        T.add(1, "L", {1: 1}, (1,))
        T.add(1, "L", {1: 2}, (1,))
        for i in range(2, k + 1):
            xx = {1: 1, i: 1}
            T.add(2, "L", xx, (1,))
            T.add(1, "Lj", xx, (i,), index=i - 1)
            T.add(1, "L", xx, (1, i))
            T.add(1, "Lj", xx, index=i)
            T.add(1, "Lj", xx, index=i - 1)
    elif kind == "Lj":
        j = idx
        if j == k:
            return [(1, FamilyKey("Di", k, parts))]
        T.add(1, "Lj", {1: 1, j + 1: 1}, index=j)
        T.items.append((1, FamilyKey("Di", j, parts)))
        for i in range(j + 2, k + 1):
            T.add(1, "Lj", {1: 1, i: 1}, index=i - 1)
        for i in range(j + 1, k + 1):
            xx = {1: 1, i: 1}
            T.add(2, "L", xx, (1,))
            T.add(1, "Lj", xx, (i,), index=i - 1)
            T.add(1, "L", xx, (1, i))
            T.add(1, "Lj", xx, index=i)
    elif kind == "Di":
        i = idx
        if i == 1:
            return [(1, FamilyKey("L", 0, parts[1:]))]
        xx = {1: 1, i: 1}
        T.items.append((1, FamilyKey("Di", i - 1, parts)))
        T.add(1, "Di", xx, index=i)
        T.add(1, "Di", xx, index=i - 1)
        T.add(1, "Di", xx, (i,), index=i - 1)
        T.add(1, "L", xx, (1, i))
        T.add(2, "L", xx, (1,))
    else:
        raise ValueError(f"not a count family: {kind}")
    return T.items


def _poly_terms(key: FamilyKey):
    kind, idx, parts = key
    k = len(parts)
    T = _Terms(parts)
    if kind == "Lt":
        if k == 0:
            return _Const((1,))
        if k == 1:
            return _Const((1,) * parts[0])
        T.add(_ONE, "Lt", {1: 1})
        T.add(_ONE, "Lt", {1: 1}, (1,))
        T.add(_T, "Lt", {1: 2}, (1,))
        T.add(_T, "Ltj", {1: 2}, index=1)
        T.add(_T_TM1, "Dti", {1: 2}, index=1)
        for i in range(2, k + 1):
            xx = {1: 1, i: 1}
            T.add(_TP1, "Lt", xx, (1,))
            T.add(_ONE, "Ltj", xx, (i,), index=i - 1)
            T.add(_TM1, "Dti", xx, (i,), index=i - 1)
            T.add(_ONE, "Lt", xx, (1, i))
            T.add(_T, "Ltj", xx, index=i)
            T.add(_T_TM1, "Dti", xx, index=i)
            T.add(_ONE, "Ltj", xx, index=i - 1)
            T.add(_TM1, "Dti", xx, index=i - 1)
    elif kind == "Ltj":
        j = idx
        if j == k:
            return [(_ONE, FamilyKey("Dti", k, parts))]
        T.add(_ONE, "Ltj", {1: 1, j + 1: 1}, index=j)
        T.items.append((_ONE, FamilyKey("Dti", j, parts)))
        for i in range(j + 2, k + 1):
            T.add(_ONE, "Ltj", {1: 1, i: 1}, index=i - 1)
        for i in range(j + 1, k + 1):
            xx = {1: 1, i: 1}
            T.add(_TP1, "Lt", xx, (1,))
            T.add(_ONE, "Ltj", xx, (i,), index=i - 1)
            T.add(_TM1, "Dti", xx, (i,), index=i - 1)
            T.add(_ONE, "Lt", xx, (1, i))
            T.add(_T, "Ltj", xx, index=i)
            T.add(_T_TM1, "Dti", xx, index=i)
            T.add(_TM1, "Dti", xx, index=i - 1)
    elif kind == "Dti":
        i = idx
        if i == 1:
            # decreasing first block adds parts[0] - 1 lambda-descents
            shift = (0,) * (parts[0] - 1) + (1,)
            return [(shift, FamilyKey("Lt", 0, parts[1:]))]
        xx = {1: 1, i: 1}
        T.add(_T2, "Dti", xx, index=i)
        T.items.append((_ONE, FamilyKey("Dti", i - 1, parts)))
        T.add(_T, "Dti", xx, index=i - 1)
        T.add(_T, "Dti", xx, (i,), index=i - 1)
        T.add(_ONE, "Lt", xx, (1, i))
        T.add(_TP1, "Lt", xx, (1,))
    else:
        raise ValueError(f"not a polynomial family: {kind}")
    return T.items


def _gelfand_terms(key: FamilyKey):
    kind, idx, parts = key
    k = len(parts)
    T = _Terms(parts)
    if kind == "G":
        if k == 0:
            return _Const(1)
        if k == 1:
            return _Const(parts[0] % 2)
        T.add(1, "G", {1: 1})
        T.add(1, "G", {1: 1}, (1,))
        T.add(-1, "G", {1: 2}, (1,))
        T.add(-1, "Gj", {1: 2}, index=1)
        T.add(2, "Hi", {1: 2}, index=1)
        for i in range(2, k + 1):
            xx = {1: 1, i: 1}
            T.add(1, "G", xx, (1, i))
            T.add(1, "Gj", xx, (i,), index=i - 1)
            T.add(-2, "Hi", xx, (i,), index=i - 1)
            T.add(-1, "Gj", xx, index=i)
            T.add(2, "Hi", xx, index=i)
            T.add(1, "Gj", xx, index=i - 1)
            T.add(-2, "Hi", xx, index=i - 1)
    elif kind == "Gj":
        j = idx
        if j == k:
            return [(1, FamilyKey("Hi", k, parts))]
        T.add(1, "Gj", {1: 1, j + 1: 1}, index=j)
        T.items.append((1, FamilyKey("Hi", j, parts)))
        for i in range(j + 2, k + 1):
            T.add(1, "Gj", {1: 1, i: 1}, index=i - 1)
        for i in range(j + 1, k + 1):
            xx = {1: 1, i: 1}
            T.add(1, "G", xx, (1, i))
            T.add(1, "Gj", xx, (i,), index=i - 1)
            T.add(-2, "Hi", xx, (i,), index=i - 1)
            T.add(-1, "Gj", xx, index=i)
            T.add(2, "Hi", xx, index=i)
            T.add(-2, "Hi", xx, index=i - 1)
    elif kind == "Hi":
        i = idx
        if i == 1:
            # x/(1+x) contributes (-1)^(parts[0]-1)
            sign = -1 if parts[0] % 2 == 0 else 1
            return [(sign, FamilyKey("G", 0, parts[1:]))]
        xx = {1: 1, i: 1}
        T.add(1, "Hi", xx, index=i)
        T.items.append((1, FamilyKey("Hi", i - 1, parts)))
        T.add(1, "G", xx, (1, i))
        T.add(-1, "Hi", xx, index=i - 1)
        T.add(-1, "Hi", xx, (i,), index=i - 1)
    else:
        raise ValueError(f"not a Gelfand family: {kind}")
    return T.items


def _literal_terms(key):
    """Right-hand side exactly as transcribed, via the generic extraction."""
    key = FamilyKey(*key)
    if key.kind in ("L", "Lj", "Di"):
        return _count_terms(key)
    if key.kind in POLY_KINDS:
        return _poly_terms(key)
    return _gelfand_terms(key)


# For a term x_1 x_i F, exactly one reduced composition survives, according to
# whether each of parts 1 and i equals 1 (variable hatted, part deleted) or
# exceeds 1 (part lowered).
_NONE_DEL, _I_DEL, _FIRST_DEL, _BOTH_DEL = range(4)


def _pair_cases(parts):
    a = parts[0]
    for i in range(2, len(parts) + 1):
        b = parts[i - 1]
        head, tail = parts[1:i - 1], parts[i:]
        if a == 1:
            if b == 1:
                yield i, _BOTH_DEL, head + tail
            else:
                yield i, _FIRST_DEL, head + (b - 1,) + tail
        elif b == 1:
            yield i, _I_DEL, (a - 1,) + head + tail
        else:
            yield i, _NONE_DEL, (a - 1,) + head + (b - 1,) + tail


_SYMMETRIC = frozenset({"L", "Lt", "G"})


def _fast_count_terms(kind, idx, parts, sym):
    k = len(parts)
    out = []
    if kind == "L":
        if k == 0:
            return _Const(1)
        if k == 1:
            return _Const(parts[0])
        a, rest = parts[0], parts[1:]
        if a == 1:
            out.append((1, ("L", 0, sym(rest))))
        else:
            out.append((1, ("L", 0, sym((a - 1,) + rest))))
            if a == 2:
                out.append((1, ("L", 0, sym(rest))))
            else:
                out.append((1, ("Lj", 1, (a - 2,) + rest)))
        for i, case, comp in _pair_cases(parts):
            if case == _NONE_DEL:
                out.append((1, ("Lj", i, comp)))
                out.append((1, ("Lj", i - 1, comp)))
            elif case == _I_DEL:
                out.append((1, ("Lj", i - 1, comp)))
            elif case == _FIRST_DEL:
                out.append((2, ("L", 0, sym(comp))))
            else:
                out.append((1, ("L", 0, sym(comp))))
    elif kind == "Lj":
        if idx == k:
            return [(1, ("Di", k, parts))]
        out.append((1, ("Di", idx, parts)))
        for i, case, comp in _pair_cases(parts):
            if i <= idx:
                continue
            if case == _NONE_DEL:
                out.append((1, ("Lj", i - 1, comp)))
                out.append((1, ("Lj", i, comp)))
            elif case == _I_DEL:
                out.append((1, ("Lj", i - 1, comp)))
            elif case == _FIRST_DEL:
                out.append((2, ("L", 0, sym(comp))))
            else:
                out.append((1, ("L", 0, sym(comp))))
    elif kind == "Di":
        if idx == 1:
            return [(1, ("L", 0, sym(parts[1:])))]
        out.append((1, ("Di", idx - 1, parts)))
        out.extend(_d_pair(parts, idx, sym, "Di", "L",
                           ((1, 1), (1,), 2, 1)))
    else:
        raise ValueError(f"not a count family: {kind}")
    return out


def _d_pair(parts, idx, sym, dk, lk, coef):
    """The x_1 x_i bracket of the D/H recurrences for the single index idx."""
    none_del, i_del, first_del, both_del = coef
    a, b = parts[0], parts[idx - 1]
    head, tail = parts[1:idx - 1], parts[idx:]
    if a == 1:
        if b == 1:
            return [(both_del, (lk, 0, sym(head + tail)))]
        if first_del:
            return [(first_del, (lk, 0, sym(head + (b - 1,) + tail)))]
        return []
    if b == 1:
        return [(i_del[0], (dk, idx - 1, (a - 1,) + head + tail))]
    comp = (a - 1,) + head + (b - 1,) + tail
    return [(none_del[0], (dk, idx, comp)), (none_del[1], (dk, idx - 1, comp))]


def _fast_poly_terms(kind, idx, parts, sym):
    k = len(parts)
    out = []
    if kind == "Lt":
        if k == 0:
            return _Const((1,))
        if k == 1:
            return _Const((1,) * parts[0])
        a, rest = parts[0], parts[1:]
        if a == 1:
            out.append((_ONE, ("Lt", 0, sym(rest))))
        else:
            out.append((_ONE, ("Lt", 0, sym((a - 1,) + rest))))
            if a == 2:
                out.append((_T, ("Lt", 0, sym(rest))))
            else:
                red = (a - 2,) + rest
                out.append((_T, ("Ltj", 1, red)))
                out.append((_T_TM1, ("Dti", 1, red)))
        for i, case, comp in _pair_cases(parts):
            if case == _NONE_DEL:
                out.append((_T, ("Ltj", i, comp)))
                out.append((_T_TM1, ("Dti", i, comp)))
                out.append((_ONE, ("Ltj", i - 1, comp)))
                out.append((_TM1, ("Dti", i - 1, comp)))
            elif case == _I_DEL:
                out.append((_ONE, ("Ltj", i - 1, comp)))
                out.append((_TM1, ("Dti", i - 1, comp)))
            elif case == _FIRST_DEL:
                out.append((_TP1, ("Lt", 0, sym(comp))))
            else:
                out.append((_ONE, ("Lt", 0, sym(comp))))
    elif kind == "Ltj":
        if idx == k:
            return [(_ONE, ("Dti", k, parts))]
        out.append((_ONE, ("Dti", idx, parts)))
        for i, case, comp in _pair_cases(parts):
            if i <= idx:
                continue
            if case == _NONE_DEL:
                out.append((_ONE, ("Ltj", i - 1, comp)))
                out.append((_T, ("Ltj", i, comp)))
                out.append((_T_TM1, ("Dti", i, comp)))
                out.append((_TM1, ("Dti", i - 1, comp)))
            elif case == _I_DEL:
                out.append((_ONE, ("Ltj", i - 1, comp)))
                out.append((_TM1, ("Dti", i - 1, comp)))
            elif case == _FIRST_DEL:
                out.append((_TP1, ("Lt", 0, sym(comp))))
            else:
                out.append((_ONE, ("Lt", 0, sym(comp))))
    elif kind == "Dti":
        if idx == 1:
            shift = (0,) * (parts[0] - 1) + (1,)
            return [(shift, ("Lt", 0, sym(parts[1:])))]
        out.append((_ONE, ("Dti", idx - 1, parts)))
        out.extend(_d_pair(parts, idx, sym, "Dti", "Lt",
                           ((_T2, _T), (_T,), _TP1, _ONE)))
    else:
        raise ValueError(f"not a polynomial family: {kind}")
    return out


def _fast_gelfand_terms(kind, idx, parts, sym):
    k = len(parts)
    out = []
    if kind == "G":
        if k == 0:
            return _Const(1)
        if k == 1:
            return _Const(parts[0] % 2)
        a, rest = parts[0], parts[1:]
        if a == 1:
            out.append((1, ("G", 0, sym(rest))))
        else:
            out.append((1, ("G", 0, sym((a - 1,) + rest))))
            if a == 2:
                out.append((-1, ("G", 0, sym(rest))))
            else:
                red = (a - 2,) + rest
                out.append((-1, ("Gj", 1, red)))
                out.append((2, ("Hi", 1, red)))
        for i, case, comp in _pair_cases(parts):
            if case == _NONE_DEL:
                out.append((-1, ("Gj", i, comp)))
                out.append((2, ("Hi", i, comp)))
                out.append((1, ("Gj", i - 1, comp)))
                out.append((-2, ("Hi", i - 1, comp)))
            elif case == _I_DEL:
                out.append((1, ("Gj", i - 1, comp)))
                out.append((-2, ("Hi", i - 1, comp)))
            elif case == _BOTH_DEL:
                out.append((1, ("G", 0, sym(comp))))
    elif kind == "Gj":
        if idx == k:
            return [(1, ("Hi", k, parts))]
        out.append((1, ("Hi", idx, parts)))
        for i, case, comp in _pair_cases(parts):
            if i <= idx:
                continue
            if case == _NONE_DEL:
                out.append((1, ("Gj", i - 1, comp)))
                out.append((-1, ("Gj", i, comp)))
                out.append((2, ("Hi", i, comp)))
                out.append((-2, ("Hi", i - 1, comp)))
            elif case == _I_DEL:
                out.append((1, ("Gj", i - 1, comp)))
                out.append((-2, ("Hi", i - 1, comp)))
            elif case == _BOTH_DEL:
                out.append((1, ("G", 0, sym(comp))))
    elif kind == "Hi":
        if idx == 1:
            sign = -1 if parts[0] % 2 == 0 else 1
            return [(sign, ("G", 0, sym(parts[1:])))]
        out.append((1, ("Hi", idx - 1, parts)))
        out.extend(_d_pair(parts, idx, sym, "Hi", "G", ((1, -1), (-1,), 0, 1)))
    else:
        raise ValueError(f"not a Gelfand family: {kind}")
    return out


def _identity(parts):
    return parts


def _sorted(parts):
    return tuple(sorted(parts))


# With a first part of length 1 the first segment is trivially decreasing, so
# I^c_j = I^c for every j, and D^c_k = I^c because pi_1 <= n always.
_FOLD = {"Lj": "L", "Di": "L", "Ltj": "Lt", "Dti": "Lt", "Gj": "G", "Hi": "G"}


def _fast_terms(key, sym=_sorted):
    kind, idx, parts = key
    if idx and parts[0] == 1 and (kind in ("Lj", "Ltj", "Gj") or idx == len(parts)):
        return [(1 if kind not in POLY_KINDS else _ONE,
                 (_FOLD[kind], 0, sym(parts)))]
    if kind in ("L", "Lj", "Di"):
        return _fast_count_terms(kind, idx, parts, sym)
    if kind in POLY_KINDS:
        return _fast_poly_terms(kind, idx, parts, sym)
    return _fast_gelfand_terms(kind, idx, parts, sym)


def _poly_add_scaled(acc: list[int], mult: tuple[int, ...], val: tuple[int, ...]):
    need = len(mult) + len(val) - 1
    if len(acc) < need:
        acc.extend([0] * (need - len(acc)))
    for a, ma in enumerate(mult):
        if ma:
            for b, vb in enumerate(val):
                acc[a + b] += ma * vb


def _trim(coeffs: list[int]) -> tuple[int, ...]:
    while coeffs and coeffs[-1] == 0:
        coeffs.pop()
    return tuple(coeffs)


def _combine(kind: str, terms, values) -> object:
    if kind in POLY_KINDS:
        acc: list[int] = []
        for (mult, _), val in zip(terms, values):
            if val:
                _poly_add_scaled(acc, mult, val)
        return _trim(acc)
    total = 0
    for (mult, _), val in zip(terms, values):
        total += mult * val
    return total


class Engine:
    """Memoized evaluator over family keys.

    Values are plain ints for the count and Gelfand kinds and trimmed
    coefficient tuples for the refined kinds.  The evaluation uses an explicit
    stack, so deep recursions (large n) never hit the interpreter's limit.

    ``symmetric`` stores the L, Lt and G families under the ascending sort of
    their composition.  Those three series are symmetric in their variables,
    and putting the smallest part first keeps the subscripted families, which
    always inherit the first part, from branching widely.
    ``literal`` switches to the term-by-term transcription of the recurrences
    through the generic extraction rule (slow; used as a cross-check).
    ``memo=False`` recomputes everything by plain recursion.

    Sharing one engine between threads is safe: the cache is only ever filled
    with deterministic values, so a duplicate computation of a key is harmless.
    """

    def __init__(self, memo: bool = True, symmetric: bool = True,
                 literal: bool = False):
        self.memo = memo
        self.literal = literal
        self.symmetric = symmetric and not literal
        self.cache: dict[tuple, object] = {}
        if literal:
            self._terms = _literal_terms
        else:
            sym = _sorted if self.symmetric else _identity
            self._terms = lambda key: _fast_terms(key, sym)

    def clear(self) -> None:
        self.cache.clear()

    def canonical(self, key) -> tuple:
        kind, idx, parts = key
        if self.symmetric and kind in _SYMMETRIC:
            return (kind, idx, tuple(sorted(parts)))
        return (kind, idx, tuple(parts))

    def value(self, key):
        """Raw value (int or coefficient tuple) of a family key."""
        key = self.canonical(key)
        if not self.memo:
            return self._value_uncached(key)
        cache = self.cache
        if key in cache:
            return cache[key]
        terms_of = self._terms
        pending: dict[tuple, list] = {}
        stack = [key]
        while stack:
            top = stack[-1]
            if top in cache:
                stack.pop()
                continue
            terms = pending.get(top)
            if terms is None:
                terms = terms_of(top)
                if isinstance(terms, _Const):
                    cache[top] = terms.value
                    stack.pop()
                    continue
                pending[top] = terms
            missing = [dep for _, dep in terms if dep not in cache]
            if missing:
                for dep in missing:
                    if dep in pending:
                        raise RuntimeError(f"cyclic dependency at {dep}")
                stack.extend(missing)
                continue
            cache[top] = _combine(top[0], terms, [cache[dep] for _, dep in terms])
            del pending[top]
            stack.pop()
        return cache[key]

    def _value_uncached(self, key):
        terms = self._terms(key)
        if isinstance(terms, _Const):
            return terms.value
        return _combine(key[0], terms,
                        [self._value_uncached(dep) for _, dep in terms])

    def evaluate(self, kind: str, comp, index: int | None = None):
        """Value of a family at a composition, wrapped for polynomial kinds."""
        val = self.value(FamilyKey.make(kind, comp, index))
        if kind in POLY_KINDS:
            return DescentPolynomial(val)
        return val


_default = Engine()


def default_engine() -> Engine:
    return _default


def _as_comp(c) -> Composition:
    return c if isinstance(c, Composition) else Composition(c)


# From this size up the count families go through the vectorized evaluator,
# unless an engine is passed explicitly or n exceeds its prime table.
BULK_MIN_N = 30


def _count(kind, c, index, engine):
    c = _as_comp(c)
    if engine is None and BULK_MIN_N <= c.n <= bulk.MAX_N:
        FamilyKey.make(kind, c, index)  # same validation as the engine path
        return bulk.BulkCounter(c).count(kind, index)
    return (engine or _default).evaluate(kind, c, index)


def count_L(c, engine: Engine | None = None) -> int:
    """Number of c-unimodal involutions."""
    return _count("L", c, None, engine)


def count_Lj(c, j: int, engine: Engine | None = None) -> int:
    return _count("Lj", c, j, engine)


def count_Di(c, i: int, engine: Engine | None = None) -> int:
    return _count("Di", c, i, engine)


def poly_Lt(c, engine: Engine | None = None) -> DescentPolynomial:
    """lambda-descent distribution over the c-unimodal involutions."""
    return (engine or _default).evaluate("Lt", _as_comp(c))


def poly_Ltj(c, j: int, engine: Engine | None = None) -> DescentPolynomial:
    return (engine or _default).evaluate("Ltj", _as_comp(c), j)


def poly_Dti(c, i: int, engine: Engine | None = None) -> DescentPolynomial:
    return (engine or _default).evaluate("Dti", _as_comp(c), i)


def gelfand_G(c, engine: Engine | None = None) -> int:
    """Gelfand character at the class c, from the G/G_j/H_i system."""
    return (engine or _default).evaluate("G", _as_comp(c))


def gelfand_Gj(c, j: int, engine: Engine | None = None) -> int:
    return (engine or _default).evaluate("Gj", _as_comp(c), j)


def gelfand_Hi(c, i: int, engine: Engine | None = None) -> int:
    return (engine or _default).evaluate("Hi", _as_comp(c), i)


def expand_family(kind: str, k: int, max_total: int, index: int | None = None,
                  engine: Engine | None = None) -> Iterator[SeriesTerm]:
    """Terms of the k-variable series, graded by total then lex by parts.

    Zero coefficients are included; callers filter them if they want the
    printed form of a series.
    """
    if kind not in KINDS:
        raise ValueError(f"unknown family kind {kind!r}")
    if k < 0:
        raise ValueError("k must be nonnegative")
    engine = engine or _default
    for n in range(k, max_total + 1):
        for comp in compositions(n, k):
            yield SeriesTerm(comp, engine.evaluate(kind, comp, index))
