"""Vectorized evaluation of the count recurrences for large compositions.

The recurrences are those of the count system in :mod:`lunimodal.gf` (L keyed
by the ascending sort of its composition, subscripted families folded onto L
when the first part is 1), evaluated in bulk rather than key by key.

States are grouped by (family, total, subscript).  Every term either lowers
the total by the degree of its monomial or stays on the same composition
(``L_j -> D_j`` and ``D_i -> D_{i-1}``), so the groups can be discovered by
walking totals downward and evaluated by walking them upward.  Deduplicating
each group's packed compositions plays the role of the memo table.

Values are carried modulo primes below 2**55 and rebuilt with the Chinese
remainder theorem.  Accumulators are reduced whenever the summed term
coefficients could push them past int64.  Every count is at most the number
of involutions of S_n, which fixes how many primes are needed.
"""

from __future__ import annotations

from math import prod

import numpy as np

from .perm import Composition

__all__ = ["BulkCounter", "bulk_count", "involution_count", "PRIMES", "MAX_N"]

# The 64 largest primes below 2**55 (enough for n up to 841).
PRIMES = (
    36028797018963913, 36028797018963901, 36028797018963869,
    36028797018963841, 36028797018963821, 36028797018963799,
    36028797018963797, 36028797018963769, 36028797018963761,
    36028797018963701, 36028797018963689, 36028797018963647,
    36028797018963629, 36028797018963613, 36028797018963587,
    36028797018963557, 36028797018963481, 36028797018963457,
    36028797018963451, 36028797018963439, 36028797018963389,
    36028797018963247, 36028797018963197, 36028797018963179,
    36028797018963137, 36028797018963053, 36028797018963013,
    36028797018962947, 36028797018962929, 36028797018962843,
    36028797018962779, 36028797018962753, 36028797018962711,
    36028797018962653, 36028797018962651, 36028797018962597,
    36028797018962549, 36028797018962533, 36028797018962471,
    36028797018962437, 36028797018962413, 36028797018962399,
    36028797018962383, 36028797018962381, 36028797018962339,
    36028797018962323, 36028797018962299, 36028797018962291,
    36028797018962261, 36028797018962203, 36028797018962149,
    36028797018962131, 36028797018962051, 36028797018962023,
    36028797018961949, 36028797018961927, 36028797018961907,
    36028797018961889, 36028797018961883, 36028797018961847,
    36028797018961841, 36028797018961777, 36028797018961757,
    36028797018961741,
)

L, LJ, DI = "L", "Lj", "Di"

# Number of residues below 2**55 that can be summed without leaving int64.
_HEADROOM = 2 ** 8


def involution_count(n: int) -> int:
    """Number of involutions of S_n."""
    prev, cur = 1, 1
    for m in range(2, n + 1):
        prev, cur = cur, cur + (m - 1) * prev
    return cur


def _largest_supported_n() -> int:
    bound, n = prod(PRIMES), 0
    while involution_count(n + 1) < bound:
        n += 1
    return n


MAX_N = _largest_supported_n()


def _crt(residues, moduli) -> int:
    x, m = 0, 1
    for r, p in zip(residues, moduli):
        x += m * ((r - x) * pow(m, -1, p) % p)
        m *= p
    return x


class _Group:
    __slots__ = ("keys", "rows", "rules", "values")

    def __init__(self, keys, rows):
        self.keys = keys
        self.rows = rows
        self.rules = []   # (coef, target group, source positions, target keys)
        self.values = None


class BulkCounter:
    """Counts |I^c|, |I^c_j| and |D^c_i| for one composition c.

    >>> BulkCounter((2, 3)).count("L")
    18
    """

    def __init__(self, comp, check: bool = False):
        parts = comp.parts if isinstance(comp, Composition) else tuple(comp)
        Composition(parts)  # validates
        self.parts = tuple(parts)
        self.n = sum(parts)
        self.width = max(len(parts), 1)
        self.dtype = np.uint8 if max(parts, default=0) < 255 else np.uint16
        self.check = check
        bound = involution_count(self.n)
        used = 1
        while prod(PRIMES[:used]) <= bound:
            used += 1
            if used > len(PRIMES):
                raise ValueError(f"n = {self.n} is too large for the prime table")
        self.primes = np.array(PRIMES[:used], dtype=np.int64)
        self.groups: dict[tuple, _Group] = {}
        self._requests: dict[tuple, list] = {}
        # Subscript and total are fixed within a group, so a key only has to
        # encode the parts: an int64 in radix max+1 when it fits.
        radix = max(parts, default=0) + 1
        if radix ** self.width < 2 ** 63:
            self._weights = radix ** np.arange(self.width - 1, -1, -1, dtype=np.int64)
        else:
            self._weights = None

    # row helpers

    def _key(self, rows):
        if self._weights is not None:
            return rows.astype(np.int64) @ self._weights
        rows = np.ascontiguousarray(rows)
        return rows.view(f"S{rows.shape[1] * rows.itemsize}").ravel()

    def _sort(self, rows):
        big = np.iinfo(self.dtype).max
        r = np.where(rows == 0, big, rows)
        r.sort(axis=1)
        r[r == big] = 0
        return r

    @staticmethod
    def _drop(rows, col: int):
        """Delete one column, padding with a zero on the right."""
        out = np.zeros_like(rows)
        out[:, :col] = rows[:, :col]
        out[:, col:-1] = rows[:, col + 1:]
        return out

    @staticmethod
    def _lower(rows, *cols):
        out = rows.copy()
        for c in cols:
            out[:, c] -= 1
        return out

    # discovery

    def _split(self, kind, idx, rows, k, total, pos):
        """Apply the value-preserving aliases to a batch of target states.

        ``k`` holds the number of parts of each row.  Yields (kind, idx, rows,
        total, positions) batches, each belonging to a single group.
        """
        if kind == L:
            yield L, 0, self._sort(rows), total, pos
            return
        first = rows[:, 0]
        if kind == LJ:
            to_d = k == idx                      # I_k = D_k
            if to_d.any():
                yield from self._split(DI, idx, rows[to_d], k[to_d], total, pos[to_d])
                keep = ~to_d
                rows, k, pos, first = rows[keep], k[keep], pos[keep], first[keep]
            fold = first == 1                    # first part 1: I_j = I
        elif idx == 1:                           # D_1 = L of the tail
            tails = self._sort(self._drop(rows, 0))
            totals = total - first.astype(np.int64)
            for t in np.unique(totals):
                sel = totals == t
                yield L, 0, tails[sel], int(t), pos[sel]
            return
        else:
            fold = (first == 1) & (k == idx)
        if fold.any():
            yield L, 0, self._sort(rows[fold]), total, pos[fold]
            keep = ~fold
            rows, pos = rows[keep], pos[keep]
        if len(rows):
            yield kind, idx, rows, total, pos

    def _emit(self, group, coef, kind, idx, rows, k, total, pos):
        for tkind, tidx, trows, ttotal, tpos in self._split(kind, idx, rows, k, total, pos):
            gkey = (tkind, ttotal, tidx)
            if gkey in self.groups:
                raise RuntimeError(f"state group {gkey} requested after it was built")
            keys = self._key(trows)
            self._requests.setdefault(gkey, []).append((keys, trows))
            group.rules.append((coef, gkey, tpos, keys))

    def _build(self, gkey):
        reqs = self._requests.pop(gkey)
        keys = np.concatenate([k for k, _ in reqs])
        rows = np.concatenate([r for _, r in reqs])
        keys, first = np.unique(keys, return_index=True)
        group = _Group(keys, rows[first])
        self.groups[gkey] = group
        kind, total, idx = gkey
        rows = group.rows
        pos = np.arange(len(rows))
        k = np.count_nonzero(rows, axis=1)
        if kind == L:
            inner = k >= 2
            rows, pos, k = rows[inner], pos[inner], k[inner]
        a = rows[:, 0]
        a1, a2 = a == 1, a >= 2

        def emit(coef, kind, idx, sel, make, dropped, lowered_total):
            if sel is not None:
                if not sel.any():
                    return
                src, ks = rows[sel], k[sel]
                ps = pos[sel]
            else:
                src, ks, ps = rows, k, pos
            self._emit(group, coef, kind, idx, make(src), ks - dropped,
                       total - lowered_total, ps)

        same = lambda r: r
        if kind == L:
            emit(1, L, 0, a1, lambda r: self._drop(r, 0), 1, 1)
            emit(1, L, 0, a2, lambda r: self._lower(r, 0), 0, 1)
            emit(1, L, 0, a == 2, lambda r: self._drop(r, 0), 1, 2)
            emit(1, LJ, 1, a >= 3, lambda r: self._lower(r, 0, 0), 0, 2)
            cols = range(1, self.width)
        elif kind == LJ:
            emit(1, DI, idx, None, same, 0, 0)
            cols = range(idx, self.width)
        else:
            emit(1, DI, idx - 1, None, same, 0, 0)
            cols = (idx - 1,)
        sub = DI if kind == DI else LJ
        has_a1 = kind != LJ and a1.any()
        for c in cols:
            i = c + 1
            b = rows[:, c]
            live = k > c
            if has_a1:
                emit(1, L, 0, live & a1 & (b == 1),
                     lambda r, c=c: self._drop(self._drop(r, c), 0), 2, 2)
                emit(2, L, 0, live & a1 & (b >= 2),
                     lambda r, c=c: self._drop(self._lower(r, c), 0), 1, 2)
            emit(1, sub, i - 1, live & a2 & (b == 1),
                 lambda r, c=c: self._drop(self._lower(r, 0), c), 1, 2)
            sel = live & a2 & (b >= 2)
            if sel.any():
                both = self._lower(rows[sel], 0, c)
                emit(1, sub, i, sel, lambda r, both=both: both, 0, 2)
                emit(1, sub, i - 1, sel, lambda r, both=both: both, 0, 2)

    @staticmethod
    def _build_order(gkey):
        # Same-total links run Lj -> Di and Di(i) -> Di(i-1).
        kind, total, idx = gkey
        rank = {LJ: 0, DI: 1, L: 2}[kind]
        return (-total, rank, -idx)

    def _discover(self):
        while self._requests:
            self._build(min(self._requests, key=self._build_order))

    # evaluation

    def _evaluate(self):
        primes = self.primes
        order = sorted((g for g in self.groups if self.groups[g].values is None),
                       key=self._build_order, reverse=True)
        for gkey in order:
            group = self.groups[gkey]
            vals = np.zeros((len(group.keys), len(primes)), dtype=np.int64)
            if gkey[0] == L:
                k = np.count_nonzero(group.rows, axis=1)
                vals[k == 0] = 1
                one = k == 1
                vals[one] = group.rows[one, :1].astype(np.int64) % primes
            budget = 1
            for coef, tkey, src, keys in group.rules:
                target = self.groups[tkey]
                at = np.searchsorted(target.keys, keys)
                if self.check and not np.array_equal(target.keys[at], keys):
                    raise RuntimeError(f"missing state in group {tkey}")
                if budget + coef >= _HEADROOM:
                    vals %= primes
                    budget = 1
                vals[src] += coef * target.values[at]
                budget += coef
            group.values = vals % primes
            group.rules = []

    def count(self, kind: str = "L", index: int | None = None) -> int:
        if kind not in (L, LJ, DI):
            raise ValueError(f"not a count family: {kind!r}")
        k = len(self.parts)
        if kind == L:
            if index not in (None, 0):
                raise ValueError("L takes no index")
            index = 0
        elif index is None or not 1 <= index <= k:
            raise ValueError(f"index {index} out of range 1..{k}")
        self.groups, self._requests = {}, {}
        row = np.zeros((1, self.width), dtype=self.dtype)
        row[0, :k] = self.parts
        top = _Group(None, None)
        self._emit(top, 1, kind, index, row, np.array([k]), self.n, np.arange(1))
        self._discover()
        self._evaluate()
        (_, gkey, _, keys), = top.rules
        target = self.groups[gkey]
        at = int(np.searchsorted(target.keys, keys)[0])
        residues = [int(v) for v in target.values[at]]
        return _crt(residues, [int(p) for p in self.primes])


def bulk_count(comp, kind: str = "L", index: int | None = None) -> int:
    """One-shot helper around :class:`BulkCounter`."""
    return BulkCounter(comp).count(kind, index)
