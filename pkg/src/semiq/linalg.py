"""Exact rank computations over the rationals.

`SparseEchelon` keeps integer rows in echelon form with fraction-free updates
(each row scaled to a primitive integer vector after every elimination).
`ModularRank` is a dense rank tracker modulo a prime; for integer vectors the
rank mod p never exceeds the rank over Q, so reaching full rank mod p proves
full rank over Q.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd, lcm
from numbers import Rational
from typing import Callable, Hashable, Iterable, Mapping

import numpy as np

# largest prime below 2**20: products of residues stay below 2**40 and sums of
# up to 2**12 of them stay exact in float64
DEFAULT_PRIME = 1048573


def integer_row(vec: Mapping[Hashable, Rational]) -> dict[Hashable, int]:
    """Scale a rational vector to a primitive integer vector with the same span."""
    items = [(k, Fraction(v)) for k, v in vec.items() if v]
    if not items:
        return {}
    den = lcm(*(v.denominator for _, v in items))
    out = {k: int(v * den) for k, v in items}
    g = 0
    for v in out.values():
        g = gcd(g, v)
    return {k: v // g for k, v in out.items()}


class SparseEchelon:
    """Incremental row echelon form over Z (equivalently Q) for sparse vectors.

    The pivot of a row is its smallest column under `key`; eliminating a pivot
    only introduces columns that sort after it, so reduction terminates.
    """

    def __init__(self, key: Callable[[Hashable], object] | None = None):
        self.key = key if key is not None else (lambda c: c)
        self.pivots: dict[Hashable, dict[Hashable, int]] = {}

    @property
    def rank(self) -> int:
        return len(self.pivots)

    def reduce(self, vec: Mapping[Hashable, Rational]) -> dict[Hashable, int]:
        row = integer_row(vec)
        key = self.key
        pivots = self.pivots
        while row:
            lead = min(row, key=key)
            prow = pivots.get(lead)
            if prow is None:
                return row
            a = prow[lead]
            b = row[lead]
            g = gcd(a, b)
            fa, fb = a // g, b // g
            new = {k: fa * v for k, v in row.items()}
            for k, v in prow.items():
                w = new.get(k, 0) - fb * v
                if w:
                    new[k] = w
                else:
                    new.pop(k, None)
            c = 0
            for v in new.values():
                c = gcd(c, v)
                if c == 1:
                    break
            row = {k: v // c for k, v in new.items()} if c > 1 else new
        return row

    def add(self, vec: Mapping[Hashable, Rational]) -> bool:
        """Insert a vector; True iff it was independent of the rows so far."""
        row = self.reduce(vec)
        if not row:
            return False
        lead = min(row, key=self.key)
        if row[lead] < 0:
            row = {k: -v for k, v in row.items()}
        self.pivots[lead] = row
        return True

    def contains(self, vec: Mapping[Hashable, Rational]) -> bool:
        return not self.reduce(vec)


def rank_of(vectors: Iterable[Mapping[Hashable, Rational]], key: Callable | None = None) -> int:
    ech = SparseEchelon(key)
    for v in vectors:
        ech.add(v)
    return ech.rank


class ModularRank:
    """Reduced row echelon form modulo a prime for dense vectors of fixed length."""

    def __init__(self, dim: int, prime: int = DEFAULT_PRIME):
        if dim > 4096:
            raise ValueError("ModularRank supports dimensions up to 4096")
        self.dim = dim
        self.p = prime
        self.basis = np.zeros((0, dim), dtype=np.float64)
        self.pivot_cols: list[int] = []

    @property
    def rank(self) -> int:
        return len(self.pivot_cols)

    @property
    def full(self) -> bool:
        return self.rank == self.dim

    def _mod(self, a: np.ndarray) -> np.ndarray:
        return np.mod(a, self.p)

    def add_batch(self, rows: np.ndarray) -> int:
        """Insert integer rows (shape k x dim); returns how many raised the rank.

        The batch is reduced against the basis with one matrix product, brought
        to reduced echelon form on its own, and then the new pivot columns are
        cleared from the old basis with a second product.
        """
        p = self.p
        v = self._mod(np.asarray(rows, dtype=np.float64))
        if v.ndim == 1:
            v = v[None, :]
        if self.pivot_cols:
            v = self._mod(v - self._mod(v[:, self.pivot_cols] @ self.basis))
        new_rows: list[np.ndarray] = []
        new_cols: list[int] = []
        room = self.dim - self.rank
        for r in range(v.shape[0]):
            if len(new_rows) == room:
                break
            row = v[r]
            nz = np.flatnonzero(row)
            if nz.size == 0:
                continue
            col = int(nz[0])
            inv = pow(int(row[col]), p - 2, p)
            row = self._mod(row * inv)
            rest = v[r + 1:]
            if rest.shape[0]:
                f = rest[:, col]
                hit = np.flatnonzero(f)
                if hit.size:
                    rest[hit] = self._mod(rest[hit] - self._mod(np.outer(f[hit], row)))
            for k, prev in enumerate(new_rows):
                if prev[col]:
                    new_rows[k] = self._mod(prev - self._mod(prev[col] * row))
            new_rows.append(row)
            new_cols.append(col)
        if not new_rows:
            return 0
        block = np.vstack(new_rows)
        if self.basis.shape[0]:
            self.basis = self._mod(self.basis - self._mod(self.basis[:, new_cols] @ block))
        self.basis = np.vstack([self.basis, block])
        self.pivot_cols.extend(new_cols)
        return len(new_rows)
