"""Partitions, Young tableaux counts, correlated diagrams and the RSK correspondence."""

from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from functools import lru_cache
from math import factorial, prod
from typing import Iterator, Sequence


@dataclass(frozen=True)
class Partition:
    """A nonincreasing tuple of positive integers; trailing zeros are dropped."""

    parts: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        parts = tuple(int(p) for p in self.parts)
        while parts and parts[-1] == 0:
            parts = parts[:-1]
        if any(p <= 0 for p in parts):
            raise ValueError(f"partition parts must be positive: {self.parts!r}")
        if any(a < b for a, b in zip(parts, parts[1:])):
            raise ValueError(f"partition parts must be nonincreasing: {self.parts!r}")
        object.__setattr__(self, "parts", parts)

    @classmethod
    def of(cls, *parts: int) -> "Partition":
        return cls(tuple(parts))

    @property
    def size(self) -> int:
        return sum(self.parts)

    @property
    def height(self) -> int:
        return len(self.parts)

    @property
    def width(self) -> int:
        return self.parts[0] if self.parts else 0

    def __len__(self) -> int:
        return len(self.parts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.parts)

    def __getitem__(self, i: int) -> int:
        return self.parts[i]

    def conjugate(self) -> "Partition":
        return conjugate(self)

    def cells(self) -> Iterator[tuple[int, int]]:
        for i, row in enumerate(self.parts):
            for j in range(row):
                yield i, j

    def __str__(self) -> str:
        return "(" + ",".join(map(str, self.parts)) + ")"


def rectangle(rows: int, cols: int) -> Partition:
    """The partition with `rows` parts all equal to `cols`."""
    return Partition((cols,) * rows)


def conjugate(lam: Partition) -> Partition:
    if not lam.parts:
        return Partition(())
    return Partition(tuple(sum(1 for p in lam.parts if p >= i) for i in range(1, lam.width + 1)))


def dominates(nu: Partition, lam: Partition) -> bool:
    """True iff every prefix sum of `nu` is at least the matching prefix sum of `lam`."""
    if nu.size != lam.size:
        raise ValueError(f"dominance needs equal sizes, got {nu.size} and {lam.size}")
    a = b = 0
    for i in range(max(len(nu), len(lam))):
        a += nu.parts[i] if i < len(nu) else 0
        b += lam.parts[i] if i < len(lam) else 0
        if a < b:
            return False
    return True


@lru_cache(maxsize=None)
def _partitions(n: int, largest: int) -> tuple[tuple[int, ...], ...]:
    if n == 0:
        return ((),)
    out = []
    for first in range(min(n, largest), 0, -1):
        for rest in _partitions(n - first, first):
            out.append((first,) + rest)
    return tuple(out)


def partitions_of(n: int) -> list[Partition]:
    """All partitions of n in reverse lexicographic order, (n) first."""
    return [Partition(p) for p in _partitions(n, n)]


def hook_lengths(lam: Partition) -> list[list[int]]:
    conj = conjugate(lam)
    return [[lam[i] - j + conj[j] - i - 1 for j in range(lam[i])] for i in range(len(lam))]


def syt_count(lam: Partition) -> int:
    """Number of standard Young tableaux of shape `lam` (hook length formula)."""
    hooks = prod(h for row in hook_lengths(lam) for h in row)
    return factorial(lam.size) // hooks


def standard_tableaux(lam: Partition) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Enumerate standard Young tableaux of shape `lam` by placing 1..N in turn."""
    n = lam.size
    rows: list[list[int]] = [[] for _ in lam.parts]

    def place(k: int) -> Iterator[tuple[tuple[int, ...], ...]]:
        if k > n:
            yield tuple(tuple(r) for r in rows)
            return
        for i in range(len(rows)):
            if len(rows[i]) < lam[i] and (i == 0 or len(rows[i - 1]) > len(rows[i])):
                rows[i].append(k)
                yield from place(k + 1)
                rows[i].pop()

    yield from place(1)


def _horizontal_strips(outer: Partition, inner: tuple[int, ...], size: int) -> Iterator[tuple[int, ...]]:
    """Shapes mu with inner <= mu <= outer and mu/inner a horizontal strip of `size` cells."""
    h = len(outer)
    inner = inner + (0,) * (h - len(inner))

    def rec(i: int, left: int, acc: list[int]) -> Iterator[tuple[int, ...]]:
        if i == h:
            if left == 0:
                yield tuple(acc)
            return
        # cells added in row i cannot sit below cells of row i-1 from the old shape
        cap = outer[i] if i == 0 else min(outer[i], inner[i - 1])
        for add in range(min(left, cap - inner[i]), -1, -1):
            acc.append(inner[i] + add)
            yield from rec(i + 1, left - add, acc)
            acc.pop()

    yield from rec(0, size, [])


def semistandard_tableaux(lam: Partition, content: Sequence[int]) -> Iterator[tuple[tuple[int, ...], ...]]:
    """Enumerate SSYT of shape `lam` with the given content.

    Each value v occupies a horizontal strip, so the tableau is grown strip by
    strip; shapes that no longer fit inside `lam` are pruned immediately.
    """
    content = tuple(content)
    if sum(content) != lam.size:
        return

    def rec(v: int, shape: tuple[int, ...], strips: list[tuple[tuple[int, ...], tuple[int, ...]]]):
        if v == len(content):
            if tuple(x for x in shape if x) == lam.parts:
                rows: list[list[int]] = [[] for _ in lam.parts]
                for val, (before, after) in enumerate(strips, start=1):
                    for i in range(len(after)):
                        b = before[i] if i < len(before) else 0
                        rows[i].extend([val] * (after[i] - b))
                yield tuple(tuple(r) for r in rows)
            return
        for nxt in _horizontal_strips(lam, shape, content[v]):
            strips.append((shape, nxt))
            yield from rec(v + 1, nxt, strips)
            strips.pop()

    yield from rec(0, (), [])


def kostka(lam: Partition, content: Sequence[int]) -> int:
    """Number of semistandard tableaux of shape `lam` and content `content`."""
    if sum(content) != lam.size:
        raise ValueError("content size differs from partition size")
    return sum(1 for _ in semistandard_tableaux(lam, content))


@dataclass(frozen=True)
class CorrelatedDiagram:
    """A d x d matrix of nonnegative integers whose row and column sums all equal n."""

    n: int
    d: int
    counts: tuple[tuple[int, ...], ...]

    def __post_init__(self) -> None:
        counts = tuple(tuple(int(x) for x in row) for row in self.counts)
        object.__setattr__(self, "counts", counts)
        if len(counts) != self.d or any(len(r) != self.d for r in counts):
            raise ValueError(f"diagram must be {self.d}x{self.d}")
        if any(x < 0 for r in counts for x in r):
            raise ValueError("diagram entries must be nonnegative")
        if any(sum(r) != self.n for r in counts):
            raise ValueError(f"every row sum must equal n={self.n}")
        if any(sum(r[j] for r in counts) != self.n for j in range(self.d)):
            raise ValueError(f"every column sum must equal n={self.n}")

    @classmethod
    def from_counts(cls, counts: Sequence[Sequence[int]]) -> "CorrelatedDiagram":
        d = len(counts)
        n = sum(counts[0]) if d else 0
        return cls(n, d, tuple(tuple(r) for r in counts))


def diagonal_partition(diagram: CorrelatedDiagram) -> Partition:
    return Partition(tuple(sorted((x for row in diagram.counts for x in row if x), reverse=True)))


def correlated_diagrams(n: int, d: int) -> Iterator[CorrelatedDiagram]:
    """All (d, n)-correlated diagrams in lexicographic row-major order."""
    def compositions(total: int, caps: list[int], j: int = 0) -> Iterator[tuple[int, ...]]:
        if j == len(caps) - 1:
            if total <= caps[j]:
                yield (total,)
            return
        for x in range(0, min(total, caps[j]) + 1):
            for rest in compositions(total - x, caps, j + 1):
                yield (x,) + rest

    def rows(i: int, caps: list[int], acc: list[tuple[int, ...]]) -> Iterator[CorrelatedDiagram]:
        if i == d:
            yield CorrelatedDiagram(n, d, tuple(acc))
            return
        for row in compositions(n, caps):
            acc.append(row)
            yield from rows(i + 1, [c - x for c, x in zip(caps, row)], acc)
            acc.pop()

    if d == 0:
        return
    yield from rows(0, [n] * d, [])


def _insert(p: list[list[int]], x: int) -> int:
    """Row-insert x into P (weakly increasing rows); returns the row where a box was added."""
    r = 0
    while True:
        if r == len(p):
            p.append([x])
            return r
        row = p[r]
        k = bisect_right(row, x)
        if k == len(row):
            row.append(x)
            return r
        row[k], x = x, row[k]
        r += 1


def rsk(diagram: CorrelatedDiagram) -> tuple[tuple[tuple[int, ...], ...], tuple[tuple[int, ...], ...]]:
    """Knuth's RSK on a nonnegative integer matrix.

    The biword lists (i, j) with multiplicity counts[i][j] in lexicographic
    order; j is row-inserted into P and i recorded in Q (both 1-indexed).
    """
    p: list[list[int]] = []
    q: list[list[int]] = []
    for i, row in enumerate(diagram.counts, start=1):
        for j, mult in enumerate(row, start=1):
            for _ in range(mult):
                r = _insert(p, j)
                if r == len(q):
                    q.append([])
                q[r].append(i)
    return tuple(map(tuple, p)), tuple(map(tuple, q))


def _is_semistandard(t: Sequence[Sequence[int]]) -> bool:
    for row in t:
        if any(a > b for a, b in zip(row, row[1:])):
            return False
    for upper, lower in zip(t, t[1:]):
        if len(lower) > len(upper) or any(lower[c] <= upper[c] for c in range(len(lower))):
            return False
    return True


def rsk_inverse(p: Sequence[Sequence[int]], q: Sequence[Sequence[int]], n: int, d: int) -> CorrelatedDiagram:
    """Recover the diagram from an SSYT pair of equal shape and content n^d."""
    shape_p = [len(r) for r in p]
    if shape_p != [len(r) for r in q]:
        raise ValueError("P and Q must have the same shape")
    for name, t in (("P", p), ("Q", q)):
        if not _is_semistandard(t):
            raise ValueError(f"{name} is not semistandard")
        flat = [x for r in t for x in r]
        if sorted(flat) != [v for v in range(1, d + 1) for _ in range(n)]:
            raise ValueError(f"{name} must have content {n}^{d}")
    pp = [list(r) for r in p]
    qq = [list(r) for r in q]
    counts = [[0] * d for _ in range(d)]
    for _ in range(n * d):
        # newest box: largest entry of Q, rightmost among ties
        best = max(range(len(qq)), key=lambda r: (qq[r][-1], len(qq[r])) if qq[r] else (-1, 0))
        i = qq[best].pop()
        x = pp[best].pop()
        for r in range(best - 1, -1, -1):
            row = pp[r]
            k = bisect_left(row, x) - 1
            row[k], x = x, row[k]
        if not pp[best]:
            pp.pop(best)
            qq.pop(best)
        counts[i - 1][x - 1] += 1
    return CorrelatedDiagram(n, d, tuple(map(tuple, counts)))


def count_ssyt_pairs(n: int, d: int) -> int:
    """Sum over shapes of K(lam, n^d)^2: the number of RSK images of (d, n)-diagrams."""
    content = (n,) * d
    return sum(kostka(lam, content) ** 2 for lam in partitions_of(n * d) if len(lam) <= d)
