"""Brute-force reference implementations used to cross-check the library."""

from __future__ import annotations

from fractions import Fraction
from itertools import permutations, product
from math import factorial


def brute_syt_count(shape: tuple[int, ...]) -> int:
    """Count fillings of the shape by 1..N with increasing rows and columns, by permutations."""
    size = sum(shape)
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
    count = 0
    for perm in permutations(range(1, size + 1)):
        fill = dict(zip(cells, perm))
        if all(fill[(i, j)] < fill[(i, j + 1)] for i, j in cells if (i, j + 1) in fill) and \
           all(fill[(i, j)] < fill[(i + 1, j)] for i, j in cells if (i + 1, j) in fill):
            count += 1
    return count


def brute_kostka(shape: tuple[int, ...], content: tuple[int, ...]) -> int:
    """Count semistandard fillings by trying every word with the given content."""
    cells = [(i, j) for i, r in enumerate(shape) for j in range(r)]
    if len(cells) != sum(content):
        return 0
    letters = [v for v, m in enumerate(content, start=1) for _ in range(m)]
    seen = set()
    for word in set(permutations(letters)):
        fill = dict(zip(cells, word))
        if all(fill[(i, j)] <= fill[(i, j + 1)] for i, j in cells if (i, j + 1) in fill) and \
           all(fill[(i, j)] < fill[(i + 1, j)] for i, j in cells if (i + 1, j) in fill):
            seen.add(word)
    return len(seen)


def brute_diagram_count(n: int, d: int) -> int:
    """Nonnegative integer d x d matrices with all line sums n."""
    return sum(1 for entries in product(range(n + 1), repeat=d * d)
               if all(sum(entries[i * d:(i + 1) * d]) == n for i in range(d))
               and all(sum(entries[i * d + j] for i in range(d)) == n for j in range(d)))


def leibniz_det(m) -> Fraction:
    size = len(m)
    total = Fraction(0)
    for perm in permutations(range(size)):
        inv = sum(1 for a in range(size) for b in range(a + 1, size) if perm[a] > perm[b])
        term = Fraction(-1 if inv % 2 else 1)
        for i in range(size):
            term *= m[i][perm[i]]
        total += term
    return total


def multinomial(total: int, parts: list[int]) -> int:
    out = factorial(total)
    for p in parts:
        out //= factorial(p)
    return out


def rational_rank(rows) -> int:
    """Rank by textbook Gaussian elimination over Fractions."""
    m = [[Fraction(x) for x in r] for r in rows]
    rank = 0
    cols = len(m[0]) if m else 0
    for c in range(cols):
        piv = next((i for i in range(rank, len(m)) if m[i][c] != 0), None)
        if piv is None:
            continue
        m[rank], m[piv] = m[piv], m[rank]
        for i in range(len(m)):
            if i != rank and m[i][c] != 0:
                f = m[i][c] / m[rank][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[rank])]
        rank += 1
    return rank
