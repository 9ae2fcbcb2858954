"""Bracket monomials, correlated tableaux and formal rational combinations of them.

A basis element of P(d) (x) P(d)-bar is keyed by its correlated tableau C.  The
element a key stands for is S_C (x) T_C, where S_C reads the rows of C left to
right and T_C reads the columns of C top to bottom, each cell in ascending
order.  Every other ordering of the same pair differs from the key by a sign,
which conversions return explicitly.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from itertools import combinations
from math import factorial, prod
from numbers import Rational
from typing import Iterable, Iterator, Mapping, Sequence

from .combinatorics import CorrelatedDiagram, correlated_diagrams

Rows = tuple[tuple[int, ...], ...]
Cells = tuple[tuple[tuple[int, ...], ...], ...]


def permutation_sign(seq: Sequence[int]) -> int:
    """Sign of the permutation sorting `seq` (distinct entries), by inversion count."""
    inv = 0
    for i in range(len(seq)):
        a = seq[i]
        for j in range(i + 1, len(seq)):
            if seq[j] < a:
                inv += 1
    return -1 if inv & 1 else 1


def sort_row(row: Sequence[int]) -> tuple[tuple[int, ...], int]:
    """Sort one bracket; the sign is 0 when the bracket has a repeated entry."""
    srt = tuple(sorted(row))
    for a, b in zip(srt, srt[1:]):
        if a == b:
            return srt, 0
    return srt, permutation_sign(row)


def sort_rows(rows: Iterable[Sequence[int]]) -> tuple[Rows, int]:
    out = []
    sign = 1
    for row in rows:
        srt, s = sort_row(row)
        if s == 0:
            return (), 0
        sign *= s
        out.append(srt)
    return tuple(out), sign


def _relative_sign(raw: Sequence[int], ref: Sequence[int]) -> int:
    pos = {x: i for i, x in enumerate(ref)}
    return permutation_sign([pos[x] for x in raw])


@dataclass(frozen=True)
class BracketMonomial:
    """sign * [rows[0]] o [rows[1]] o ...; each row strictly ascending, entries exactly [dn]."""

    n: int
    d: int
    rows: Rows
    sign: int = 1

    @property
    def labels(self) -> int:
        return self.n * self.d

    def with_sign(self, sign: int) -> "BracketMonomial":
        return BracketMonomial(self.n, self.d, self.rows, sign)

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "rows": [list(r) for r in self.rows], "sign": self.sign}

    @classmethod
    def from_json(cls, obj: Mapping) -> "BracketMonomial | None":
        mono = normalize_bracket_rows(obj["rows"], n=obj.get("n"), d=obj.get("d"))
        if mono is None:
            return None
        return mono.with_sign(mono.sign * int(obj.get("sign", 1)))


def normalize_bracket_rows(rows: Sequence[Sequence[int]], n: int | None = None,
                           d: int | None = None) -> BracketMonomial | None:
    """Sort every bracket and track the sign; None stands for the zero monomial.

    Raises ValueError on ragged input, entries outside [dn], or a label that
    appears in two different rows (not repetition-free).
    """
    rows = [tuple(int(x) for x in r) for r in rows]
    d = len(rows) if d is None else d
    n = (len(rows[0]) if rows else 0) if n is None else n
    if len(rows) != d or any(len(r) != n for r in rows):
        raise ValueError(f"expected {d} rows of length {n}")
    top = n * d
    if any(x < 1 or x > top for r in rows for x in r):
        raise ValueError(f"entries must lie in [1, {top}]")
    srt, sign = sort_rows(rows)
    if sign == 0:
        return None
    flat = [x for r in srt for x in r]
    if len(set(flat)) != top:
        raise ValueError("a label is repeated across different rows")
    return BracketMonomial(n, d, srt, sign)


def monomials(n: int, d: int) -> Iterator[Rows]:
    """All normalized repetition-free d x n monomials, lexicographically."""
    def rec(remaining: tuple[int, ...], acc: list[tuple[int, ...]]) -> Iterator[Rows]:
        if not remaining:
            yield tuple(acc)
            return
        for row in combinations(remaining, n):
            rs = set(row)
            acc.append(row)
            yield from rec(tuple(x for x in remaining if x not in rs), acc)
            acc.pop()

    yield from rec(tuple(range(1, n * d + 1)), [])


def monomial_count(n: int, d: int) -> int:
    return factorial(n * d) // factorial(n) ** d


class CorrelatedTableau:
    """A d x d grid of disjoint label sets partitioning [dn], row and column unions of size n."""

    __slots__ = ("n", "d", "cells", "_hash")

    def __init__(self, n: int, d: int, cells: Iterable[Iterable[Iterable[int]]], check: bool = True):
        self.n = n
        self.d = d
        self.cells: Cells = tuple(tuple(tuple(sorted(c)) for c in row) for row in cells)
        self._hash = hash(self.cells)
        if check:
            self._validate()

    def _validate(self) -> None:
        n, d, cells = self.n, self.d, self.cells
        if len(cells) != d or any(len(r) != d for r in cells):
            raise ValueError(f"cells must form a {d}x{d} grid")
        flat = [x for r in cells for c in r for x in c]
        if sorted(flat) != list(range(1, n * d + 1)):
            raise ValueError(f"cells must partition [1, {n * d}]")
        for i in range(d):
            if sum(len(c) for c in cells[i]) != n:
                raise ValueError(f"row {i + 1} does not hold {n} labels")
            if sum(len(cells[k][i]) for k in range(d)) != n:
                raise ValueError(f"column {i + 1} does not hold {n} labels")

    def __eq__(self, other: object) -> bool:
        return isinstance(other, CorrelatedTableau) and self.cells == other.cells

    def __hash__(self) -> int:
        return self._hash

    def __lt__(self, other: "CorrelatedTableau") -> bool:
        return self.cells < other.cells

    def __repr__(self) -> str:
        body = " | ".join(" ".join("{" + ",".join(map(str, c)) + "}" if c else "{}" for c in r)
                          for r in self.cells)
        return f"CorrelatedTableau(n={self.n}, d={self.d}: {body})"

    def shape(self) -> CorrelatedDiagram:
        return CorrelatedDiagram(self.n, self.d, tuple(tuple(len(c) for c in r) for r in self.cells))

    def shape_counts(self) -> tuple[tuple[int, ...], ...]:
        return tuple(tuple(len(c) for c in r) for r in self.cells)

    def left_rows(self) -> Rows:
        """Rows of S_C: row i of C read left to right."""
        return tuple(tuple(x for c in r for x in c) for r in self.cells)

    def right_rows(self) -> Rows:
        """Rows of T_C: column j of C read top to bottom."""
        d = self.d
        return tuple(tuple(x for i in range(d) for x in self.cells[i][j]) for j in range(d))

    def positions(self) -> dict[int, tuple[int, int]]:
        return {x: (i, j) for i, r in enumerate(self.cells) for j, c in enumerate(r) for x in c}

    def relabel(self, sigma: Sequence[int]) -> "CorrelatedTableau":
        """Replace every label k by sigma[k-1]."""
        out = object.__new__(CorrelatedTableau)
        out.n, out.d = self.n, self.d
        out.cells = tuple(tuple(c if not c else (sigma[c[0] - 1],) if len(c) == 1
                                else tuple(sorted(sigma[x - 1] for x in c)) for c in r)
                          for r in self.cells)
        out._hash = hash(out.cells)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "cells": [[list(c) for c in r] for r in self.cells]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "CorrelatedTableau":
        return cls(int(obj["n"]), int(obj["d"]), obj["cells"])


def pair_to_tableau(left: Sequence[Sequence[int]], right: Sequence[Sequence[int]],
                    n: int, d: int) -> tuple[CorrelatedTableau | None, int]:
    """Key of the tensor left (x) right given as raw (unsorted) rows, and its sign.

    Returns (None, 0) when some bracket repeats a label.
    """
    col_of = {}
    for j, row in enumerate(right):
        for x in row:
            col_of[x] = j
    grid: list[list[list[int]]] = [[[] for _ in range(d)] for _ in range(d)]
    for i, row in enumerate(left):
        gi = grid[i]
        for x in row:
            gi[col_of[x]].append(x)
    cells = tuple(tuple(tuple(sorted(c)) for c in r) for r in grid)
    sign = 1
    for i, row in enumerate(left):
        if len(set(row)) != len(row):
            return None, 0
        ref = [x for c in cells[i] for x in c]
        sign *= _relative_sign(row, ref)
    for j, row in enumerate(right):
        if len(set(row)) != len(row):
            return None, 0
        ref = [x for i in range(d) for x in cells[i][j]]
        sign *= _relative_sign(row, ref)
    return CorrelatedTableau(n, d, cells, check=False), sign


def to_correlated(s: BracketMonomial, t: BracketMonomial) -> tuple[CorrelatedTableau, int]:
    """Correlated tableau of S (x) T-bar and the sign with S (x) T-bar = sign * key."""
    if (s.n, s.d) != (t.n, t.d):
        raise ValueError("left and right monomials have different (n, d)")
    c, sign = pair_to_tableau(s.rows, t.rows, s.n, s.d)
    return c, sign * s.sign * t.sign


def from_correlated(c: CorrelatedTableau) -> tuple[BracketMonomial, BracketMonomial]:
    """Read S along the rows and T-bar down the columns, then normalize each."""
    s = normalize_bracket_rows(c.left_rows(), c.n, c.d)
    t = normalize_bracket_rows(c.right_rows(), c.n, c.d)
    assert s is not None and t is not None
    return s, t


def correlated_tableaux(n: int, d: int, diagrams: Iterable[CorrelatedDiagram] | None = None
                        ) -> Iterator[CorrelatedTableau]:
    """Every correlated tableau: diagrams in lexicographic order, then label sets lexicographically."""
    cells_order = [(i, j) for i in range(d) for j in range(d)]
    for diag in (correlated_diagrams(n, d) if diagrams is None else diagrams):
        sizes = [diag.counts[i][j] for i, j in cells_order]

        def rec(k: int, remaining: tuple[int, ...], acc: list[tuple[int, ...]]) -> Iterator[CorrelatedTableau]:
            if k == len(sizes):
                yield CorrelatedTableau(n, d, (acc[r * d:(r + 1) * d] for r in range(d)), check=False)
                return
            for chosen in combinations(remaining, sizes[k]):
                cs = set(chosen)
                acc.append(chosen)
                yield from rec(k + 1, tuple(x for x in remaining if x not in cs), acc)
                acc.pop()

        yield from rec(0, tuple(range(1, n * d + 1)), [])


def diagram_tableau_count(diag: CorrelatedDiagram) -> int:
    return factorial(diag.n * diag.d) // prod(factorial(x) for r in diag.counts for x in r)


class Expression:
    """A finite rational combination of correlated tableaux with fixed (n, d)."""

    __slots__ = ("n", "d", "terms")

    def __init__(self, n: int, d: int, terms: Mapping[CorrelatedTableau, Rational] | None = None):
        self.n = n
        self.d = d
        self.terms: dict[CorrelatedTableau, Rational] = {}
        if terms:
            for key, coeff in terms.items():
                self.add_term(key, coeff)

    @classmethod
    def of(cls, c: CorrelatedTableau, coeff: Rational = 1) -> "Expression":
        return cls(c.n, c.d, {c: coeff})

    def add_term(self, key: CorrelatedTableau, coeff: Rational) -> None:
        if (key.n, key.d) != (self.n, self.d):
            raise ValueError("tableau dimensions differ from the expression's")
        if not coeff:
            return
        new = self.terms.get(key, 0) + coeff
        if new:
            self.terms[key] = new
        else:
            del self.terms[key]

    def merge(self, other: "Expression", scale: Rational = 1) -> "Expression":
        """In-place self += scale * other; returns self."""
        self._check(other)
        if scale:
            for key, coeff in other.terms.items():
                self.add_term(key, scale * coeff)
        return self

    def _check(self, other: "Expression") -> None:
        if (other.n, other.d) != (self.n, self.d):
            raise ValueError("expressions have different (n, d)")

    def copy(self) -> "Expression":
        out = Expression(self.n, self.d)
        out.terms = dict(self.terms)
        return out

    def __add__(self, other: "Expression") -> "Expression":
        return self.copy().merge(other)

    def __sub__(self, other: "Expression") -> "Expression":
        return self.copy().merge(other, -1)

    def __neg__(self) -> "Expression":
        return self * -1

    def __mul__(self, scalar: Rational) -> "Expression":
        out = Expression(self.n, self.d)
        if scalar:
            out.terms = {k: v * scalar for k, v in self.terms.items()}
        return out

    __rmul__ = __mul__

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, Expression) and (self.n, self.d) == (other.n, other.d)
                and self.terms == other.terms)

    def __len__(self) -> int:
        return len(self.terms)

    def __iter__(self) -> Iterator[CorrelatedTableau]:
        return iter(self.terms)

    def items(self):
        return self.terms.items()

    def is_zero(self) -> bool:
        return not self.terms

    def relabel(self, sigma: Sequence[int]) -> "Expression":
        out = Expression(self.n, self.d)
        for key, coeff in self.terms.items():
            out.add_term(key.relabel(sigma), coeff)
        return out

    def __repr__(self) -> str:
        return f"Expression(n={self.n}, d={self.d}, {len(self.terms)} terms)"

    def to_json(self) -> dict:
        terms = sorted(self.terms.items(), key=lambda kv: kv[0].cells)
        return {"n": self.n, "d": self.d,
                "terms": [{"tableau": k.to_json(), "coeff": format_fraction(v)} for k, v in terms]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "Expression":
        out = cls(int(obj["n"]), int(obj["d"]))
        for term in obj["terms"]:
            out.add_term(CorrelatedTableau.from_json(term["tableau"]), parse_fraction(term["coeff"]))
        return out


def format_fraction(x: Rational) -> str:
    f = Fraction(x)
    return f"{f.numerator}/{f.denominator}"


def parse_fraction(s: str | int) -> Fraction:
    if isinstance(s, bool) or not isinstance(s, (str, int)):
        raise ValueError(f"expected a fraction string, got {s!r}")
    if isinstance(s, str) and any(ch in s for ch in ".eE"):
        raise ValueError(f"decimal coefficients are not accepted: {s!r}")
    return Fraction(s)


@dataclass(frozen=True)
class BipartiteMultigraph:
    """Left vertices 0..d-1 (rows of C), right vertices 0..d-1 (columns); one edge per label."""

    n: int
    d: int
    edges: tuple[tuple[int, int, int], ...]

    def left_degrees(self) -> list[int]:
        deg = [0] * self.d
        for _, i, _ in self.edges:
            deg[i] += 1
        return deg

    def right_degrees(self) -> list[int]:
        deg = [0] * self.d
        for _, _, j in self.edges:
            deg[j] += 1
        return deg

    def multiplicity(self, i: int, j: int) -> int:
        return sum(1 for _, a, b in self.edges if (a, b) == (i, j))

    def endpoints(self) -> dict[int, tuple[int, int]]:
        return {label: (i, j) for label, i, j in self.edges}

    def is_connected(self) -> bool:
        return _connected(self.d, [(i, j) for _, i, j in self.edges])


def graph_of(c: CorrelatedTableau) -> BipartiteMultigraph:
    edges = sorted((x, i, j) for i, r in enumerate(c.cells) for j, cell in enumerate(r) for x in cell)
    return BipartiteMultigraph(c.n, c.d, tuple(edges))


def _connected(d: int, pairs: Iterable[tuple[int, int]]) -> bool:
    parent = list(range(2 * d))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    used = set()
    for i, j in pairs:
        used.update((i, d + j))
        ra, rb = find(i), find(d + j)
        if ra != rb:
            parent[ra] = rb
    return len({find(v) for v in used}) <= 1


class Connectivity(enum.Enum):
    DISCONNECTED = "Disconnected"
    CONNECTED_SIMPLE = "ConnectedSimple"
    CONNECTED_MULTI = "ConnectedMulti"


def classify_counts(counts: Sequence[Sequence[int]]) -> Connectivity:
    return _classify_cached(tuple(tuple(r) for r in counts))


@lru_cache(maxsize=1 << 16)
def _classify_cached(counts: tuple[tuple[int, ...], ...]) -> Connectivity:
    d = len(counts)
    pairs = [(i, j) for i in range(d) for j in range(d) if counts[i][j]]
    if not _connected(d, pairs):
        return Connectivity.DISCONNECTED
    if all(x <= 1 for r in counts for x in r):
        return Connectivity.CONNECTED_SIMPLE
    return Connectivity.CONNECTED_MULTI


def classify(c: CorrelatedTableau) -> Connectivity:
    return classify_counts(c.shape_counts())


def components(c: CorrelatedTableau) -> list[tuple[list[int], list[int]]]:
    """Connected components as (rows, columns) index lists, ordered by smallest row."""
    d = c.d
    adj: dict[int, set[int]] = {v: set() for v in range(2 * d)}
    for i in range(d):
        for j in range(d):
            if c.cells[i][j]:
                adj[i].add(d + j)
                adj[d + j].add(i)
    seen: set[int] = set()
    out = []
    for start in range(2 * d):
        if start in seen:
            continue
        stack, comp = [start], set()
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        seen |= comp
        out.append((sorted(v for v in comp if v < d), sorted(v - d for v in comp if v >= d)))
    return out


def _check_perm(sigma: Sequence[int], size: int) -> None:
    if sorted(sigma) != list(range(1, size + 1)):
        raise ValueError(f"not a permutation of [1, {size}]: {list(sigma)!r}")


def diagonal_action(c: CorrelatedTableau, sigma: Sequence[int]) -> tuple[CorrelatedTableau, int]:
    """Relabel every k as sigma(k); a swap inside one cell flips both factors, so the sign is +1."""
    _check_perm(sigma, c.n * c.d)
    return c.relabel(sigma), 1


def bimodule_action(c: CorrelatedTableau, sigma: Sequence[int], tau: Sequence[int]
                    ) -> tuple[CorrelatedTableau, int]:
    """(sigma, tau) . (S_C (x) T_C) = S_C^sigma (x) T_C^tau, rewritten as sign * key."""
    size = c.n * c.d
    _check_perm(sigma, size)
    _check_perm(tau, size)
    left = [tuple(sigma[x - 1] for x in r) for r in c.left_rows()]
    right = [tuple(tau[x - 1] for x in r) for r in c.right_rows()]
    key, sign = pair_to_tableau(left, right, c.n, c.d)
    assert key is not None
    return key, sign


def bimodule_action_expr(expr: Expression, sigma: Sequence[int], tau: Sequence[int]) -> Expression:
    out = Expression(expr.n, expr.d)
    for key, coeff in expr.items():
        img, sign = bimodule_action(key, sigma, tau)
        out.add_term(img, sign * coeff)
    return out


def bilinear_form(a: Expression, b: Expression) -> Fraction:
    """The form making the basis tableaux orthonormal."""
    if (a.n, a.d) != (b.n, b.d):
        raise ValueError("expressions have different (n, d)")
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    return Fraction(sum(coeff * big.terms[k] for k, coeff in small.items() if k in big.terms))
