"""Plucker relations, straightening to standard monomials, and canonical forms modulo ker(phi).

Single-factor combinations (elements of P(d)) are plain dicts mapping
normalized rows to integer or rational coefficients.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import combinations, product
from math import lcm
from numbers import Rational
from typing import Iterable, Iterator, Literal, Mapping, Sequence

import numpy as np

from .combinatorics import rectangle, syt_count
from .linalg import SparseEchelon
from .tableaux import (BracketMonomial, CorrelatedTableau, Expression, Rows, format_fraction,
                       monomial_count, monomials, pair_to_tableau, sort_rows)

FactorCombination = dict[Rows, Rational]


class StraighteningError(RuntimeError):
    pass


def _add(target: dict, key, coeff) -> None:
    v = target.get(key, 0) + coeff
    if v:
        target[key] = v
    else:
        target.pop(key, None)


def is_standard(rows: Rows | BracketMonomial) -> bool:
    """Rows ascending and every column strictly increasing top to bottom."""
    if isinstance(rows, BracketMonomial):
        rows = rows.rows
    for row in rows:
        if any(a >= b for a, b in zip(row, row[1:])):
            return False
    for upper, lower in zip(rows, rows[1:]):
        if any(a >= b for a, b in zip(upper, lower)):
            return False
    return True


def _exchange(rows: Rows, r: int, k: int) -> Iterator[tuple[Rows, int]]:
    """Terms of pi_{r+1,k}: the first k entries of row r+1 trade places with k entries of row r."""
    a, b = rows[r], rows[r + 1]
    n = len(a)
    for chosen in combinations(range(n), k):
        new_a = list(a)
        for idx, pos in enumerate(chosen):
            new_a[pos] = b[idx]
        new_b = [a[pos] for pos in chosen] + list(b[k:])
        out, sign = sort_rows(rows[:r] + (tuple(new_a), tuple(new_b)) + rows[r + 2:])
        if sign:
            yield out, sign


def pi_jk(t: BracketMonomial, j: int, k: int) -> FactorCombination:
    """pi_{j,k}(T) with 1-indexed row j, as a normalized combination."""
    if not 1 <= j <= t.d - 1:
        raise ValueError(f"row index j={j} outside [1, {t.d - 1}]")
    if not 1 <= k <= t.n:
        raise ValueError(f"count k={k} outside [1, {t.n}]")
    out: FactorCombination = {}
    for rows, sign in _exchange(t.rows, j - 1, k):
        _add(out, rows, sign * t.sign)
    return out


def order_key(rows: Rows) -> tuple:
    """Total order on monomials that every straightening step strictly increases.

    Rows are compared from the bottom up, each row by its entries in
    decreasing order.
    """
    return tuple(tuple(sorted(r, reverse=True)) for r in reversed(rows))


_memo: dict[Rows, dict[Rows, int]] = {}
_memo_lock = threading.Lock()
MAX_STRAIGHTEN_DEPTH = 10_000


def _first_violation(rows: Rows) -> tuple[int, int] | None:
    for r in range(len(rows) - 1):
        upper, lower = rows[r], rows[r + 1]
        for c in range(len(upper)):
            if upper[c] > lower[c]:
                return r, c
    return None


def straighten_rows(rows: Rows) -> dict[Rows, int]:
    """Standard-monomial expansion of a normalized monomial modulo K(d).

    At the first column descent rows[r][c] > rows[r+1][c], the relation
    T = pi_{r+1,c+1}(T) replaces T by monomials that are strictly larger under
    `order_key`, so the recursion bottoms out at standard monomials.
    """
    hit = _memo.get(rows)
    if hit is not None:
        return hit
    stack = [rows]
    depth_guard = 0
    while stack:
        depth_guard += 1
        if depth_guard > MAX_STRAIGHTEN_DEPTH * 100:
            raise StraighteningError("straightening exceeded its iteration cap")
        cur = stack[-1]
        if cur in _memo:
            stack.pop()
            continue
        viol = _first_violation(cur)
        if viol is None:
            _memo[cur] = {cur: 1}
            stack.pop()
            continue
        r, c = viol
        terms = list(_exchange(cur, r, c + 1))
        pending = [t for t, _ in terms if t not in _memo]
        if pending:
            base = order_key(cur)
            for t in pending:
                if order_key(t) <= base:
                    raise StraighteningError(f"straightening order did not increase at {cur}")
            if len(stack) > MAX_STRAIGHTEN_DEPTH:
                raise StraighteningError("straightening recursion too deep")
            stack.extend(pending)
            continue
        acc: dict[Rows, int] = {}
        for t, sign in terms:
            for std, coeff in _memo[t].items():
                _add(acc, std, sign * coeff)
        with _memo_lock:
            _memo[cur] = acc
        stack.pop()
    return _memo[rows]


def straighten(t: BracketMonomial) -> FactorCombination:
    return {rows: t.sign * coeff for rows, coeff in straighten_rows(t.rows).items()}


def straighten_combination(comb: Mapping[Rows, Rational]) -> FactorCombination:
    out: FactorCombination = {}
    for rows, coeff in comb.items():
        for std, c in straighten_rows(rows).items():
            _add(out, std, coeff * c)
    return out


def single_relations(n: int, d: int) -> Iterator[tuple[Rows, int, int, FactorCombination]]:
    """(T, j, k, T - pi_{j,k}(T)) for every monomial T, j in [d-1], k in [n]; zero ones skipped."""
    for rows in monomials(n, d):
        t = BracketMonomial(n, d, rows)
        for j in range(1, d):
            for k in range(1, n + 1):
                rel: FactorCombination = {rows: 1}
                for other, c in pi_jk(t, j, k).items():
                    _add(rel, other, -c)
                if rel:
                    yield rows, j, k, rel


def tensor(left: Mapping[Rows, Rational], right: Mapping[Rows, Rational], n: int, d: int) -> Expression:
    """left (x) right as a combination of correlated tableaux."""
    out = Expression(n, d)
    for lrows, lc in left.items():
        for rrows, rc in right.items():
            key, sign = pair_to_tableau(lrows, rrows, n, d)
            if sign:
                out.add_term(key, sign * lc * rc)
    return out


def relation_generators(n: int, d: int, side: Literal["left", "right", "both"] = "both",
                        economical: bool = False) -> Iterator[Expression]:
    """Generators of ker(phi): (T - pi_{j,k}(T)) (x) U and U (x) (T - pi_{j,k}(T)).

    In economical mode left relations are paired only with standard right
    monomials; right relations still meet every left monomial, which keeps the
    union spanning K (x) P + P (x) K.
    """
    if d < 2:
        return
    rels = [rel for _, _, _, rel in single_relations(n, d)]
    everything = list(monomials(n, d))
    if side in ("left", "both"):
        partners = standard_basis(n, d).monomials if economical else everything
        for rel in rels:
            for u in partners:
                yield tensor(rel, {u: 1}, n, d)
    if side in ("right", "both"):
        for rel in rels:
            for u in everything:
                yield tensor({u: 1}, rel, n, d)


@dataclass
class StandardBasis:
    """Standard monomials of shape d x n ordered by row word; pairs index std (x) std."""

    n: int
    d: int
    monomials: list[Rows] = field(default_factory=list)
    index: dict[Rows, int] = field(default_factory=dict)

    @property
    def size(self) -> int:
        return len(self.monomials)

    @property
    def dim(self) -> int:
        return self.size ** 2

    def pair(self, idx: int) -> tuple[Rows, Rows]:
        f = self.size
        return self.monomials[idx // f], self.monomials[idx % f]

    def pair_index(self, left: Rows, right: Rows) -> int:
        return self.index[left] * self.size + self.index[right]


_bases: dict[tuple[int, int], StandardBasis] = {}


def standard_monomials(n: int, d: int) -> list[Rows]:
    """Standard d x n monomials; they correspond to SYT of the d x n rectangle."""
    from .combinatorics import standard_tableaux
    return sorted((tuple(r) for r in standard_tableaux(rectangle(d, n))),
                  key=lambda rows: tuple(x for r in rows for x in r))


def standard_basis(n: int, d: int) -> StandardBasis:
    basis = _bases.get((n, d))
    if basis is None:
        mons = standard_monomials(n, d)
        basis = StandardBasis(n, d, mons, {m: i for i, m in enumerate(mons)})
        assert basis.size == syt_count(rectangle(d, n))
        _bases[(n, d)] = basis
    return basis


@dataclass
class CanonicalVector:
    """Coordinates in the standard (x) standard basis; zero iff the source lies in ker(phi)."""

    n: int
    d: int
    coords: dict[int, Rational] = field(default_factory=dict)

    def is_zero(self) -> bool:
        return not self.coords

    def __eq__(self, other: object) -> bool:
        return (isinstance(other, CanonicalVector) and (self.n, self.d) == (other.n, other.d)
                and self.coords == other.coords)

    def dense(self) -> list[Fraction]:
        out = [Fraction(0)] * standard_basis(self.n, self.d).dim
        for i, v in self.coords.items():
            out[i] = Fraction(v)
        return out

    def lift(self) -> Expression:
        """The combination of std (x) std basis tableaux with these coordinates."""
        basis = standard_basis(self.n, self.d)
        out = Expression(self.n, self.d)
        for idx, coeff in self.coords.items():
            left, right = basis.pair(idx)
            key, sign = pair_to_tableau(left, right, self.n, self.d)
            out.add_term(key, sign * coeff)
        return out

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "basis": "standard-tensor-standard",
                "coords": [[i, format_fraction(v)] for i, v in sorted(self.coords.items())]}


def tableau_factors(c: CorrelatedTableau) -> tuple[dict[Rows, int], dict[Rows, int], int]:
    """Straightened left and right factors of a basis tableau, with the reading sign."""
    srows, ss = sort_rows(c.left_rows())
    trows, ts = sort_rows(c.right_rows())
    return straighten_rows(srows), straighten_rows(trows), ss * ts


def canonical_form(expr: Expression) -> CanonicalVector:
    """Straighten every left factor, then every right factor, and read std (x) std coordinates.

    Coefficients are brought to a common denominator so the work is done in
    integer arithmetic.
    """
    basis = standard_basis(expr.n, expr.d)
    f = basis.size
    index = basis.index
    den = 1
    for coeff in expr.terms.values():
        q = getattr(coeff, "denominator", 1)
        if q != 1:
            den = lcm(den, q)
    # left factors first, grouped per distinct left monomial
    grouped: dict[Rows, dict[Rows, int]] = {}
    for key, coeff in expr.items():
        srows, ss = sort_rows(key.left_rows())
        trows, ts = sort_rows(key.right_rows())
        _add(grouped.setdefault(srows, {}), trows, int(coeff * den) * ss * ts)
    by_std_left: dict[Rows, dict[Rows, int]] = {}
    for srows, right in grouped.items():
        for std, c in straighten_rows(srows).items():
            bucket = by_std_left.setdefault(std, {})
            for trows, rc in right.items():
                _add(bucket, trows, c * rc)
    coords: dict[int, Rational] = {}
    for std_left, right in by_std_left.items():
        base = index[std_left] * f
        for std_right, c in straighten_combination(right).items():
            _add(coords, base + index[std_right], c)
    if den != 1:
        coords = {i: Fraction(v, den) for i, v in coords.items()}
    return CanonicalVector(expr.n, expr.d, coords)


def canonical_dense(c: CorrelatedTableau) -> np.ndarray:
    """Integer canonical coordinates of one basis tableau as a dense array (rank-one outer product)."""
    basis = standard_basis(c.n, c.d)
    left, right, sign = tableau_factors(c)
    a = np.zeros(basis.size, dtype=np.int64)
    b = np.zeros(basis.size, dtype=np.int64)
    for rows, v in left.items():
        a[basis.index[rows]] = v
    for rows, v in right.items():
        b[basis.index[rows]] = v
    return sign * np.outer(a, b).ravel()


def column_symmetrize(s: BracketMonomial) -> FactorCombination:
    """Sum over the column-preserving subgroup of S of the relabeled monomials."""
    n, d = s.n, s.d
    cols = [[s.rows[i][c] for i in range(d)] for c in range(n)]
    out: FactorCombination = {}
    from itertools import permutations
    for choice in product(*(permutations(col) for col in cols)):
        image = {}
        for col, perm in zip(cols, choice):
            image.update(zip(col, perm))
        rows, sign = sort_rows(tuple(tuple(image[x] for x in r) for r in s.rows))
        if sign:
            _add(out, rows, sign * s.sign)
    return out


def factor_form(a: Mapping[Rows, Rational], b: Mapping[Rows, Rational]) -> Fraction:
    """The form on P(d) making normalized monomials orthonormal."""
    small, big = (a, b) if len(a) <= len(b) else (b, a)
    return Fraction(sum(v * big[k] for k, v in small.items() if k in big))


class MonomialIndex:
    """Integer column numbers for basis tableaux, sorted compatibly with straightening."""

    def __init__(self, n: int, d: int):
        self.n, self.d = n, d
        mons = sorted(monomials(n, d), key=order_key)
        self.pos = {m: i for i, m in enumerate(mons)}
        self.count = len(mons)

    def column(self, c: CorrelatedTableau) -> int:
        srows, _ = sort_rows(c.left_rows())
        trows, _ = sort_rows(c.right_rows())
        return self.pos[srows] * self.count + self.pos[trows]


def span_rank(exprs: Iterable[Expression], mode: Literal["monomial", "canonical"] = "monomial") -> int:
    """Rank over Q of the expressions, in the tableau basis or in canonical coordinates."""
    exprs = iter(exprs)
    first = next(exprs, None)
    if first is None:
        return 0
    nd = (first.n, first.d)
    ech = SparseEchelon()
    index = MonomialIndex(*nd) if mode == "monomial" else None
    if mode == "monomial" and monomial_count(*nd) ** 2 > 10 ** 8:
        raise ValueError("monomial basis too large for span_rank")

    def vec(e: Expression) -> dict[int, Rational]:
        if (e.n, e.d) != nd:
            raise ValueError("expressions with mixed (n, d)")
        if mode == "canonical":
            return canonical_form(e).coords
        out: dict[int, Rational] = {}
        for key, coeff in e.items():
            _add(out, index.column(key), coeff)
        return out

    ech.add(vec(first))
    for e in exprs:
        ech.add(vec(e))
    return ech.rank


def kernel_dimension_formula(n: int, d: int) -> int:
    """dim(K (x) P + P (x) K) from the single-factor rank of K."""
    p = monomial_count(n, d)
    f = syt_count(rectangle(d, n))
    return p * p - f * f
