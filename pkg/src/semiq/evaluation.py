"""Exact evaluation of multilinear semi-invariants on matrix and vector tuples."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from itertools import permutations, product
from math import factorial, prod
from numbers import Rational
from typing import Iterator, Mapping, Sequence

from .tableaux import (BracketMonomial, CorrelatedTableau, Expression, components, format_fraction,
                       parse_fraction, permutation_sign)

Matrix = tuple[tuple[Fraction, ...], ...]
Vector = tuple[Fraction, ...]

DEFAULT_TERM_LIMIT = 2_000_000
DEFAULT_MDISC_LIMIT = 10


class EvaluationLimitError(RuntimeError):
    """Raised when an evaluation would exceed its configured term budget."""


def det(m: Sequence[Sequence[Rational]]) -> Fraction:
    """Determinant by Gaussian elimination over Q."""
    a = [[Fraction(x) for x in row] for row in m]
    size = len(a)
    if any(len(row) != size for row in a):
        raise ValueError("determinant of a non-square matrix")
    sign = 1
    result = Fraction(1)
    for c in range(size):
        piv = next((r for r in range(c, size) if a[r][c]), None)
        if piv is None:
            return Fraction(0)
        if piv != c:
            a[c], a[piv] = a[piv], a[c]
            sign = -sign
        p = a[c][c]
        result *= p
        for r in range(c + 1, size):
            if a[r][c]:
                f = a[r][c] / p
                row_r, row_c = a[r], a[c]
                for k in range(c + 1, size):
                    row_r[k] -= f * row_c[k]
    return sign * result


def _det_cols(cols: Sequence[Sequence[Fraction]]) -> Fraction:
    """Determinant of the matrix with the given columns (small sizes unrolled)."""
    k = len(cols)
    if k == 1:
        return cols[0][0]
    if k == 2:
        return cols[0][0] * cols[1][1] - cols[1][0] * cols[0][1]
    return det([[cols[j][i] for j in range(k)] for i in range(k)])


def matmul(a: Matrix, b: Matrix) -> Matrix:
    return tuple(tuple(sum((a[i][k] * b[k][j] for k in range(len(b))), Fraction(0))
                       for j in range(len(b[0]))) for i in range(len(a)))


def identity(n: int) -> Matrix:
    return tuple(tuple(Fraction(int(i == j)) for j in range(n)) for i in range(n))


@dataclass(frozen=True)
class MatrixTuple:
    """B_1, ..., B_{dn}: dn square n x n rational matrices."""

    n: int
    d: int
    matrices: tuple[Matrix, ...]

    def __post_init__(self) -> None:
        mats = tuple(tuple(tuple(Fraction(x) for x in row) for row in m) for m in self.matrices)
        object.__setattr__(self, "matrices", mats)
        if len(mats) != self.n * self.d:
            raise ValueError(f"expected {self.n * self.d} matrices, got {len(mats)}")
        for m in mats:
            if len(m) != self.n or any(len(row) != self.n for row in m):
                raise ValueError(f"every matrix must be {self.n}x{self.n}")

    def column(self, k: int, a: int) -> Vector:
        """Column a (0-indexed) of B_k (1-indexed)."""
        m = self.matrices[k - 1]
        return tuple(row[a] for row in m)

    def transform(self, left: Matrix, right_inverse: Matrix) -> "MatrixTuple":
        """(A B_k C^{-1})_k given A and C^{-1}."""
        return MatrixTuple(self.n, self.d, tuple(matmul(matmul(left, m), right_inverse)
                                                 for m in self.matrices))

    def scaled(self, k: int, c: Rational) -> "MatrixTuple":
        mats = list(self.matrices)
        mats[k - 1] = tuple(tuple(c * x for x in row) for row in mats[k - 1])
        return MatrixTuple(self.n, self.d, tuple(mats))

    def restrict(self, labels: Sequence[int], d: int) -> "MatrixTuple":
        return MatrixTuple(self.n, d, tuple(self.matrices[k - 1] for k in labels))

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d,
                "matrices": [[[format_fraction(x) for x in row] for row in m] for m in self.matrices]}

    @classmethod
    def from_json(cls, obj: Mapping) -> "MatrixTuple":
        return cls(int(obj["n"]), int(obj["d"]),
                   tuple(tuple(tuple(parse_fraction(x) for x in row) for row in m) for m in obj["matrices"]))


@dataclass(frozen=True)
class VectorTuple:
    """Pairs (v_k, w_k) for k in [dn]; the point (v_1 (x) w_1) + ... of V (x) W copies."""

    n: int
    d: int
    v: tuple[Vector, ...]
    w: tuple[Vector, ...]

    def __post_init__(self) -> None:
        v = tuple(tuple(Fraction(x) for x in vec) for vec in self.v)
        w = tuple(tuple(Fraction(x) for x in vec) for vec in self.w)
        object.__setattr__(self, "v", v)
        object.__setattr__(self, "w", w)
        if len(v) != self.n * self.d or len(w) != self.n * self.d:
            raise ValueError(f"expected {self.n * self.d} vector pairs")
        if any(len(x) != self.n for x in v + w):
            raise ValueError(f"vectors must have length {self.n}")

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d,
                "v": [[format_fraction(x) for x in vec] for vec in self.v],
                "w": [[format_fraction(x) for x in vec] for vec in self.w]}


def eval_bracket_product(m: BracketMonomial, vectors: Sequence[Sequence[Rational]]) -> Fraction:
    """sign(M) times the product over rows of det[v_{i_1}, ..., v_{i_n}]."""
    vecs = [tuple(Fraction(x) for x in v) for v in vectors]
    out = Fraction(m.sign)
    for row in m.rows:
        out *= _det_cols([vecs[i - 1] for i in row])
        if not out:
            return out
    return out


def _bracket_rows(rows: Sequence[Sequence[int]], vecs: Sequence[Vector]) -> Fraction:
    out = Fraction(1)
    for row in rows:
        out *= _det_cols([vecs[i - 1] for i in row])
        if not out:
            break
    return out


def eval_phi_decomposable(expr: Expression, vt: VectorTuple) -> Fraction:
    """phi(expr) at a decomposable point: left brackets on the v's, right brackets on the w's."""
    total = Fraction(0)
    for key, coeff in expr.items():
        a = _bracket_rows(key.left_rows(), vt.v)
        if a:
            total += coeff * a * _bracket_rows(key.right_rows(), vt.w)
    return total


def _row_assignments(right_rows: Sequence[Sequence[int]], n: int) -> Iterator[tuple[dict[int, int], int]]:
    """Maps label -> basis index making every right bracket a signed permutation matrix."""
    perms = [(p, permutation_sign(p)) for p in permutations(range(n))]
    for choice in product(perms, repeat=len(right_rows)):
        assign: dict[int, int] = {}
        sign = 1
        for row, (p, s) in zip(right_rows, choice):
            sign *= s
            for label, a in zip(row, p):
                assign[label] = a
        yield assign, sign


def phi_term_count(n: int, d: int) -> int:
    """Number of surviving terms in the rank-one expansion of one tableau."""
    return factorial(n) ** d


def eval_phi_tableau(c: CorrelatedTableau, b: MatrixTuple, limit: int = DEFAULT_TERM_LIMIT) -> Fraction:
    if phi_term_count(c.n, c.d) > limit:
        raise EvaluationLimitError(f"{phi_term_count(c.n, c.d)} expansion terms exceed the limit {limit}")
    left = c.left_rows()
    total = Fraction(0)
    for assign, sign in _row_assignments(c.right_rows(), c.n):
        val = Fraction(sign)
        for row in left:
            val *= _det_cols([b.column(k, assign[k]) for k in row])
            if not val:
                break
        total += val
    return total


def eval_phi(expr: Expression, b: MatrixTuple, limit: int = DEFAULT_TERM_LIMIT) -> Fraction:
    """phi(expr)(B_1, ..., B_{dn}) by the rank-one expansion B_k = sum_a col_a(B_k) (x) e_a.

    With w-vectors drawn from the standard basis a right bracket is nonzero
    only when its labels receive distinct indices, so only (n!)^d of the
    n^{dn} expansion terms are visited.
    """
    if (expr.n, expr.d) != (b.n, b.d):
        raise ValueError("expression and matrix tuple have different (n, d)")
    return sum((coeff * eval_phi_tableau(key, b, limit) for key, coeff in expr.items()), Fraction(0))


def eval_phi_naive(c: CorrelatedTableau, b: MatrixTuple) -> Fraction:
    """All n^{dn} expansion terms, without pruning; for cross-checks at tiny sizes."""
    n, size = c.n, c.n * c.d
    total = Fraction(0)
    for assign in product(range(n), repeat=size):
        w = [tuple(Fraction(int(i == a)) for i in range(n)) for a in assign]
        v = [b.column(k + 1, assign[k]) for k in range(size)]
        total += _bracket_rows(c.left_rows(), v) * _bracket_rows(c.right_rows(), w)
    return total


def _column_matrix(mats: Sequence[Sequence[Sequence[Fraction]]], sigma: Sequence[int]) -> list[list[Fraction]]:
    s = len(mats)
    return [[mats[sigma[j]][i][j] for j in range(s)] for i in range(s)]


def mixed_discriminant_naive(mats: Sequence[Sequence[Sequence[Rational]]]) -> Fraction:
    """Sum over all sigma in S_s of det(A^sigma), column i of A^sigma taken from A_{sigma(i)}."""
    mats = [[[Fraction(x) for x in row] for row in m] for m in mats]
    return sum((det(_column_matrix(mats, sigma)) for sigma in permutations(range(len(mats)))), Fraction(0))


def mixed_discriminant(mats: Sequence[Sequence[Sequence[Rational]]],
                       limit: int = DEFAULT_MDISC_LIMIT) -> Fraction:
    """Mixed discriminant, skipping permutations that pick an all-zero column."""
    s = len(mats)
    if any(len(m) != s or any(len(row) != s for row in m) for m in mats):
        raise ValueError(f"mixed discriminant needs {s} matrices of size {s}x{s}")
    mats = [[[Fraction(x) for x in row] for row in m] for m in mats]
    # support[j]: the matrices with a nonzero column j
    support = [[i for i in range(s) if any(mats[i][r][j] for r in range(s))] for j in range(s)]
    if s > limit and prod(len(x) for x in support) > factorial(limit):
        raise EvaluationLimitError(f"mixed discriminant of {s} matrices exceeds the limit {limit}")
    total = Fraction(0)
    sigma = [0] * s
    used = [False] * s

    def rec(j: int) -> None:
        nonlocal total
        if j == s:
            total += det(_column_matrix(mats, sigma))
            return
        for i in support[j]:
            if not used[i]:
                used[i] = True
                sigma[j] = i
                rec(j + 1)
                used[i] = False

    rec(0)
    return total


def block_matrices(c: CorrelatedTableau, b: MatrixTuple) -> list[list[list[Fraction]]]:
    """Y_1, ..., Y_{dn}: Y_i holds B_i in block (j, k) when label i sits in cell (j, k)."""
    n, d = c.n, c.d
    size = n * d
    zero = Fraction(0)
    out = []
    pos = c.positions()
    for i in range(1, size + 1):
        j, k = pos[i]
        y = [[zero] * size for _ in range(size)]
        m = b.matrices[i - 1]
        for r in range(n):
            for s in range(n):
                y[j * n + r][k * n + s] = m[r][s]
        out.append(y)
    return out


def reading_sign(c: CorrelatedTableau) -> int:
    """Sign of the permutation taking the row reading word of C to its column reading word."""
    row_word = [x for r in c.left_rows() for x in r]
    pos = {x: i for i, x in enumerate(row_word)}
    return permutation_sign([pos[x] for r in c.right_rows() for x in r])


def phi_via_mdisc(c: CorrelatedTableau, b: MatrixTuple, naive: bool = False,
                  limit: int = DEFAULT_MDISC_LIMIT) -> Fraction:
    """phi(C)(B) as mdisc(Y_1, ..., Y_{dn}).

    The mixed discriminant does not see the order in which labels are read, so
    it matches phi(C) after multiplying by `reading_sign(C)`.
    """
    ys = block_matrices(c, b)
    if naive:
        if len(ys) > 6:
            raise EvaluationLimitError("the unpruned mixed discriminant is limited to dn <= 6")
        return reading_sign(c) * mixed_discriminant_naive(ys)
    return reading_sign(c) * mixed_discriminant(ys, limit=max(limit, len(ys)))


def component_tableaux(c: CorrelatedTableau) -> list[tuple[CorrelatedTableau, list[int]]]:
    """Each connected component as a tableau on relabeled [d'n], with its original labels in order."""
    out = []
    for rows, cols in components(c):
        labels = sorted(x for i in rows for j in cols for x in c.cells[i][j])
        rename = {x: k for k, x in enumerate(labels, start=1)}
        cells = [[[rename[x] for x in c.cells[i][j]] for j in cols] for i in rows]
        out.append((CorrelatedTableau(c.n, len(rows), cells), labels))
    return out


def eval_phi_by_components(c: CorrelatedTableau, b: MatrixTuple) -> Fraction:
    """Product of the component evaluations on the matching sub-tuples of B."""
    out = Fraction(1)
    for comp, labels in component_tableaux(c):
        out *= eval_phi_tableau(comp, b.restrict(labels, comp.d))
    return out


def random_rational(rng: random.Random, bound: int = 10) -> Fraction:
    return Fraction(rng.randint(-bound, bound))


def random_matrix_tuple(n: int, d: int, rng: random.Random, bound: int = 10) -> MatrixTuple:
    return MatrixTuple(n, d, tuple(tuple(tuple(random_rational(rng, bound) for _ in range(n))
                                         for _ in range(n)) for _ in range(n * d)))


def random_vector_tuple(n: int, d: int, rng: random.Random, bound: int = 10) -> VectorTuple:
    size = n * d
    vec = lambda: tuple(random_rational(rng, bound) for _ in range(n))  # noqa: E731
    return VectorTuple(n, d, tuple(vec() for _ in range(size)), tuple(vec() for _ in range(size)))


def random_sl(n: int, rng: random.Random, shears: int = 6, bound: int = 5) -> tuple[Matrix, Matrix]:
    """A random element of SL(n, Q) as a product of elementary shears, with its exact inverse."""
    g = identity(n)
    g_inv = identity(n)
    if n < 2:
        return g, g_inv
    for _ in range(shears):
        i, j = rng.sample(range(n), 2)
        c = Fraction(rng.choice([x for x in range(-bound, bound + 1) if x]))
        e = [list(row) for row in identity(n)]
        e[i][j] = c
        e_inv = [list(row) for row in identity(n)]
        e_inv[i][j] = -c
        g = matmul(g, tuple(map(tuple, e)))
        g_inv = matmul(tuple(map(tuple, e_inv)), g_inv)
    return g, g_inv


@dataclass(frozen=True)
class KernelTestResult:
    """Outcome of a randomized kernel test; `witness` is set when phi(expr) is nonzero."""

    in_kernel: bool
    trials: int
    witness: VectorTuple | None = None
    value: Fraction = Fraction(0)

    @property
    def verdict(self) -> str:
        return "ProbablyInKernel" if self.in_kernel else "NotInKernel"


def kernel_test_random(expr: Expression, trials: int = 20, seed: int = 0) -> KernelTestResult:
    """Evaluate at seeded integer vector tuples; any nonzero value refutes kernel membership."""
    if trials < 1:
        raise ValueError("trials must be positive")
    rng = random.Random(seed)
    for t in range(trials):
        vt = random_vector_tuple(expr.n, expr.d, rng)
        val = eval_phi_decomposable(expr, vt)
        if val:
            return KernelTestResult(False, t + 1, vt, val)
    return KernelTestResult(True, trials)
