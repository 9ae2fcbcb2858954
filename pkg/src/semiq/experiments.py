"""Span checks for the generation-degree criterion, dimension counts and module audits."""

from __future__ import annotations

import csv
import io
import os
import random
from dataclasses import asdict, dataclass, field
from enum import Enum
from math import comb, factorial, isqrt
from typing import Callable, Iterator

import numpy as np

from .combinatorics import (Partition, conjugate, correlated_diagrams, dominates, kostka, partitions_of,
                            rectangle, syt_count)
from .linalg import DEFAULT_PRIME, ModularRank, SparseEchelon
from .straightening import (canonical_dense, canonical_form, column_symmetrize, factor_form,
                            single_relations, standard_basis)
from .tableaux import (BracketMonomial, Connectivity, CorrelatedTableau, Expression, classify,
                       classify_counts, correlated_tableaux, diagram_tableau_count, monomial_count,
                       monomials, pair_to_tableau)

DEFAULT_MAX_TABLEAUX = 100_000
DEFAULT_MAX_BASIS = 4096
GUARD_ENV = "SEMIQ_GUARD_MAX_TABLEAUX"


class GuardError(RuntimeError):
    """A feasibility guard refused the computation."""


class Verdict(str, Enum):
    SPANS = "Spans"
    FAILS = "FailsToSpan"


def max_tableaux_guard(value: int | None = None) -> int:
    """Explicit value, else the environment override, else the default."""
    if value is not None:
        return value
    env = os.environ.get(GUARD_ENV)
    if env:
        try:
            parsed = int(env)
        except ValueError as exc:
            raise ValueError(f"{GUARD_ENV} must be an integer, got {env!r}") from exc
        if parsed <= 0:
            raise ValueError(f"{GUARD_ENV} must be positive")
        return parsed
    return DEFAULT_MAX_TABLEAUX


def d1(n: int, d: int) -> int:
    """dim P(d) (x) P(d)-bar."""
    return monomial_count(n, d) ** 2


def d2(n: int, d: int) -> int:
    """dim E(d) (x) E(d), the number of standard (x) standard pairs."""
    return syt_count(rectangle(d, n)) ** 2


@dataclass
class SpanCheckReport:
    n: int
    d: int
    family: str
    dim_total: int
    dim_quotient: int
    rank: int
    verdict: Verdict
    mode: str
    examined: int
    witnesses: list[CorrelatedTableau] = field(default_factory=list)
    seed: int | None = None
    prime: int | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        out = {"n": self.n, "d": self.d, "family": self.family, "dimTotal": self.dim_total,
               "dimKernelImageComplement": self.dim_quotient, "rank": self.rank,
               "verdict": self.verdict.value, "mode": self.mode, "examined": self.examined,
               "witnesses": [w.to_json() for w in self.witnesses], "notes": self.notes}
        if self.family == "disconnected":
            out["rankDisconnected"] = self.rank
        if self.mode == "sampled":
            out["seed"] = self.seed
            out["prime"] = self.prime
        return out


def _random_tableau(n: int, d: int, rng: random.Random) -> CorrelatedTableau:
    labels = list(range(1, n * d + 1))
    rng.shuffle(labels)
    left = [sorted(labels[i * n:(i + 1) * n]) for i in range(d)]
    rng.shuffle(labels)
    right = [sorted(labels[i * n:(i + 1) * n]) for i in range(d)]
    key, _ = pair_to_tableau(left, right, n, d)
    return key


def _exhaustive(n: int, d: int, accept: Callable[[CorrelatedTableau], bool], max_witnesses: int
                ) -> tuple[int, int, list[CorrelatedTableau]]:
    target = d2(n, d)
    ech = SparseEchelon()
    examined = 0
    rejected: list[CorrelatedTableau] = []
    for c in correlated_tableaux(n, d):
        if not accept(c):
            rejected.append(c)
            continue
        examined += 1
        if ech.rank < target:
            ech.add(canonical_form(Expression.of(c)).coords)
    witnesses = []
    if ech.rank < target:
        for c in rejected:
            if ech.reduce(canonical_form(Expression.of(c)).coords):
                witnesses.append(c)
                if len(witnesses) >= max_witnesses:
                    break
    return ech.rank, examined, witnesses


def _sampled(n: int, d: int, accept: Callable[[CorrelatedTableau], bool], seed: int,
             max_samples: int, batch: int = 256) -> tuple[int, int]:
    target = d2(n, d)
    tracker = ModularRank(target, DEFAULT_PRIME)
    rng = random.Random(seed)
    examined = 0
    draws = 0
    while not tracker.full and examined < max_samples:
        rows = []
        while len(rows) < batch and examined < max_samples:
            draws += 1
            if draws > 1000 * max_samples:
                raise GuardError("sampler could not find enough tableaux of the requested family")
            c = _random_tableau(n, d, rng)
            if not accept(c):
                continue
            examined += 1
            rows.append(np.mod(canonical_dense(c), DEFAULT_PRIME))
        if rows:
            tracker.add_batch(np.array(rows))
    return tracker.rank, examined


def _span(n: int, d: int, family: str, accept: Callable[[CorrelatedTableau], bool],
          guard_max_tableaux: int | None, max_basis: int, seed: int, max_witnesses: int,
          sample_factor: int) -> SpanCheckReport:
    if n < 1 or d < 1:
        raise ValueError("n and d must be positive")
    target = d2(n, d)
    if target > max_basis:
        raise GuardError(f"D2 = {target} exceeds the basis guard {max_basis}")
    total = d1(n, d)
    notes: list[str] = []
    if total <= max_tableaux_guard(guard_max_tableaux):
        rank, examined, witnesses = _exhaustive(n, d, accept, max_witnesses)
        verdict = Verdict.SPANS if rank == target else Verdict.FAILS
        if d == 1:
            notes.append("d = 1 has no disconnected tableaux: degree-n generators are necessarily new")
        return SpanCheckReport(n, d, family, total, target, rank, verdict, "exhaustive", examined,
                               witnesses, notes=notes)
    rank, examined = _sampled(n, d, accept, seed, sample_factor * target)
    if rank < target:
        raise GuardError(f"sampling reached rank {rank} < {target} after {examined} tableaux; "
                         "enumeration is needed to decide and exceeds the tableau guard")
    notes.append("full rank modulo the prime certifies full rank over Q")
    return SpanCheckReport(n, d, family, total, target, rank, Verdict.SPANS, "sampled", examined,
                           seed=seed, prime=DEFAULT_PRIME, notes=notes)


def span_check(n: int, d: int, guard_max_tableaux: int | None = None, max_basis: int = DEFAULT_MAX_BASIS,
               seed: int = 0, max_witnesses: int = 3, sample_factor: int = 8) -> SpanCheckReport:
    """Do disconnected tableaux together with ker(phi) span the whole degree-dn component?

    Work happens in canonical coordinates, where ker(phi) is zero. Up to the
    tableau guard every tableau is enumerated and the rank computed exactly;
    beyond it seeded random disconnected tableaux are added until their
    canonical vectors reach full rank modulo a prime, which proves spanning.
    """
    return _span(n, d, "disconnected", lambda c: classify(c) is Connectivity.DISCONNECTED,
                 guard_max_tableaux, max_basis, seed, max_witnesses, sample_factor)


def strong_span_check(n: int, d: int, guard_max_tableaux: int | None = None,
                      max_basis: int = DEFAULT_MAX_BASIS, seed: int = 0,
                      sample_factor: int = 8) -> SpanCheckReport:
    """Rank of disconnected and multi-edge tableaux modulo ker(phi); full rank is expected for d >= n + 1."""
    if d < n + 1:
        raise ValueError(f"the multi-edge span check needs d >= n + 1, got n={n}, d={d}")
    return _span(n, d, "disconnected-or-multi", lambda c: classify(c) is not Connectivity.CONNECTED_SIMPLE,
                 guard_max_tableaux, max_basis, seed, 3, sample_factor)


def verify_theorem_2x2(d_max: int, **kwargs) -> list[SpanCheckReport]:
    """span_check(2, d) for d = 3..d_max; every verdict is expected to be Spans."""
    if d_max < 3:
        raise ValueError("d_max must be at least 3")
    return [span_check(2, d, **kwargs) for d in range(3, d_max + 1)]


def multinomial_count(n: int, parts: int) -> int:
    return factorial(n * parts) // factorial(n) ** parts


def disconnected_lower(n: int, d: int) -> int:
    """Disconnected tableaux with C(1,1) = {1..n}."""
    return multinomial_count(n, d - 1) ** 2


def disconnected_upper(n: int, d: int) -> int:
    return sum(comb(d, k) ** 2 * comb(d * n, k * n) * multinomial_count(n, k) ** 2
               * multinomial_count(n, d - k) ** 2 for k in range(1, d))


def disconnected_exact(n: int, d: int, max_diagrams: int = 1_000_000) -> int:
    """Number of disconnected tableaux, summed over disconnected diagrams."""
    total = 0
    for count, diag in enumerate(correlated_diagrams(n, d)):
        if count >= max_diagrams:
            raise GuardError(f"more than {max_diagrams} diagrams to enumerate")
        if classify_counts(diag.counts) is Connectivity.DISCONNECTED:
            total += diagram_tableau_count(diag)
    return total


@dataclass
class DimensionReport:
    n: int
    d: int
    D1: int
    D2: int
    ker_dim: int
    lower: int
    upper: int
    exact: int | None
    flags: dict[str, bool | None]

    def to_json(self) -> dict:
        return {"n": self.n, "d": self.d, "degree": self.n * self.d, "D1": self.D1, "D2": self.D2,
                "kerDim": self.ker_dim, "disconnectedLower": self.lower, "disconnectedUpper": self.upper,
                "exactDisconnected": self.exact, "flags": self.flags}

    CSV_FIELDS = ("n", "d", "degree", "D1", "D2", "kerDim", "lower", "upper", "exact",
                  "boundsHold", "upperBelowD2", "exactPlusKerCoversD1", "lowerAboveD2")

    def csv_row(self) -> list:
        f = self.flags
        return [self.n, self.d, self.n * self.d, self.D1, self.D2, self.ker_dim, self.lower, self.upper,
                "" if self.exact is None else self.exact,
                *("" if f[k] is None else str(f[k]).lower()
                  for k in ("boundsHold", "upperBelowD2", "exactPlusKerCoversD1", "lowerAboveD2"))]


def dimension_report(n: int, d: int, exact: bool = False, max_diagrams: int = 1_000_000) -> DimensionReport:
    """Closed-form dimension counts and the spanning inequalities they imply.

    Flags: boundsHold (lower <= exact <= upper), upperBelowD2 (the
    disconnected span is too small to cover the quotient, so spanning is
    impossible), exactPlusKerCoversD1 (the necessary count condition), and
    lowerAboveD2.
    """
    if n < 1 or d < 2:
        raise ValueError("dimension reports need n >= 1 and d >= 2")
    D1, D2 = d1(n, d), d2(n, d)
    lo, hi = disconnected_lower(n, d), disconnected_upper(n, d)
    ex = disconnected_exact(n, d, max_diagrams) if exact else None
    flags = {
        "boundsHold": None if ex is None else lo <= ex <= hi,
        "upperBelowD2": hi < D2,
        "exactPlusKerCoversD1": None if ex is None else ex + (D1 - D2) >= D1,
        "lowerAboveD2": lo > D2,
    }
    return DimensionReport(n, d, D1, D2, D1 - D2, lo, hi, ex, flags)


def dimension_csv(reports: list[DimensionReport]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(DimensionReport.CSV_FIELDS)
    for r in reports:
        w.writerow(r.csv_row())
    return buf.getvalue()


def sweep_sides(n: int, d: int) -> tuple[int, int]:
    """(dn-n+1)...(dn) and n^n [2^d (n+d-1)^C(d,2)]^2."""
    lhs = 1
    for i in range(d * n - n + 1, d * n + 1):
        lhs *= i
    rhs = n ** n * (2 ** d * (n + d - 1) ** comb(d, 2)) ** 2
    return lhs, rhs


SWEEP_FIELDS = ("n", "d", "lhs", "rhs", "lhsExceedsRhs", "upperBelowD2")


def lower_bound_sweep(n_max: int) -> list[dict]:
    """Both sides of the final counting inequality for n <= n_max and 2 <= d <= ceil(sqrt(n))."""
    if n_max < 4:
        raise ValueError("n_max must be at least 4")
    rows = []
    for n in range(1, n_max + 1):
        d_hi = isqrt(n - 1) + 1 if n > 1 else 1
        for d in range(2, d_hi + 1):
            lhs, rhs = sweep_sides(n, d)
            rows.append({"n": n, "d": d, "lhs": lhs, "rhs": rhs, "lhsExceedsRhs": lhs > rhs,
                         "upperBelowD2": disconnected_upper(n, d) < d2(n, d)})
    return rows


def sweep_csv(rows: list[dict]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SWEEP_FIELDS)
    for r in rows:
        w.writerow([str(r[k]).lower() if isinstance(r[k], bool) else r[k] for k in SWEEP_FIELDS])
    return buf.getvalue()


def kostka_dimension_terms(n: int, d: int) -> list[tuple[Partition, int, int]]:
    """(lambda, f^lambda, K(conj lambda, n^d)) for lambda dominated by the shape d^n."""
    top = rectangle(n, d)
    content = (n,) * d
    return [(lam, syt_count(lam), kostka(conjugate(lam), content))
            for lam in partitions_of(n * d) if dominates(top, lam)]


@dataclass
class AuditReport:
    n: int
    d: int
    dim_p: int
    dim_p_formula: int
    kostka_sum: int
    kostka_terms: list[tuple[str, int, int]]
    rank_e: int
    rank_k: int
    syt: int
    pairs_checked: int
    nonzero_pairs: int

    @property
    def ok(self) -> bool:
        return (self.dim_p == self.dim_p_formula == self.kostka_sum and self.rank_e == self.syt
                and self.rank_k == self.dim_p - self.syt and self.nonzero_pairs == 0)

    def to_json(self) -> dict:
        out = asdict(self)
        out["kostka_terms"] = [list(t) for t in self.kostka_terms]
        out["ok"] = self.ok
        return out


def decomposition_audit(n: int, d: int, max_monomials: int = 5000) -> AuditReport:
    """Check dim P(d), the Kostka dimension identity, rank E, rank K and E orthogonal to K."""
    formula = monomial_count(n, d)
    if formula > max_monomials:
        raise GuardError(f"{formula} monomials exceed the audit guard {max_monomials}")
    mons = list(monomials(n, d))
    terms = kostka_dimension_terms(n, d)
    kostka_sum = sum(f * k for _, f, k in terms)

    e_gens = {}
    for rows in mons:
        comb_ = column_symmetrize(BracketMonomial(n, d, rows))
        if comb_:
            e_gens[tuple(sorted(comb_.items()))] = comb_
    k_gens = {}
    for _, _, _, rel in single_relations(n, d):
        k_gens[tuple(sorted(rel.items()))] = rel
    pos = {m: i for i, m in enumerate(mons)}

    def rank(gens) -> int:
        ech = SparseEchelon()
        for g in gens:
            ech.add({pos[r]: c for r, c in g.items()})
        return ech.rank

    rank_e = rank(e_gens.values())
    rank_k = rank(k_gens.values())
    nonzero = 0
    pairs = 0
    for e in e_gens.values():
        for k in k_gens.values():
            pairs += 1
            if factor_form(e, k):
                nonzero += 1
    return AuditReport(n, d, len(mons), formula, kostka_sum, [(str(l), f, k) for l, f, k in terms],
                       rank_e, rank_k, syt_count(rectangle(d, n)), pairs, nonzero)
