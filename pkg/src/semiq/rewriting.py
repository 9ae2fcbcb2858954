"""Alternation relations, adjacent-edge swaps and certificates rewriting connected simple tableaux.

A connected simple tableau C is rewritten as an explicit combination of
disconnected or multi-edge tableaux plus an element of ker(phi). For every
sigma in S_T a chain of adjacent swaps gives C = sgn(sigma) C^sigma + residue;
averaging over S_T leaves (1/|T|!) sum_sigma sgn(sigma) C^sigma, a signed sum
of alternation relations, plus the averaged Plucker relations behind the swaps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import permutations
from math import factorial
from typing import Iterator, Mapping, Sequence

from .straightening import canonical_form
from .tableaux import (BipartiteMultigraph, Connectivity, CorrelatedTableau, Expression, classify,
                       graph_of, pair_to_tableau, permutation_sign)

DEFAULT_MAX_LABELS = 8


class RewriteError(ValueError):
    pass


class RewriteGuardError(RuntimeError):
    pass


def _invert(sigma: Sequence[int]) -> list[int]:
    inv = [0] * len(sigma)
    for i, s in enumerate(sigma, start=1):
        inv[s - 1] = i
    return inv


def _compose(a: Sequence[int], b: Sequence[int]) -> list[int]:
    """(a o b)(x) = a(b(x)) for one-indexed permutation lists."""
    return [a[b[x] - 1] for x in range(len(b))]


def default_alt_labels(c: CorrelatedTableau) -> list[int]:
    """Smallest label from each of the first n^2 + 1 nonempty cells in row-major order."""
    need = c.n ** 2 + 1
    chosen = [cell[0] for row in c.cells for cell in row if cell][:need]
    if len(chosen) < need:
        raise RewriteError(f"tableau has fewer than {need} nonempty cells")
    return chosen


def alt_relation(c: CorrelatedTableau, labels: Sequence[int] | None = None) -> Expression:
    """sum over sigma in S_I of sgn(sigma) C^sigma, for I of size n^2 + 1 in distinct cells."""
    if labels is None:
        labels = default_alt_labels(c)
    labels = list(labels)
    need = c.n ** 2 + 1
    if len(labels) != need or len(set(labels)) != need:
        raise RewriteError(f"alternation needs {need} distinct labels")
    pos = c.positions()
    if any(x not in pos for x in labels):
        raise RewriteError("alternation labels must come from the tableau")
    if len({pos[x] for x in labels}) != need:
        raise RewriteError("alternation labels must lie in pairwise distinct cells")
    size = c.n * c.d
    out = Expression(c.n, c.d)
    for image in permutations(labels):
        sigma = list(range(1, size + 1))
        for x, y in zip(labels, image):
            sigma[x - 1] = y
        out.add_term(c.relabel(sigma), permutation_sign([labels.index(y) for y in image]))
    return out


def _swapped(c: CorrelatedTableau, e: int, f: int) -> CorrelatedTableau:
    sigma = list(range(1, c.n * c.d + 1))
    sigma[e - 1], sigma[f - 1] = f, e
    return c.relabel(sigma)


def _has_multi_cell(c: CorrelatedTableau) -> bool:
    return any(len(cell) >= 2 for row in c.cells for cell in row)


@dataclass
class SwapRelation:
    """C = sign * swapped + residue, with every residue key holding a cell of size >= 2."""

    sign: int
    swapped: CorrelatedTableau
    residue: Expression


def adjacent_swap_relation(c: CorrelatedTableau, e: int, e2: int) -> SwapRelation:
    """Exchange e2 with each label of the bracket that holds e.

    Sharing a row of C, e and e2 sit in different right brackets; the one-element
    exchange of e2 against the right bracket of e yields the swapped tableau
    (partner e) and terms where e2 joins the cell of e. Sharing a column, the
    same identity is applied to the left factor.
    """
    pos = c.positions()
    if e not in pos or e2 not in pos:
        raise RewriteError("swap labels must come from the tableau")
    (s1, t1), (s2, t2) = pos[e], pos[e2]
    if (s1, t1) == (s2, t2):
        raise RewriteError(f"labels {e} and {e2} lie in the same cell")
    left = [list(r) for r in c.left_rows()]
    right = [list(r) for r in c.right_rows()]
    if s1 == s2:
        factor, home, away = right, t1, t2
    elif t1 == t2:
        factor, home, away = left, s1, s2
    else:
        raise RewriteError(f"labels {e} and {e2} share neither a row nor a column")
    k = factor[away].index(e2)
    sign_swap = 0
    swapped = None
    residue = Expression(c.n, c.d)
    for idx, y in enumerate(list(factor[home])):
        factor[home][idx], factor[away][k] = e2, y
        key, sign = pair_to_tableau(left, right, c.n, c.d)
        factor[home][idx], factor[away][k] = y, e2
        if not sign:
            continue
        if y == e:
            swapped, sign_swap = key, sign
        else:
            assert _has_multi_cell(key), "swap residue without a multiple edge"
            residue.add_term(key, sign)
    assert swapped is not None and swapped == _swapped(c, e, e2)
    return SwapRelation(sign_swap, swapped, residue)


def decompose_transposition(g: BipartiteMultigraph, e: int, e2: int) -> list[tuple[int, int]]:
    """Adjacent-edge transpositions whose product is (e e2), along a shortest path of edges.

    For a path e = f_0, f_1, ..., f_m = e2 the result is the palindrome
    (f_0 f_1)(f_1 f_2)...(f_{m-1} f_m)...(f_1 f_2)(f_0 f_1).
    """
    ends = g.endpoints()
    if e not in ends or e2 not in ends:
        raise RewriteError("labels must be edges of the graph")
    if e == e2:
        return []
    if not g.is_connected():
        raise RewriteError("graph is disconnected")
    labels = sorted(ends)
    adjacent = {a: [b for b in labels if b != a and (ends[a][0] == ends[b][0] or ends[a][1] == ends[b][1])]
                for a in labels}
    prev = {e: None}
    queue = deque([e])
    while queue:
        a = queue.popleft()
        if a == e2:
            break
        for b in adjacent[a]:
            if b not in prev:
                prev[b] = a
                queue.append(b)
    if e2 not in prev:
        raise RewriteError(f"no path of edges from {e} to {e2}")
    path = [e2]
    while prev[path[-1]] is not None:
        path.append(prev[path[-1]])
    path.reverse()
    steps = list(zip(path, path[1:]))
    return steps + steps[-2::-1]


def cycle_transpositions(pi: Sequence[int]) -> list[tuple[int, int]]:
    """Transpositions t_1, ..., t_k with pi = t_1 o t_2 o ... o t_k."""
    seen = set()
    out = []
    for start in range(1, len(pi) + 1):
        if start in seen:
            continue
        cyc = [start]
        seen.add(start)
        x = pi[start - 1]
        while x != start:
            cyc.append(x)
            seen.add(x)
            x = pi[x - 1]
        # (a1 a2 ... ak) = (a1 ak) o (a1 a_{k-1}) o ... o (a1 a2)
        out.extend((cyc[0], a) for a in reversed(cyc[1:]))
    return out


class Transcript(Sequence):
    """Relation log of a certificate; entries of a shared template are relabeled on access."""

    def __init__(self, entries: Sequence[dict], relabel: Sequence[int] | None = None):
        self._entries = entries
        self._lam = list(relabel) if relabel is not None else None

    def __len__(self) -> int:
        return len(self._entries)

    def _map(self, entry: dict) -> dict:
        lam = self._lam
        if lam is None:
            return entry
        inv = _invert(lam)
        p = entry["params"]
        if entry["type"] == "adjSwap":
            return {"type": "adjSwap", "params": {
                "sigma": _compose(_compose(lam, p["sigma"]), inv),
                "swaps": [[lam[a - 1], lam[b - 1]] for a, b in p["swaps"]],
                "sign": p["sign"]}}
        return {"type": "alt", "params": {
            "rho": _compose(_compose(lam, p["rho"]), inv),
            "labels": [lam[x - 1] for x in p["labels"]],
            "sign": p["sign"]}}

    def __getitem__(self, i):
        if isinstance(i, slice):
            return [self._map(e) for e in self._entries[i]]
        return self._map(self._entries[i])

    def __iter__(self) -> Iterator[dict]:
        for e in self._entries:
            yield self._map(e)


@dataclass
class RewriteCertificate:
    """input = outputTerms + kernelPart, with outputTerms free of connected simple keys."""

    input: CorrelatedTableau
    output_terms: Expression
    kernel_part: Expression
    transcript: Sequence[dict] = field(default_factory=list)

    def to_json(self) -> dict:
        return {"input": self.input.to_json(), "outputTerms": self.output_terms.to_json(),
                "kernelPart": self.kernel_part.to_json(), "transcript": list(self.transcript)}

    @classmethod
    def from_json(cls, obj: Mapping) -> "RewriteCertificate":
        return cls(CorrelatedTableau.from_json(obj["input"]), Expression.from_json(obj["outputTerms"]),
                   Expression.from_json(obj["kernelPart"]), list(obj.get("transcript", [])))


def _template(c: CorrelatedTableau) -> tuple[CorrelatedTableau, list[int]]:
    """Occupied cells numbered 1..dn row-major, and lam with C = template relabeled by lam."""
    lam = [cell[0] for row in c.cells for cell in row if cell]
    counter = iter(range(1, len(lam) + 1))
    cells = [[(next(counter),) if cell else () for cell in row] for row in c.cells]
    return CorrelatedTableau(c.n, c.d, cells, check=False), lam


def _coset_representatives(labels: Sequence[int], size: int) -> Iterator[list[int]]:
    """One rho per left coset rho S_I in S_size: rho is fixed off I, I takes the leftover values in order."""
    rest = [x for x in range(1, size + 1) if x not in set(labels)]
    ordered = sorted(labels)
    for image in permutations(range(1, size + 1), len(rest)):
        rho = [0] * size
        for x, y in zip(rest, image):
            rho[x - 1] = y
        leftover = sorted(set(range(1, size + 1)) - set(image))
        for x, y in zip(ordered, leftover):
            rho[x - 1] = y
        yield rho


_templates: dict[tuple, tuple[Expression, Expression, list[dict]]] = {}


def _rewrite_template(c0: CorrelatedTableau) -> tuple[Expression, Expression, list[dict]]:
    key = c0.cells
    hit = _templates.get(key)
    if hit is not None:
        return hit
    n, d = c0.n, c0.d
    size = n * d
    g = graph_of(c0)
    pos_cells = [(i, j) for i, row in enumerate(c0.cells) for j, cell in enumerate(row) if cell]
    ladders: dict[tuple[int, int], list[tuple[int, int]]] = {}
    residue_total = Expression(n, d)
    # sum of the first-type relations x - sign * swapped - residue used along the chains
    plucker_total = Expression(n, d)
    transcript: list[dict] = []

    def build(labeling: Sequence[int]) -> CorrelatedTableau:
        grid = [[() for _ in range(d)] for _ in range(d)]
        for p, (i, j) in enumerate(pos_cells):
            grid[i][j] = (labeling[p],)
        return CorrelatedTableau(n, d, grid, check=False)

    for pi in permutations(range(1, size + 1)):
        # in the template label p sits at position p, so label and position swaps coincide
        cur = list(range(1, size + 1))
        coeff = 1
        x = c0
        swaps = []
        for a, b in cycle_transpositions(pi):
            steps = ladders.get((a, b))
            if steps is None:
                steps = ladders[(a, b)] = decompose_transposition(g, a, b)
            for p, q in steps:
                la, lb = cur[p - 1], cur[q - 1]
                rel = adjacent_swap_relation(x, la, lb)
                residue_total.merge(rel.residue, coeff)
                plucker_total.add_term(x, coeff)
                plucker_total.add_term(rel.swapped, -coeff * rel.sign)
                plucker_total.merge(rel.residue, -coeff)
                coeff *= rel.sign
                cur[p - 1], cur[q - 1] = lb, la
                x = rel.swapped
                swaps.append([la, lb])
        target = c0.relabel(list(pi))
        sgn = permutation_sign(pi)
        if x != target or coeff != sgn:
            raise AssertionError(f"swap chain for {pi} did not reach sgn(pi) C^pi")
        transcript.append({"type": "adjSwap", "params": {"sigma": list(pi), "swaps": swaps, "sign": sgn}})

    scale = Fraction(1, factorial(size))
    output = residue_total * scale
    kernel = Expression.of(c0) - output
    # the kernel part splits as (1/|T|!) (alternation relations + first-type relations)
    labels = default_alt_labels(c0)
    base = alt_relation(c0, labels)
    alternating = Expression(n, d)
    for rho in _coset_representatives(labels, size):
        sgn = permutation_sign(rho)
        alternating.merge(base.relabel(rho), sgn)
        transcript.append({"type": "alt", "params": {"rho": rho, "labels": [rho[x - 1] for x in labels],
                                                      "sign": sgn}})
    if (alternating + plucker_total) * scale != kernel:
        raise AssertionError("kernel part differs from the averaged relations")
    _templates[key] = (output, kernel, transcript)
    return _templates[key]


def rewrite_simple_connected(c: CorrelatedTableau, max_labels: int = DEFAULT_MAX_LABELS) -> RewriteCertificate:
    """Certificate expressing a connected simple tableau through multi-edge or disconnected ones.

    The derivation depends only on which cells are occupied, so it is carried
    out once per shape on a template and relabeled; the diagonal action is
    sign-free, so relabeling preserves every identity exactly.
    """
    if classify(c) is not Connectivity.CONNECTED_SIMPLE:
        raise RewriteError("rewriting needs a connected tableau without multiple edges")
    if c.d < c.n + 1:
        raise RewriteError(f"rewriting needs d >= n + 1, got n={c.n}, d={c.d}")
    if c.n * c.d > max_labels:
        raise RewriteGuardError(f"dn = {c.n * c.d} exceeds the rewrite guard {max_labels}")
    c0, lam = _template(c)
    output, kernel, transcript = _rewrite_template(c0)
    return RewriteCertificate(c, output.relabel(lam), kernel.relabel(lam), Transcript(transcript, lam))


def verify_certificate(cert: RewriteCertificate) -> bool:
    """Exact check: input = output + kernel, output avoids connected simple keys, kernel part has canonical form 0."""
    n, d = cert.input.n, cert.input.d
    if (cert.output_terms.n, cert.output_terms.d) != (n, d) or (cert.kernel_part.n, cert.kernel_part.d) != (n, d):
        return False
    if not (Expression.of(cert.input) - cert.output_terms - cert.kernel_part).is_zero():
        return False
    if any(classify(key) is Connectivity.CONNECTED_SIMPLE for key in cert.output_terms):
        return False
    return canonical_form(cert.kernel_part).is_zero()
