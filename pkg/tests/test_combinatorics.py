from math import comb

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import brute_diagram_count, brute_kostka, brute_syt_count
from semiq.combinatorics import (CorrelatedDiagram, Partition, conjugate, correlated_diagrams, count_ssyt_pairs,
                                 diagonal_partition, dominates, kostka, partitions_of, rectangle, rsk, rsk_inverse,
                                 semistandard_tableaux, standard_tableaux, syt_count)


def test_partition_validation():
    assert Partition((3, 1, 0)).parts == (3, 1)
    with pytest.raises(ValueError):
        Partition((1, 2))
    with pytest.raises(ValueError):
        Partition((2, -1))


def test_conjugate_examples():
    assert conjugate(Partition((3, 1))).parts == (2, 1, 1)
    assert conjugate(rectangle(3, 2)).parts == (3, 3)


@given(st.integers(min_value=1, max_value=9).flatmap(lambda k: st.sampled_from(partitions_of(k))))
def test_conjugate_is_an_involution(lam):
    assert conjugate(conjugate(lam)) == lam
    assert conjugate(lam).size == lam.size


def test_dominance():
    assert dominates(Partition((2, 2)), Partition((2, 1, 1)))
    assert not dominates(Partition((2, 1, 1)), Partition((2, 2)))
    with pytest.raises(ValueError):
        dominates(Partition((2,)), Partition((1,)))


def test_partition_counts():
    assert [len(partitions_of(k)) for k in range(1, 9)] == [1, 2, 3, 5, 7, 11, 15, 22]


@pytest.mark.parametrize("shape", [(1,), (2, 1), (2, 2), (3, 2), (2, 2, 2), (3, 3), (3, 1, 1), (4, 2, 1)])
def test_hook_formula_against_brute_force(shape):
    lam = Partition(shape)
    assert syt_count(lam) == brute_syt_count(shape)
    assert sum(1 for _ in standard_tableaux(lam)) == syt_count(lam)


def test_two_row_rectangles_give_catalan_numbers():
    # two-row rectangles are counted by Catalan numbers
    for d in range(1, 10):
        assert syt_count(rectangle(2, d)) == comb(2 * d, d) // (d + 1)
    assert [syt_count(rectangle(d, 2)) for d in (2, 3, 4, 5)] == [2, 5, 14, 42]


@pytest.mark.parametrize("shape,content", [((2, 1), (1, 1, 1)), ((3, 1), (2, 2)), ((2, 2), (2, 1, 1)),
                                           ((3, 2, 1), (2, 2, 2)), ((2, 2, 2), (2, 2, 2)), ((1, 1, 1), (3,))])
def test_kostka_against_brute_force(shape, content):
    assert kostka(Partition(shape), content) == brute_kostka(shape, content)


def test_semistandard_tableaux_are_semistandard():
    for t in semistandard_tableaux(Partition((3, 2, 1)), (2, 2, 2)):
        assert all(a <= b for r in t for a, b in zip(r, r[1:]))
        assert all(t[i][j] < t[i + 1][j] for i in range(len(t) - 1) for j in range(len(t[i + 1])))


@pytest.mark.parametrize("n,d", [(1, 2), (2, 2), (1, 3), (2, 3), (3, 2)])
def test_diagram_enumeration_against_brute_force(n, d):
    diagrams = list(correlated_diagrams(n, d))
    assert len(diagrams) == brute_diagram_count(n, d)
    assert len(set(diagrams)) == len(diagrams)
    assert [x.counts for x in diagrams] == sorted(x.counts for x in diagrams)


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 3), (1, 4)])
def test_rsk_is_a_bijection_onto_ssyt_pairs(n, d):
    diagrams = list(correlated_diagrams(n, d))
    images = {rsk(x) for x in diagrams}
    assert len(images) == len(diagrams) == count_ssyt_pairs(n, d)
    for x in diagrams:
        p, q = rsk(x)
        assert rsk_inverse(p, q, n, d) == x


def test_rsk_identity_example():
    p, q = rsk(CorrelatedDiagram.from_counts([[1, 0], [0, 1]]))
    assert p == q == ((1, 2),)


def test_rsk_inverse_rejects_bad_pairs():
    with pytest.raises(ValueError):
        rsk_inverse(((1, 2),), ((1,), (2,)), 1, 2)
    with pytest.raises(ValueError):
        rsk_inverse(((2, 1),), ((1, 2),), 1, 2)


@st.composite
def diagrams(draw):
    n = draw(st.integers(1, 3))
    d = draw(st.integers(1, 4))
    # a sum of n permutation matrices has all line sums n
    counts = [[0] * d for _ in range(d)]
    for _ in range(n):
        perm = draw(st.permutations(range(d)))
        for i, j in enumerate(perm):
            counts[i][j] += 1
    return CorrelatedDiagram(n, d, tuple(map(tuple, counts)))


@settings(max_examples=150, deadline=None)
@given(diagrams())
def test_rsk_round_trip_property(diag):
    p, q = rsk(diag)
    assert sorted(x for r in p for x in r) == sorted(x for r in q for x in r)
    assert [len(r) for r in p] == [len(r) for r in q]
    assert rsk_inverse(p, q, diag.n, diag.d) == diag


def test_diagonal_partition_of_worked_example():
    diag = CorrelatedDiagram.from_counts([[2, 1, 0], [0, 2, 1], [1, 0, 2]])
    assert diagonal_partition(diag).parts == (2, 2, 2, 1, 1, 1)


def test_diagram_validation():
    with pytest.raises(ValueError):
        CorrelatedDiagram.from_counts([[2, 0], [1, 1]])
