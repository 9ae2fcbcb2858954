import json
import random
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracles import multinomial
from semiq.combinatorics import correlated_diagrams
from semiq.tableaux import (BracketMonomial, Connectivity, CorrelatedTableau, Expression, bilinear_form,
                            bimodule_action, classify, components, correlated_tableaux, diagonal_action,
                            diagram_tableau_count, format_fraction, from_correlated, graph_of, monomial_count,
                            monomials, normalize_bracket_rows, pair_to_tableau, parse_fraction, permutation_sign,
                            to_correlated)

WORKED_S = ((1, 2, 4), (3, 5, 6), (7, 8, 9))
WORKED_T = ((1, 2, 7), (3, 4, 5), (6, 8, 9))
WORKED_C = (((1, 2), (4,), ()), ((), (3, 5), (6,)), ((7,), (), (8, 9)))


def test_permutation_sign():
    assert permutation_sign((1, 2, 3)) == 1
    assert permutation_sign((2, 1, 3)) == -1
    assert permutation_sign((3, 1, 2)) == 1


def test_normalize_tracks_sign_and_zero():
    m = normalize_bracket_rows([[2, 1], [3, 4]])
    assert m.rows == ((1, 2), (3, 4)) and m.sign == -1
    assert normalize_bracket_rows([[1, 1], [3, 4]], 2, 2) is None
    with pytest.raises(ValueError):
        normalize_bracket_rows([[1, 2], [2, 4]])
    with pytest.raises(ValueError):
        normalize_bracket_rows([[1, 5], [2, 4]])
    with pytest.raises(ValueError):
        normalize_bracket_rows([[1, 2, 3], [4]])


@pytest.mark.parametrize("n,d", [(1, 3), (2, 2), (2, 3), (3, 2)])
def test_monomial_enumeration(n, d):
    mons = list(monomials(n, d))
    assert len(mons) == len(set(mons)) == monomial_count(n, d) == multinomial(n * d, [n] * d)


def test_worked_conversion_example():
    c, sign = to_correlated(BracketMonomial(3, 3, WORKED_S), BracketMonomial(3, 3, WORKED_T))
    assert c.cells == WORKED_C
    # reading C gives T' = -T, so S (x) T = -key
    assert sign == -1
    assert c.right_rows() == ((1, 2, 7), (4, 3, 5), (6, 8, 9))
    s, t = from_correlated(c)
    assert s.rows == WORKED_S and s.sign == 1
    assert t.rows == WORKED_T and t.sign == -1
    assert c.shape_counts() == ((2, 1, 0), (0, 2, 1), (1, 0, 2))


@pytest.mark.parametrize("n,d", [(2, 2), (2, 3), (3, 2)])
def test_tableau_counts(n, d):
    tabs = list(correlated_tableaux(n, d))
    assert len(tabs) == len(set(tabs)) == monomial_count(n, d) ** 2
    assert sum(diagram_tableau_count(x) for x in correlated_diagrams(n, d)) == len(tabs)
    for c in tabs[:50]:
        CorrelatedTableau(n, d, c.cells)


def test_tableau_validation():
    with pytest.raises(ValueError):
        CorrelatedTableau(2, 2, [[[1], [2]], [[3], [3]]])
    with pytest.raises(ValueError):
        CorrelatedTableau(2, 2, [[[1, 2, 3], []], [[], [4]]])


@st.composite
def monomial_pairs(draw):
    n = draw(st.integers(1, 3))
    d = draw(st.integers(1, 3))
    labels = list(range(1, n * d + 1))
    a = draw(st.permutations(labels))
    b = draw(st.permutations(labels))
    rows = lambda p: [list(p[i * n:(i + 1) * n]) for i in range(d)]  # noqa: E731
    return n, d, rows(a), rows(b)


@settings(max_examples=200, deadline=None)
@given(monomial_pairs())
def test_pair_round_trip_preserves_the_signed_element(case):
    n, d, left, right = case
    s = normalize_bracket_rows(left, n, d)
    t = normalize_bracket_rows(right, n, d)
    c, sign = pair_to_tableau(left, right, n, d)
    c2, sign2 = to_correlated(s, t)
    assert c == c2
    # the normalized monomials carry the sign, so they name the same element
    assert sign == sign2
    s_back, t_back = from_correlated(c)
    assert (s_back.rows, t_back.rows) == (s.rows, t.rows)
    assert s_back.sign * t_back.sign * s.sign * t.sign == sign


def test_classification_and_components():
    simple = CorrelatedTableau(2, 3, [[[1], [2], []], [[3], [], [4]], [[], [5], [6]]])
    assert classify(simple) is Connectivity.CONNECTED_SIMPLE
    multi = CorrelatedTableau(2, 3, [[[1, 2], [], []], [[], [3], [4]], [[], [5], [6]]])
    assert classify(multi) is Connectivity.DISCONNECTED
    assert components(multi) == [([0], [0]), ([1, 2], [1, 2])]
    multi2 = CorrelatedTableau(3, 2, [[[1, 2], [3]], [[4], [5, 6]]])
    assert classify(multi2) is Connectivity.CONNECTED_MULTI
    g = graph_of(simple)
    assert g.left_degrees() == g.right_degrees() == [2, 2, 2]
    assert g.is_connected()


def test_expression_algebra_and_json():
    a = CorrelatedTableau(2, 2, [[[1], [2]], [[3], [4]]])
    b = CorrelatedTableau(2, 2, [[[1, 2], []], [[], [3, 4]]])
    e = Expression.of(a, Fraction(1, 2)) + Expression.of(b, 3)
    assert (e - e).is_zero()
    assert len(e * 0) == 0
    assert bilinear_form(e, e) == Fraction(1, 4) + 9
    back = Expression.from_json(json.loads(json.dumps(e.to_json())))
    assert back == e
    with pytest.raises(ValueError):
        e + Expression(2, 3)


def test_fraction_strings():
    assert format_fraction(3) == "3/1"
    assert format_fraction(Fraction(-2, 4)) == "-1/2"
    assert parse_fraction("6/4") == Fraction(3, 2)
    assert parse_fraction(5) == 5
    with pytest.raises(ValueError):
        parse_fraction("0.5")


def test_diagonal_action_is_sign_free_and_bimodule_action_matches():
    rng = random.Random(3)
    for c in random.Random(1).sample(list(correlated_tableaux(2, 3)), 40):
        sigma = list(range(1, 7))
        rng.shuffle(sigma)
        img, sign = diagonal_action(c, sigma)
        assert sign == 1
        img2, sign2 = bimodule_action(c, sigma, sigma)
        assert (img2, sign2) == (img, 1)
