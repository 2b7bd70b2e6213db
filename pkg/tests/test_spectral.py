from fractions import Fraction

import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from u7slopes.cyclotomic import ONE, ZERO, CycloElem
from u7slopes.localfield import Embedding
from u7slopes.spectral import (
    CharSeries,
    char_series,
    charpoly_berkowitz,
    charpoly_leverrier,
    coeffs_from_charpoly,
    newton_polygon,
    predicted_coeff_val,
    predicted_coeff_vals,
    predicted_slopes,
    root_valuations,
    slopes,
    stability_check,
)

from .strategies import cyclo_elems


@st.composite
def square(draw, elems, max_n=4):
    n = draw(st.integers(1, max_n))
    return [[draw(elems) for _ in range(n)] for _ in range(n)]


rational = st.integers(-30, 30).map(CycloElem.from_rational)


@given(square(rational, max_n=6))
def test_berkowitz_matches_sympy(a):
    m = sympy.Matrix([[int(x.to_fraction()) for x in row] for row in a])
    want = m.charpoly(sympy.Symbol("X")).all_coeffs()
    got = [c.to_fraction() for c in charpoly_berkowitz(a)]
    assert got == [Fraction(int(w)) for w in want]


@given(square(cyclo_elems(), max_n=3))
def test_two_charpoly_algorithms_agree(a):
    assert charpoly_berkowitz(a) == charpoly_leverrier(a)


@given(square(cyclo_elems(), max_n=4))
def test_trace_and_determinant(a):
    n = len(a)
    c = coeffs_from_charpoly(charpoly_berkowitz(a))
    tr = ZERO
    for i in range(n):
        tr = tr + a[i][i]
    assert c[0] == tr
    if n == 2:
        assert c[1] == a[0][0] * a[1][1] - a[0][1] * a[1][0]


def test_triangular_matrix():
    d = [CycloElem.from_rational(v) for v in (2, 3, 5)]
    a = [[d[0], ONE, ONE], [ZERO, d[1], ONE], [ZERO, ZERO, d[2]]]
    s = char_series(a)
    assert [c.to_fraction() for c in s.coeffs] == [10, 31, 30]
    assert s.n == 3


def test_empty_matrix():
    assert charpoly_berkowitz([]) == [ONE]


points = st.lists(
    st.tuples(st.integers(0, 30), st.fractions(min_value=-5, max_value=20, max_denominator=6)),
    min_size=2,
    max_size=15,
    unique_by=lambda p: p[0],
)


@given(points)
def test_newton_polygon_is_lower_convex_hull(pts):
    np_ = newton_polygon(pts)
    sl = [s for s, _ in np_.slopes]
    assert sl == sorted(sl) and len(set(sl)) == len(sl)
    xs = [p[0] for p in pts]
    assert sum(m for _, m in np_.slopes) == max(xs) - min(xs)
    # every point lies on or above the polygon
    for x, y in pts:
        for (x1, y1), (x2, y2) in zip(np_.hull, np_.hull[1:]):
            if x1 <= x <= x2:
                assert Fraction(y) >= y1 + (y2 - y1) * Fraction(x - x1, x2 - x1)
    assert np_.hull[0][0] == min(xs) and np_.hull[-1][0] == max(xs)


def test_newton_polygon_errors():
    with pytest.raises(ValueError):
        newton_polygon([(0, 0)])
    with pytest.raises(ValueError):
        newton_polygon([(1, 0), (1, 2)])


def test_root_valuations_small_examples():
    assert [s for s, _ in root_valuations([49, 13, 1]).slopes] == [0, 2]
    nps = root_valuations([7, 0, 1])
    assert nps.slopes == [(Fraction(1, 2), 2)]


@given(st.lists(st.integers(-3, 3), min_size=1, max_size=4))
def test_root_valuations_of_product_of_linear_factors(exps):
    # roots 7^e (times units) give exactly the slopes e
    x = sympy.Symbol("x")
    p = sympy.Poly(sympy.prod([x - sympy.Rational(7) ** e * 2 for e in exps]), x)
    coeffs = [Fraction(int(c.p), int(c.q)) for c in reversed(p.all_coeffs())]
    assert root_valuations(coeffs).slope_list() == sorted(Fraction(e) for e in exps)


def test_predicted_slopes():
    assert predicted_slopes(Embedding.TYPE1, 7) == [Fraction(v, 6) for v in (1, 2, 3, 5, 6, 7, 9)]
    assert predicted_slopes(Embedding.TYPE2, 7) == [Fraction(v, 6) for v in (2, 3, 4, 6, 7, 8, 9)]
    assert predicted_coeff_vals(Embedding.TYPE1, 5) == [1, 3, 6, 11, 17]
    assert predicted_coeff_val(Embedding.TYPE2, 3) == 9


@given(st.integers(1, 200))
def test_predicted_slopes_are_strictly_increasing_up_to_period(i):
    # the slope sequence grows by exactly 9/6 over every 7 consecutive indices
    for emb in Embedding:
        s = predicted_slopes(emb, i + 7)
        assert s[i + 6] - s[i - 1] == Fraction(9, 6)


def test_slopes_from_diagonal_matrix():
    # uniformizer powers as eigenvalues give slopes in sixths
    from u7slopes.cyclotomic import PI1

    diag = [PI1 ** 1, PI1 ** 2, PI1 ** 4]
    a = [[diag[i] if i == j else ZERO for j in range(3)] for i in range(3)]
    s = char_series(a)
    assert slopes(s, Embedding.TYPE1) == [Fraction(1, 6), Fraction(2, 6), Fraction(4, 6)]


def test_stability_check_identical_series():
    s = CharSeries(3, [ONE, ONE, ONE])
    t = CharSeries(4, [ONE, ONE, ONE * 2, ONE])
    assert stability_check(s, t, Embedding.TYPE1) == 2
    assert s.stable_upto == 2
