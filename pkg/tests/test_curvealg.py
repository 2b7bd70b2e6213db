import pytest
import sympy
from hypothesis import given
from hypothesis import strategies as st

from u7slopes import curvealg
from u7slopes.curvealg import (
    DEG,
    FnFieldElem,
    NoDominantTerm,
    Y,
    _curve_expr,
    dominant_term,
    model_series,
    monomial_v,
    recurrence_coeffs,
    recurrence_coeffs_resultant,
    reduce_standard,
    ypoly,
)
from u7slopes.cyclotomic import CycloElem
from u7slopes.localfield import Embedding

_x = sympy.Symbol("x")
y_polys = st.lists(st.integers(-6, 6), min_size=1, max_size=3)
x_polys = st.lists(y_polys, min_size=1, max_size=12)


def _as_expr(cs):
    return sum(ypoly(c).as_expr() * _x ** i for i, c in enumerate(cs))


def _sympy_reduce(expr):
    # the curve is monic of degree 7 in x up to sign
    curve = sympy.Poly(-_curve_expr(_x, Y), _x)
    return sympy.Poly(expr, _x).rem(curve)


@given(x_polys)
def test_reduce_standard_matches_polynomial_remainder(cs):
    red = reduce_standard([ypoly(c) for c in cs])
    assert len(red) == DEG
    got = sympy.Poly(_as_expr(red), _x)
    assert (got - _sympy_reduce(_as_expr(cs))).is_zero


@given(x_polys, x_polys)
def test_reduction_respects_products(a, b):
    ea, eb = _as_expr(a), _as_expr(b)
    ra = _as_expr(reduce_standard([ypoly(c) for c in a]))
    rb = _as_expr(reduce_standard([ypoly(c) for c in b]))
    lhs = _sympy_reduce(sympy.expand(ea * eb))
    rhs = _sympy_reduce(sympy.expand(ra * rb))
    assert (lhs - rhs).is_zero


@given(st.integers(0, 20), st.integers(0, 20))
def test_x_powers_multiply(a, b):
    lhs = FnFieldElem.x_power(a) * FnFieldElem.x_power(b)
    assert (lhs - FnFieldElem.x_power(a + b)).is_zero()


def test_fn_field_reduction_agrees_on_q_series():
    ms = model_series(60)
    f = FnFieldElem.x_power(11) + FnFieldElem.x_power(3).scale(ypoly([2, 1]))
    series = f.to_qseries(ms.x, ms.y)
    direct = ms.x ** 11 + ms.x ** 3 * (ms.y + 2)
    top = min(series.prec, direct.prec)
    assert top > 20
    assert all(series[n] == direct[n] for n in range(min(series.lead, direct.lead), top))


def test_recurrence_elimination_matches_resultant():
    assert recurrence_coeffs() == recurrence_coeffs_resultant()


def test_recurrence_listing():
    assert all(r.ok for r in curvealg.check_recurrence_listing())


@pytest.mark.parametrize("i", range(1, 8))
def test_coordinate_consistency(i):
    assert curvealg.check_coordinate_consistency(i).ok


def test_t_inverse_index_range():
    with pytest.raises(ValueError):
        curvealg.t_inverse_numerators(0)


def test_model_identities():
    for r in curvealg.verify_model_identities(120):
        assert r.ok, r


def test_f_sign():
    assert curvealg.resolve_f_sign() == -1


def test_dominant_term_picks_unique_minimum():
    # bold-v of c t^d is 2 val(c) + 3 d with val(7) = 6
    assert dominant_term({0: 49, 3: 7, 9: 1}) == (3, 7, 21)
    assert dominant_term([1, 1]) == (0, 1, 0)
    with pytest.raises(NoDominantTerm):
        dominant_term({0: 7, 4: 1})
    with pytest.raises(ValueError):
        dominant_term({})


def test_dominant_term_with_cyclotomic_coefficient():
    from u7slopes.cyclotomic import PI1

    d, c, v = dominant_term({0: PI1 ** 4, 1: CycloElem.from_rational(1)}, emb=Embedding.TYPE1)
    assert (d, v) == (1, 3)


def test_monomial_v():
    assert monomial_v(1, 1, 0, Embedding.TYPE1) == 6
    assert monomial_v(7, 0, 1, Embedding.TYPE2) == 21


def test_dominant_table():
    rows = curvealg.check_dominant_table()
    assert len(rows) == 49
    assert all(r.ok for r in rows), [r for r in rows if not r.ok]
