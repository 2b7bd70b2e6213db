"""Shared hypothesis strategies."""
from fractions import Fraction

from hypothesis import strategies as st

from u7slopes.cyclotomic import DEGREE, CycloElem

small_ints = st.integers(min_value=-20, max_value=20)


@st.composite
def cyclo_elems(draw, nonzero=False, rational_coeffs=False):
    coeffs = draw(st.lists(small_ints, min_size=DEGREE, max_size=DEGREE))
    if nonzero and not any(coeffs):
        coeffs[0] = 1
    den = draw(st.sampled_from([1, 2, 3, 7, 49])) if rational_coeffs else 1
    return CycloElem([Fraction(c, den) for c in coeffs])
