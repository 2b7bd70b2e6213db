"""Characteristic series of the truncated matrix and their Newton polygons.

For an n x n matrix M the series is

    f_n(X) = det(1 - X M) = 1 - c_1 X + c_2 X^2 - ... + (-1)^n c_n X^n

so c_j is the sum of the principal j x j minors.  Valuations are reported in
sextuple units (v(7) = 6); slopes are divided by 6 only at the end.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from itertools import accumulate
from typing import Sequence

from .cyclotomic import ONE, ZERO, CycloElem
from .localfield import DEFAULT_PREC, Embedding, LocalPrecisionError, embed_cyclo

Matrix = Sequence[Sequence[CycloElem]]


def _dot(a: Sequence[CycloElem], b: Sequence[CycloElem]) -> CycloElem:
    acc = ZERO
    for x, y in zip(a, b):
        if x and y:
            acc = acc + x * y
    return acc


def _matvec(a: Matrix, v: Sequence[CycloElem]) -> list[CycloElem]:
    return [_dot(row, v) for row in a]


def charpoly_berkowitz(a: Matrix) -> list[CycloElem]:
    """Coefficients p_0..p_n of det(X I - A), p_0 = 1, division free."""
    n = len(a)
    if n == 0:
        return [ONE]
    poly = [ONE, -a[0][0]]
    for r in range(1, n):
        row = [a[r][j] for j in range(r)]
        col = [a[i][r] for i in range(r)]
        sub = [list(a[i][:r]) for i in range(r)]
        # first column of the Toeplitz matrix: 1, -a_rr, -R C, -R A C, ...
        toep = [ONE, -a[r][r]]
        v = col
        for _ in range(r):
            toep.append(-_dot(row, v))
            v = _matvec(sub, v)
        new = []
        for i in range(r + 2):
            acc = ZERO
            for j in range(max(0, i - len(toep) + 1), min(i, r) + 1):
                if toep[i - j] and poly[j]:
                    acc = acc + toep[i - j] * poly[j]
            new.append(acc)
        poly = new
    return poly


def charpoly_leverrier(a: Matrix) -> list[CycloElem]:
    """Same coefficients by the Faddeev-LeVerrier recursion (divides by 1..n)."""
    n = len(a)
    poly = [ONE]
    m = [[ZERO] * n for _ in range(n)]
    for k in range(1, n + 1):
        # M_k = A M_{k-1} + p_{k-1} I
        prev = m
        m = [[_dot(a[i], [prev[l][j] for l in range(n)]) for j in range(n)] for i in range(n)]
        for i in range(n):
            m[i][i] = m[i][i] + poly[-1]
        am = [[_dot(a[i], [m[l][j] for l in range(n)]) for j in range(n)] for i in range(n)]
        tr = ZERO
        for i in range(n):
            tr = tr + am[i][i]
        poly.append(tr * Fraction(-1, k))
    return poly


def coeffs_from_charpoly(poly: Sequence[CycloElem]) -> list[CycloElem]:
    """c_1..c_n from det(X I - A) = sum p_j X^(n-j): c_j = (-1)^j p_j."""
    return [p if j % 2 == 0 else -p for j, p in enumerate(poly)][1:]


@dataclass
class CharSeries:
    n: int
    coeffs: list  # c_1..c_n
    stable_upto: int | None = None

    def c(self, j: int) -> CycloElem:
        return self.coeffs[j - 1]

    def valuations(self, emb, m: int = DEFAULT_PREC) -> list[int]:
        """val(c_j) for j = 1..n; precision exhaustion is an error, not infinity."""
        out = []
        for j, c in enumerate(self.coeffs, start=1):
            if c.is_zero():
                raise LocalPrecisionError(f"c_{j} is exactly zero")
            out.append(embed_cyclo(c, emb, m).val())
        return out


def char_series(mat, method: str = "berkowitz") -> CharSeries:
    """Characteristic series of a U7Matrix or a plain square matrix."""
    entries = getattr(mat, "entries", mat)
    algo = {"berkowitz": charpoly_berkowitz, "leverrier": charpoly_leverrier}[method]
    poly = algo(entries)
    return CharSeries(len(entries), coeffs_from_charpoly(poly))


def stability_check(small: CharSeries, large: CharSeries, emb, m: int = DEFAULT_PREC) -> int:
    """Largest j such that c_1..c_j of the two truncations agree to one 7-adic unit.

    Agreement at j means equal valuations and val(difference) >= val + 6.
    """
    if large.n == small.n:
        small.stable_upto = small.n
        return small.n
    upto = 0
    for j in range(1, min(small.n, large.n) + 1):
        a, b = small.c(j), large.c(j)
        if a.is_zero():
            break
        va = embed_cyclo(a, emb, m).val()
        vb = embed_cyclo(b, emb, m).val() if not b.is_zero() else None
        d = a - b
        vd = None if d.is_zero() else embed_cyclo(d, emb, m).val()
        if vb != va or (vd is not None and vd < va + 6):
            break
        upto = j
    small.stable_upto = upto
    return upto


@dataclass
class NewtonPolygon:
    points: list
    hull: list = field(default_factory=list)
    slopes: list = field(default_factory=list)  # (slope, multiplicity)

    def slope_list(self) -> list[Fraction]:
        out = []
        for s, mult in self.slopes:
            out.extend([s] * mult)
        return out


def newton_polygon(points: Sequence[tuple[int, object]]) -> NewtonPolygon:
    """Lower convex hull of (index, valuation) points, slopes ascending."""
    pts = sorted((int(i), Fraction(v)) for i, v in points)
    if len(pts) < 2:
        raise ValueError("need at least two points")
    if len({p[0] for p in pts}) != len(pts):
        raise ValueError("indices must be distinct")
    hull: list = []
    for p in pts:
        while len(hull) >= 2:
            (x1, y1), (x2, y2) = hull[-2], hull[-1]
            # drop the middle point unless it lies strictly below the chord
            if (y2 - y1) * (p[0] - x1) >= (p[1] - y1) * (x2 - x1):
                hull.pop()
            else:
                break
        hull.append(p)
    slopes = []
    for (x1, y1), (x2, y2) in zip(hull, hull[1:]):
        slopes.append((Fraction(y2 - y1) / (x2 - x1), x2 - x1))
    return NewtonPolygon(pts, hull, slopes)


def slopes(series: CharSeries, emb, m: int = DEFAULT_PREC, upto: int | None = None) -> list[Fraction]:
    """Newton slopes (v(7) = 1) from c_1..c_upto, upto defaulting to the stable range."""
    upto = series.stable_upto if upto is None else upto
    if upto is None:
        upto = series.n
    vals = series.valuations(emb, m)[:upto]
    pts = [(0, 0)] + [(j, Fraction(v, 6)) for j, v in enumerate(vals, start=1)]
    return newton_polygon(pts).slope_list()


def _floor_term(emb, i: int) -> int:
    emb = Embedding.parse(emb)
    return (9 * i) // 7 if emb is Embedding.TYPE1 else (9 * i + 6) // 7


def predicted_slopes(emb, count: int) -> list[Fraction]:
    return [Fraction(_floor_term(emb, i), 6) for i in range(1, count + 1)]


def predicted_coeff_val(emb, j: int) -> int:
    """Sextuple valuation of c_j predicted by the slope formula."""
    return sum(_floor_term(emb, i) for i in range(1, j + 1))


def predicted_coeff_vals(emb, count: int) -> list[int]:
    return list(accumulate(_floor_term(emb, i) for i in range(1, count + 1)))


@dataclass
class SlopeRow:
    j: int
    val: int
    slope: Fraction
    predicted: Fraction
    predicted_val: int

    @property
    def match(self) -> bool:
        return self.val == self.predicted_val and self.slope == self.predicted


def slope_table(series: CharSeries, emb, m: int = DEFAULT_PREC) -> list[SlopeRow]:
    upto = series.stable_upto if series.stable_upto is not None else series.n
    vals = series.valuations(emb, m)[:upto]
    sl = slopes(series, emb, m, upto)
    pred = predicted_slopes(emb, upto)
    pvals = predicted_coeff_vals(emb, upto)
    return [SlopeRow(j + 1, vals[j], sl[j], pred[j], pvals[j]) for j in range(upto)]


def root_valuations(coeffs: Sequence) -> NewtonPolygon:
    """Newton polygon whose slopes are the 7-adic valuations of the roots.

    Uses the points (deg - i, v_7(a_i)) for the nonzero coefficients a_i
    (constant term first), i.e. the polygon of the reciprocal polynomial.
    """
    from .localfield import v7

    deg = len(coeffs) - 1
    pts = []
    for i, c in enumerate(coeffs):
        c = Fraction(c)
        if c:
            pts.append((deg - i, v7(c.numerator) - v7(c.denominator)))
    return newton_polygon(pts)
