"""Matrix of the twisted U_7 operator in the basis u^j = t^-j.

For a function F on the disk around the cusp at infinity

    Ut(F) = E^-1 * U_7(F * E) * W^(k-1),   E = E_{1,chi},  W = E_{1,tau} / E_{1,tau}(q^7)

with chi(3) = zeta of conductor 49 and tau of conductor 7, tau(3) = zeta^7
(Type 1) or zeta^-7 (Type 2).  Column j of the matrix holds the coefficients
of Ut(u^j) written as a power series in u.

Working with u = t^-1 instead of s = alpha*u only conjugates the matrix by
diag(alpha^i), which leaves every principal minor, hence the characteristic
series, unchanged.  The entries therefore stay in K and alpha never has to be
constructed.
"""
from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .curvealg import (
    CheckResult,
    _eval_ypoly,
    model_series,
    monomial_v,
    recurrence_coeffs,
)
from .cyclotomic import PI1, PI2, ZERO, ZETA, CycloElem, DirichletChar, zeta_poly
from .localfield import Embedding, cyclo_val, embed_cyclo
from .qseries import (
    PrecisionError,
    QSeries,
    eisenstein_w1,
    eta_quotient,
    reexpand,
    u_p,
    v_p_substitute,
)

CHI = DirichletChar(49, 1)
TAU_EXPONENT = {Embedding.TYPE1: 7, Embedding.TYPE2: 35}
UNIFORMIZER = {Embedding.TYPE1: PI1, Embedding.TYPE2: PI2}

# x-coordinate of the zero of E_{1,chi}
X_Q = zeta_poly(
    {11: -2040, 10: -2342, 9: 266, 8: 3903, 7: 883, 6: -2873, 5: -3359,
     4: 2840, 3: 2968, 2: 1515, 1: -3229, 0: -5616}
) / 1849

# 1849 * (its minimal polynomial), constant term first
X_Q_MINPOLY = (
    217533001, 593892152, 704347756, 461587448, 172055660, 32547956, 4436705,
    4649708, 3511340, 1345736, 293356, 35336, 1849,
)


def min_qprec(n: int) -> int:
    return 7 * n + 8


def tau_for(emb) -> DirichletChar:
    return DirichletChar(7, TAU_EXPONENT[Embedding.parse(emb)])


def beta_for(emb) -> CycloElem:
    return ZETA ** TAU_EXPONENT[Embedding.parse(emb)]


@lru_cache(maxsize=16)
def _eis_chi(prec: int) -> tuple[QSeries, QSeries]:
    e = eisenstein_w1(CHI, prec)
    return e, e.inverse()


@lru_cache(maxsize=16)
def _u_series(prec: int) -> QSeries:
    return eta_quotient([(7, 4), (1, -4)], prec)


@lru_cache(maxsize=16)
def weight_factor(emb, prec: int) -> QSeries:
    """E_{1,tau}(q) / E_{1,tau}(q^7), a unit series with constant term 1."""
    e = eisenstein_w1(tau_for(emb), prec)
    return e / v_p_substitute(e, 7).truncate(prec)


def weight_factor_closed_form(emb, prec: int) -> QSeries:
    """The weight factor as a rational function of x, y, z."""
    m = model_series(prec)
    x, y, z = m.x, m.y, m.z
    b = beta_for(emb)
    c = b * 3 - 8
    first = (y - x ** 4 * c.inverse()) / (y - c)
    second = (z - x * (b - Fraction(3, 2)) - (b * 2 - 3)) / (
        z + (x * (x + Fraction(7, 2))) * (b * Fraction(2, 7) + Fraction(1, 7))
    )
    return (first * second).scale(b + 2)


def twisted_u7(f: QSeries, prec: int, k: int = 1, emb=Embedding.TYPE1) -> QSeries:
    """E^-1 U_7(f E) W^(k-1) for a q-series f."""
    e, einv = _eis_chi(prec)
    out = u_p(f * e, 7) * einv
    if k > 1:
        out = out * weight_factor(Embedding.parse(emb), prec) ** (k - 1)
    return out


@dataclass
class U7Matrix:
    n: int
    k: int
    emb: Embedding
    qprec: int
    entries: list  # entries[i][j] = b_{i+1, j+1}

    def column(self, j: int) -> list[CycloElem]:
        """Column j (1-based) as the list b_{1j}..b_{nj}."""
        return [self.entries[i][j - 1] for i in range(self.n)]

    def entry(self, i: int, j: int) -> CycloElem:
        return self.entries[i - 1][j - 1]

    def truncate(self, m: int) -> "U7Matrix":
        return U7Matrix(m, self.k, self.emb, self.qprec, [row[:m] for row in self.entries[:m]])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "k": self.k,
            "type": self.emb.value,
            "qprec": self.qprec,
            "entries": [[_elem_json(c) for c in row] for row in self.entries],
        }


def _elem_json(c: CycloElem) -> list[str]:
    return [str(x) for x in c.coeffs]


def _weight1_columns(n: int, qprec: int) -> list[QSeries]:
    e, einv = _eis_chi(qprec)
    u = _u_series(qprec)
    out = []
    up = QSeries.one(qprec)
    for _ in range(n):
        up = (up * u).truncate(qprec)
        out.append(u_p(up * e, 7) * einv)
    return out


_COLUMN_CACHE: dict = {}


def column_series(n: int, qprec: int) -> list[QSeries]:
    """Ut(u^j) for j = 1..n at weight 1, cached by precision."""
    key = qprec
    have = _COLUMN_CACHE.get(key, [])
    if len(have) < n:
        have = _weight1_columns(n, qprec)
        _COLUMN_CACHE[key] = have
    return have[:n]


def build_matrix(n: int, k: int = 1, emb=Embedding.TYPE1, qprec: int | None = None) -> U7Matrix:
    """n x n truncation of the twisted U_7 matrix in the u-basis."""
    if n < 1 or k < 1:
        raise ValueError("need n >= 1 and k >= 1")
    emb = Embedding.parse(emb)
    qprec = min_qprec(n) if qprec is None else qprec
    if qprec < min_qprec(n):
        raise PrecisionError(f"q-precision {qprec} is below 7n+8 = {min_qprec(n)}")
    cols = column_series(n, qprec)
    if k > 1:
        wk = weight_factor(emb, qprec) ** (k - 1)
        cols = [c * wk for c in cols]
    u = _u_series(qprec).truncate(n + 1)
    powers = [QSeries.one(n + 1)]
    for _ in range(n):
        powers.append(powers[-1] * u)
    entries = [[ZERO] * n for _ in range(n)]
    for j, col in enumerate(cols):
        d = reexpand(col, u, n, powers)
        if not d[0].is_zero():
            raise ArithmeticError("column function does not vanish at the cusp")
        for i in range(n):
            entries[i][j] = d[i + 1]
    return U7Matrix(n, k, emb, qprec, entries)


# -- graded valuations ---------------------------------------------------------

def column_v(col: Sequence[CycloElem], c: int, emb, m: int = 60, start: int = 1) -> int | None:
    """bold-v of the column function sum_r col[r] s^r, with the alpha grading.

    Entry b_{rc} of the u-basis matrix corresponds to alpha^(c-r) b_{rc} in the
    s-basis, and bold-v(alpha) = 3, so the term contributes 2 val(b) + 3(c - r).
    Returns None for a zero column.
    """
    best = None
    for r, b in enumerate(col, start=start):
        if b.is_zero():
            continue
        v = 2 * cyclo_val(b, emb, m) + 3 * (c - r)
        best = v if best is None else min(best, v)
    return best


EXPECTED_COLUMN_V = {
    Embedding.TYPE1: (2, 4, 6, 9, 12, 14, 18),
    Embedding.TYPE2: (4, 6, 8, 11, 14, 16, 18),
}


def verify_block_structure(mat: U7Matrix, columns: Sequence[int] | None = None, m: int = 60) -> list[CheckResult]:
    """Column 7j+i agrees with column i shifted down j places.

    The shifted column must have bold-v = 18j + V_i and the difference must have
    bold-v >= 18j + 2 + V_i.
    """
    emb = mat.emb
    n = mat.n
    out = []
    base_v = {}
    for i in range(1, min(7, n) + 1):
        v = column_v(mat.column(i), i, emb, m)
        base_v[i] = v
        exp = EXPECTED_COLUMN_V[emb][i - 1]
        out.append(CheckResult(f"column {i} bold-v", v == exp, f"observed {v}, expected {exp}"))
    cols = columns if columns is not None else range(8, n + 1)
    for c in cols:
        j, i = divmod(c - 1, 7)
        i += 1
        if c > n or j == 0:
            continue
        col = mat.column(c)
        shifted = [ZERO] * j + mat.column(i)[: n - j]
        diff = [a - b for a, b in zip(col, shifted)]
        vc = column_v(col, c, emb, m)
        vd = column_v(diff, c, emb, m)
        target = 18 * j + base_v[i]
        ok = vc == target and (vd is None or vd >= target + 2)
        out.append(CheckResult(f"column {c} = shift^{j} column {i}", ok, f"v={vc} (expect {target}), error v={vd}"))
    return out


# -- q-series identities for the operator ---------------------------------------

def _zero_below(series: QSeries, prec: int) -> bool:
    return series.prec >= prec and series.truncate(prec).is_zero()


def check_twisted_commutation(j: int = 1, power: int = 1, qprec: int = 240, check: int = 20) -> CheckResult:
    """Ut(y^p u^j) = t^p Ut(u^j) as q-series."""
    m = model_series(qprec)
    u = _u_series(qprec)
    f = u ** j
    lhs = twisted_u7(f * m.y ** power, qprec)
    rhs = twisted_u7(f, qprec) * m.t ** power
    ok = _zero_below(lhs - rhs, check)
    return CheckResult(f"Ut(y^{power} u^{j}) = t^{power} Ut(u^{j})", ok, f"checked below q^{check}")


def check_recurrence(i: int = 1, qprec: int = 280, check: int = 12) -> CheckResult:
    """Ut(u^(i+7)) = t^-1 Ut(u^i) - sum_k h_k(t) t^(k-8) Ut(u^(i+7-k))."""
    m = model_series(qprec)
    cols = column_series(i + 7, qprec)
    h = recurrence_coeffs()
    t = m.t
    tinv = t.inverse()
    rhs = tinv * cols[i - 1]
    for k in range(1, 7):
        coef = _eval_ypoly(h[k], t) * tinv ** (8 - k)
        rhs = rhs - coef * cols[i + 7 - k - 1]
    ok = _zero_below(cols[i + 6] - rhs, check)
    return CheckResult(f"recurrence for column {i + 7}", ok, f"checked below q^{check}")


# -- rational forms of Ut(x^j) -------------------------------------------------

@dataclass
class RationalForm:
    """sum c_(a,b) x^a z^b (b in {0,1}) with exact K coefficients."""

    j: int
    coeffs: dict
    residual_rows: int

    def monomials(self):
        return sorted(self.coeffs.items())


def _basis_for_pole(p: int):
    if p % 2 == 0:
        return p // 2, 0
    if p >= 3:
        return (p - 3) // 2, 1
    return None


def recover_rational_form(j: int, qprec: int = 280, min_rows: int = 10) -> RationalForm:
    """Exact coefficients of (y^e (x - x_Q)/x) Ut(x^j) in the basis x^a z^b.

    e = 1 for j <= 3 and e = 2 for j = 4, 5, 6.  The form is peeled off by its
    pole order at infinity (x has a double pole, z a triple pole); what is left
    after the constant term must vanish to the available precision.
    """
    if not 1 <= j <= 6:
        raise ValueError("j must be in 1..6")
    m = model_series(qprec)
    x, y, z = m.x, m.y, m.z
    ut = twisted_u7(x ** j, qprec)
    ypow = y if j <= 3 else y * y
    f = ypow * (x - X_Q) / x * ut
    max_pole = 7 if j <= 3 else 15
    if f.prec - 1 < min_rows:
        raise PrecisionError(f"only {f.prec - 1} residual rows at q-precision {qprec}")
    basis = {}
    coeffs = {}
    xp = [QSeries.one(qprec)]
    for _ in range(8):
        xp.append(xp[-1] * x)
    resid = f
    while not resid.is_zero() and resid.lead < 0:
        p = -resid.lead
        mon = _basis_for_pole(p)
        if mon is None or p > max_pole:
            raise ArithmeticError(f"pole of order {p} outside the Riemann-Roch space")
        a, b = mon
        if mon not in basis:
            basis[mon] = xp[a] * z if b else xp[a]
        bs = basis[mon]
        c = resid.leading_coeff / bs.leading_coeff
        coeffs[mon] = c
        resid = resid - bs.scale(c)
    c0 = resid[0] if resid.lead <= 0 else ZERO
    if c0:
        coeffs[(0, 0)] = c0
        resid = resid - QSeries.one(resid.prec).scale(c0)
    rows = resid.prec - 1
    if not resid.truncate(resid.prec).is_zero():
        raise ArithmeticError(f"form for j={j} has nonzero residual at q^{resid.lead}")
    return RationalForm(j, coeffs, rows)


# Approximations for the forms above: each entry is (coefficient builder, v, e),
# the builder taking the uniformizer pi and returning {(a, b): coefficient}.

def _poly_mul(p, q):
    out = {}
    for (a1, b1), c1 in p.items():
        for (a2, b2), c2 in q.items():
            key = (a1 + a2, b1 + b2)
            if key[1] > 1:
                raise ValueError("z^2 does not occur in these approximations")
            out[key] = out.get(key, ZERO) + c1 * c2
    return {k: v for k, v in out.items() if not v.is_zero()}


def _poly_add(p, q):
    out = dict(p)
    for k, v in q.items():
        out[k] = out.get(k, ZERO) + v
    return {k: v for k, v in out.items() if not v.is_zero()}


def _mono(c, a=0, b=0):
    c = c if isinstance(c, CycloElem) else CycloElem.from_rational(c)
    return {(a, b): c}


def _x_plus(c):
    return _poly_add(_mono(1, 1), _mono(c))


def _approx_forms(pi: CycloElem, emb: Embedding) -> dict:
    p3 = _x_plus(pi ** 3)
    p43 = _x_plus(pi ** 3 * 4)
    x2p7 = _poly_add(_mono(1, 2), _mono(7))
    Z = _mono(1, 0, 1)
    if emb is Embedding.TYPE1:
        return {
            1: (_poly_mul(_mono(6), _poly_mul(Z, _poly_mul(p3, p3))), 21, 22),
            2: (_poly_add(_poly_mul(_mono(1, 1, 1), p3), _poly_mul(_mono(pi ** 2 * 5, 2), p3)), 21, 23),
            3: (_mono(pi * 2, 2, 1), 23, 24),
            4: (_poly_mul(_mono(pi, 4), _poly_mul(x2p7, p3)), 44, 45),
            5: (_poly_add(_poly_mul(_mono(3, 5, 1), p3), _poly_mul(_mono(pi ** 2 * 2, 5), _poly_mul(p3, p43))), 45, 47),
            6: (_poly_mul(_mono(pi ** 2 * 4, 6), p3), 46, 47),
        }
    return {
        1: (_poly_mul(_mono(pi * 3), _poly_mul(Z, _poly_mul(p3, p3))), 23, 24),
        2: (_poly_add(_poly_mul(_mono(pi * 2, 1, 1), p3), _poly_mul(_mono(pi ** 3 * 5, 2), p3)), 23, 25),
        3: (_mono(pi ** 2 * 3, 2, 1), 25, 26),
        4: (_poly_mul(_mono(pi ** 2 * 2, 4), _poly_mul(x2p7, p3)), 46, 47),
        5: (_poly_add(_poly_mul(_mono(pi, 5, 1), p3), _poly_mul(_mono(pi ** 3 * 5, 5), _poly_mul(p3, p43))), 47, 49),
        6: (_poly_mul(_mono(pi ** 3 * 6, 6), p3), 48, 49),
    }


def form_v(coeffs: dict, emb, m: int = 60) -> int | None:
    vals = [monomial_v(c, a, b, emb) if c.is_rational() else 2 * cyclo_val(c, emb, m) + 6 * a + 9 * b
            for (a, b), c in coeffs.items() if not c.is_zero()]
    return min(vals) if vals else None


def check_approximation(j: int, emb, form: RationalForm | None = None, qprec: int = 280) -> CheckResult:
    """bold-v(f) = bold-v(g) = v and bold-v(f - g) >= e, monomial by monomial."""
    emb = Embedding.parse(emb)
    form = form or recover_rational_form(j, qprec)
    g, v, e = _approx_forms(UNIFORMIZER[emb], emb)[j]
    vf = form_v(form.coeffs, emb)
    vg = form_v(g, emb)
    diff = _poly_add(form.coeffs, {k: -c for k, c in g.items()})
    vd = form_v(diff, emb)
    ok = vf == v and vg == v and (vd is None or vd >= e)
    return CheckResult(
        f"approximation of Ut(x^{j}), type {emb.value}", ok,
        f"v(f)={vf}, v(g)={vg} (expect {v}); v(f-g)={vd} (need >= {e})",
    )


# -- export ------------------------------------------------------------------

def matrix_to_tsv(mat: U7Matrix) -> str:
    lines = [f"# n={mat.n} k={mat.k} type={mat.emb.value} qprec={mat.qprec}", "# i\tj\tcoefficients of zeta^0..zeta^11"]
    for i in range(mat.n):
        for j in range(mat.n):
            c = mat.entries[i][j]
            lines.append(f"{i + 1}\t{j + 1}\t" + " ".join(_elem_json(c)))
    return "\n".join(lines) + "\n"


def matrix_to_json(mat: U7Matrix) -> str:
    return json.dumps(mat.to_json(), indent=1, sort_keys=True) + "\n"


def x_q_minpoly() -> list[Fraction]:
    """prod over Galois conjugates of (X - sigma(x_Q)), constant term first."""
    from .cyclotomic import GALOIS_EXPONENTS, ONE

    poly = [ONE]
    for g in GALOIS_EXPONENTS:
        r = X_Q.conjugate(g)
        new = [ZERO] * (len(poly) + 1)
        for i, c in enumerate(poly):
            new[i + 1] = new[i + 1] + c
            new[i] = new[i] - c * r
        poly = new
    if not all(c.is_rational() for c in poly):
        raise ArithmeticError("minimal polynomial has irrational coefficients")
    return [c.to_fraction() for c in poly]
