"""Function field of X_0(49) over K(y), the x^28 recurrence and the t^-i coordinates.

The curve is

    y^2 - 7xy(x^2 + 5x + 7) - x(x^6 + 7x^5 + 21x^4 + 49x^3 + 147x^2 + 343x + 343) = 0

with x = eta_1/eta_49, y = (eta_7/eta_49)^4 and t = (eta_1/eta_7)^4 = x^4/y.
Every function is written in the standard basis 1, x, ..., x^6 over Q(y).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Mapping, Sequence

import sympy
from sympy import Poly, QQ

from .cyclotomic import CycloElem, DirichletChar, ZETA
from .localfield import LocalElem, cyclo_val, v7
from .qseries import (
    QSeries,
    eisenstein_w1,
    eisenstein_w7,
    eta_quotient,
    v_p_substitute,
)

Y = sympy.Symbol("y")
DEG = 7


def ypoly(coeffs) -> Poly:
    """Polynomial in y from a list (constant term first) or an expression."""
    if isinstance(coeffs, Poly):
        return coeffs
    if isinstance(coeffs, (list, tuple)):
        return Poly(list(reversed(coeffs)) or [0], Y, domain=QQ)
    return Poly(coeffs, Y, domain=QQ)


_ZERO = ypoly([0])
_ONE = ypoly([1])

# x^7 = y^2 - 7x^6 - 21x^5 - 49x^4 - (7y + 147)x^3 - (35y + 343)x^2 - (49y + 343)x
X7_RELATION = (
    ypoly([0, 0, 1]),
    ypoly([-343, -49]),
    ypoly([-343, -35]),
    ypoly([-147, -7]),
    ypoly([-49]),
    ypoly([-21]),
    ypoly([-7]),
)
# y^2/x as a polynomial in x
Y2_OVER_X = (
    ypoly([343, 49]),
    ypoly([343, 35]),
    ypoly([147, 7]),
    ypoly([49]),
    ypoly([21]),
    ypoly([7]),
    ypoly([1]),
)


def reduce_standard(coeffs: Sequence[Poly]) -> list[Poly]:
    """Bring sum coeffs[i] x^i (coefficients in Q[y]) to degree < 7."""
    cs = [ypoly(c) for c in coeffs]
    for d in range(len(cs) - 1, DEG - 1, -1):
        c = cs[d]
        if c.is_zero:
            continue
        base = d - DEG
        for k in range(DEG):
            cs[base + k] = cs[base + k] + c * X7_RELATION[k]
        cs[d] = _ZERO
    cs = cs[:DEG] + [_ZERO] * (DEG - len(cs))
    return cs


def _mul_x_polys(a: Sequence[Poly], b: Sequence[Poly]) -> list[Poly]:
    out = [_ZERO] * (len(a) + len(b) - 1)
    for i, c in enumerate(a):
        if c.is_zero:
            continue
        for j, d in enumerate(b):
            if not d.is_zero:
                out[i + j] = out[i + j] + c * d
    return out


@dataclass(frozen=True)
class FnFieldElem:
    """sum_{j<7} (num_j(y)/den_j(y)) x^j."""

    nums: tuple
    dens: tuple = field(default=None)

    def __post_init__(self):
        nums = [ypoly(c) for c in self.nums]
        dens = [ypoly(c) for c in self.dens] if self.dens is not None else [_ONE] * len(nums)
        if len(nums) > DEG:
            raise ValueError("use FnFieldElem.from_x_poly for degree >= 7")
        nums += [_ZERO] * (DEG - len(nums))
        dens += [_ONE] * (DEG - len(dens))
        nn, dd = [], []
        for n, d in zip(nums, dens):
            if n.is_zero:
                nn.append(_ZERO)
                dd.append(_ONE)
                continue
            g = n.gcd(d)
            n, d = n.exquo(g), d.exquo(g)
            lc = d.LC()
            nn.append(n * (1 / lc) if lc != 1 else n)
            dd.append(d.monic())
        object.__setattr__(self, "nums", tuple(nn))
        object.__setattr__(self, "dens", tuple(dd))

    @classmethod
    def from_x_poly(cls, coeffs: Sequence) -> "FnFieldElem":
        return cls(tuple(reduce_standard(coeffs)))

    @classmethod
    def x_power(cls, n: int) -> "FnFieldElem":
        return cls.from_x_poly([_ZERO] * n + [_ONE])

    def common_denominator(self) -> Poly:
        den = _ONE
        for d in self.dens:
            den = den.lcm(d)
        return den.monic()

    def _numerators(self, den: Poly) -> list[Poly]:
        return [n * den.exquo(d) for n, d in zip(self.nums, self.dens)]

    def __add__(self, other: "FnFieldElem") -> "FnFieldElem":
        den = self.common_denominator().lcm(other.common_denominator())
        a, b = self._numerators(den), other._numerators(den)
        return FnFieldElem(tuple(x + y for x, y in zip(a, b)), (den,) * DEG)

    def __sub__(self, other: "FnFieldElem") -> "FnFieldElem":
        return self + other.scale(ypoly([-1]))

    def scale(self, c: Poly, den: Poly = _ONE) -> "FnFieldElem":
        return FnFieldElem(tuple(n * c for n in self.nums), tuple(d * den for d in self.dens))

    def __mul__(self, other: "FnFieldElem") -> "FnFieldElem":
        da, db = self.common_denominator(), other.common_denominator()
        prod = reduce_standard(_mul_x_polys(self._numerators(da), other._numerators(db)))
        return FnFieldElem(tuple(prod), (da * db,) * DEG)

    def is_zero(self) -> bool:
        return all(n.is_zero for n in self.nums)

    def coeff(self, j: int) -> tuple[Poly, Poly]:
        return self.nums[j], self.dens[j]

    def to_qseries(self, xs: QSeries, ys: QSeries) -> QSeries:
        acc = None
        xp = None
        for j in range(DEG):
            xp = QSeries.one(xs.prec + 2 * DEG * 2) if j == 0 else xp * xs
            n, d = self.nums[j], self.dens[j]
            if n.is_zero:
                continue
            term = xp * _eval_ypoly(n, ys) / _eval_ypoly(d, ys)
            acc = term if acc is None else acc + term
        return acc


def _eval_ypoly(p: Poly, ys: QSeries) -> QSeries:
    return ys.eval_poly([Fraction(int(c.numerator), int(c.denominator)) for c in reversed(p.all_coeffs())])


# -- recurrence for x^28 ------------------------------------------------------

def _x4_powers() -> list[list[Poly]]:
    vecs = [[_ONE] + [_ZERO] * (DEG - 1)]
    x4 = [_ZERO] * 4 + [_ONE]
    for _ in range(DEG):
        vecs.append(reduce_standard(_mul_x_polys(vecs[-1], x4)))
    return vecs


def _solve_poly_system(cols: list[list[Poly]], rhs: list[Poly]) -> list[Poly]:
    """Solve sum_k sol[k] * cols[k] = rhs over Q(y), fraction-free elimination.

    Returns numerators over a common denominator, already divided out; raises
    if the system is singular or the solution is not polynomial.
    """
    n = len(cols)
    aug = [[cols[k][r] for k in range(n)] + [rhs[r]] for r in range(n)]
    prev = _ONE
    for piv in range(n):
        sel = next((r for r in range(piv, n) if not aug[r][piv].is_zero), None)
        if sel is None:
            raise ArithmeticError("singular system for the x^28 recurrence")
        aug[piv], aug[sel] = aug[sel], aug[piv]
        p = aug[piv][piv]
        for r in range(piv + 1, n):
            for c in range(piv + 1, n + 1):
                aug[r][c] = (p * aug[r][c] - aug[r][piv] * aug[piv][c]).exquo(prev)
            aug[r][piv] = _ZERO
        prev = p
    sol = [_ZERO] * n
    for r in range(n - 1, -1, -1):
        acc = aug[r][n]
        for c in range(r + 1, n):
            acc = acc - aug[r][c] * sol[c]
        q, rem = acc.div(aug[r][r])
        if not rem.is_zero:
            raise ArithmeticError("recurrence coefficient is not a polynomial in y")
        sol[r] = q
    return sol


@lru_cache(maxsize=None)
def recurrence_coeffs() -> tuple[Poly, ...]:
    """h_0..h_6 in Q[y] with x^28 = sum_k h_k(y) x^(4k)."""
    vecs = _x4_powers()
    return tuple(_solve_poly_system(vecs[:DEG], vecs[DEG]))


def recurrence_coeffs_resultant() -> tuple[Poly, ...]:
    """Same data from Res_x(curve, x^4 - w), which is independent of the elimination."""
    x, w = sympy.symbols("x w")
    curve = _curve_expr(x, Y)
    res = Poly(sympy.resultant(curve, x ** 4 - w, x), w)
    lead = res.LC()
    out = []
    for k in range(DEG):
        c = -res.coeff_monomial(w ** k) / lead
        out.append(Poly(sympy.expand(c), Y, domain=QQ))
    return tuple(out)


def _curve_expr(x, y):
    return (
        y ** 2
        - 7 * x * y * (x ** 2 + 5 * x + 7)
        - x * (x ** 6 + 7 * x ** 5 + 21 * x ** 4 + 49 * x ** 3 + 147 * x ** 2 + 343 * x + 343)
    )


# -- coordinates of t^-i -------------------------------------------------------

@lru_cache(maxsize=None)
def _y2x_powers(top: int) -> tuple[tuple[Poly, ...], ...]:
    out = [tuple([_ONE] + [_ZERO] * (DEG - 1))]
    for _ in range(top):
        out.append(tuple(reduce_standard(_mul_x_polys(out[-1], Y2_OVER_X))))
    return tuple(out)


def t_inverse_numerators(i: int) -> list[Poly]:
    """h_{i,0}..h_{i,6} with (y^2/x)^(4i) = sum_j h_{i,j}(y) x^j."""
    if not 1 <= i <= 7:
        raise ValueError("i must be in 1..7")
    return list(_y2x_powers(28)[4 * i])


def t_inverse_coords(i: int) -> FnFieldElem:
    """t^-i = sum_j g_{i,j}(y) x^j with g_{i,j} = h_{i,j}(y) / y^(7i)."""
    den = ypoly([0] * (7 * i) + [1])
    return FnFieldElem(tuple(t_inverse_numerators(i)), (den,) * DEG)


# -- dominant terms ---------------------------------------------------------

# bold-v of the curve functions on the affinoid; bold-v is twice the
# sextuple-normalized valuation of a constant
V_T = 3
V_X = 6
V_Z = 9
V_Y = 21


class NoDominantTerm(ValueError):
    pass


def _const_val(c, emb) -> int:
    if isinstance(c, CycloElem):
        if c.is_rational():
            c = c.to_fraction()
        else:
            return cyclo_val(c, emb)
    c = Fraction(c)
    if c == 0:
        raise ValueError("zero coefficient has no valuation")
    return 6 * (v7(c.numerator) - v7(c.denominator))


def dominant_term(poly: Mapping[int, object] | Sequence, emb=1, weight: int = V_T):
    """Unique monomial of least bold-v in sum c_d t^d.

    Returns (degree, coefficient, bold-v).  Each term contributes
    2*val(c) + weight*d.  A tie for the minimum raises NoDominantTerm.
    """
    items = poly.items() if isinstance(poly, Mapping) else enumerate(poly)
    scored = []
    for d, c in items:
        if c == 0 or (isinstance(c, CycloElem) and c.is_zero()):
            continue
        scored.append((2 * _const_val(c, emb) + weight * d, d, c))
    if not scored:
        raise ValueError("zero polynomial")
    scored.sort(key=lambda s: s[0])
    if len(scored) > 1 and scored[0][0] == scored[1][0]:
        raise NoDominantTerm(f"degrees {scored[0][1]} and {scored[1][1]} tie at {scored[0][0]}")
    v, d, c = scored[0]
    return d, c, v


def monomial_v(c, a: int, b: int, emb) -> int:
    """bold-v of c x^a z^b."""
    return 2 * _const_val(c, emb) + V_X * a + V_Z * b


# -- q-expansions of the model ---------------------------------------------------

@dataclass
class ModelSeries:
    prec: int
    t: QSeries
    x: QSeries
    y: QSeries
    z: QSeries


@lru_cache(maxsize=8)
def model_series(prec: int) -> ModelSeries:
    """t, x, y, z as q-series; t, x, y are correct below q^prec."""
    t = eta_quotient([(1, 4), (7, -4)], prec)
    x = eta_quotient([(1, 1), (49, -1)], prec)
    y = eta_quotient([(7, 4), (49, -4)], prec)
    x2 = x * x
    num = y - (x * (x2 + x * 5 + 7)) * Fraction(7, 2)
    z = num / (x2 + x * 7 + 7)
    return ModelSeries(prec, t, x, y, z)


@dataclass
class CheckResult:
    name: str
    ok: bool
    detail: str = ""


def _residual(name: str, series: QSeries, prec: int) -> CheckResult:
    if series.prec < prec:
        return CheckResult(name, False, f"only known below q^{series.prec}")
    s = series.truncate(prec)
    if s.is_zero():
        return CheckResult(name, True, f"zero below q^{prec}")
    return CheckResult(name, False, f"first nonzero coefficient at q^{s.lead}")


def eisenstein_form_f(prec: int) -> QSeries:
    """The weight-2 form attached to -dt, i.e. -q dt/dq."""
    return -model_series(prec).t.derivative_q()


_HEADROOM = 96

WEIGHT7_POLY_COEFFS = (
    (141531747, 388829945),
    (178382295, 587942474),
    (32722347, 179781490),
    (0, 16346149),
)


def verify_model_identities(prec: int = 200) -> list[CheckResult]:
    """Curve equation, Weierstrass form, t = x^4/y and y = t(q^7) below q^prec."""
    m = model_series(prec + _HEADROOM)
    t, x, y, z = m.t, m.x, m.y, m.z
    curve = (
        y * y
        - (x * y * (x * x + x * 5 + 7)) * 7
        - x * x.eval_poly([343, 343, 147, 49, 21, 7, 1])
    )
    weier = z * z - x * (x * x + x * Fraction(21, 4) + 7)
    return [
        _residual("curve equation", curve, prec),
        _residual("Weierstrass form", weier, prec),
        _residual("t = x^4/y", t * y - x ** 4, prec),
        _residual("y = t(q^7)", y - v_p_substitute(t, 7).truncate(prec), prec),
    ]


def verify_eisenstein_identities(prec: int = 200, betas: Sequence[int] = (7, 35)) -> list[CheckResult]:
    """The weight-1 and weight-7 identities tying E_{1,tau}, E_{7,tau} to t."""
    work = prec + _HEADROOM
    t = model_series(work).t
    f = eisenstein_form_f(work)
    out = []
    for e in betas:
        beta = ZETA ** e
        tau = DirichletChar(7, e % 42)
        e1 = eisenstein_w1(tau, work)
        lhs = t ** 3 * (t * t + t * 13 + 49) ** 2 * e1 ** 6 / f ** 3
        rhs = (t - (beta * 3 - 8)) ** 4
        out.append(_residual(f"weight-1 Eisenstein identity, tau(3)=zeta^{e}", lhs - rhs, prec))
        e7 = eisenstein_w7(tau, work)
        pt = t.eval_poly([beta * a + b for a, b in WEIGHT7_POLY_COEFFS]) * Fraction(1, 16346149)
        lhs7 = e7 ** 6 * t ** 21 * (t * t + t * 13 + 49) ** 14 / f ** 21
        rhs7 = (t - (beta * 3 - 8)) ** 4 * t ** 6 * pt ** 6
        out.append(_residual(f"weight-7 Eisenstein identity, tau(3)=zeta^{e}", lhs7 - rhs7, prec))
    return out


def verify_recurrence_series(prec: int = 200) -> CheckResult:
    """x^28 - sum h_k(y) x^(4k) vanishes as a q-series."""
    m = model_series(prec + _HEADROOM)
    x, y = m.x, m.y
    h = recurrence_coeffs()
    acc = x ** 28
    x4 = x ** 4
    pw = QSeries.one(prec + _HEADROOM)
    for k in range(DEG):
        acc = acc - _eval_ypoly(h[k], y) * pw
        pw = pw * x4
    return _residual("x^28 recurrence", acc, prec)


def verify_models(prec: int = 200, betas: Sequence[int] = (7, 35)) -> list[CheckResult]:
    """All q-series identities of the model, each required to vanish below q^prec."""
    return (
        verify_model_identities(prec)
        + verify_eisenstein_identities(prec, betas)
        + [verify_recurrence_series(prec)]
    )


# -- reference tables ------------------------------------------------------------

def _reference() -> dict:
    import json
    from importlib import resources

    return json.loads(resources.files("u7slopes.data").joinpath("reference.json").read_text())


def listed_recurrence_coeffs() -> tuple[Poly, ...]:
    h = _reference()["recurrence_h"]["h"]
    return tuple(ypoly(h[str(k)]) for k in range(DEG))


def check_recurrence_listing() -> list[CheckResult]:
    """Computed h_k against the listing and against the resultant oracle."""
    got = recurrence_coeffs()
    want = listed_recurrence_coeffs()
    oracle = recurrence_coeffs_resultant()
    out = []
    for k in range(DEG):
        ok = got[k] == want[k] == oracle[k]
        out.append(CheckResult(f"h_{k}", ok, str(got[k].as_expr())))
    return out


def check_dominant_table() -> list[CheckResult]:
    """Dominant term of t^(7i) g_{i,j}(t) for all 49 cells."""
    rows = _reference()["dominant_terms"]["rows"]
    out = []
    for i in range(1, 8):
        nums = t_inverse_numerators(i)
        for col, (unit, p7, deg) in enumerate(rows[i - 1]):
            j = 6 - col
            p = nums[j]
            if p.degree() >= 7 * i:
                out.append(CheckResult(f"g_{i},{j}", False, f"degree {p.degree()} >= {7 * i}"))
                continue
            terms = {d: int(c) for (d,), c in zip(p.monoms(), p.coeffs())}
            try:
                d, c, v = dominant_term(terms)
            except NoDominantTerm as exc:
                out.append(CheckResult(f"g_{i},{j}", False, str(exc)))
                continue
            c = int(c)
            k7 = v7(c)
            ok = d == deg and k7 == p7 and (c // 7 ** k7) % 7 == unit
            out.append(CheckResult(
                f"g_{i},{j}", ok,
                f"dominant {c}*t^{d} (unit {(c // 7 ** k7) % 7}, 7^{k7}); listed {unit}*7^{p7}*t^{deg}",
            ))
    return out


def check_coordinate_consistency(i: int) -> CheckResult:
    """t^i * sum_j g_{i,j}(y) x^j reduces to 1, using t = x^4/y."""
    g = t_inverse_coords(i)
    prod = g * FnFieldElem.x_power(4 * i)
    prod = prod.scale(_ONE, ypoly([0] * i + [1]))
    one = FnFieldElem((_ONE,))
    return CheckResult(f"t^{i} * t^-{i} = 1", (prod - one).is_zero())


def resolve_f_sign(prec: int = 60) -> int:
    """Sign s for which the weight-1 identity holds with F = s * q dt/dq."""
    t = model_series(prec + _HEADROOM).t
    e1 = eisenstein_w1(DirichletChar(7, 7), prec + _HEADROOM)
    rhs = (t - (ZETA ** 7 * 3 - 8)) ** 4
    base = t ** 3 * (t * t + t * 13 + 49) ** 2 * e1 ** 6
    dt = t.derivative_q()
    good = [s for s in (1, -1) if _residual("", base / (dt * s) ** 3 - rhs, prec).ok]
    if len(good) != 1:
        raise ArithmeticError(f"identity holds for signs {good}")
    return good[0]
