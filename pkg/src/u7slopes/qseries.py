"""Truncated Laurent series in q with coefficients in Q(zeta_42).

A QSeries knows its own precision: coefficients are exact for every
exponent below ``prec`` and unknown from ``prec`` on.  Every operation
propagates that bound so precision loss is never silent.
"""
from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational
from typing import Iterable, Sequence

from .cyclotomic import (
    _PHI_TAIL,
    DEGREE,
    ONE,
    ZERO,
    CycloElem,
    DirichletChar,
    bernoulli_generalized,
    char_eval,
)


class PrecisionError(ArithmeticError):
    """Raised when a computation needs coefficients beyond the known precision."""


def _as_elem(c) -> CycloElem:
    return c if isinstance(c, CycloElem) else CycloElem.from_rational(c)


class QSeries:
    __slots__ = ("lead", "coeffs", "prec")

    def __init__(self, lead: int, coeffs: Iterable, prec: int):
        cs = [_as_elem(c) for c in coeffs]
        del cs[max(prec - lead, 0):]
        k = 0
        while k < len(cs) and cs[k].is_zero():
            k += 1
        if k == len(cs):
            self.lead, self.coeffs = prec, []
        else:
            self.lead, self.coeffs = lead + k, cs[k:]
        self.prec = prec

    @classmethod
    def monomial(cls, exp: int, prec: int, c=1) -> "QSeries":
        return cls(exp, [c], prec)

    @classmethod
    def one(cls, prec: int) -> "QSeries":
        return cls(0, [ONE], prec)

    # -- inspection ------------------------------------------------------
    def is_zero(self) -> bool:
        return not self.coeffs

    @property
    def leading_coeff(self) -> CycloElem:
        if not self.coeffs:
            raise PrecisionError("series is zero to known precision")
        return self.coeffs[0]

    def __getitem__(self, n: int) -> CycloElem:
        if n >= self.prec:
            raise PrecisionError(f"coefficient of q^{n} unknown (prec {self.prec})")
        k = n - self.lead
        if k < 0 or k >= len(self.coeffs):
            return ZERO
        return self.coeffs[k]

    def terms(self) -> list[tuple[int, CycloElem]]:
        return [(self.lead + k, c) for k, c in enumerate(self.coeffs) if c]

    def is_rational(self) -> bool:
        return all(c.is_rational() for c in self.coeffs)

    def __repr__(self) -> str:
        shown = " + ".join(f"({c})*q^{e}" for e, c in self.terms()[:6])
        return f"QSeries({shown or '0'} + O(q^{self.prec}))"

    # -- ring operations -------------------------------------------------
    def truncate(self, prec: int) -> "QSeries":
        if prec > self.prec:
            raise PrecisionError(f"cannot extend precision {self.prec} to {prec}")
        return QSeries(self.lead, self.coeffs, prec)

    def shift(self, k: int) -> "QSeries":
        """Multiply by q^k."""
        return QSeries(self.lead + k, self.coeffs, self.prec + k)

    def __neg__(self) -> "QSeries":
        return QSeries(self.lead, [-c for c in self.coeffs], self.prec)

    def __add__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            other = QSeries(0, [_as_elem(other)], max(self.prec, 1))
        prec = min(self.prec, other.prec)
        lead = min(self.lead, other.lead, prec)
        out = [ZERO] * (prec - lead)
        for s in (self, other):
            for k, c in enumerate(s.coeffs):
                e = s.lead + k - lead
                if e >= len(out):
                    break
                out[e] = out[e] + c
        return QSeries(lead, out, prec)

    __radd__ = __add__

    def __sub__(self, other) -> "QSeries":
        return self + (-other)

    def __rsub__(self, other) -> "QSeries":
        return (-self) + other

    def scale(self, c) -> "QSeries":
        c = _as_elem(c)
        if c.is_zero():
            return QSeries(self.prec, [], self.prec)
        return QSeries(self.lead, [a * c for a in self.coeffs], self.prec)

    def __mul__(self, other) -> "QSeries":
        if not isinstance(other, QSeries):
            return self.scale(other)
        if self.is_zero() or other.is_zero():
            prec = min(self.lead + other.prec, other.lead + self.prec)
            return QSeries(prec, [], prec)
        lead = self.lead + other.lead
        prec = min(self.lead + other.prec, other.lead + self.prec)
        n = prec - lead
        return QSeries(lead, _convolve(self.coeffs, other.coeffs, n), prec)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        if self.is_zero():
            raise ZeroDivisionError("series is zero to known precision")
        n = self.prec - self.lead
        a = self.coeffs
        c0inv = a[0].inverse()
        b = [c0inv]
        for k in range(1, n):
            acc = ZERO
            for i in range(1, min(k, len(a) - 1) + 1):
                if a[i] and b[k - i]:
                    acc = acc + a[i] * b[k - i]
            b.append(-(acc * c0inv))
        return QSeries(-self.lead, b, -self.lead + n)

    def __truediv__(self, other) -> "QSeries":
        if isinstance(other, QSeries):
            return self * other.inverse()
        return self.scale(_as_elem(other).inverse())

    def __rtruediv__(self, other) -> "QSeries":
        return self.inverse().scale(other)

    def __pow__(self, e: int) -> "QSeries":
        if e < 0:
            return self.inverse() ** (-e)
        if e == 0:
            return QSeries.one(self.prec - self.lead)
        result, base = None, self
        while e:
            if e & 1:
                result = base if result is None else result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def derivative_q(self) -> "QSeries":
        """q * d/dq."""
        return QSeries(self.lead, [c * (self.lead + k) for k, c in enumerate(self.coeffs)], self.prec)

    def eval_poly(self, coeffs: Sequence) -> "QSeries":
        """sum(coeffs[i] * self^i), Horner."""
        acc = None
        for c in reversed(list(coeffs)):
            acc = QSeries.one(self.prec - self.lead).scale(c) if acc is None else acc * self + c
        return acc


def _convolve(a: Sequence[CycloElem], b: Sequence[CycloElem], n: int) -> list[CycloElem]:
    """First n coefficients of the product of two coefficient lists.

    Each side is split into its 12 zeta-components over a common
    denominator; component products go through int_convolve and the
    23 partial sums are reduced modulo PHI42 at the end.
    """
    a, b = a[:n], b[:n]
    da, ca = _components(a)
    db, cb = _components(b)
    acc = [None] * (2 * DEGREE - 1)
    for i, ai in ca.items():
        for j, bj in cb.items():
            prod = int_convolve(ai, bj, n)
            cur = acc[i + j]
            acc[i + j] = prod if cur is None else [x + y for x, y in zip(cur, prod)]
    zero = [0] * n
    comps = [c if c is not None else zero for c in acc]
    for d in range(2 * DEGREE - 2, DEGREE - 1, -1):
        top = comps[d]
        if top is zero:
            continue
        base = d - DEGREE
        for k, v in _PHI_TAIL:
            row = comps[base + k]
            comps[base + k] = [x - v * y for x, y in zip(row, top)]
    den = da * db
    return [CycloElem._raw([comps[k][m] for k in range(DEGREE)], den) for m in range(n)]


def _components(cs: Sequence[CycloElem]) -> tuple[int, dict[int, list[int]]]:
    den = math.lcm(*(c.den for c in cs)) if cs else 1
    comps: dict[int, list[int]] = {}
    for m, c in enumerate(cs):
        scale = den // c.den
        for k, v in enumerate(c.num):
            if v:
                comps.setdefault(k, [0] * len(cs))[m] = v * scale
    return den, comps


def int_convolve(a: Sequence[int], b: Sequence[int], n: int) -> list[int]:
    """First n coefficients of the product of integer polynomials
    (Kronecker substitution through one big-integer product)."""
    a, b = list(a[:n]), list(b[:n])
    if not a or not b:
        return [0] * n
    bound = max(map(abs, a)) * max(map(abs, b)) * min(len(a), len(b))
    if bound == 0:
        return [0] * n
    nbytes = (bound.bit_length() + 2 + 7) // 8
    bits = 8 * nbytes
    pa = _pack(a, bits)
    pb = _pack(b, bits)
    prod = pa * pb
    m = len(a) + len(b) - 1
    half = 1 << (bits - 1)
    offset = _pack([half] * m, bits)
    raw = (prod + offset).to_bytes(m * nbytes + 1, "little")
    out = []
    for k in range(min(m, n)):
        out.append(int.from_bytes(raw[k * nbytes:(k + 1) * nbytes], "little") - half)
    out += [0] * (n - len(out))
    return out


def _pack(coeffs: Sequence[int], bits: int) -> int:
    acc = 0
    for c in reversed(coeffs):
        acc = (acc << bits) + c
    return acc


# -- constructions ----------------------------------------------------------

def _euler_product(m: int, e: int, n: int) -> list[int]:
    """First n coefficients of prod_{k>=1} (1 - q^(mk))^e."""
    c = [0] * n
    c[0] = 1
    step = m
    while step < n:
        if e > 0:
            for _ in range(e):
                for i in range(n - 1, step - 1, -1):
                    c[i] -= c[i - step]
        else:
            for _ in range(-e):
                for i in range(step, n):
                    c[i] += c[i - step]
        step += m
    return c


def eta_quotient(spec: Sequence[tuple[int, int]], prec: int) -> QSeries:
    """prod eta_m^e for spec = [(m, e), ...], eta_m = q^(m/24) prod (1 - q^(mn)).

    ``prec`` is the absolute precision of the result.
    """
    weight = sum(m * e for m, e in spec)
    if weight % 24:
        raise ValueError(f"non-integral leading exponent {Fraction(weight, 24)}")
    lead = weight // 24
    n = prec - lead
    if n <= 0:
        raise ValueError("prec must exceed the leading exponent")
    coeffs = [1] + [0] * (n - 1)
    for m, e in spec:
        coeffs = int_convolve(coeffs, _euler_product(m, e, n), n)
    return QSeries(lead, coeffs, prec)


def u_p(f: QSeries, p: int) -> QSeries:
    """(f | U_p)(q) = sum a_{np} q^n."""
    start = -((-f.lead) // p)
    stop = -((-f.prec) // p)
    return QSeries(start, [f[p * k] if p * k < f.prec else ZERO for k in range(start, stop)], stop)


def v_p_substitute(f: QSeries, p: int) -> QSeries:
    """F(q) -> F(q^p)."""
    out = [ZERO] * (p * (f.prec - f.lead) - p + 1) if f.coeffs else []
    for k, c in enumerate(f.coeffs):
        out[p * k] = c
    return QSeries(p * f.lead, out, p * f.prec)


def divisor_sum(chi: DirichletChar, n: int, power: int = 0) -> CycloElem:
    acc = ZERO
    for d in range(1, math.isqrt(n) + 1):
        if n % d == 0:
            for dd in {d, n // d}:
                v = char_eval(chi, dd)
                if v:
                    acc = acc + v * dd ** power
    return acc


def _eisenstein(k: int, chi: DirichletChar, prec: int) -> QSeries:
    if chi.is_odd() != bool(k % 2):
        raise ValueError(f"character parity does not match weight {k}")
    b = bernoulli_generalized(k, chi)
    if b.is_zero():
        raise ValueError("generalized Bernoulli number vanishes")
    c = -2 * k / b
    coeffs = [ONE] + [divisor_sum(chi, n, k - 1) * c for n in range(1, prec)]
    return QSeries(0, coeffs, prec)


def eisenstein_w1(chi: DirichletChar, prec: int) -> QSeries:
    """1 - (2/B_{1,chi}) sum_n (sum_{d|n} chi(d)) q^n."""
    return _eisenstein(1, chi, prec)


def eisenstein_w7(tau: DirichletChar, prec: int) -> QSeries:
    """1 - (14/B_{7,tau}) sum_n (sum_{d|n} tau(d) d^6) q^n."""
    return _eisenstein(7, tau, prec)


def reexpand(f: QSeries, u: QSeries, n: int, powers: Sequence[QSeries] | None = None) -> list[CycloElem]:
    """Coefficients d_0..d_n with f = sum d_i u^i + O(q^(n+1)).

    ``u`` must start at q^1.  ``powers`` may supply u^0..u^n precomputed.
    """
    if u.lead != 1:
        raise ValueError("u must have leading exponent 1")
    if f.lead < 0:
        raise ValueError("f has a pole at q = 0")
    if f.prec < n + 1:
        raise PrecisionError(f"need f to precision {n + 1}, have {f.prec}")
    if powers is None:
        powers = [QSeries.one(n + 1)]
        for _ in range(n):
            powers.append(powers[-1] * u)
    lead_inv = u.leading_coeff.inverse()
    resid = [f[k] for k in range(n + 1)]
    out = []
    for i in range(n + 1):
        d = resid[i] if i == 0 else resid[i] * lead_inv ** i
        out.append(d)
        if d:
            p = powers[i]
            for e, c in p.terms():
                if e > n:
                    break
                resid[e] = resid[e] - d * c
    return out
