"""7-adic arithmetic in the totally ramified sextic Q_7(zeta_7).

Elements are written in the power basis of the uniformizer lam = zeta_7 - 1,
whose minimal polynomial E(lam) = ((1 + lam)^7 - 1)/lam is Eisenstein.
Valuations are normalized so that v(7) = 6 and v(lam) = 1.

Both completions of Q(zeta_42) above 7 are modelled by this one field; the
embedding type only changes where zeta is sent.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

from .cyclotomic import DEGREE as K_DEGREE
from .cyclotomic import CycloElem

P = 7
E_DEG = 6
# E(lam) = lam^6 + 7 lam^5 + 21 lam^4 + 35 lam^3 + 35 lam^2 + 21 lam + 7
EISENSTEIN = tuple(math.comb(7, k + 1) for k in range(E_DEG)) + (1,)
DEFAULT_PREC = 60


class Embedding(Enum):
    """Type 1: zeta = -2 mod the maximal ideal; Type 2: zeta = -4."""

    TYPE1 = 1
    TYPE2 = 2

    @classmethod
    def parse(cls, v) -> "Embedding":
        if isinstance(v, Embedding):
            return v
        return {1: cls.TYPE1, 2: cls.TYPE2, "1": cls.TYPE1, "2": cls.TYPE2}[v]


class LocalPrecisionError(ArithmeticError):
    """An element is zero to the working precision."""


def _check_eisenstein() -> None:
    assert EISENSTEIN[-1] == 1
    assert all(c % P == 0 for c in EISENSTEIN[:-1])
    assert EISENSTEIN[0] % (P * P) != 0


_check_eisenstein()


def v7(n: int) -> int:
    if n == 0:
        raise ValueError("v7(0) is infinite")
    k = 0
    while n % P == 0:
        n //= P
        k += 1
    return k


@dataclass(frozen=True)
class PadicNum:
    """unit * 7^val, the unit known modulo 7^prec."""

    unit: int
    val: int
    prec: int

    @classmethod
    def from_int(cls, n: int, prec: int) -> "PadicNum":
        if n % P ** prec == 0:
            return cls(0, prec, prec)
        v = v7(n)
        return cls((n // P ** v) % P ** prec, v, prec)

    def to_int(self) -> int:
        return self.unit * P ** self.val


class LocalElem:
    """7^shift * sum(coeffs[i] lam^i), coefficients known modulo 7^prec."""

    __slots__ = ("coeffs", "shift", "prec", "emb")

    def __init__(self, coeffs: Sequence[int], shift: int = 0, prec: int = DEFAULT_PREC, emb=None):
        mod = P ** prec
        cs = [int(c) % mod for c in coeffs] + [0] * (E_DEG - len(coeffs))
        if len(cs) > E_DEG:
            cs = _reduce_e(cs, mod)
        # pull a common power of 7 into the shift so prec is relative precision
        nz = [c for c in cs if c]
        if nz:
            k = min(v7(c) for c in nz)
            if k:
                cs = [c // P ** k for c in cs]
                shift += k
                prec -= k
        self.coeffs = tuple(cs)
        self.shift = shift
        self.prec = prec
        self.emb = emb

    @classmethod
    def from_int(cls, n: int, prec: int = DEFAULT_PREC, emb=None) -> "LocalElem":
        return cls([n], 0, prec, emb)

    @classmethod
    def from_rational(cls, r, prec: int = DEFAULT_PREC, emb=None) -> "LocalElem":
        r = Fraction(r)
        if r == 0:
            return cls([0], 0, prec, emb)
        num, den = r.numerator, r.denominator
        sh = 0
        while num % P == 0:
            num //= P
            sh += 1
        while den % P == 0:
            den //= P
            sh -= 1
        mod = P ** prec
        return cls([num * pow(den, -1, mod)], sh, prec, emb)

    @classmethod
    def lam(cls, prec: int = DEFAULT_PREC, emb=None) -> "LocalElem":
        return cls([0, 1], 0, prec, emb)

    # -- inspection ------------------------------------------------------
    @property
    def abs_prec(self) -> int:
        """Absolute precision in sextuple units (value known mod lam^abs_prec)."""
        return E_DEG * (self.shift + self.prec)

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def val(self) -> int:
        """Valuation with v(7) = 6."""
        best = None
        for i, c in enumerate(self.coeffs):
            if c:
                v = E_DEG * v7(c) + i
                best = v if best is None else min(best, v)
        if best is None:
            raise LocalPrecisionError(
                f"element is zero to precision (known mod 7^{self.shift + self.prec})"
            )
        return E_DEG * self.shift + best

    def residue(self) -> int:
        """Image in the residue field F_7 of an integral element."""
        v = self.val() if not self.is_zero() else self.abs_prec
        if v < 0:
            raise ValueError("element is not integral")
        if self.shift > 0:
            return 0
        return (self.coeffs[0] * P ** self.shift) % P if self.shift == 0 else self._normalized().coeffs[0] % P

    def _normalized(self) -> "LocalElem":
        """Same value with shift >= 0 pushed into the coefficients when possible."""
        if self.shift >= 0:
            return LocalElem([c * P ** self.shift for c in self.coeffs], 0, self.prec + self.shift, self.emb)
        k = -self.shift
        if all(c % P ** k == 0 for c in self.coeffs):
            return LocalElem([c // P ** k for c in self.coeffs], 0, self.prec - k, self.emb)
        raise ValueError("element is not integral")

    def __repr__(self) -> str:
        tag = f", {self.emb.name}" if self.emb else ""
        return f"LocalElem({list(self.coeffs)}, shift={self.shift}, prec={self.prec}{tag})"

    # -- arithmetic ------------------------------------------------------
    def _coerce(self, other) -> "LocalElem":
        if isinstance(other, LocalElem):
            if self.emb and other.emb and self.emb != other.emb:
                raise ValueError("mixing elements from different embeddings")
            return other
        if isinstance(other, (int, Fraction)):
            return LocalElem.from_rational(other, self.prec, self.emb)
        return NotImplemented

    def __neg__(self) -> "LocalElem":
        return LocalElem([-c for c in self.coeffs], self.shift, self.prec, self.emb)

    def __add__(self, other) -> "LocalElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        sh = min(self.shift, other.shift)
        top = min(self.shift + self.prec, other.shift + other.prec)
        prec = top - sh
        a = [c * P ** (self.shift - sh) for c in self.coeffs]
        b = [c * P ** (other.shift - sh) for c in other.coeffs]
        return LocalElem([x + y for x, y in zip(a, b)], sh, prec, self.emb or other.emb)

    __radd__ = __add__

    def __sub__(self, other) -> "LocalElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "LocalElem":
        return (-self) + other

    def __mul__(self, other) -> "LocalElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        prec = min(self.prec, other.prec)
        mod = P ** prec
        prod = [0] * (2 * E_DEG - 1)
        for i, c in enumerate(self.coeffs):
            if c:
                for j, d in enumerate(other.coeffs):
                    if d:
                        prod[i + j] += c * d
        return LocalElem(_reduce_e(prod, mod), self.shift + other.shift, prec, self.emb or other.emb)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "LocalElem":
        if e < 0:
            return self.inverse() ** (-e)
        result = LocalElem([1], 0, self.prec, self.emb)
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def inverse(self) -> "LocalElem":
        """Inverse, losing about val/6 digits of relative precision."""
        v = self.val()
        w = LocalElem(self.coeffs, 0, self.prec, self.emb)
        r = (v - E_DEG * self.shift) % E_DEG
        # w * lam^(6-r) is 7^k times a unit
        lam_pow = LocalElem.lam(self.prec, self.emb) ** ((E_DEG - r) % E_DEG)
        scaled = w * lam_pow
        if scaled.coeffs[0] % P == 0:
            raise LocalPrecisionError("inconsistent valuation during inversion")
        inv_unit = _unit_inverse(LocalElem(scaled.coeffs, 0, scaled.prec, self.emb))
        return inv_unit * lam_pow * LocalElem([1], -scaled.shift - self.shift, inv_unit.prec, self.emb)

    def __truediv__(self, other) -> "LocalElem":
        other = self._coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "LocalElem":
        return self._coerce(other) * self.inverse()

    def with_prec(self, prec: int) -> "LocalElem":
        return LocalElem(self.coeffs, self.shift, min(prec, self.prec), self.emb)

    def digits(self, uniformizer: "LocalElem", count: int) -> list[int]:
        """First `count` digits d_i in {0..6} with self = sum d_i uniformizer^i."""
        if uniformizer.val() != 1:
            raise ValueError("digit expansion needs a uniformizer")
        inv = uniformizer.inverse()
        cur = self
        out = []
        for _ in range(count):
            d = cur.residue()
            out.append(d)
            cur = (cur - d) * inv
        return out


def _reduce_e(prod: list[int], mod: int) -> list[int]:
    prod = list(prod)
    for d in range(len(prod) - 1, E_DEG - 1, -1):
        c = prod[d]
        if c:
            base = d - E_DEG
            for k in range(E_DEG):
                prod[base + k] -= c * EISENSTEIN[k]
    return [c % mod for c in prod[:E_DEG]]


def _unit_inverse(u: LocalElem) -> LocalElem:
    c0 = u.coeffs[0] % P
    if c0 == 0:
        raise LocalPrecisionError("not a unit")
    x = LocalElem([pow(c0, -1, P)], 0, u.prec, u.emb)
    good = 1  # correct modulo lam^good
    while good < E_DEG * u.prec:
        x = x * (2 - u * x)
        good *= 2
    return x


# -- Teichmuller lifts and the embeddings of K ---------------------------------

def teichmuller(a: int, m: int = DEFAULT_PREC) -> PadicNum:
    """The 6th root of unity congruent to a mod 7, to m digits."""
    if a % P == 0:
        raise ValueError("Teichmuller lift needs a unit")
    mod = P ** m
    x = a % P
    for _ in range(m + 1):
        x = pow(x, P, mod)
    return PadicNum(x, 0, m)


# image of zeta is +-2 / +-4 ... : Type 1 sends zeta to teich(5) * zeta_7^6 (= -2 mod lam)
_ZETA6_RESIDUE = {Embedding.TYPE1: 5, Embedding.TYPE2: 3}


@lru_cache(maxsize=None)
def _zeta_powers_local(emb: Embedding, m: int) -> tuple[LocalElem, ...]:
    omega = LocalElem.from_int(teichmuller(_ZETA6_RESIDUE[emb], m).unit, m, emb)
    zeta7 = LocalElem([1, 1], 0, m, emb)
    z = omega * zeta7 ** 6
    pows = [LocalElem([1], 0, m, emb)]
    for _ in range(K_DEGREE - 1):
        pows.append(pows[-1] * z)
    return tuple(pows)


def embed_cyclo(a: CycloElem, emb, m: int = DEFAULT_PREC) -> LocalElem:
    """Image of a in Q_7(zeta_7) under the given embedding type.

    The numerator is embedded modulo 7^(m + v7(den)) so the quotient is
    known to absolute precision 7^m.
    """
    emb = Embedding.parse(emb)
    den = a.den
    dv = v7(den)
    unit_den = den // P ** dv
    work = m + dv
    pows = _zeta_powers_local(emb, work)
    mod = P ** work
    acc = [0] * E_DEG
    for c, zp in zip(a.num, pows):
        if c:
            for k in range(E_DEG):
                acc[k] += c * zp.coeffs[k]
    inv = pow(unit_den, -1, mod)
    return LocalElem([x * inv for x in acc], -dv, work, emb)


def val(a) -> int:
    if isinstance(a, LocalElem):
        return a.val()
    raise TypeError("val expects a LocalElem; embed K-elements first")


def cyclo_val(a: CycloElem, emb, m: int = DEFAULT_PREC) -> int:
    """Valuation (v(7) = 6) of a K-element under an embedding."""
    if a.is_zero():
        raise ValueError("valuation of 0")
    return embed_cyclo(a, emb, m).val()


def poly_eval(coeffs: Sequence[LocalElem], x: LocalElem) -> LocalElem:
    acc = coeffs[-1]
    for c in reversed(coeffs[:-1]):
        acc = acc * x + c
    return acc


def find_roots(poly: Sequence[LocalElem], m: int = DEFAULT_PREC) -> list[LocalElem]:
    """Integral roots in Q_7(zeta_7) of a polynomial (low degree first).

    Breadth-first search over lam-adic digits, keeping a prefix r when
    v(poly(r)) >= v(leading coefficient) + depth; each surviving branch is
    then pushed to m digits with Newton steps once Hensel's condition holds.
    """
    poly = [c.with_prec(m) for c in poly]
    emb = next((c.emb for c in poly if c.emb), None)
    deg = len(poly) - 1
    if deg < 1:
        raise ValueError("constant polynomial")
    deriv = [poly[i] * i for i in range(1, deg + 1)]
    lam = LocalElem.lam(m, emb)
    target = E_DEG * (m - 2)
    shift0 = min(c.val() for c in poly if not c.is_zero())
    cands = [(LocalElem([0], 0, m, emb), 0)]
    roots: list[LocalElem] = []
    depth_cap = E_DEG * m
    while cands:
        nxt = []
        for r, depth in cands:
            fr = poly_eval(poly, r)
            fval = fr.val() if not fr.is_zero() else fr.abs_prec
            dval = None
            dr = poly_eval(deriv, r)
            if not dr.is_zero():
                dval = dr.val()
            if dval is not None and fval > 2 * dval and depth > dval - shift0:
                roots.append(_newton(poly, deriv, r, target))
                continue
            if fval >= target or depth >= depth_cap:
                roots.append(r)
                continue
            step = lam ** depth
            for d in range(P):
                cand = r + step * d
                fc = poly_eval(poly, cand)
                fcv = fc.val() if not fc.is_zero() else fc.abs_prec
                if fcv >= shift0 + depth + 1:
                    nxt.append((cand, depth + 1))
        cands = nxt
    return _dedupe(roots, target)


def _newton(poly, deriv, r, target):
    for _ in range(64):
        fr = poly_eval(poly, r)
        if fr.is_zero() or fr.val() >= target:
            return r
        r = r - fr / poly_eval(deriv, r)
    raise LocalPrecisionError("Newton iteration did not converge")


def _dedupe(roots: list[LocalElem], target: int) -> list[LocalElem]:
    out: list[LocalElem] = []
    for r in roots:
        if all(_close(r, s, target // 2) is False for s in out):
            out.append(r)
    return out


def _close(a: LocalElem, b: LocalElem, bound: int) -> bool:
    d = a - b
    return d.is_zero() or d.val() >= bound
