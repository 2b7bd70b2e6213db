"""Exact arithmetic in K = Q(zeta_42), Dirichlet characters mod 7 and 49,
and generalized Bernoulli numbers.

Elements are stored densely as 12 integer numerators over one positive
common denominator, always reduced modulo the 42nd cyclotomic polynomial.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from numbers import Rational
from typing import Iterable, Sequence

DEGREE = 12
ORDER = 42

# x^12 + x^11 - x^9 - x^8 + x^6 - x^4 - x^3 + x + 1, low degree first
PHI42 = (1, 1, 0, -1, -1, 0, 1, 0, -1, -1, 0, 1, 1)
_PHI_TAIL = tuple((k, c) for k, c in enumerate(PHI42[:DEGREE]) if c)

# exponents k with gcd(k, 42) = 1, i.e. the Galois group of K/Q
GALOIS_EXPONENTS = tuple(k for k in range(1, ORDER) if math.gcd(k, ORDER) == 1)


def _reduce(prod: list[int]) -> list[int]:
    """Reduce an integer coefficient list modulo PHI42 in place."""
    for d in range(len(prod) - 1, DEGREE - 1, -1):
        c = prod[d]
        if c:
            base = d - DEGREE
            for k, v in _PHI_TAIL:
                prod[base + k] -= c * v
    del prod[DEGREE:]
    return prod


class CycloElem:
    """An element sum(c_i zeta^i, i < 12) of Q(zeta_42)."""

    __slots__ = ("num", "den")

    def __init__(self, coeffs: Iterable = (), den: int = 1):
        vals = list(coeffs)
        if len(vals) > DEGREE:
            vals = [Fraction(v) for v in vals]
            den_all = math.lcm(*(v.denominator for v in vals))
            ints = [int(v * den_all) for v in vals]
            _reduce(ints)
            vals = [Fraction(v, den_all) for v in ints]
        vals += [0] * (DEGREE - len(vals))
        if all(isinstance(v, int) for v in vals):
            num = vals
        else:
            fr = [Fraction(v) for v in vals]
            common = math.lcm(*(v.denominator for v in fr))
            num = [int(v * common) for v in fr]
            den *= common
        self._set(num, den)

    def _set(self, num: list[int], den: int) -> None:
        if den < 0:
            num = [-c for c in num]
            den = -den
        if den != 1:
            g = math.gcd(den, *num)
            if g != 1:
                num = [c // g for c in num]
                den //= g
        self.num = tuple(num)
        self.den = den

    @classmethod
    def _raw(cls, num: Sequence[int], den: int = 1) -> "CycloElem":
        obj = cls.__new__(cls)
        obj._set(list(num), den)
        return obj

    @classmethod
    def from_rational(cls, r) -> "CycloElem":
        r = Fraction(r)
        return cls._raw([r.numerator] + [0] * (DEGREE - 1), r.denominator)

    @classmethod
    def zeta(cls, k: int = 1) -> "CycloElem":
        return cls._raw(ZETA_POWERS[k % ORDER])

    @classmethod
    def from_poly(cls, coeffs: Sequence, gen: "CycloElem") -> "CycloElem":
        """Evaluate sum(coeffs[i] * gen^i) (Horner)."""
        acc = ZERO
        for c in reversed(list(coeffs)):
            acc = acc * gen + c
        return acc

    # -- inspection ------------------------------------------------------
    @property
    def coeffs(self) -> list[Fraction]:
        return [Fraction(c, self.den) for c in self.num]

    def is_zero(self) -> bool:
        return not any(self.num)

    def is_rational(self) -> bool:
        return not any(self.num[1:])

    def to_fraction(self) -> Fraction:
        if not self.is_rational():
            raise ValueError(f"{self!r} is not rational")
        return Fraction(self.num[0], self.den)

    def __bool__(self) -> bool:
        return self.is_zero() is False

    def __repr__(self) -> str:
        if self.is_zero():
            return "0"
        terms = []
        for i in range(DEGREE - 1, -1, -1):
            c = Fraction(self.num[i], self.den)
            if not c:
                continue
            mono = "" if i == 0 else ("z" if i == 1 else f"z^{i}")
            if not mono:
                terms.append(str(c))
            elif c == 1:
                terms.append(mono)
            elif c == -1:
                terms.append("-" + mono)
            else:
                terms.append(f"{c}*{mono}")
        return " + ".join(terms).replace("+ -", "- ")

    def __eq__(self, other) -> bool:
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __hash__(self) -> int:
        if self.is_rational():
            return hash(Fraction(self.num[0], self.den))
        return hash((self.num, self.den))

    # -- ring operations -------------------------------------------------
    def __neg__(self) -> "CycloElem":
        return CycloElem._raw([-c for c in self.num], self.den)

    def __add__(self, other) -> "CycloElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        if self.den == other.den:
            return CycloElem._raw([a + b for a, b in zip(self.num, other.num)], self.den)
        da, db = self.den, other.den
        return CycloElem._raw([a * db + b * da for a, b in zip(self.num, other.num)], da * db)

    __radd__ = __add__

    def __sub__(self, other) -> "CycloElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self + (-other)

    def __rsub__(self, other) -> "CycloElem":
        return (-self) + other

    def __mul__(self, other) -> "CycloElem":
        if isinstance(other, int):
            return CycloElem._raw([c * other for c in self.num], self.den)
        if isinstance(other, Rational):
            return CycloElem._raw([c * other.numerator for c in self.num], self.den * other.denominator)
        if not isinstance(other, CycloElem):
            return NotImplemented
        an = [(i, c) for i, c in enumerate(self.num) if c]
        bn = [(j, d) for j, d in enumerate(other.num) if d]
        if not an or not bn:
            return ZERO
        prod = [0] * (2 * DEGREE - 1)
        for i, c in an:
            for j, d in bn:
                prod[i + j] += c * d
        return CycloElem._raw(_reduce(prod), self.den * other.den)

    __rmul__ = __mul__

    def conjugate(self, k: int) -> "CycloElem":
        """Image under the automorphism zeta -> zeta^k (gcd(k, 42) = 1)."""
        if math.gcd(k, ORDER) != 1:
            raise ValueError(f"zeta -> zeta^{k} is not an automorphism")
        out = [0] * DEGREE
        for i, c in enumerate(self.num):
            if c:
                for m, v in enumerate(ZETA_POWERS[(i * k) % ORDER]):
                    if v:
                        out[m] += c * v
        return CycloElem._raw(out, self.den)

    def norm(self) -> Fraction:
        acc = ONE
        for k in GALOIS_EXPONENTS:
            acc = acc * self.conjugate(k)
        return acc.to_fraction()

    def inverse(self) -> "CycloElem":
        if self.is_zero():
            raise ZeroDivisionError("inverse of 0 in Q(zeta_42)")
        if self.is_rational():
            return CycloElem._raw([self.den] + [0] * (DEGREE - 1), self.num[0])
        others = ONE
        for k in GALOIS_EXPONENTS[1:]:
            others = others * self.conjugate(k)
        n = (self * others).to_fraction()
        return others * (1 / n)

    def __truediv__(self, other) -> "CycloElem":
        if isinstance(other, Rational):
            if other == 0:
                raise ZeroDivisionError("division by 0")
            other = Fraction(other)
            return CycloElem._raw([c * other.denominator for c in self.num], self.den * other.numerator)
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other) -> "CycloElem":
        other = _coerce(other)
        if other is NotImplemented:
            return NotImplemented
        return other * self.inverse()

    def __pow__(self, e: int) -> "CycloElem":
        if e < 0:
            return self.inverse() ** (-e)
        result, base = ONE, self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    def mult_matrix(self) -> list[list[Fraction]]:
        """Matrix of multiplication by self on the basis 1, zeta, ..., zeta^11
        (column i holds the coordinates of self * zeta^i)."""
        cols = [(self * CycloElem.zeta(i)).coeffs for i in range(DEGREE)]
        return [[cols[j][i] for j in range(DEGREE)] for i in range(DEGREE)]


def _coerce(x):
    if isinstance(x, CycloElem):
        return x
    if isinstance(x, (int, Rational)):
        return CycloElem.from_rational(x)
    return NotImplemented


def _zeta_powers() -> list[tuple[int, ...]]:
    pows = []
    cur = [1] + [0] * (DEGREE - 1)
    for _ in range(ORDER):
        pows.append(tuple(cur))
        shifted = [0] + cur
        cur = _reduce(shifted)
    return pows


ZETA_POWERS = _zeta_powers()
ZERO = CycloElem._raw([0] * DEGREE)
ONE = CycloElem._raw([1] + [0] * (DEGREE - 1))
ZETA = CycloElem.zeta(1)


def zeta_poly(coeffs: dict[int, int] | Sequence) -> CycloElem:
    """sum c_k zeta^k from a {power: coeff} mapping or a low-first list."""
    items = coeffs.items() if isinstance(coeffs, dict) else enumerate(coeffs)
    acc = ZERO
    for k, c in items:
        if c:
            acc = acc + CycloElem.zeta(k) * Fraction(c)
    return acc


# the two primes above 7: (7) = (PI1)^6 (PI2)^6
PI1 = zeta_poly({8: -1, 6: 1, 4: -1, 1: 1})
PI2 = zeta_poly({9: 1, 8: 1, 4: 1, 3: 1, 1: -1, 0: -1})


def cyclo_arith(a: CycloElem, b: CycloElem, op: str) -> CycloElem:
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown op {op!r}")


# -- Dirichlet characters ---------------------------------------------------

def _dlog_table(modulus: int) -> dict[int, int]:
    order = modulus - modulus // 7
    table, g = {}, 1
    for k in range(order):
        table[g] = k
        g = g * 3 % modulus
    assert len(table) == order, "3 must generate (Z/%d)*" % modulus
    return table


DLOG = {7: _dlog_table(7), 49: _dlog_table(49)}


@dataclass(frozen=True)
class DirichletChar:
    """The character n -> zeta^(exponent * log_3 n) modulo `conductor`.

    For conductor 49 this is chi^exponent with chi(3) = zeta.  For
    conductor 7 the value at 3 is zeta^exponent, so exponent must be a
    multiple of 7 (tau(3) = beta = zeta^7 is exponent 7).
    """

    conductor: int
    exponent: int

    def __post_init__(self):
        if self.conductor not in DLOG:
            raise ValueError("conductor must be 7 or 49")
        if self.conductor == 7 and self.exponent % 7:
            raise ValueError("a character mod 7 needs an exponent divisible by 7")

    def __call__(self, n: int) -> CycloElem:
        return char_eval(self, n)

    @property
    def order(self) -> int:
        return ORDER // math.gcd(self.exponent % ORDER, ORDER)

    def is_odd(self) -> bool:
        return char_eval(self, self.conductor - 1) == -1

    def is_primitive(self) -> bool:
        if self.conductor == 49:
            return self.exponent % 7 != 0
        return self.exponent % ORDER != 0


def char_eval(chi: DirichletChar, n: int) -> CycloElem:
    if n < 0:
        raise ValueError("n must be non-negative")
    if n % 7 == 0:
        return ZERO
    k = DLOG[chi.conductor][n % chi.conductor]
    return CycloElem.zeta(chi.exponent * k)


# -- Bernoulli numbers ------------------------------------------------------

@lru_cache(maxsize=None)
def bernoulli_number(k: int) -> Fraction:
    """B_k with the convention B_1 = -1/2."""
    if k == 0:
        return Fraction(1)
    return -sum(math.comb(k + 1, j) * bernoulli_number(j) for j in range(k)) / (k + 1)


def bernoulli_poly(k: int, x: Fraction) -> Fraction:
    return sum(math.comb(k, j) * bernoulli_number(j) * x ** (k - j) for j in range(k + 1))


def bernoulli_generalized(k: int, eps: DirichletChar) -> CycloElem:
    """B_{k,eps} = f^(k-1) * sum_{a=1}^{f} eps(a) B_k(a/f), f the conductor."""
    if k < 1:
        raise ValueError("k must be >= 1")
    f = eps.conductor
    acc = ZERO
    for a in range(1, f + 1):
        v = char_eval(eps, a)
        if v:
            acc = acc + v * bernoulli_poly(k, Fraction(a, f))
    return acc * (f ** (k - 1))
