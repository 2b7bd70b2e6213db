"""Classical side: cusp form dimensions at level 49, classical slope counts and
the weight-2 a_7 valuations of the newforms with characters chi^8 and chi^-6.
"""
from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from fractions import Fraction
from importlib import resources
from typing import Sequence

from .cyclotomic import ONE, ZERO, ZETA, CycloElem
from .localfield import (
    DEFAULT_PREC,
    Embedding,
    LocalElem,
    embed_cyclo,
    find_roots,
    poly_eval,
)
from .spectral import _floor_term, predicted_slopes
from .u7matrix import UNIFORMIZER


def _epsilon(k: int) -> Fraction:
    return {0: Fraction(1, 3), 1: Fraction(0), 2: Fraction(-1, 3)}[k % 3]


def cohen_oesterle_dim(k: int, e: int) -> int:
    """dim S_k(Gamma_0(49), chi^e) for chi^e primitive of conductor 49.

    Returns 0 when the parity of chi^e differs from that of k, since then the
    space is trivially zero.
    """
    if k < 2:
        raise ValueError("weight must be at least 2")
    if e % 7 == 0:
        raise ValueError(f"chi^{e} does not have conductor 49")
    if (e % 2) != (k % 2):
        return 0
    s = ZETA ** (28 * e) + ZETA ** (14 * e)
    total = CycloElem.from_rational(Fraction(14 * k - 17, 3)) + s * _epsilon(k)
    if not total.is_rational() or total.to_fraction().denominator != 1:
        raise ArithmeticError(f"non-integral dimension {total} for k={k}, e={e}")
    return int(total.to_fraction())


def character_exponent(k: int, emb) -> int:
    """chi^(7k-6) for Type 1, chi^(8-7k) for Type 2."""
    return 7 * k - 6 if Embedding.parse(emb) is Embedding.TYPE1 else 8 - 7 * k


def classical_slopes(k: int, emb) -> list[Fraction]:
    """Predicted slopes strictly below k - 1."""
    out = []
    i = 1
    while Fraction(_floor_term(emb, i), 6) < k - 1:
        out.append(Fraction(_floor_term(emb, i), 6))
        i += 1
    return out


def classical_slope_count(k: int, emb) -> int:
    return len(classical_slopes(k, emb))


def classical_slope_count_closed(k: int, emb) -> int:
    """The piecewise closed form of the count, by k mod 3."""
    r = k % 3
    if Embedding.parse(emb) is Embedding.TYPE1:
        base = {0: (9, 3), 1: (13, 4), 2: (4, 2)}[r]
    else:
        base = {0: (8, 3), 1: (13, 4), 2: (3, 2)}[r]
    c, k0 = base
    return c + 14 * (k - k0) // 3


# -- newform data -----------------------------------------------------------

@dataclass(frozen=True)
class NewformRecord:
    label: str
    field_poly: tuple  # CycloElem coefficients, constant term first
    a7_expr: tuple  # a_7 as a polynomial in the root a, constant term first
    gamma_def: int
    emb: Embedding
    expected_vals: tuple
    leading_digits: tuple = ()


def _elem(data) -> CycloElem:
    return CycloElem([Fraction(c) for c in data])


def _gamma_poly(spec: dict, gamma: CycloElem) -> CycloElem:
    acc = ZERO
    for k, c in spec.items():
        acc = acc + gamma ** int(k) * c
    return acc


def _data_text() -> str:
    return resources.files("u7slopes.data").joinpath("newforms.json").read_text()


def _checksum(records) -> str:
    canon = json.dumps(records, sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canon.encode()).hexdigest()


def load_newforms(check: bool = True) -> list[NewformRecord]:
    raw = json.loads(_data_text())
    if check and _checksum(raw["records"]) != raw["sha256"]:
        raise ValueError("newform data file failed its checksum")
    out = []
    for r in raw["records"]:
        gamma = ZETA ** r["gamma_exponent"]
        fp = tuple(_elem(c) for c in r["field_poly"])
        a7 = tuple(_elem(c) for c in r["a7"])
        if check:
            # the zeta coefficient lists must agree with the gamma polynomials
            fp2 = tuple(_gamma_poly(c, gamma) for c in r["field_poly_gamma"])
            a72 = tuple(_gamma_poly(c, gamma) for c in r["a7_gamma"])
            if fp != fp2 or a7 != a72:
                raise ValueError(f"record {r['label']}: zeta and gamma forms disagree")
        out.append(NewformRecord(
            r["label"], fp, a7, r["gamma_exponent"], Embedding.parse(r["type"]),
            tuple(r["expected_vals"]), tuple(tuple(d) for d in r.get("leading_digits", [])),
        ))
    return out


@dataclass
class Weight2Result:
    label: str
    vals: list
    digits: list
    expected_vals: tuple
    leading_digits: tuple

    @property
    def ok(self) -> bool:
        if sorted(self.vals) != sorted(self.expected_vals):
            return False
        for want in self.leading_digits:
            if not any(tuple(d[: len(want)]) == tuple(want) for d in self.digits):
                return False
        return True


def evaluate_record(rec: NewformRecord, m: int = DEFAULT_PREC, ndigits: int = 12) -> Weight2Result:
    emb = rec.emb
    a7 = [embed_cyclo(c, emb, m) for c in rec.a7_expr]
    pi = embed_cyclo(UNIFORMIZER[emb], emb, m)
    if len(rec.field_poly) == 2 and rec.field_poly[1] == ONE and rec.field_poly[0].is_zero():
        roots = [LocalElem([0], 0, m, emb)]
    else:
        coeffs = [embed_cyclo(c, emb, m) for c in rec.field_poly]
        roots = find_roots(coeffs, m)
    degree = len(rec.field_poly) - 1
    if len(roots) != degree:
        raise ArithmeticError(f"{rec.label}: found {len(roots)} roots, expected {degree}")
    vals = [poly_eval(a7, r).val() for r in roots]
    digits = [r.digits(pi, ndigits) for r in roots]
    return Weight2Result(rec.label, vals, digits, rec.expected_vals, rec.leading_digits)


def verify_weight2(emb, m: int = DEFAULT_PREC) -> list[Weight2Result]:
    emb = Embedding.parse(emb)
    return [evaluate_record(r, m) for r in load_newforms() if r.emb is emb]
