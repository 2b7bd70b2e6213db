"""End-to-end acceptance checks, one per criterion.

Each ``criterion_N`` returns (ok, detail).  Under pytest the verdicts are
collected and echoed in the terminal summary; run this file directly to get
the same lines on stdout.

Tolerances are exact throughout: valuations are integers compared with ==,
identities are checked as exact q-series with zero residual.
"""
from __future__ import annotations

import random
import sys
from fractions import Fraction
from functools import lru_cache

import pytest

from u7slopes import classical, curvealg, u7matrix
from u7slopes.cyclotomic import PI1, PI2, ZERO, ZETA, CycloElem
from u7slopes.localfield import Embedding
from u7slopes.spectral import (
    char_series,
    charpoly_berkowitz,
    charpoly_leverrier,
    newton_polygon,
    predicted_coeff_vals,
    predicted_slopes,
    root_valuations,
    slopes,
    stability_check,
)

N_MAIN = 14
N_CHECK = 17
MIN_STABLE = 10
PADIC_PREC = 60
IDENTITY_PREC = 200
BLOCK_DIM = 28
BLOCK_COLUMNS = range(8, 22)
ORACLE_DIMS = (4, 7, 10)
CONJUGATION_TRIALS = 3

try:
    from .conftest import ACCEPTANCE_LINES
except ImportError:  # run as a script
    ACCEPTANCE_LINES = []


@lru_cache(maxsize=None)
def _stable_vals(k: int, emb: Embedding) -> tuple[int, tuple]:
    small = char_series(u7matrix.build_matrix(N_MAIN, k, emb))
    large = char_series(u7matrix.build_matrix(N_CHECK, k, emb))
    upto = stability_check(small, large, emb, PADIC_PREC)
    return upto, tuple(small.valuations(emb, PADIC_PREC)[:upto])


def _slope_criterion(emb: Embedding):
    upto, vals = _stable_vals(1, emb)
    if upto < MIN_STABLE:
        return False, f"stable range {upto} < {MIN_STABLE}"
    want = predicted_coeff_vals(emb, upto)
    pts = [(0, 0)] + [(j, Fraction(v, 6)) for j, v in enumerate(vals, start=1)]
    poly = newton_polygon(pts)
    simple = all(m == 1 for _, m in poly.slopes)
    ok = list(vals) == want and poly.slope_list() == predicted_slopes(emb, upto) and simple
    return ok, f"stable j<={upto}; val(c_j)={list(vals)}; predicted {want}; simple slopes {simple}"


def criterion_1():
    return _slope_criterion(Embedding.TYPE1)


def criterion_2():
    return _slope_criterion(Embedding.TYPE2)


def criterion_3():
    details = []
    ok = True
    for emb in Embedding:
        runs = {k: _stable_vals(k, emb) for k in (1, 2, 3, 4)}
        common = min(u for u, _ in runs.values())
        base = runs[1][1][:common]
        same = all(v[:common] == base for _, v in runs.values())
        ok &= same and common >= MIN_STABLE
        details.append(f"type {emb.value}: stable ranges {[runs[k][0] for k in runs]}, identical {same}")
    return ok, "; ".join(details)


def criterion_4():
    bad = []
    for emb in Embedding:
        for k in range(2, 21):
            e = classical.character_exponent(k, emb)
            if classical.classical_slope_count(k, emb) != classical.cohen_oesterle_dim(k, e):
                bad.append((emb.value, k))
    spots = {(2, 8): 4, (2, -6): 3, (3, 1): 8}
    spot_ok = all(classical.cohen_oesterle_dim(k, e) == d for (k, e), d in spots.items())
    return not bad and spot_ok, f"mismatches {bad}; spot values ok {spot_ok}"


def criterion_5():
    got = {}
    ok = True
    for emb in Embedding:
        res = classical.verify_weight2(emb, PADIC_PREC)
        ok &= all(r.ok for r in res)
        got[emb.value] = sorted(v for r in res for v in r.vals)
    ok &= got == {1: [1, 2, 3, 5], 2: [2, 3, 4]}
    return ok, f"a_7 valuations (sixths) {got}; digits checked against stored leading digits"


def criterion_6():
    checks = curvealg.verify_models(IDENTITY_PREC)
    checks += curvealg.check_recurrence_listing()
    failed = [c.name for c in checks if not c.ok]
    return not failed, f"{len(checks)} identities to q^{IDENTITY_PREC}; failed {failed}"


def criterion_7():
    failed = []
    table = curvealg.check_dominant_table()
    failed += [c.name for c in table if not c.ok]
    for j in range(1, 7):
        form = u7matrix.recover_rational_form(j)
        for emb in Embedding:
            r = u7matrix.check_approximation(j, emb, form)
            if not r.ok:
                failed.append(r.name)
    nblock = 0
    for emb in Embedding:
        mat = u7matrix.build_matrix(BLOCK_DIM, 1, emb)
        for r in u7matrix.verify_block_structure(mat, columns=BLOCK_COLUMNS):
            nblock += 1
            if not r.ok:
                failed.append(f"type {emb.value} {r.name}")
    tw = u7matrix.check_twisted_commutation(1, 1)
    if not tw.ok:
        failed.append(tw.name)
    xq = root_valuations(u7matrix.x_q_minpoly())
    if xq.hull != [(0, 0), (12, 6)]:
        failed.append(f"x(Q) polygon {xq.hull}")
    quad = root_valuations([49, 13, 1]).slope_list()
    if quad != [0, 2]:
        failed.append(f"t^2+13t+49 slopes {quad}")
    return not failed, f"{len(table)} table cells, 12 rational forms, {nblock} block checks; failed {failed}"


def _random_unit(rng: random.Random) -> CycloElem:
    # a unit at both primes above 7: root of unity times (integer prime to 7 + pi1*pi2*r)
    u = rng.choice([1, 2, 3, 4, 5, 6]) + 7 * rng.randint(-3, 3)
    r = CycloElem.from_rational(rng.randint(-4, 4))
    return ZETA ** rng.randrange(42) * (CycloElem.from_rational(u) + PI1 * PI2 * r)


def criterion_8():
    failed = []
    for n in ORACLE_DIMS:
        for emb in Embedding:
            a = u7matrix.build_matrix(n, 1, emb).entries
            if charpoly_berkowitz(a) != charpoly_leverrier(a):
                failed.append(f"charpoly n={n} type {emb.value}")
    rng = random.Random(20260115)
    n = ORACLE_DIMS[-1]
    for emb in Embedding:
        a = u7matrix.build_matrix(n, 1, emb).entries
        base = char_series(a)
        base_slopes = slopes(base, emb, PADIC_PREC, n)
        for _ in range(CONJUGATION_TRIALS):
            d = [_random_unit(rng) for _ in range(n)]
            dinv = [x.inverse() for x in d]
            b = [[d[i] * a[i][j] * dinv[j] if a[i][j] else ZERO for j in range(n)] for i in range(n)]
            conj = char_series(b)
            if slopes(conj, emb, PADIC_PREC, n) != base_slopes or conj.coeffs != base.coeffs:
                failed.append(f"conjugation type {emb.value}")
    return not failed, f"algorithms agree for n in {ORACLE_DIMS}; {CONJUGATION_TRIALS} conjugations per type; failed {failed}"


CRITERIA = {
    1: ("slope formula, type 1", criterion_1),
    2: ("slope formula, type 2", criterion_2),
    3: ("weight independence", criterion_3),
    4: ("classical counting", criterion_4),
    5: ("weight-2 newform valuations", criterion_5),
    6: ("identity suite", criterion_6),
    7: ("structure suite", criterion_7),
    8: ("oracle equivalence", criterion_8),
}


def evaluate(num: int) -> tuple[bool, str]:
    title, fn = CRITERIA[num]
    ok, detail = fn()
    line = f"criterion {num} [{'PASS' if ok else 'FAIL'}] {title}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok, detail


@pytest.mark.slow
@pytest.mark.parametrize("num", sorted(CRITERIA))
def test_criterion(num):
    ok, detail = evaluate(num)
    assert ok, detail


if __name__ == "__main__":
    results = [evaluate(n)[0] for n in sorted(CRITERIA)]
    sys.exit(0 if all(results) else 1)
