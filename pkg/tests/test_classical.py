import json

import pytest
from hypothesis import given
from hypothesis import strategies as st

from u7slopes import classical
from u7slopes.classical import (
    character_exponent,
    classical_slope_count,
    classical_slope_count_closed,
    cohen_oesterle_dim,
    load_newforms,
    verify_weight2,
)
from u7slopes.localfield import Embedding

# dim S_k(Gamma_0(49), chi^e) from tabulated modular symbols data,
# keyed by the order of the character (exponents 1, 2, 3, 6 of the generator)
STEIN = {
    1: {3: 8, 5: 18, 7: 27, 9: 36, 11: 46, 13: 55, 15: 64},
    2: {2: 4, 4: 13, 6: 22, 8: 32, 10: 41, 12: 50, 14: 60, 16: 69},
    3: {3: 9, 5: 17, 7: 27, 9: 37, 11: 45, 13: 55, 15: 65},
    6: {2: 3, 4: 13, 6: 23, 8: 31, 10: 41, 12: 51, 14: 59, 16: 69},
}


@pytest.mark.parametrize("e,k,dim", [(e, k, d) for e, row in STEIN.items() for k, d in row.items()])
def test_dimension_formula_against_table(e, k, dim):
    assert cohen_oesterle_dim(k, e) == dim


@given(st.integers(2, 80), st.integers(1, 41).filter(lambda e: e % 7))
def test_dimension_depends_only_on_galois_orbit_and_parity(k, e):
    d = cohen_oesterle_dim(k, e)
    assert d == cohen_oesterle_dim(k, -e) == cohen_oesterle_dim(k, e + 42)
    if (k - e) % 2:
        assert d == 0
    else:
        assert d >= 0


def test_dimension_errors():
    with pytest.raises(ValueError):
        cohen_oesterle_dim(3, 7)
    with pytest.raises(ValueError):
        cohen_oesterle_dim(1, 1)


@given(st.integers(2, 120), st.sampled_from(list(Embedding)))
def test_closed_count_matches_enumeration(k, emb):
    assert classical_slope_count_closed(k, emb) == classical_slope_count(k, emb)


@pytest.mark.parametrize("emb", list(Embedding))
def test_counts_equal_dimensions(emb):
    for k in range(2, 21):
        e = character_exponent(k, emb)
        assert classical_slope_count(k, emb) == cohen_oesterle_dim(k, e)


def test_character_exponents():
    assert character_exponent(2, Embedding.TYPE1) == 8
    assert character_exponent(2, Embedding.TYPE2) == -6
    assert character_exponent(3, Embedding.TYPE1) == 15


def test_newform_data_checksum():
    recs = load_newforms()
    assert {r.label for r in recs} == {"2.chi8.quartic", "2.chi-6.rational", "2.chi-6.quadratic"}


def test_newform_data_tamper_detected(monkeypatch):
    raw = json.loads(classical._data_text())
    raw["records"][0]["expected_vals"] = [0]
    monkeypatch.setattr(classical, "_data_text", lambda: json.dumps(raw))
    with pytest.raises(ValueError):
        load_newforms()


@pytest.mark.parametrize("emb,vals", [(Embedding.TYPE1, [1, 2, 3, 5]), (Embedding.TYPE2, [2, 3, 4])])
def test_weight2_valuations(emb, vals):
    results = verify_weight2(emb)
    assert all(r.ok for r in results)
    assert sorted(v for r in results for v in r.vals) == vals
