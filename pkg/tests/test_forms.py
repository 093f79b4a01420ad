from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import bernoulli_oracle, delta_oracle, eisenstein_oracle, sigma_oracle
from qmode import linalg
from qmode.forms import (
    ModularForm,
    bernoulli,
    delta,
    dim_modular,
    dim_qm,
    dim_qm_direct,
    divisor_sums,
    eisenstein,
    modular_basis,
)
from qmode.series import QSeries


def test_bernoulli_examples():
    assert bernoulli(2) == F(1, 6)
    assert bernoulli(4) == F(-1, 30)
    assert bernoulli(12) == F(-691, 2730)
    for n in (0, 1, 3, -2):
        with pytest.raises(ValueError):
            bernoulli(n)


@pytest.mark.parametrize("n", range(2, 61, 2))
def test_bernoulli_matches_recurrence_oracle(n):
    assert bernoulli(n) == bernoulli_oracle(n)


def test_divisor_sums_match_trial_division():
    for k in (1, 3, 5, 7, 11):
        assert list(divisor_sums(k, 80)[1:]) == [sigma_oracle(k, n) for n in range(1, 80)]


def test_eisenstein_examples():
    assert eisenstein(1, 3).expand(3)[1] == -24
    assert eisenstein(2, 3).expand(3)[1] == 240
    assert eisenstein(3, 3).expand(3)[2] == -16632


@pytest.mark.parametrize("k", [1, 2, 3, 4, 5, 6, 7])
def test_eisenstein_matches_oracle(k):
    assert eisenstein(k, 60).expand(60).coefficient_list() == eisenstein_oracle(k, 60)


def test_delta_examples():
    d = delta(5).expand(5)
    assert (d[1], d[2], d[3]) == (1, -24, 252)


def test_delta_matches_eta_product():
    assert delta(150).expand(150) == QSeries(delta_oracle(150))


def test_eisenstein_polynomial_identities():
    # E8 = E4^2 and E10 = E4 E6 pin down the normalization of the E2k
    n = 40
    e4, e6 = eisenstein(2, n).expand(n), eisenstein(3, n).expand(n)
    assert eisenstein(4, n).expand(n) == e4 * e4
    assert eisenstein(5, n).expand(n) == e4 * e6


def test_modular_basis_examples():
    assert modular_basis(0) == [(0, 0)]
    assert modular_basis(12) == [(3, 0), (0, 2)]
    assert modular_basis(2) == []
    assert modular_basis(7) == []


@pytest.mark.parametrize("w", range(0, 121, 2))
def test_modular_basis_is_independent(w):
    basis = modular_basis(w)
    assert len(basis) == dim_modular(w)
    if basis:
        n = w // 12 + 2
        rows = [ModularForm(w, {m: 1}).expand(n).coefficient_list() for m in basis]
        assert linalg.rank(rows) == len(basis)


def test_dim_qm_examples():
    assert dim_qm(12, 1) == 3
    assert dim_qm(12, 4) == 6
    assert dim_qm(6, 5) == 3
    assert dim_qm_direct(6, 5) == 3


def test_dim_qm_agrees_in_the_stable_range():
    for r in range(13):
        for w in range(max(0, 2 * r - 8), 241, 2):
            assert dim_qm(w, r) == dim_qm_direct(w, r), (w, r)


def test_dim_modular_edge_cases():
    assert [dim_modular(w) for w in (-2, 0, 2, 3, 4, 12, 14, 24)] == [0, 1, 0, 0, 1, 2, 1, 3]


def test_modular_form_arithmetic():
    e4, e6 = ModularForm.e4(), ModularForm.e6()
    d = (e4 ** 3 - e6 * e6).scale(F(1, 1728))
    assert d == ModularForm.delta()
    assert d.value_at_infinity() == 0
    with pytest.raises(ValueError):
        e4 + e6
    with pytest.raises(ValueError):
        ModularForm(4, {(0, 1): 1})


@given(st.integers(0, 3), st.integers(0, 3), st.integers(0, 3), st.integers(0, 3))
def test_products_of_monomials_expand_consistently(a, b, c, d):
    f = ModularForm(4 * a + 6 * b, {(a, b): 1})
    g = ModularForm(4 * c + 6 * d, {(c, d): 1})
    assert (f * g).expand(12) == f.expand(12) * g.expand(12)


def test_json_round_trip():
    f = ModularForm(24, {(6, 0): F(1, 3), (3, 2): -2, (0, 4): 7})
    assert ModularForm.from_json(f.to_json(10)) == f
