from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from oracles import delta_oracle, deriv_oracle, eisenstein_oracle, mul_oracle
from qmode.errors import InsufficientTruncation, NonHolomorphic, NonUnitLeading
from qmode.series import (
    QSeries,
    ZUPoly,
    ZUSeries,
    convolve_kronecker,
    convolve_naive,
    format_rational,
    parse_rational,
    series_add,
    series_div,
    series_mul,
)

rationals = st.fractions(max_denominator=50).filter(lambda x: abs(x) < 10 ** 6)


@st.composite
def qseries(draw, min_trunc=1, max_trunc=30, unit=False):
    n = draw(st.integers(min_trunc, max_trunc))
    cs = draw(st.lists(rationals, min_size=n, max_size=n))
    if unit:
        cs[0] = draw(rationals.filter(bool))
    return QSeries(cs, 0, n)


def Q(*cs, n=None):
    return QSeries(cs, 0, len(cs) if n is None else n)


# examples


def test_addition_examples():
    assert Q(0, 1, 1) + Q(1, -1, 0) == Q(1, 0, 1)
    f = Q(3, 1, 4)
    assert f + QSeries.zero(3) == f
    e4 = QSeries(eisenstein_oracle(2, 3))
    e6 = QSeries(eisenstein_oracle(3, 3))
    assert (e4 + e6).coefficient_list() == [2, -264, -14472]


def test_multiplication_examples():
    assert Q(1, -1, 0) * Q(1, 1, 0) == Q(1, 0, -1)
    d = QSeries(delta_oracle(6))
    dd = d * d
    assert dd.valuation == 2
    assert dd[2] == 1 and dd[3] == -48
    e4 = QSeries(eisenstein_oracle(2, 4))
    e6 = QSeries(eisenstein_oracle(3, 4))
    assert (e4 ** 3 - e6 * e6).coefficient_list()[:3] == [0, 1728, -41472]


def test_derivative_examples():
    assert QSeries.monomial(3, 1, 6).qderive() == QSeries.monomial(3, 3, 6)
    assert QSeries.one(5).qderive().is_zero()
    zq = ZUSeries.monomial(1, 0, QSeries.monomial(1, 1, 4))
    d = zq.qderive()
    assert d.part(1, 0) == QSeries.monomial(1, 1, 4)
    assert d.part(0, 1) == QSeries.monomial(1, 1, 4)


def test_division_examples():
    assert Q(0, 1, -24) / QSeries.monomial(1, 1, 3) == Q(1, -24)
    d = QSeries(delta_oracle(20))
    assert (d / d) == QSeries.one(19)
    e4 = QSeries(eisenstein_oracle(2, 40))
    e6 = QSeries(eisenstein_oracle(3, 40))
    quotient = (e4 ** 3 - e6 * e6).scale(F(1, 1728)) / QSeries(delta_oracle(40))
    assert quotient == QSeries.one(39)


def test_division_errors():
    with pytest.raises(NonHolomorphic):
        Q(1, 1) / Q(0, 1)
    with pytest.raises(ZeroDivisionError):
        Q(1, 1) / QSeries.zero(4)
    with pytest.raises(NonUnitLeading):
        ZUSeries.lift(Q(1, 1)).divide(ZUSeries.monomial(0, 1, Q(1, 1)))


def test_truncation_is_pessimistic():
    a = QSeries([1, 2, 3], 0, 3)
    b = QSeries([1], 2, 5)  # q^2 + O(q^5)
    assert (a * b).truncation == 5
    assert (a + b).truncation == 3
    with pytest.raises(InsufficientTruncation):
        a[3]
    assert series_div(QSeries.zero(6), QSeries([1], 2, 4)).truncation == 4


def test_negative_valuation_rejected():
    with pytest.raises(ValueError):
        QSeries([1], -1, 2)
    with pytest.raises(NonHolomorphic):
        Q(1, 1).shift(-1)


def test_rational_text_round_trip():
    for x in (F(0), F(5), F(-7, 3), F(691, 2730)):
        assert parse_rational(format_rational(x)) == x
    with pytest.raises(ValueError):
        parse_rational("1/0")
    with pytest.raises(TypeError):
        QSeries([0.5])


def test_text_rendering():
    assert Q(0, 1, 18, n=3).to_text() == "q + 18q^2 + O(q^3)"
    assert Q(1, -1, F(1, 2)).to_text() == "1 - q + 1/2q^2 + O(q^3)"
    assert QSeries.zero(4).to_text() == "0 + O(q^4)"


# properties


@given(st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=60),
       st.lists(st.integers(-10 ** 30, 10 ** 30), min_size=1, max_size=60),
       st.integers(1, 120))
def test_kronecker_matches_schoolbook(a, b, n):
    assert convolve_kronecker(a, b, n) == convolve_naive(a, b, n)


@given(qseries(), qseries())
def test_product_matches_oracle(a, b):
    n = min(a.truncation, b.truncation)
    assert (a * b).coefficient_list(n) == mul_oracle(a.coefficient_list(), b.coefficient_list(), n)


@given(qseries(), qseries(), qseries())
def test_ring_laws(a, b, c):
    assert (a + b) == (b + a)
    assert a * b == b * a
    n = min(a.truncation, b.truncation, c.truncation)
    assert ((a * b) * c).agrees_with(a * (b * c), n)
    assert (a * (b + c)).agrees_with(a * b + a * c, n)
    assert (a - a).is_zero()


@given(qseries(), qseries())
def test_leibniz(a, b):
    assert (a * b).qderive() == a.qderive() * b + a * b.qderive()


@given(qseries())
def test_derivative_matches_oracle(a):
    assert a.qderive().coefficient_list() == deriv_oracle(a.coefficient_list())


@given(qseries(), qseries(unit=True))
def test_division_inverts_multiplication(a, b):
    n = min(a.truncation, b.truncation)
    assert ((a * b) / b).agrees_with(a, n)


@given(qseries(), qseries())
def test_zu_embedding_is_a_ring_map(a, b):
    A, B = ZUSeries.lift(a), ZUSeries.lift(b)
    assert (A * B).to_qseries() == a * b
    assert (A + B).to_qseries() == a + b
    assert A.qderive().to_qseries() == a.qderive()


@given(qseries(max_trunc=12), qseries(max_trunc=12), st.integers(0, 3), st.integers(0, 3))
def test_zu_leibniz(a, b, i, j):
    A = ZUSeries.monomial(i, 0, a)
    B = ZUSeries.monomial(j, 1, b)
    assert (A * B).qderive() == A.qderive() * B + A * B.qderive()


@given(qseries(max_trunc=12), st.integers(0, 4))
def test_shift_z_composes(a, i):
    A = ZUSeries.monomial(i, 0, a)
    assert A.shift_z(1).shift_z(1) == A.shift_z(2)
    assert A.shift_z(1).shift_z(-1) == A


@given(qseries())
def test_json_round_trip(a):
    assert QSeries.from_json(a.to_json()) == a
    Z = ZUSeries({(1, 0): a, (0, 2): a.scale(3)}, a.truncation)
    assert ZUSeries.from_json(Z.to_json()) == Z


def test_zupoly_arithmetic():
    z = ZUPoly({(1, 0): 1})
    u = ZUPoly({(0, 1): 1})
    assert (z + u) * (z - u) == z * z - u * u
    assert ZUPoly.constant(3).is_rational() and ZUPoly.constant(3).rational() == 3
    assert series_add(ZUSeries.lift(Q(1)), Q(2)).to_qseries() == Q(3)
    assert series_mul(Q(1, 1), ZUSeries.lift(Q(1, -1))).to_qseries() == Q(1, 0)
