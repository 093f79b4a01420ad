from fractions import Fraction as F
from math import prod

import pytest

from qmode import extremal
from qmode.errors import DataIntegrityError, OutOfRange, ValuationMismatch
from qmode.extremal import (
    BASE_WEIGHT,
    STEP,
    check_kaneko_koike,
    composition_scalar,
    denominator_primes,
    extremal_base,
    extremal_form,
    extremal_valuation,
    kdown,
    kdown_scalar,
    kup,
    ladder,
    master_equation,
)
from qmode.mde import frobenius_leading
from qmode.quasi import QuasiForm
from qmode.series import QSeries


def test_base_forms():
    assert extremal_base(1).expand(3).coefficient_list() == [0, 1, 18]
    assert extremal_base(2).expand(3).coefficient_list() == [0, 1, 6]
    f = extremal_base(3).expand(4)
    assert f.coefficient_list() == [0, 0, 1, 8]
    # the coefficient of q^(v+1) from its closed formula at w = 6
    w = 6
    assert f[3] == F(w * (w * w + 15 * w - 18), (w + 3) ** 2)
    f = extremal_base(4)
    assert f.valuation() == 5 and f.leading_coefficient() == 1
    assert f.scale(7449432883200).expand(6)[5] == 7449432883200


def test_kup_examples():
    f6, f12 = extremal_form(6, 1), extremal_form(12, 1)
    assert kup(1, 6, f6) == f12.scale(F(72 * 7 * 11, 12))
    assert kup(2, 4, extremal_form(4, 2)).valuation() == 2
    assert kup(4, 12, extremal_form(12, 4)).valuation() == 10


def test_kdown_examples():
    assert kdown(1, 12, extremal_form(12, 1)) == extremal_form(6, 1).scale(2)
    g = kdown(3, 12, extremal_form(12, 3))
    assert g == extremal_form(6, 3).scale(16 * 81 * 64)
    w = 24
    expected = F(5 ** 4, 2 ** 4) * w ** 4 * prod((5 * w - 12 * k) ** 4 for k in range(1, 5))
    assert kdown_scalar(4, 24) == expected
    assert kdown(4, 24, extremal_form(24, 4)) == extremal_form(12, 4).scale(expected)


def test_kup_rejects_wrong_input():
    with pytest.raises(ValuationMismatch):
        kup(1, 6, QuasiForm.e6())


@pytest.mark.parametrize("depth", [1, 2, 3])
def test_composition_identity(depth):
    b, s = BASE_WEIGHT[depth], STEP[depth]
    for w in (b, b + s, b + 2 * s):
        f = extremal_form(w, depth)
        assert kdown(depth, w + s, kup(depth, w, f)) == f.scale(composition_scalar(depth, w))
        assert kdown(depth, w + s, extremal_form(w + s, depth)) == f.scale(kdown_scalar(depth, w + s))


@pytest.mark.parametrize("depth", [1, 2, 3, 4])
def test_stated_scalars_match_normalization(depth):
    lad = ladder(depth)
    b, s = BASE_WEIGHT[depth], STEP[depth]
    top = b + 2 * s if depth < 4 else b + s
    for w in range(b, top + 1, 2):
        e = lad.entry(w)
        assert e.form.leading_coefficient(extremal_valuation(w, depth) + 1) == 1
        if e.provenance != "init":
            assert e.raw_leading * e.stated_scalar == 1, (w, e.provenance)


def test_off_class_examples():
    assert extremal_form(10, 1) == QuasiForm.e4() * extremal_form(6, 1)
    assert extremal_form(10, 1).valuation() == 1
    assert ladder(1).entry(10).provenance == "residue-lift"
    assert ladder(1).entry(12).provenance == "kup-recursion"


def test_agreement_with_master_equation():
    for depth, w, lam in ((1, 12, 2), (4, 24, 10)):
        fl = frobenius_leading(master_equation(depth, w), lam, 50)
        assert extremal_form(w, depth).expand(lam + 50) == fl


def test_extremal_valuation_matches_dimension():
    assert [extremal_valuation(w, 1) for w in (6, 8, 10, 12)] == [1, 1, 1, 2]
    assert extremal_valuation(12, 4) == 5


def test_extremal_errors():
    with pytest.raises(OutOfRange):
        extremal_form(12, 5)
    with pytest.raises(OutOfRange):
        extremal_form(4, 1)
    with pytest.raises(OutOfRange):
        extremal_form(9, 1)
    with pytest.raises(OutOfRange):
        master_equation(1, 8)


def test_extremal_form_order_parameter():
    f = extremal_form(18, 2, order=30)
    assert f is extremal_form(18, 2)
    assert f.expand(30).valuation == extremal_valuation(18, 2)


def test_denominator_examples():
    assert denominator_primes(extremal_form(6, 1), 30) == set()
    assert denominator_primes(QSeries.constant(F(1, 6), 5), 5) == {2, 3}
    assert all(p < 12 for p in denominator_primes(extremal_form(12, 4), 30))


@pytest.mark.parametrize("depth,max_weight,upto", [(1, 60, 30), (2, 40, 30), (4, 48, 20)])
def test_kaneko_koike_examples(depth, max_weight, upto):
    report = check_kaneko_koike(depth, max_weight, upto)
    assert report and all(row["pass"] for row in report)
    assert report[-1]["weight"] == max_weight


def test_depth4_data_is_checked(monkeypatch):
    monkeypatch.setattr(extremal, "_data", {})
    monkeypatch.setattr(extremal, "DEPTH4_SHA256", "0" * 64)
    with pytest.raises(DataIntegrityError):
        extremal.load_depth4_data()
