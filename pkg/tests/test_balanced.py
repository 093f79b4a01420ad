from fractions import Fraction as F
from itertools import product

import pytest

from qmode.balanced import (
    ExponentTuple,
    ResidueEquationSpec,
    admissible_tuples,
    balanced_form,
    balanced_report,
    delta_power_operator,
    lift4,
    mde_from_exponents,
    residue_equation,
    residue_spec,
    table1_form,
)
from qmode.errors import InvalidExponents, OutOfRange, UnsupportedExponents
from qmode.extremal import extremal_base, extremal_form
from qmode.forms import ModularForm, dim_qm_direct
from qmode.mde import MDEOperator, apply_operator, frobenius_fundamental, frobenius_leading
from qmode.quasi import QuasiForm
from qmode.series import ZUSeries

DELTA = QuasiForm.delta()


def brute_force_tuples(w, r):
    bounds = [dim_qm_direct(w - 2 * l, r - l) for l in range(r + 1)]
    total = dim_qm_direct(w, r) - 1
    out = []
    for lam in product(*(range(b) for b in bounds)):
        if sum(lam) == total and all(lam[i] >= lam[i + 1] for i in range(r)):
            out.append(lam)
    return sorted(out, reverse=True)


@pytest.mark.parametrize("r", range(5))
def test_admissible_tuples_match_brute_force(r):
    for w in range(0, 31, 2):
        assert [t.lambdas for t in admissible_tuples(w, r)] == brute_force_tuples(w, r), w


def test_exponent_tuple_validation():
    ExponentTuple(6, 1, (1, 0))
    for w, r, lam in [(6, 1, (0, 1)), (6, 1, (1, 1)), (6, 1, (1,)), (7, 1, (1, 0)),
                      (6, 1, (2, -1)), (12, 1, (3, 0))]:
        with pytest.raises(InvalidExponents):
            ExponentTuple(w, r, lam)
    t = ExponentTuple(12, 2, (2, 1, 0))
    assert t.sigma(2) == 2 and not t.is_degenerate()
    assert ExponentTuple(14, 1, (1, 1)).is_degenerate()


def test_mde_from_exponents_examples():
    K = mde_from_exponents(ExponentTuple(6, 1, (1, 0)))
    assert K.coefficients[2] == ModularForm.e4().scale(F(-35, 144))
    K = mde_from_exponents(ExponentTuple(4, 2, (1, 0, 0)))
    assert K.coefficients[2] == ModularForm.e4().scale(F(-11, 36))
    assert K.coefficients[3] == ModularForm.e6().scale(F(-5, 216))
    K = mde_from_exponents(ExponentTuple(12, 0, (1,)))
    assert K == MDEOperator.normalized(12, 0, {})


def test_mde_from_exponents_errors():
    with pytest.raises(InvalidExponents):
        mde_from_exponents(ExponentTuple(8, 1, (1, 0)))
    with pytest.raises(UnsupportedExponents):
        mde_from_exponents(admissible_tuples(24, 5)[0])


def test_balanced_form_examples():
    assert balanced_form(ExponentTuple(6, 1, (1, 0))) == extremal_base(1)
    assert balanced_form(ExponentTuple(12, 0, (1,))) == DELTA
    assert balanced_form(ExponentTuple(12, 4, (5, 0, 0, 0, 0))) == extremal_base(4)


def test_balanced_report_observes_requested_orders():
    rep = balanced_report(ExponentTuple(12, 2, (2, 1, 0)), 10)
    assert rep.observed == rep.requested == (2, 1, 0)
    assert rep.kernel_dimension == 1
    with pytest.raises(OutOfRange):
        balanced_report(ExponentTuple(12, 2, (2, 1, 0)), 2)


def _equation_cases():
    for r in range(5):
        for w in range(0, 37, 2):
            if (w * (r + 1)) % 12 == 0:
                for t in admissible_tuples(w, r):
                    yield t


def test_balanced_forms_satisfy_their_equations():
    count = 0
    for t in _equation_cases():
        assert apply_operator(mde_from_exponents(t), balanced_form(t)).is_zero(), t
        count += 1
    assert count > 200


def test_delta_power_operator_examples():
    assert delta_power_operator(12, 0) == MDEOperator.normalized(12, 0, {})
    K = delta_power_operator(12, 1)
    assert K.coefficients[2] == ModularForm.e4().scale(F(1, 144))
    # the same coefficient from the depth-1 class-0 equation at lambda = w/12
    x = 12 * 1 - 12
    assert F(-(x - 1) * (x + 1), 144) == F(1, 144)
    fs = frobenius_fundamental(delta_power_operator(12, 2), 12)
    d = DELTA.expand(13)
    for l, f in enumerate(fs):
        assert f == ZUSeries.monomial(l, 0, d).truncate(f.truncation)
    with pytest.raises(OutOfRange):
        delta_power_operator(10, 1)


@pytest.mark.parametrize("r", range(1, 5))
def test_delta_power_operator_annihilates_delta_powers(r):
    for w in (12, 24):
        K = delta_power_operator(w, r)
        assert apply_operator(K, DELTA ** (w // 12)).is_zero()


def test_table1_row_four():
    for w in (4, 16, 28):
        f = table1_form(w)
        assert f == QuasiForm.e4() * DELTA ** ((w - 4) // 12)
        K = residue_equation(residue_spec(0, w), w)
        assert apply_operator(K, f).is_zero()


def test_depth1_class2_example():
    K = residue_equation(residue_spec(1, 8), 8, 1)
    assert K.coefficients[2] == ModularForm(8, {(2, 0): F(-35, 144)})
    f = frobenius_leading(K, 1, 10)
    assert f.valuation == 1 and f[1] == 1
    assert apply_operator(K, f).is_zero()


def test_depth2_class2_is_serre_derivative_of_class0():
    count = 0
    for w in range(6, 31, 4):
        for t in admissible_tuples(w - 2, 2):
            if t.is_degenerate():
                continue
            g = balanced_form(t)
            K = residue_equation(residue_spec(2, w), w, t.lambdas)
            assert apply_operator(K, g.serre(w - 4)).is_zero(), (w, t)
            count += 1
    assert count > 10


def test_residue_equations_annihilate_balanced_forms():
    count = 0
    for r in (1, 2, 3):
        for w in range(2, 31, 2):
            spec = residue_spec(r, w)
            for t in admissible_tuples(w, r):
                if t.is_degenerate():
                    continue
                K = residue_equation(spec, w, t[0] if r == 1 else t)
                assert apply_operator(K, balanced_form(t)).is_zero(), (r, w, t)
                count += 1
    assert count > 100


def test_wrong_depth3_constant_is_detected():
    # dropping the constant 80/3 from D2 must break the equation somewhere
    failures = 0
    for w in (8, 14, 20):
        good = residue_spec(3, w)
        for t in admissible_tuples(w, 3):
            if t.is_degenerate():
                continue
            d2 = good.coefficients(w, t.lambdas)["D2"]
            bad = ResidueEquationSpec(3, 2, overrides={"D2": d2 - F(80, 3)})
            if not apply_operator(residue_equation(bad, w, t), balanced_form(t)).is_zero():
                failures += 1
    assert failures > 0


def test_residue_spec_errors():
    with pytest.raises(OutOfRange):
        ResidueEquationSpec(4, 0)
    with pytest.raises(OutOfRange):
        ResidueEquationSpec(2, 3)
    with pytest.raises(OutOfRange):
        residue_equation(ResidueEquationSpec(1, 0), 8, 1)
    with pytest.raises(OutOfRange):
        residue_equation(residue_spec(3, 12), 12, (1, 1, 1, 1))
    assert ResidueEquationSpec.MODULI[2] == 4


def test_lift4_examples():
    f = lift4(extremal_form(6, 3), 10, 1)
    assert f.weight == 10 and f.valuation() == 2
    assert balanced_report(ExponentTuple(10, 3, (2, 1, 0, 0)), 10).form == f.normalized()[0]
    assert apply_operator(residue_equation(residue_spec(3, 10), 10, (2, 1, 0, 0)), f).is_zero()
    g = extremal_form(6, 3)
    assert lift4(g, 10, F(15, 12)) == g.serre(3).serre(5)
    with pytest.raises(OutOfRange):
        lift4(g, 12, 1)


def test_lift4_sweep():
    count = 0
    for w in range(10, 35, 6):
        for t in admissible_tuples(w, 3):
            lam = t.lambdas
            for i in range(4):
                if lam[i] == 0 or (i < 3 and lam[i + 1] == lam[i]):
                    continue
                down = lam[:i] + (lam[i] - 1,) + lam[i + 1:]
                g = balanced_form(ExponentTuple(w - 4, 3, down))
                f = lift4(g, w, lam[i])
                assert apply_operator(residue_equation(residue_spec(3, w), w, lam), f).is_zero()
                count += 1
    assert count > 50
