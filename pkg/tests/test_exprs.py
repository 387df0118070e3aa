from fractions import Fraction

import pytest

from hig.curvature import CurvatureMeasure, delta, n_measure
from hig.exprs import ExpressionError, parse, parse_curvature, parse_rational, parse_valuation
from hig.scalars import PI
from hig.valuations import InadmissibleIndex, Valuation, chi, s, t, vol


def test_valuation_expressions():
    assert parse_valuation("t**2 + 3*s/2", 2) == t(2) * t(2) + s(2).scale(Fraction(3, 2))
    assert parse_valuation("pi/2*t", 1) == Valuation.basis_element(1, "mu", 1, 0)
    assert parse_valuation("mu(2,1) - prim(2,0)", 2) == (Valuation.basis_element(2, "mu", 2, 1)
                                                         - Valuation.basis_element(2, "prim", 2, 0))
    assert parse_valuation("1", 3) == chi(3)
    assert parse_valuation("chi + vol", 2) == chi(2) + vol(2)
    assert parse_valuation("-U(1,0) + tau(0,0) + mono(2,1)", 2) == (
        -Valuation.basis_element(2, "u", 1, 0) + chi(2) + s(2))


def test_curvature_expressions():
    assert parse_curvature("Delta(1,0) + N(1,0)/pi", 2) == delta(2, 1, 0) + n_measure(2, 1, 0).scale(1 / PI)
    assert parse_curvature("2*B(1,0) - Gamma(0,0) + Vol", 1) == (
        CurvatureMeasure.label(1, "B", 1, 0).scale(2) - CurvatureMeasure.label(1, "Gamma", 0, 0)
        + CurvatureMeasure.label(1, "Vol", 2, 1))


def test_scalars():
    assert parse("(pi + 1)/(pi**2 - 1)", 1) == 1 / (PI - 1)


@pytest.mark.parametrize("text", [
    "__import__('os')", "t.real", "t if 1 else s", "1.5*t", "mu(1)", "mu(k=1, q=0)", "foo", "bar(1,2)",
    "t/t", "t**-1", "B(1,0)*B(1,0)", "B(1,0)**2", "t + B(1,0)", "1 + B(1,0)", "t/0", "t**(1/2)",
    "mu(1/2, 0)", "(", "lambda: 1", "[t]",
])
def test_rejected(text):
    with pytest.raises(ExpressionError):
        parse(text, 2)


def test_inadmissible_passes_through():
    with pytest.raises(InadmissibleIndex):
        parse("mu(2,2)", 2)


def test_parse_rational():
    assert parse_rational(" -3/4 ") == Fraction(-3, 4)
    assert parse_rational("0.5") == Fraction(1, 2)
    with pytest.raises(ExpressionError):
        parse_rational("pi")
    with pytest.raises(ExpressionError):
        parse_rational("1/0")


def test_bad_dimension():
    with pytest.raises(ExpressionError):
        parse("t", 0)
