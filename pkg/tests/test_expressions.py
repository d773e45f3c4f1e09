import math
from fractions import Fraction

import pytest

from tansurf.expressions import ExpressionError, parse_expression
from tansurf.jets import RationalPoly


def test_polynomial_expressions_become_exact_polys():
    e = parse_expression("t^3/6")
    assert e.polynomial == RationalPoly(("t",), {(3,): Fraction(1, 6)})
    e = parse_expression("t^6 + 0.3*t^7")
    assert e.polynomial.coefficient(7) == Fraction(3, 10)


def test_decimal_literals_are_exact():
    e = parse_expression("0.1 + 0.2")
    assert e.polynomial.coefficient(0) == Fraction(3, 10)


def test_division_by_constant_stays_polynomial():
    assert parse_expression("(t^2 + 1)/4").polynomial.coefficient(2) == Fraction(1, 4)
    assert parse_expression("t/(1+t)").polynomial is None


def test_analytic_expressions_evaluate_by_jets():
    e = parse_expression("sin(t)*cos(t)")
    assert e.polynomial is None
    jet = e.jet(0.3, 4)
    assert jet.value == pytest.approx(math.sin(0.3) * math.cos(0.3), abs=1e-15)
    assert jet.derivative_value(1) == pytest.approx(math.cos(0.6), abs=1e-14)


def test_power_alias():
    assert parse_expression("t**4").polynomial == parse_expression("t^4").polynomial


def test_unary_minus():
    p = parse_expression("-t^2 + 1").polynomial
    assert p.coefficient(2) == -1
    assert p.coefficient(0) == 1


def test_parse_errors_carry_position():
    with pytest.raises(ExpressionError) as err:
        parse_expression("t +* 2")
    assert err.value.column is not None
    with pytest.raises(ExpressionError):
        parse_expression("x + 1")
    with pytest.raises(ExpressionError):
        parse_expression("t^(-2)")
    with pytest.raises(ExpressionError):
        parse_expression("t^1.5")


def test_call_value():
    assert parse_expression("exp(t)")(0.0) == pytest.approx(1.0)
    assert parse_expression("t^2 - 1")(3.0) == pytest.approx(8.0)
