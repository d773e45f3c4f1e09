import random
from fractions import Fraction

import pytest

from tansurf.classify import cusp_quartic_primitive, swallowtail_primitive
from tansurf.jets import RationalPoly, univariate_divexact, univariate_gcd_list

TU = ("t", "u")


def _p(**monomials):
    """Helper: _p(t3=1, t1u1=1) -> t^3 + t*u."""
    terms = {}
    for key, c in monomials.items():
        i = j = 0
        rest = key
        while rest:
            var = rest[0]
            rest = rest[1:]
            k = 0
            digits = ""
            while rest and rest[0].isdigit():
                digits += rest[0]
                rest = rest[1:]
            k = int(digits) if digits else 1
            if var == "t":
                i = k
            elif var == "u":
                j = k
            else:
                raise ValueError(key)
        terms[(i, j)] = Fraction(c)
    return RationalPoly(TU, terms)


def _rand_poly(rng, vars=TU, max_deg=4):
    terms = {}
    for _ in range(rng.randint(1, 6)):
        exps = tuple(rng.randint(0, max_deg) for _ in vars)
        terms[exps] = Fraction(rng.randint(-9, 9), rng.randint(1, 5))
    return RationalPoly(vars, terms)


def test_integrate_gives_first_primitive():
    integrand = _p(t2=3, u=1)  # 3t^2 + u
    assert integrand.integrate("t") == _p(t3=1, t1u1=1)
    assert swallowtail_primitive(0) == _p(t3=1, t1u1=1)


def test_integrate_gives_second_primitive():
    t = RationalPoly.var("t", TU)
    integrand = t * _p(t2=3, u=1)
    expected = _p(t4=Fraction(3, 4), t2u1=Fraction(1, 2))
    assert integrand.integrate("t") == expected
    assert swallowtail_primitive(1) == expected


def test_primitive_closed_form():
    # integral of t^i (3t^2+u) dt = 3/(i+3) t^(i+3) + 1/(i+1) u t^(i+1)
    for i in range(0, 21):
        t_exp = {(i + 3, 0): Fraction(3, i + 3), (i + 1, 1): Fraction(1, i + 1)}
        assert swallowtail_primitive(i) == RationalPoly(TU, t_exp)
    for i in range(0, 11):
        t_exp = {(i + 4, 0): Fraction(4, i + 4), (i + 1, 1): Fraction(1, i + 1)}
        assert cusp_quartic_primitive(i) == RationalPoly(TU, t_exp)


def test_substitute_kills_t():
    T0 = swallowtail_primitive(0)
    assert (T0 * T0).substitute("t", 0).is_zero


def test_substitute_polynomial():
    t = RationalPoly.var("t", TU)
    u = RationalPoly.var("u", TU)
    p = t ** 2 + u
    assert p.substitute("t", u + 1) == u ** 2 + 3 * u + 1


def test_derivative_inverts_integration_exactly():
    rng = random.Random(42)
    for _ in range(40):
        p = _rand_poly(rng)
        assert p.integrate("t").derivative("t") == p
        assert p.integrate("u").derivative("u") == p


def test_ring_axioms_exact():
    rng = random.Random(3)
    for _ in range(25):
        a, b, c = (_rand_poly(rng) for _ in range(3))
        assert a + b == b + a
        assert a * b == b * a
        assert (a * b) * c == a * (b * c)
        assert a * (b + c) == a * b + a * c


def test_eval_exact():
    p = _p(t3=1, t1u1=1)
    assert p.eval(t=Fraction(1, 2), u=Fraction(-3, 4)) == Fraction(1, 8) - Fraction(3, 8)


def test_univariate_gcd_and_divexact():
    t = RationalPoly.var("t", ("t",))
    a = 2 * t
    b = 3 * t ** 2
    c = 4 * t ** 3
    g = univariate_gcd_list([a, b, c])
    assert g == t
    assert univariate_divexact(b, g) == 3 * t
    with pytest.raises(ValueError):
        univariate_divexact(t ** 2 + 1, t)


def test_multiplicity_at():
    t = RationalPoly.var("t", ("t",))
    p = (t - 2) ** 3 * (t + 1)
    assert p.multiplicity_at(2) == 3
    assert p.multiplicity_at(-1) == 1
    assert p.multiplicity_at(0) == 0


def test_taylor_coeffs_exact_shift():
    t = RationalPoly.var("t", ("t",))
    p = t ** 3
    coeffs = p.taylor_coeffs(Fraction(1), 3)
    assert coeffs == [Fraction(1), Fraction(3), Fraction(3), Fraction(1)]


def test_canonical_str_is_stable():
    assert str(swallowtail_primitive(0)) == "t^3 + t*u"
    assert str(swallowtail_primitive(1)) == "3/4*t^4 + 1/2*t^2*u"
    assert str(RationalPoly.zero(TU)) == "0"


def test_float_coefficients_rejected():
    with pytest.raises(TypeError):
        RationalPoly(TU, {(1, 0): 0.5})
