import random
from fractions import Fraction

import pytest

from tsmooth.jets import (
    Jet,
    PolynomialSyntaxError,
    default_truncation,
    jet_for_germ,
    make_jet,
    parse_polynomial,
    render_poly,
)


def test_parse_simple_germ():
    j = make_jet("y^2 - x^3", 8)
    assert dict(j.coeffs) == {(0, 2): Fraction(1), (3, 0): Fraction(-1)}
    assert j.truncation == 8


def test_parse_zero():
    assert make_jet("0", 4).is_zero()


def test_truncation_drops_high_terms():
    j = make_jet("x*y + (1/2)*x^5", 5)
    assert dict(j.coeffs) == {(1, 1): Fraction(1)}


def test_rational_literals_and_parentheses():
    j = make_jet("(1/2)*x^2 - 3/4*y + (x - y)^2", 6)
    assert j.coeffs[(0, 1)] == Fraction(-3, 4)
    assert j.coeffs[(2, 0)] == Fraction(3, 2)
    assert j.coeffs[(1, 1)] == Fraction(-2)
    assert j.coeffs[(0, 2)] == Fraction(1)


def test_unary_minus():
    assert parse_polynomial("-x") == {(1, 0): Fraction(-1)}
    assert parse_polynomial("-x^2 + y") == {(2, 0): Fraction(-1), (0, 1): Fraction(1)}


def test_syntax_error_reports_position():
    with pytest.raises(PolynomialSyntaxError) as err:
        parse_polynomial("x + * y")
    assert err.value.position == 4


def test_decimal_coefficients_rejected():
    with pytest.raises(PolynomialSyntaxError, match="unsupported coefficient"):
        parse_polynomial("0.5*x")


def test_unknown_variable_rejected():
    with pytest.raises(PolynomialSyntaxError, match="unknown variable"):
        parse_polynomial("x + z")


def test_slash_only_between_integers():
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x/2")


def test_negative_exponent_rejected():
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("x^-2")


def test_division_by_zero_rejected():
    with pytest.raises(PolynomialSyntaxError):
        parse_polynomial("1/0")


def _random_jet(rng, truncation):
    coeffs = {}
    for _ in range(rng.randint(1, 6)):
        i, j = rng.randint(0, 4), rng.randint(0, 4)
        coeffs[(i, j)] = Fraction(rng.randint(-5, 5), rng.randint(1, 4))
    return Jet(coeffs, truncation)


def test_arithmetic_stays_below_truncation():
    rng = random.Random(7)
    for _ in range(50):
        n = rng.randint(3, 9)
        a, b = _random_jet(rng, n), _random_jet(rng, n)
        for result in (a + b, a - b, a * b, a.diff("x"), a.diff("y")):
            assert all(i + j < n for i, j in result.coeffs)
            assert all(c != 0 for c in result.coeffs.values())


def test_product_distributes():
    rng = random.Random(11)
    for _ in range(30):
        n = 10
        a, b, c = (_random_jet(rng, n) for _ in range(3))
        assert (a + b) * c == a * c + b * c


def test_derivative_of_product():
    n = 12
    a = make_jet("x^2 + y^3", n)
    b = make_jet("x*y - 2*y^2", n)
    lhs = (a * b).diff("x")
    rhs = a.diff("x") * b + a * b.diff("x")
    assert lhs == rhs


def test_render_parse_round_trip():
    rng = random.Random(23)
    for _ in range(40):
        jet = _random_jet(rng, 11)
        again = parse_polynomial(render_poly(jet.coeffs))
        assert again == dict(jet.coeffs)


def test_truncation_policy():
    assert default_truncation(3) == 10
    assert default_truncation(40) == 64
    jet = jet_for_germ("y^2-x^3")
    assert jet.truncation == 10


def test_order_and_degree():
    j = make_jet("x^2*y + y^5", 8)
    assert j.order() == 3
    assert j.degree() == 5
    with pytest.raises(ValueError):
        Jet.zero(4).order()


def test_power_matches_repeated_product():
    j = make_jet("x + y^2", 9)
    assert j ** 3 == j * j * j
