from fractions import Fraction

import pytest
import sympy
from hypothesis import given

from conftest import XY, XYZ, polynomials
from vflab.parsing import ParseError, parse_polynomial, parse_rational_list
from vflab.polynomial import (
    Polynomial,
    VarSet,
    VarSetMismatch,
    as_rational,
    format_polynomial,
    weighted_degree,
)


def to_sympy(p: Polynomial):
    syms = sympy.symbols(p.varset.names)
    return sum(
        (sympy.Rational(c.numerator, c.denominator) * sympy.Mul(*[s ** k for s, k in zip(syms, e)])
         for e, c in p.terms.items()),
        sympy.Integer(0),
    )


class TestScalars:
    def test_floats_rejected(self):
        with pytest.raises(TypeError):
            as_rational(0.5)
        with pytest.raises(TypeError):
            Polynomial.constant(XY, 1.5)

    def test_bool_rejected(self):
        with pytest.raises(TypeError):
            as_rational(True)

    def test_strings_and_ints(self):
        assert as_rational("3/6") == Fraction(1, 2)
        assert as_rational(4) == Fraction(4)


class TestArithmetic:
    def test_difference_of_squares(self):
        x, y = Polynomial.variable(XY, "x"), Polynomial.variable(XY, "y")
        assert format_polynomial((x + y) * (x - y)) == "x^2 - y^2"

    def test_cancellation_to_zero(self):
        assert parse_polynomial("1/2*x - 1/2*x").is_zero()
        assert format_polynomial(parse_polynomial("1/2*x - 1/2*x")) == "0"

    def test_varset_mismatch(self):
        p = parse_polynomial("x", XY)
        q = parse_polynomial("x", XYZ)
        with pytest.raises(VarSetMismatch):
            p + q

    def test_derivative_and_substitute(self):
        p = parse_polynomial("x^3*y + 2*y^2", XY)
        assert p.derivative("x") == parse_polynomial("3*x^2*y", XY)
        assert p.substitute("y", 2) == parse_polynomial("2*x^3 + 8", XY)
        assert p.evaluate({"x": Fraction(1, 2), "y": 1}) == Fraction(17, 8)

    def test_weighted_degree_validation(self):
        assert weighted_degree((2, 3), (Fraction(1, 2), Fraction(1, 3))) == 2
        with pytest.raises(ValueError):
            weighted_degree((1,), (Fraction(1, 2), 1))
        with pytest.raises(ValueError):
            weighted_degree((1, 1), (0, 1))

    @given(polynomials(), polynomials(), polynomials())
    def test_ring_axioms(self, a, b, c):
        assert (a + b) + c == a + (b + c)
        assert a + b == b + a
        assert (a * b) * c == a * (b * c)
        assert a * b == b * a
        assert a * (b + c) == a * b + a * c
        assert a - a == Polynomial.zero(XY)
        assert a * Polynomial.constant(XY, 1) == a

    @given(polynomials(max_terms=4), polynomials(max_terms=4))
    def test_product_matches_sympy(self, a, b):
        assert sympy.expand(to_sympy(a * b) - to_sympy(a) * to_sympy(b)) == 0

    @given(polynomials(), polynomials())
    def test_leibniz(self, a, b):
        assert (a * b).derivative("x") == a.derivative("x") * b + a * b.derivative("x")


class TestParsing:
    def test_example(self):
        p = parse_polynomial("x^2 + y^3")
        assert p.varset == XY
        assert p.terms == {(2, 0): 1, (0, 3): 1}

    def test_error_column(self):
        with pytest.raises(ParseError) as exc:
            parse_polynomial("x + @")
        assert exc.value.column == 5

    def test_implicit_multiplication_rejected(self):
        with pytest.raises(ParseError, match="implicit"):
            parse_polynomial("2x")

    def test_division_only_by_constants(self):
        assert parse_polynomial("(x + y)/2") == parse_polynomial("1/2*x + 1/2*y")
        with pytest.raises(ParseError):
            parse_polynomial("x/y")

    def test_float_literal_rejected(self):
        with pytest.raises(ParseError):
            parse_polynomial("0.5*x")

    def test_natural_variable_order(self):
        assert parse_polynomial("x10 + x2 + x1").varset.names == ("x1", "x2", "x10")

    def test_rational_lists(self):
        assert parse_rational_list("1/2, 1/3") == [Fraction(1, 2), Fraction(1, 3)]

    def test_unknown_variable_in_fixed_varset(self):
        with pytest.raises(ParseError):
            parse_polynomial("z", XY)

    @given(polynomials(XYZ, max_terms=6, max_deg=4))
    def test_round_trip(self, p):
        assert parse_polynomial(format_polynomial(p), XYZ) == p

    def test_varset_names_validated(self):
        with pytest.raises(ValueError):
            VarSet(("x", "x"))
        with pytest.raises(ValueError):
            VarSet(("1x",))
