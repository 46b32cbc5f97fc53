from fractions import Fraction
from itertools import combinations

import pytest
import sympy
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import XY, polynomials
from test_polynomial import to_sympy
from vflab.groebner import (
    GREVLEX,
    LEX,
    Ideal,
    InfiniteQuotientError,
    divide,
    exact_divide,
    groebner_basis,
    ideal_membership,
    normal_form,
    rational_roots,
    s_polynomial,
    standard_monomials,
    weighted_order,
)
from vflab.parsing import parse_polynomial
from vflab.polynomial import Polynomial, format_polynomial


def P(text):
    return parse_polynomial(text, XY)


def test_lex_basis_example():
    G = groebner_basis(Ideal([P("x^2 - y"), P("y^2 - x")]), LEX)
    assert [format_polynomial(g) for g in G] == ["-y^2 + x", "y^4 - y"]


def test_basis_agrees_with_sympy():
    gens = [P("x^2*y - 1"), P("x*y^2 - x")]
    x, y = sympy.symbols("x y")
    expect = sympy.groebner([to_sympy(g) for g in gens], x, y, order="grevlex")
    got = groebner_basis(Ideal(gens), GREVLEX)
    assert sorted(str(sympy.expand(to_sympy(g))) for g in got) == sorted(str(e) for e in expect.exprs)


def test_standard_monomials_finite():
    q = standard_monomials(Ideal([P("3*x^2"), P("4*y^3")]))
    assert q.finite and len(q.monomials) == 6


def test_standard_monomials_infinite_and_capped():
    q = standard_monomials(Ideal([P("x")]))
    assert not q.finite
    with pytest.raises(InfiniteQuotientError):
        standard_monomials(Ideal([P("x^6")]), cap=5)
    with pytest.raises(InfiniteQuotientError):
        standard_monomials(Ideal([P("x^3"), P("y^3")]), cap=5)


def test_zero_ideal():
    assert groebner_basis(Ideal([Polynomial.zero(XY)])) == []
    assert not ideal_membership(P("x"), [])
    assert ideal_membership(Polynomial.zero(XY), [])
    with pytest.raises(ValueError):
        Ideal([])


def test_division_and_exact_divide():
    p = P("x^3 + x*y + 1")
    quotients, r = divide(p, [P("x^2"), P("y")])
    assert sum((q * d for q, d in zip(quotients, [P("x^2"), P("y")])), r) == p
    assert exact_divide(P("x^2 - y^2"), P("x - y")) == P("x + y")
    assert exact_divide(P("x^2 + 1"), P("x")) is None


def test_weighted_order_prefers_heavy_monomials():
    order = weighted_order((3, 1))
    assert order.key((1, 0)) > order.key((0, 2))


def test_rational_roots():
    roots, rest = rational_roots([Fraction(-1, 6), Fraction(1, 6), 1])  # s^2 + s/6 - 1/6
    assert sorted(roots) == [Fraction(-1, 2), Fraction(1, 3)]
    assert len(rest) == 1
    roots, rest = rational_roots([-2, 0, 1])  # s^2 - 2
    assert roots == [] and len(rest) == 3


@settings(max_examples=25)
@given(st.lists(polynomials(max_terms=3, max_deg=2), min_size=1, max_size=3),
       st.sampled_from([LEX, GREVLEX]))
def test_s_polynomials_reduce_to_zero(gens, order):
    G = groebner_basis(Ideal(gens, XY), order)
    for g, h in combinations(G, 2):
        assert normal_form(s_polynomial(g, h, order), G, order).is_zero()
    for g in gens:
        assert ideal_membership(g, G, order)


@settings(max_examples=25)
@given(st.lists(polynomials(max_terms=3, max_deg=3), min_size=1, max_size=3))
def test_standard_monomials_form_order_ideal(gens):
    gens = gens + [P("x^4"), P("y^4")]
    q = standard_monomials(Ideal(gens))
    mons = set(q.monomials)
    assert q.finite
    for m in mons:
        for i in range(2):
            if m[i]:
                lower = list(m)
                lower[i] -= 1
                assert tuple(lower) in mons
    # no standard monomial lies in the leading ideal
    G = groebner_basis(Ideal(gens))
    for m in mons:
        mono = Polynomial.monomial(XY, m)
        assert normal_form(mono, G) == mono
