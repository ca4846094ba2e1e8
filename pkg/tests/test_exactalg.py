from __future__ import annotations

from fractions import Fraction

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ellfib.errors import NonHomogeneousError, ParseError
from ellfib.exactalg import (
    INFINITE,
    QQ,
    HomogPoly,
    hp_gcd,
    order_split,
    parse_field,
    parse_homog,
    parse_point,
    squarefree_decompose,
    squarefree_part,
    vanishing_order,
)
from oracle import a, s, same_form, t, to_sympy

CUBIC = parse_field("extension: x^2+x+1")


def forms(max_degree=5, coeff=st.integers(-6, 6)):
    return st.integers(0, max_degree).flatmap(
        lambda d: st.lists(coeff, min_size=d + 1, max_size=d + 1).map(lambda cs: HomogPoly(QQ, cs, d))
    )


nonzero_forms = forms().filter(lambda f: not f.is_zero)


def test_parse_matches_sympy_expansion():
    text = "-3(s-2t)^2(s^2-3t^2)"
    f = parse_homog(text)
    assert f.degree == 4
    assert same_form(f, sp.expand(-3 * (s - 2 * t) ** 2 * (s**2 - 3 * t**2)))


def test_coefficient_convention():
    f = parse_homog("5s^2 + 7t^2")
    assert f.coeffs == (7, 0, 5)


def test_parse_fractions_and_implicit_products():
    f = parse_homog("s t/2 + 1/3 t^2")
    assert f.coeffs == (Fraction(1, 3), Fraction(1, 2), 0)


def test_parse_rejects_mixed_degrees():
    with pytest.raises(NonHomogeneousError):
        parse_homog("s^2 + t")


def test_parse_error_names_token():
    with pytest.raises(ParseError) as info:
        parse_homog("s^2 + $t^2")
    assert info.value.token is not None


def test_parse_point_forms():
    assert parse_point("inf") == (1, 0)
    assert parse_point("3:2") == (3, 2)
    assert parse_point("-1/6") == (Fraction(-1, 6), 1)
    with pytest.raises(ParseError):
        parse_point("0:0")


def test_extension_arithmetic_against_sympy():
    w = CUBIC.gen
    assert w * w + w + 1 == 0
    assert (2 * w + 1) ** 2 == -3
    inv = CUBIC.inv(w + 2)
    assert inv * (w + 2) == 1
    f = parse_homog("(a+1)s^2 + (2a-1)st - t^2", CUBIC)
    g = parse_homog("s - a t", CUBIC)
    expr = sp.expand(((a + 1) * s**2 + (2 * a - 1) * s * t - t**2) * (s - a * t))
    assert same_form(f * g, expr, a**2 + a + 1)


def test_field_spec_round_trip():
    assert parse_field(str(CUBIC)) == CUBIC
    assert parse_field("rationals") == QQ
    with pytest.raises(ParseError):
        parse_field("extension: x+1")


@given(nonzero_forms, nonzero_forms)
@settings(max_examples=60, deadline=None)
def test_product_and_gcd_match_sympy(f, g):
    assert same_form(f * g, sp.expand(to_sympy(f) * to_sympy(g)))
    ours = hp_gcd(f, g)
    theirs = sp.gcd(to_sympy(f), to_sympy(g))
    assert ours.degree == sp.Poly(theirs, s, t).total_degree()
    assert ours.divides(f) and ours.divides(g)


@given(nonzero_forms)
@settings(max_examples=60, deadline=None)
def test_squarefree_decomposition_reassembles(f):
    unit, clusters = squarefree_decompose(f)
    prod = HomogPoly.const(unit)
    for c in clusters:
        prod = prod * c.factor ** c.multiplicity
    assert prod == f
    for i, c in enumerate(clusters):
        assert squarefree_part(c.factor).degree == c.factor.degree
        for d in clusters[i + 1:]:
            assert hp_gcd(c.factor, d.factor).is_constant


def test_squarefree_decomposition_against_sympy():
    f = parse_homog("s^3 (s-t)^2 (s+t)^2 t^5 (s^2+3t^2)")
    _, clusters = squarefree_decompose(f)
    ours = sorted((c.multiplicity, c.factor.degree) for c in clusters)
    _, theirs = sp.sqf_list(to_sympy(f), s, t)
    expected = {}
    for g, m in theirs:
        expected[m] = expected.get(m, 0) + sp.Poly(g, s, t).total_degree()
    assert ours == sorted(expected.items())


def test_squarefree_over_extension():
    f = parse_homog("(s - a t)^3 (s - a^2 t)", CUBIC)
    _, clusters = squarefree_decompose(f)
    assert [(c.multiplicity, c.factor.degree) for c in clusters] == [(1, 1), (3, 1)]


@given(nonzero_forms, st.integers(-3, 3), st.integers(-3, 3), st.integers(1, 3))
@settings(max_examples=50, deadline=None)
def test_substitute_matches_sympy(f, p, q, e):
    N = parse_homog(f"s^{e} + {p} t^{e}")
    D = parse_homog(f"{q} s^{e} + t^{e}") if q else HomogPoly.t() ** e
    expr = to_sympy(f).subs({s: sp.Symbol("N"), t: sp.Symbol("D")}, simultaneous=True)
    expr = expr.subs({sp.Symbol("N"): to_sympy(N), sp.Symbol("D"): to_sympy(D)})
    assert same_form(f.substitute(N, D), sp.expand(expr))


def test_substitute_degree_and_zero():
    f = parse_homog("s t")
    out = f.substitute(parse_homog("s^3"), parse_homog("t^3"))
    assert out.degree == 6 and out == parse_homog("s^3 t^3")
    with pytest.raises(ValueError):
        f.substitute(parse_homog("s"), parse_homog("t^2"))


def test_vanishing_order_and_split():
    f = parse_homog("(s-t)^3 (s+t) t^2")
    assert vanishing_order(parse_homog("s-t"), f) == 3
    assert vanishing_order(parse_homog("s"), f) == 0
    assert vanishing_order(parse_homog("s"), HomogPoly.zero()) == INFINITE
    split = order_split(parse_homog("(s-t)(s+t)s"), f)
    assert [(str(p), k) for p, k in split] == [("s", 0), ("s + t", 1), ("s - t", 3)]


@given(nonzero_forms, nonzero_forms)
@settings(max_examples=40, deadline=None)
def test_division_inverts_multiplication(f, g):
    assert (f * g).divexact(g) == f
    assert g.divides(f * g)


def test_evaluate_and_derivatives_euler_identity():
    f = parse_homog("2s^3 - 5s^2 t + t^3")
    # Euler: s f_s + t f_t = deg(f) f
    lhs = HomogPoly.s() * f.diff_s() + HomogPoly.t() * f.diff_t()
    assert lhs == f * 3
    assert f.evaluate(1, 1) == -2
    assert f.evaluate(Fraction(1, 2), 1) == Fraction(1, 4) - Fraction(5, 4) + 1
