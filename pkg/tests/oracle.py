"""Independent sympy translations used as test oracles."""

from __future__ import annotations

from fractions import Fraction

import sympy as sp

from ellfib.exactalg import HomogPoly
from ellfib.exactalg.fields import FieldElem

s, t, a = sp.symbols("s t a")


def coeff_expr(c):
    if isinstance(c, FieldElem):
        return sum((sp.Rational(Fraction(x).numerator, Fraction(x).denominator) * a**i for i, x in enumerate(c.c)),
                   sp.Integer(0))
    c = Fraction(c)
    return sp.Rational(c.numerator, c.denominator)


def to_sympy(f: HomogPoly):
    """The form as a sympy expression in s, t (and the generator a)."""
    d = f.degree
    return sp.expand(sum((coeff_expr(c) * s**k * t**(d - k) for k, c in enumerate(f.coeffs)), sp.Integer(0)))


def reduce_mod(expr, modulus):
    """Reduce the ``a``-dependence of ``expr`` modulo ``modulus(a)``."""
    if modulus is None:
        return sp.expand(expr)
    return sp.expand(sp.rem(sp.expand(expr), modulus, a))


def same_form(f: HomogPoly, expr, modulus=None) -> bool:
    return sp.expand(reduce_mod(to_sympy(f) - expr, modulus)) == 0
