"""k-th roots of field elements.

Over Q this is integer root extraction.  Over an extension the polynomial
``X^k - w`` is factored over the field with Trager's norm method: shift the
variable until the norm over Q is squarefree, factor the norm over Q, and
pull each factor back with a gcd over the extension.  Linear factors give the
roots.
"""

from __future__ import annotations

from fractions import Fraction

from ellfib.exactalg import upoly
from ellfib.exactalg.fields import QQ, FieldElem, FieldSpec, _canon


def _int_root(n: int, k: int):
    if n < 0:
        if k % 2 == 0:
            return None
        r = _int_root(-n, k)
        return None if r is None else -r
    from sympy import integer_nthroot

    r, exact = integer_nthroot(n, k)
    return int(r) if exact else None


def rational_root(x, k: int):
    """A rational ``r`` with ``r**k == x``, or None."""
    x = Fraction(x)
    if not x:
        return 0
    num = _int_root(x.numerator, k)
    den = _int_root(x.denominator, k)
    if num is None or den is None:
        return None
    return _canon(Fraction(num, den))


def field_root(x, k: int, fld: FieldSpec = QQ):
    """Return some ``r`` in the field with ``r**k == x``, or None if none exists."""
    if fld.is_rational:
        if isinstance(x, FieldElem):
            x = x.rational_value()
        return rational_root(x, k)
    x = fld(x)
    if not x:
        return fld(0)
    roots = linear_factor_roots(_binomial(x, k, fld), fld)
    for r in roots:
        if r ** k == x:
            return r
    return None


def _binomial(w, k, fld):
    coeffs = [fld(0)] * (k + 1)
    coeffs[0] = -w
    coeffs[k] = fld(1)
    return coeffs


def _shift(poly, c, fld):
    """``poly(X - c*a)`` for a coefficient list over the extension."""
    shift = [-(fld.gen * c), fld(1)]
    out = []
    power = [fld(1)]
    for coeff in poly:
        out = upoly.add(out, upoly.scale(power, coeff))
        power = upoly.mul(power, shift)
    return out


def linear_factor_roots(poly, fld: FieldSpec):
    """All roots in ``fld`` of a squarefree univariate polynomial over ``fld``."""
    import sympy

    a_sym, x_sym = sympy.symbols("a X")
    m_expr = sum(sympy.Rational(c.numerator, c.denominator) * a_sym**i
                 for i, c in enumerate(map(Fraction, fld.modulus)))
    n = fld.degree
    for c in range(0, 12):
        for shift in ((c, -c) if c else (0,)):
            shifted = _shift(poly, shift, fld)
            expr = 0
            for i, coeff in enumerate(shifted):
                expr += _to_sympy(coeff, a_sym) * x_sym**i
            norm = sympy.Poly(sympy.resultant(m_expr, expr, a_sym), x_sym)
            if sympy.degree(sympy.gcd(norm, norm.diff(x_sym)), x_sym) > 0:
                continue
            roots = []
            _, factors = sympy.factor_list(norm)
            for f, _mult in factors:
                if f.degree() != n:
                    continue
                fcoeffs = [fld(Fraction(int(q.p), int(q.q))) for q in reversed(f.all_coeffs())]
                g = upoly.gcd(shifted, fcoeffs, fld.inv)
                if len(g) == 2:
                    roots.append(-g[0] - fld.gen * shift)
            return roots
    raise ArithmeticError("no squarefree norm found while factoring over the extension")


def _to_sympy(coeff, a_sym):
    import sympy

    if isinstance(coeff, FieldElem):
        return sum(sympy.Rational(Fraction(c).numerator, Fraction(c).denominator) * a_sym**i
                   for i, c in enumerate(coeff.c))
    q = Fraction(coeff)
    return sympy.Rational(q.numerator, q.denominator)
