"""Homogeneous bivariate polynomials in (s, t).

Coefficients are stored densely by s-exponent: index ``k`` holds the
coefficient of ``s^k t^(d-k)``.  Setting ``t = 1`` therefore gives the
univariate polynomial with the same coefficient list, and the power of ``t``
dividing the form is ``d`` minus the degree of that dehomogenization.  The
place at infinity, ``(1:0)``, is the linear factor ``t`` and needs no special
handling anywhere.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd as igcd
from typing import NamedTuple

from ellfib.errors import FieldMismatch
from ellfib.exactalg import upoly
from ellfib.exactalg.fields import QQ, FieldElem, FieldSpec, _canon, common_field, format_coeff

INFINITE = float("inf")


class HomogPoly:
    """Immutable homogeneous form of a fixed degree over a :class:`FieldSpec`."""

    __slots__ = ("field", "degree", "coeffs", "_hash", "_low")

    def __init__(self, fld: FieldSpec, coeffs, degree: int | None = None):
        if fld.is_rational:
            cs = [_canon(c) if isinstance(c, Fraction) else c for c in coeffs]
            for i, c in enumerate(cs):
                if isinstance(c, FieldElem):
                    cs[i] = _canon(c.rational_value())
        else:
            cs = [c if isinstance(c, FieldElem) and c.field == fld else fld(c) for c in coeffs]
        if degree is None:
            degree = max(len(cs) - 1, 0)
        if len(cs) > degree + 1:
            if any(cs[degree + 1:]):
                raise ValueError("coefficient list longer than degree allows")
            cs = cs[: degree + 1]
        cs = cs + [fld.zero if fld.is_rational else fld(0)] * (degree + 1 - len(cs))
        if not any(cs):
            degree = 0
            cs = cs[:1]
        self.field = fld
        self.degree = degree
        self.coeffs = tuple(cs)
        self._hash = None
        self._low = None

    # -- constructors --------------------------------------------------
    @classmethod
    def zero(cls, fld: FieldSpec = QQ) -> "HomogPoly":
        return cls(fld, [0], 0)

    @classmethod
    def const(cls, c, fld: FieldSpec = QQ) -> "HomogPoly":
        return cls(fld, [c], 0)

    @classmethod
    def s(cls, fld: FieldSpec = QQ) -> "HomogPoly":
        return cls(fld, [0, 1], 1)

    @classmethod
    def t(cls, fld: FieldSpec = QQ) -> "HomogPoly":
        return cls(fld, [1, 0], 1)

    @classmethod
    def linear(cls, a, b, fld: FieldSpec = QQ) -> "HomogPoly":
        """The form ``b*s - a*t`` vanishing at the point ``(a:b)``."""
        return cls(fld, [-fld(a) if not fld.is_rational else -a, b], 1)

    @classmethod
    def from_univariate(cls, fld: FieldSpec, coeffs, degree: int) -> "HomogPoly":
        return cls(fld, list(coeffs), degree)

    # -- basic properties ----------------------------------------------
    @property
    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __bool__(self):
        return not self.is_zero

    @property
    def is_constant(self) -> bool:
        return self.degree == 0

    def low(self):
        """Dehomogenization at t = 1 as a trimmed univariate list."""
        if self._low is None:
            self._low = upoly.trim(list(self.coeffs))
        return self._low

    @property
    def t_order(self) -> int:
        """Exponent of the factor ``t`` (the place at infinity)."""
        if self.is_zero:
            return INFINITE
        return self.degree - (len(self.low()) - 1)

    @property
    def leading_coefficient(self):
        lo = self.low()
        return lo[-1] if lo else 0

    def inv(self, x):
        return self.field.inv(x)

    # -- arithmetic ----------------------------------------------------
    def _unify(self, other: "HomogPoly") -> tuple["HomogPoly", "HomogPoly"]:
        if other.field == self.field:
            return self, other
        fld = common_field(self.field, other.field)
        return self.lift(fld), other.lift(fld)

    def lift(self, fld: FieldSpec) -> "HomogPoly":
        if fld == self.field:
            return self
        if not fld.contains(self.field):
            raise FieldMismatch(f"cannot lift a polynomial over {self.field} into {fld}")
        return HomogPoly(fld, [fld(c) for c in self.coeffs], self.degree)

    def __add__(self, other):
        if not isinstance(other, HomogPoly):
            if other == 0:
                return self
            other = HomogPoly.const(other, self.field)
        a, b = self._unify(other)
        if b.is_zero:
            return a
        if a.is_zero:
            return b
        if a.degree != b.degree:
            raise ValueError(f"cannot add forms of degrees {a.degree} and {b.degree}")
        return HomogPoly(a.field, [x + y for x, y in zip(a.coeffs, b.coeffs)], a.degree)

    __radd__ = __add__

    def __neg__(self):
        return HomogPoly(self.field, [-c for c in self.coeffs], self.degree)

    def __sub__(self, other):
        if not isinstance(other, HomogPoly):
            other = HomogPoly.const(other, self.field)
        return self + (-other)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, HomogPoly):
            a, b = self._unify(other)
            if a.is_zero or b.is_zero:
                return HomogPoly.zero(a.field)
            prod = upoly.mul(a.low(), b.low())
            return HomogPoly(a.field, prod, a.degree + b.degree)
        if isinstance(other, FieldElem) and other.field != self.field:
            if other.is_rational():
                other = other.rational_value()
            else:
                return self.lift(other.field) * other
        if not other:
            return HomogPoly.zero(self.field)
        return HomogPoly(self.field, [c * other for c in self.coeffs], self.degree)

    __rmul__ = __mul__

    def __pow__(self, e: int) -> "HomogPoly":
        if e < 0:
            raise ValueError("negative power of a form")
        if e == 0:
            return HomogPoly.const(1, self.field)
        if self.is_zero:
            return self
        return HomogPoly(self.field, upoly.power(self.low(), e), self.degree * e)

    def scale(self, c) -> "HomogPoly":
        return self * c

    def divmod_exact(self, other: "HomogPoly") -> tuple["HomogPoly", bool]:
        """Return ``(quotient, exact)``; ``exact`` is False when ``other`` does not divide."""
        a, b = self._unify(other)
        if b.is_zero:
            raise ZeroDivisionError("division by the zero form")
        if a.is_zero:
            return HomogPoly.zero(a.field), True
        if b.degree > a.degree:
            return HomogPoly.zero(a.field), False
        quo, rem = upoly.divmod_(a.low(), b.low(), a.inv)
        dq = a.degree - b.degree
        if rem or len(quo) - 1 > dq:
            return HomogPoly(a.field, quo[: dq + 1] if len(quo) > dq + 1 else quo, dq), False
        return HomogPoly(a.field, quo, dq), True

    def divexact(self, other: "HomogPoly") -> "HomogPoly":
        q, ok = self.divmod_exact(other)
        if not ok:
            raise ArithmeticError(f"{other} does not divide {self}")
        return q

    def divides(self, other: "HomogPoly") -> bool:
        """True if ``self`` divides ``other``."""
        if self.is_zero:
            return other.is_zero
        return other.divmod_exact(self)[1]

    def __floordiv__(self, other):
        if isinstance(other, HomogPoly):
            return self.divexact(other)
        return self * self.field.inv(other)

    def __truediv__(self, other):
        if isinstance(other, HomogPoly):
            return self.divexact(other)
        return self * self.field.inv(other)

    # -- calculus, evaluation, substitution ------------------------------
    def diff_s(self) -> "HomogPoly":
        if self.degree == 0:
            return HomogPoly.zero(self.field)
        return HomogPoly(self.field, [k * self.coeffs[k] for k in range(1, self.degree + 1)], self.degree - 1)

    def diff_t(self) -> "HomogPoly":
        if self.degree == 0:
            return HomogPoly.zero(self.field)
        d = self.degree
        return HomogPoly(self.field, [(d - k) * self.coeffs[k] for k in range(d)], d - 1)

    def evaluate(self, s, t):
        """Value at the point ``(s, t)``."""
        acc = 0
        spow = 1
        tpows = [1]
        for _ in range(self.degree):
            tpows.append(tpows[-1] * t)
        for k in range(self.degree + 1):
            c = self.coeffs[k]
            if c:
                acc = acc + c * spow * tpows[self.degree - k]
            spow = spow * s
        return acc

    def substitute(self, N: "HomogPoly", D: "HomogPoly") -> "HomogPoly":
        """``f(N, D)``: each monomial ``s^k t^(d-k)`` becomes ``N^k D^(d-k)``."""
        fld = common_field(self.field, N.field, D.field)
        f, N, D = self.lift(fld), N.lift(fld), D.lift(fld)
        if N.degree != D.degree:
            raise ValueError("substitution components must have equal degree")
        e = N.degree
        d = f.degree
        if f.is_zero:
            return HomogPoly.zero(fld)
        npow = [[1]]
        dpow = [[1]]
        for _ in range(d):
            npow.append(upoly.mul(npow[-1], N.low()))
            dpow.append(upoly.mul(dpow[-1], D.low()))
        acc = []
        for k, c in enumerate(f.coeffs):
            if c:
                acc = upoly.add(acc, upoly.scale(upoly.mul(npow[k], dpow[d - k]), c))
        return HomogPoly(fld, acc, d * e)

    # -- normal forms ------------------------------------------------------
    def content_normalize(self) -> tuple[object, "HomogPoly"]:
        return content_normalize(self)

    def normalized(self) -> "HomogPoly":
        return content_normalize(self)[1]

    def monic(self) -> "HomogPoly":
        if self.is_zero:
            return self
        return self * self.inv(self.leading_coefficient)

    # -- comparison ------------------------------------------------------
    def __eq__(self, other):
        if isinstance(other, HomogPoly):
            if self.is_zero and other.is_zero:
                return True
            return self.field == other.field and self.degree == other.degree and self.coeffs == other.coeffs
        if isinstance(other, (int, Fraction, FieldElem)):
            return self.degree == 0 and self.coeffs[0] == other
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.degree, self.coeffs))
        return self._hash

    def __repr__(self):
        return f"HomogPoly({self})"

    def __str__(self):
        return format_homog(self)


def format_homog(f: HomogPoly) -> str:
    """Canonical text: terms by descending s-exponent, ``c*s^i*t^j``."""
    if f.is_zero:
        return "0"
    d = f.degree
    parts = []
    for k in range(d, -1, -1):
        c = f.coeffs[k]
        if not c:
            continue
        mono = []
        if k:
            mono.append("s" if k == 1 else f"s^{k}")
        if d - k:
            mono.append("t" if d - k == 1 else f"t^{d - k}")
        mono_s = "*".join(mono)
        if isinstance(c, FieldElem) and not c.is_rational():
            sign, body = "+", format_coeff(c) + ("*" + mono_s if mono_s else "")
        else:
            v = c.rational_value() if isinstance(c, FieldElem) else c
            sign = "-" if v < 0 else "+"
            mag = abs(v)
            if mono_s and mag == 1:
                body = mono_s
            else:
                body = format_coeff(mag) + ("*" + mono_s if mono_s else "")
        parts.append((sign, body))
    out = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        out += f" {sign} {body}"
    return out


# ---------------------------------------------------------------------------
# gcd / squarefree / order splitting


def content_normalize(f: HomogPoly) -> tuple[object, HomogPoly]:
    """Split ``f = unit * normalized``.

    Over Q the normalized form has coprime integer coefficients and a positive
    leading coefficient (the coefficient of the highest power of s present);
    over an extension it is monic.
    """
    if f.is_zero:
        raise ValueError("content of the zero form is undefined")
    if f.field.is_rational:
        nums = []
        den = 1
        for c in f.coeffs:
            if c:
                fc = Fraction(c)
                nums.append(fc.numerator)
                den = den * fc.denominator // igcd(den, fc.denominator)
        g = 0
        for n in nums:
            g = igcd(g, n)
        unit = Fraction(g, den)
        if f.leading_coefficient < 0:
            unit = -unit
        unit = _canon(unit)
        if unit == 1:
            return 1, f
        inv = _canon(1 / Fraction(unit))
        return unit, HomogPoly(f.field, [c * inv for c in f.coeffs], f.degree)
    lc = f.leading_coefficient
    if lc == 1:
        return f.field(1), f
    return lc, f * lc.inverse()


def hp_gcd(f: HomogPoly, g: HomogPoly) -> HomogPoly:
    """Content-normalized gcd of two forms (not both zero)."""
    f, g = f._unify(g)
    if f.is_zero and g.is_zero:
        raise ValueError("gcd of two zero forms is undefined")
    if f.is_zero:
        return g.normalized()
    if g.is_zero:
        return f.normalized()
    tpow = min(f.t_order, g.t_order)
    lo = _ugcd(f.field, f.low(), g.low())
    return HomogPoly(f.field, lo, len(lo) - 1 + tpow).normalized()


def _ugcd(fld: FieldSpec, a, b):
    return upoly.gcd(a, b, upoly.rational_inv if fld.is_rational else fld.inv)


class SquarefreeCluster(NamedTuple):
    factor: HomogPoly
    multiplicity: int


def squarefree_decompose(f: HomogPoly) -> tuple[object, list[SquarefreeCluster]]:
    """``f = unit * prod(factor**multiplicity)`` with squarefree, coprime, normalized factors.

    Clusters are sorted by multiplicity, then by degree and coefficients, so
    the output is deterministic.  The place ``t`` appears as its own cluster.
    """
    if f.is_zero:
        raise ValueError("squarefree decomposition of the zero form")
    fld = f.field
    clusters: dict[int, HomogPoly] = {}
    tpow = f.t_order
    low = f.low()
    parts = upoly.squarefree_parts(low, upoly.rational_inv if fld.is_rational else fld.inv)
    for factor, mult in parts:
        clusters[mult] = HomogPoly(fld, factor, len(factor) - 1).normalized()
    out = []
    t_form = HomogPoly.t(fld)
    for mult, factor in clusters.items():
        out.append(SquarefreeCluster(factor, mult))
    if tpow:
        out.append(SquarefreeCluster(t_form, tpow))
    prod = HomogPoly.const(1, fld)
    for c in out:
        prod = prod * c.factor ** c.multiplicity
    unit = f.leading_coefficient * fld.inv(prod.leading_coefficient)
    out.sort(key=_cluster_key)
    return unit, out


def _cluster_key(c):
    return (c.multiplicity, c.factor.degree, [str(x) for x in c.factor.coeffs])


def squarefree_part(f: HomogPoly) -> HomogPoly:
    _, clusters = squarefree_decompose(f)
    out = HomogPoly.const(1, f.field)
    for c in clusters:
        out = out * c.factor
    return out


def order_split(base: HomogPoly, target: HomogPoly) -> list[tuple[HomogPoly, object]]:
    """Split the squarefree ``base`` by the vanishing order of ``target``.

    Returns ``(sub_factor, order)`` pairs whose product is ``base`` up to a
    unit; ``order`` is :data:`INFINITE` for the zero target.  Entries are
    sorted by order.
    """
    base, target = base._unify(target)
    if base.is_zero:
        raise ValueError("order_split needs a nonzero base")
    if base.is_constant:
        return []
    base = base.normalized()
    if target.is_zero:
        return [(base, INFINITE)]
    out = []
    cur = base
    rest = target
    k = 0
    while not cur.is_constant:
        g = hp_gcd(cur, rest)
        if g.degree < cur.degree:
            out.append((cur.divexact(g).normalized(), k))
        if g.is_constant:
            break
        cur = g
        rest = rest.divexact(g)
        k += 1
    return out


def vanishing_order(place: HomogPoly, f: HomogPoly):
    """Order of ``f`` along a squarefree place assumed to have uniform order."""
    if f.is_zero:
        return INFINITE
    k = 0
    while True:
        q, ok = f.divmod_exact(place)
        if not ok:
            return k
        f = q
        k += 1


def exact_product(factors) -> HomogPoly:
    it = iter(factors)
    out = next(it)
    for f in it:
        out = out * f
    return out
