"""Coefficient fields: Q and simple algebraic extensions Q[a]/(m(a)).

Rational numbers are plain ``int``/``Fraction`` values; elements of an
extension are :class:`FieldElem` instances.  Both support the usual
arithmetic operators so polynomial code never has to branch on the field.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from ellfib.errors import FieldMismatch, ZeroDivisorInModulus
from ellfib.exactalg import upoly


def _canon(x):
    if isinstance(x, Fraction) and x.denominator == 1:
        return x.numerator
    return x


@dataclass(frozen=True)
class FieldSpec:
    """Either Q (``modulus is None``) or Q[a]/(modulus).

    ``modulus`` is stored monic (constant term first); ``display`` keeps the
    modulus as the user wrote it, for printing only.
    """

    modulus: tuple | None = None
    display: tuple | None = field(default=None, compare=False)

    @classmethod
    def extension(cls, coeffs) -> "FieldSpec":
        """Build Q[a]/(m) from the coefficients of m (constant term first)."""
        m = upoly.trim([Fraction(c) for c in coeffs])
        if len(m) < 3:
            raise ValueError("extension modulus must have degree >= 2")
        lc = m[-1]
        monic = tuple(_canon(c / lc) for c in m)
        return cls(modulus=monic, display=tuple(_canon(c) for c in m))

    @property
    def is_rational(self) -> bool:
        return self.modulus is None

    @property
    def degree(self) -> int:
        return 1 if self.modulus is None else len(self.modulus) - 1

    @property
    def zero(self):
        return 0

    @property
    def one(self):
        return 1

    @property
    def gen(self):
        if self.modulus is None:
            raise ValueError("Q has no extension generator")
        return FieldElem(self, (0, 1))

    def __call__(self, x):
        """Coerce an int, Fraction, string or element of a subfield into this field."""
        if isinstance(x, FieldElem):
            if x.field == self:
                return x
            if x.is_rational():
                return self(x.rational_value())
            raise FieldMismatch(f"cannot coerce element of {x.field} into {self}")
        if isinstance(x, str):
            x = Fraction(x)
        if isinstance(x, (int, Fraction)):
            x = _canon(x)
            if self.modulus is None:
                return x
            return FieldElem(self, (x,) if x else ())
        raise TypeError(f"cannot coerce {type(x).__name__} into a field element")

    def contains(self, other: "FieldSpec") -> bool:
        return other.is_rational or other == self

    def inv(self, x):
        if self.modulus is None:
            if isinstance(x, FieldElem):
                x = x.rational_value()
            if not x:
                raise ZeroDivisionError("inverse of zero")
            return _canon(1 / Fraction(x))
        return self(x).inverse()

    def reduce(self, coeffs):
        """Reduce a coefficient list modulo the modulus."""
        m = self.modulus
        n = len(m) - 1
        p = list(coeffs)
        for k in range(len(p) - 1, n - 1, -1):
            c = p[k]
            if c:
                for i in range(n):
                    p[k - n + i] -= c * m[i]
            p[k] = 0
        return tuple(_canon(c) for c in upoly.trim(p[:n]))

    def __str__(self) -> str:
        if self.modulus is None:
            return "rationals"
        return "extension: " + format_univariate(self.display or self.modulus, "x")

    def describe(self) -> str:
        return "Q" if self.modulus is None else f"Q[a]/({format_univariate(self.display or self.modulus, 'a')})"


QQ = FieldSpec()


def format_univariate(coeffs, var: str) -> str:
    terms = []
    for k in range(len(coeffs) - 1, -1, -1):
        c = _canon(Fraction(coeffs[k]))
        if not c:
            continue
        mono = "" if k == 0 else (var if k == 1 else f"{var}^{k}")
        mag = abs(c)
        if mono and mag == 1:
            body = mono
        elif mono:
            body = f"{mag}*{mono}"
        else:
            body = str(mag)
        sign = "-" if c < 0 else "+"
        terms.append((sign, body))
    if not terms:
        return "0"
    out = ("-" if terms[0][0] == "-" else "") + terms[0][1]
    for sign, body in terms[1:]:
        out += f" {sign} {body}"
    return out


class FieldElem:
    """Element of Q[a]/(m): coefficients of a^0, a^1, ... (trimmed)."""

    __slots__ = ("field", "c", "_hash")

    def __init__(self, fld: FieldSpec, coeffs):
        self.field = fld
        self.c = tuple(coeffs)
        self._hash = None

    # -- helpers -------------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, FieldElem):
            if other.field != self.field:
                if other.is_rational():
                    return other.rational_value()
                raise FieldMismatch("arithmetic between different extension fields")
            return other
        if isinstance(other, (int, Fraction)):
            return other
        return None

    def is_rational(self) -> bool:
        return len(self.c) <= 1

    def rational_value(self):
        if len(self.c) > 1:
            raise ValueError("element is not rational")
        return self.c[0] if self.c else 0

    # -- arithmetic ----------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, FieldElem):
            a, b = self.c, o.c
            if len(a) < len(b):
                a, b = b, a
            r = list(a)
            for i, x in enumerate(b):
                r[i] = r[i] + x
            return FieldElem(self.field, upoly.trim([_canon(x) for x in r]))
        if not o:
            return self
        r = list(self.c) or [0]
        r[0] = _canon(r[0] + o)
        return FieldElem(self.field, upoly.trim(r))

    __radd__ = __add__

    def __neg__(self):
        return FieldElem(self.field, tuple(-x for x in self.c))

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return (-self) + o

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, FieldElem):
            if not self.c or not o.c:
                return FieldElem(self.field, ())
            if len(o.c) == 1:
                o = o.c[0]
            elif len(self.c) == 1:
                return o * self.c[0]
            else:
                return FieldElem(self.field, self.field.reduce(upoly.mul(self.c, o.c)))
        if not o:
            return FieldElem(self.field, ())
        return FieldElem(self.field, tuple(_canon(x * o) for x in self.c))

    __rmul__ = __mul__

    def inverse(self) -> "FieldElem":
        if not self.c:
            raise ZeroDivisionError("inverse of zero")
        if len(self.c) == 1:
            return FieldElem(self.field, (_canon(1 / Fraction(self.c[0])),))
        g, u, _ = upoly.xgcd(list(self.c), list(self.field.modulus), upoly.rational_inv)
        if len(g) > 1:
            raise ZeroDivisorInModulus(
                f"{self} shares the factor {format_univariate(g, 'a')} with the modulus",
                witness=tuple(_canon(x) for x in g),
            )
        return FieldElem(self.field, self.field.reduce(u))

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if isinstance(o, FieldElem):
            return self * o.inverse()
        return self * _canon(1 / Fraction(o))

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return self.inverse() * o

    def __pow__(self, e: int):
        if e < 0:
            return self.inverse() ** (-e)
        result = FieldElem(self.field, (1,))
        base = self
        while e:
            if e & 1:
                result = result * base
            e >>= 1
            if e:
                base = base * base
        return result

    # -- comparison ----------------------------------------------------
    def __bool__(self):
        return bool(self.c)

    def __eq__(self, other):
        if isinstance(other, FieldElem):
            return self.field == other.field and self.c == other.c
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.c
            return self.c == (other,)
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash(self.c[0]) if len(self.c) == 1 else hash((self.field, self.c))
        return self._hash

    def __repr__(self):
        return f"FieldElem({self})"

    def __str__(self):
        return format_univariate(self.c, "a")


def field_invert(x, fld: FieldSpec | None = None):
    """Multiplicative inverse of a nonzero field element."""
    if isinstance(x, FieldElem):
        return x.inverse()
    return (fld or QQ).inv(x)


def common_field(*specs: FieldSpec) -> FieldSpec:
    """The smallest field among ``specs`` containing all of them."""
    result = QQ
    for s in specs:
        if s.is_rational:
            continue
        if result.is_rational:
            result = s
        elif result != s:
            raise FieldMismatch(f"incompatible fields {result} and {s}")
    return result


def is_rational_value(x) -> bool:
    return not isinstance(x, FieldElem) or x.is_rational()


def format_coeff(x) -> str:
    """Exact text form of a coefficient: ``p/q`` for rationals, ``(...)`` in ``a`` otherwise."""
    if isinstance(x, FieldElem):
        if x.is_rational():
            return str(x.rational_value())
        return f"({x})"
    return str(_canon(Fraction(x)))
