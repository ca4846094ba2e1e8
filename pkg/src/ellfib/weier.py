"""Weierstrass models ``y^2 = x^3 + A x + B`` over the function field of P^1.

``A`` and ``B`` are forms in ``(s, t)`` of degrees ``4M`` and ``6M``.  The
operations here cover the discriminant and j-invariant, minimalization,
rescaling, quadratic twists and an exact equivalence test between models.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from ellfib.errors import (
    DegenerateModel,
    NonSquarefreeTwist,
    NotMinimal,
    OddTwistImbalance,
    ParseError,
    WeightUnderflow,
)
from ellfib.exactalg import (
    QQ,
    FieldSpec,
    HomogPoly,
    hp_gcd,
    order_split,
    parse_field,
    parse_homog,
    squarefree_decompose,
)
from ellfib.exactalg.fields import FieldElem, _canon, common_field
from ellfib.exactalg.roots import field_root


@dataclass(frozen=True)
class WeierstrassModel:
    """An elliptic surface with section, given by its short Weierstrass form.

    Construction checks the degrees against the weight ``M`` and rejects
    models whose discriminant vanishes identically.
    """

    A: HomogPoly
    B: HomogPoly
    M: int

    def __post_init__(self):
        if self.M <= 0:
            raise ValueError(f"weight must be positive, got {self.M}")
        fld = common_field(self.A.field, self.B.field)
        A = self.A.lift(fld)
        B = self.B.lift(fld)
        if A.is_zero:
            A = HomogPoly(fld, [0], 0)
        if B.is_zero:
            B = HomogPoly(fld, [0], 0)
        if not A.is_zero and A.degree != 4 * self.M:
            raise ValueError(f"A has degree {A.degree}, expected {4 * self.M}")
        if not B.is_zero and B.degree != 6 * self.M:
            raise ValueError(f"B has degree {B.degree}, expected {6 * self.M}")
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "B", B)
        if _discriminant_vanishes(A, B, self.M):
            raise DegenerateModel("the discriminant 4A^3 + 27B^2 vanishes identically")

    @property
    def field(self) -> FieldSpec:
        return self.A.field if not self.A.is_zero else self.B.field

    def lift(self, fld: FieldSpec) -> "WeierstrassModel":
        """Extension of scalars to ``fld``."""
        if fld == self.field:
            return self
        return WeierstrassModel(self.A.lift(fld), self.B.lift(fld), self.M)

    def __str__(self):
        return f"y^2 = x^3 + ({self.A})*x + ({self.B})  [M={self.M}]"


def _discriminant_vanishes(A: HomogPoly, B: HomogPoly, M: int) -> bool:
    # 4A^3 + 27B^2 has degree 12M, so it is zero iff it vanishes at 12M + 1
    # distinct points (k:1).
    if A.is_zero and B.is_zero:
        return True
    for k in range(12 * M + 1):
        a = A.evaluate(k, 1)
        b = B.evaluate(k, 1)
        if 4 * a * a * a + 27 * b * b:
            return False
    return True


def _model(A, B, M):
    return WeierstrassModel(A, B, M)


def discriminant(m: WeierstrassModel) -> HomogPoly:
    """``-16 (4A^3 + 27B^2)`` as a form of degree ``12M``."""
    fld = m.field
    d = 12 * m.M
    parts = HomogPoly(fld, [0], d)
    if not m.A.is_zero:
        parts = parts + m.A ** 3 * 4
    if not m.B.is_zero:
        parts = parts + m.B ** 2 * 27
    delta = parts * (-16)
    if delta.is_zero:
        raise DegenerateModel("the discriminant vanishes identically")
    return delta


@dataclass(frozen=True)
class JInvariant:
    """Reduced rational function ``numerator / denominator``.

    The denominator is content-normalized, so equal functions compare equal.
    """

    numerator: HomogPoly
    denominator: HomogPoly
    reduced: bool = True

    def __str__(self):
        if self.numerator.is_zero:
            return "0"
        if self.denominator.is_constant:
            return str(self.numerator)
        return f"({self.numerator}) / ({self.denominator})"


def reduce_fraction(num: HomogPoly, den: HomogPoly) -> JInvariant:
    """Cancel the gcd and normalize the denominator."""
    fld = common_field(num.field, den.field)
    num, den = num.lift(fld), den.lift(fld)
    if den.is_zero:
        raise ZeroDivisionError("zero denominator")
    if num.is_zero:
        return JInvariant(HomogPoly.zero(fld), HomogPoly.const(1, fld))
    g = hp_gcd(num, den)
    num, den = num.divexact(g), den.divexact(g)
    unit, den = den.content_normalize()
    num = num * fld.inv(unit)
    return JInvariant(num, den)


def j_invariant(m: WeierstrassModel) -> JInvariant:
    """``-1728 (4A)^3 / Delta`` in lowest terms."""
    delta = discriminant(m)
    if m.A.is_zero:
        return reduce_fraction(HomogPoly.zero(m.field), delta)
    return reduce_fraction((m.A * 4) ** 3 * (-1728), delta)


def minimalize(m: WeierstrassModel) -> tuple[WeierstrassModel, HomogPoly]:
    """Strip the largest ``f`` with ``f^4 | A`` and ``f^6 | B``.

    Returns the minimal model and ``f`` (content-normalized, 1 if nothing
    was removed).
    """
    fld = m.field
    A, B = m.A, m.B
    if A.is_zero:
        g = B
    elif B.is_zero:
        g = A
    else:
        g = hp_gcd(A, B)
    removed = HomogPoly.const(1, fld)
    if not g.is_constant:
        _, clusters = squarefree_decompose(g)
        for cl in clusters:
            if cl.multiplicity < 4:
                continue
            for sub, va in order_split(cl.factor, A):
                for sub2, vb in order_split(sub, B):
                    k = min(_floor_div(va, 4), _floor_div(vb, 6))
                    if k:
                        removed = removed * sub2 ** k
    if removed.is_constant:
        return m, removed
    if removed.degree >= m.M:
        raise WeightUnderflow(
            f"removing a factor of degree {removed.degree} from a model of weight {m.M}"
        )
    r4 = removed ** 4
    r6 = removed ** 6
    A2 = A if A.is_zero else A.divexact(r4)
    B2 = B if B.is_zero else B.divexact(r6)
    return _model(A2, B2, m.M - removed.degree), removed


def _floor_div(v, k):
    if v == float("inf"):
        return float("inf")
    return v // k


def is_minimal(m: WeierstrassModel) -> bool:
    return minimalize(m)[1].is_constant


def rescale(m: WeierstrassModel, u) -> WeierstrassModel:
    """``(u^4 A, u^6 B)``."""
    if not u:
        raise ZeroDivisionError("rescaling by zero")
    return _model(m.A * u ** 4, m.B * u ** 6, m.M)


def quadratic_twist(m: WeierstrassModel, alpha: HomogPoly) -> WeierstrassModel:
    """Twist by the squarefree form ``alpha``: ``(alpha^2 A, alpha^3 B)``, then minimalize.

    ``alpha`` must have even degree so that the new weight is an integer.
    """
    if alpha.is_zero:
        raise NonSquarefreeTwist("cannot twist by zero")
    if not alpha.is_constant:
        _, clusters = squarefree_decompose(alpha)
        bad = [c.factor for c in clusters if c.multiplicity > 1]
        if bad:
            raise NonSquarefreeTwist(f"twist polynomial has the repeated factor {bad[0]}")
    if alpha.degree % 2:
        raise OddTwistImbalance(
            f"twisting by a form of odd degree {alpha.degree} leaves a fractional weight"
        )
    raw = _model(m.A * alpha ** 2, m.B * alpha ** 3, m.M + alpha.degree // 2)
    return minimalize(raw)[0]


def euler_number(m: WeierstrassModel) -> int:
    """Degree of the discriminant of a minimal model, i.e. ``12M``."""
    if not is_minimal(m):
        raise NotMinimal("euler_number needs a minimal model")
    return discriminant(m).degree


# ---------------------------------------------------------------------------
# equivalence and canonical scaling


def _ratio(f: HomogPoly, g: HomogPoly):
    """``c`` with ``g = c f``, or None; both nonzero of one degree."""
    if f.degree != g.degree:
        return None
    k = next(i for i, c in enumerate(f.coeffs) if c)
    c = g.coeffs[k] * f.field.inv(f.coeffs[k])
    if isinstance(c, Fraction):
        c = _canon(c)
    return c if f * c == g else None


def twist_constant(m1: WeierstrassModel, m2: WeierstrassModel):
    """Return ``w`` with ``m2 = (w^2 A1, w^3 B1)``, or None.

    A twist by a constant; ``m1`` and ``m2`` are rescale-equivalent exactly
    when some such ``w`` is a square.
    """
    if m1.M != m2.M:
        return None
    if m1.A.is_zero != m2.A.is_zero or m1.B.is_zero != m2.B.is_zero:
        return None
    fld = common_field(m1.field, m2.field)
    A1, B1, A2, B2 = (p.lift(fld) for p in (m1.A, m1.B, m2.A, m2.B))
    if A1.is_zero:
        rb = _ratio(B1, B2)
        if rb is None:
            return None
        return field_root(rb, 3, fld)
    ra = _ratio(A1, A2)
    if ra is None:
        return None
    if B1.is_zero:
        return field_root(ra, 2, fld)
    rb = _ratio(B1, B2)
    if rb is None:
        return None
    w = rb * fld.inv(ra)
    if w * w == ra and w * w * w == rb:
        return w
    return None


def rescale_factor(m1: WeierstrassModel, m2: WeierstrassModel):
    """Return ``u`` with ``m2 = rescale(m1, u)``, or None."""
    if m1.M != m2.M:
        return None
    fld = common_field(m1.field, m2.field)
    if m1.A.is_zero or m1.B.is_zero:
        if m1.A.is_zero != m2.A.is_zero or m1.B.is_zero != m2.B.is_zero:
            return None
        if m1.A.is_zero:
            r = _ratio(m1.B.lift(fld), m2.B.lift(fld))
            k = 6
        else:
            r = _ratio(m1.A.lift(fld), m2.A.lift(fld))
            k = 4
        if r is None:
            return None
        return field_root(r, k, fld)
    w = twist_constant(m1, m2)
    if w is None:
        return None
    return field_root(w, 2, fld)


def models_equivalent(m1: WeierstrassModel, m2: WeierstrassModel) -> bool:
    """True iff ``m2.A = u^4 m1.A`` and ``m2.B = u^6 m1.B`` for some ``u`` in the field."""
    return rescale_factor(m1, m2) is not None


def canonical_rescale(m: WeierstrassModel) -> tuple[WeierstrassModel, object]:
    """Rescale a model over Q to integral coefficients with no prime ``p`` such that
    ``p^4`` divides the content of A and ``p^6`` divides the content of B.

    Returns the new model and the positive rational ``u`` used.
    """
    from sympy import factorint

    if not m.field.is_rational:
        raise ValueError("canonical rescaling is defined over Q only")
    cA = abs(Fraction(m.A.content_normalize()[0])) if not m.A.is_zero else None
    cB = abs(Fraction(m.B.content_normalize()[0])) if not m.B.is_zero else None
    primes: set[int] = set()
    for c in (cA, cB):
        if c is not None:
            primes |= set(factorint(c.numerator)) | set(factorint(c.denominator))
    u = Fraction(1)
    for p in sorted(primes):
        vals = []
        if cA is not None:
            vals.append(_ceil_div(-_padic(cA, p), 4))
        if cB is not None:
            vals.append(_ceil_div(-_padic(cB, p), 6))
        u *= Fraction(p) ** max(vals)
    u = _canon(u)
    return (m if u == 1 else rescale(m, u)), u


def _padic(x: Fraction, p: int) -> int:
    v = 0
    n, d = x.numerator, x.denominator
    while n % p == 0:
        n //= p
        v += 1
    while d % p == 0:
        d //= p
        v -= 1
    return v


def _ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


# ---------------------------------------------------------------------------
# surface files


def parse_surface(text: str) -> tuple[WeierstrassModel, dict]:
    """Parse the ``key = value`` surface format.  Returns the model and any extra keys."""
    fields = _parse_keyvals(text)
    fld = parse_field(fields.pop("field", "rationals"))
    for key in ("M", "A", "B"):
        if key not in fields:
            raise ParseError(f"surface file is missing the key {key!r}", token=key)
    try:
        M = int(fields.pop("M"))
    except ValueError as exc:
        raise ParseError(f"weight M must be an integer: {exc}", token="M") from exc
    A = parse_homog(fields.pop("A"), fld)
    B = parse_homog(fields.pop("B"), fld)
    if not A.is_zero and A.degree != 4 * M:
        raise ParseError(f"A has degree {A.degree} but M = {M} needs {4 * M}", token="A")
    if not B.is_zero and B.degree != 6 * M:
        raise ParseError(f"B has degree {B.degree} but M = {M} needs {6 * M}", token="B")
    return WeierstrassModel(A, B, M), fields


def _parse_keyvals(text: str) -> dict:
    fields: dict[str, str] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ParseError(f"line {lineno}: expected 'key = value', got {raw.strip()!r}", token=raw.strip())
        key, _, value = line.partition("=")
        fields[key.strip()] = value.strip()
    return fields


def format_surface(m: WeierstrassModel, extra: dict | None = None) -> str:
    lines = [f"field = {m.field}", f"M = {m.M}", f"A = {m.A}", f"B = {m.B}"]
    for k, v in (extra or {}).items():
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def load_surface(path) -> WeierstrassModel:
    return parse_surface(Path(path).read_text())[0]


def save_surface(m: WeierstrassModel, path, extra: dict | None = None) -> None:
    Path(path).write_text(format_surface(m, extra))
