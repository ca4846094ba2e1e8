"""Text grammar for polynomials.

Expressions use the variables ``s`` and ``t`` (plus the extension generator
``a`` when the field has one), integer literals, ``+ - * / ^`` and
parentheses.  Juxtaposition multiplies, so ``27s^4(125t^2-90st)`` reads the
way formulas are usually typeset.  Division is only allowed by constants,
which covers ``p/q`` literals and coefficients such as ``t/(5a+2)``.
Whitespace is insignificant.
"""

from __future__ import annotations

import re
from fractions import Fraction

from ellfib.errors import NonHomogeneousError, ParseError
from ellfib.exactalg.fields import QQ, FieldSpec, _canon
from ellfib.exactalg.homog import HomogPoly

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z])|(\*\*|[-+*/^()]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    text = text.strip()
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if not m or m.end() == pos:
            raise ParseError(f"unexpected character {text[pos]!r} at position {pos}", token=text[pos], position=pos)
        num, name, op = m.groups()
        start = m.start(m.lastindex)
        if num is not None:
            tokens.append(("num", int(num), start))
        elif name is not None:
            tokens.append(("var", name, start))
        else:
            tokens.append(("op", "^" if op == "**" else op, start))
        pos = m.end()
        while pos < len(text) and text[pos].isspace():
            pos += 1
    return tokens


class _Parser:
    """Recursive descent over sparse polynomials ``{exponents: coeff}``."""

    def __init__(self, text: str, variables: tuple[str, ...], fld: FieldSpec, generator: str | None):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0
        self.vars = variables
        self.fld = fld
        self.generator = generator
        self.nvars = len(variables)

    # -- sparse polynomial helpers -------------------------------------
    def _const(self, c):
        c = self.fld(c) if not self.fld.is_rational else _canon(Fraction(c))
        return {(0,) * self.nvars: c} if c else {}

    def _add(self, p, q, sign=1):
        r = dict(p)
        for k, v in q.items():
            nv = r.get(k, 0) + (v if sign > 0 else -v)
            if nv:
                r[k] = nv
            else:
                r.pop(k, None)
        return r

    def _mul(self, p, q):
        r = {}
        for k1, v1 in p.items():
            for k2, v2 in q.items():
                k = tuple(a + b for a, b in zip(k1, k2))
                nv = r.get(k, 0) + v1 * v2
                if nv:
                    r[k] = nv
                else:
                    r.pop(k, None)
        return r

    # -- token access ----------------------------------------------------
    def peek(self):
        return self.tokens[self.i] if self.i < len(self.tokens) else None

    def take(self):
        tok = self.peek()
        if tok is None:
            raise ParseError(f"unexpected end of input in {self.text!r}", token="<end>", position=len(self.text))
        self.i += 1
        return tok

    def error(self, tok, msg):
        raise ParseError(f"{msg}: {tok[1]!r} at position {tok[2]} in {self.text!r}", token=str(tok[1]), position=tok[2])

    # -- grammar ---------------------------------------------------------
    def parse(self):
        if not self.tokens:
            raise ParseError("empty expression", token="<end>", position=0)
        p = self.expr()
        tok = self.peek()
        if tok is not None:
            self.error(tok, "unexpected token")
        return p

    def expr(self):
        p = self.term()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "+-":
                self.take()
                p = self._add(p, self.term(), 1 if tok[1] == "+" else -1)
            else:
                return p

    def _starts_atom(self, tok):
        return tok is not None and (tok[0] in ("num", "var") or tok[1] == "(")

    def term(self):
        p = self.unary()
        while True:
            tok = self.peek()
            if tok and tok[0] == "op" and tok[1] in "*/":
                self.take()
                q = self.unary()
                if tok[1] == "*":
                    p = self._mul(p, q)
                else:
                    p = self._divide(p, q, tok)
            elif self._starts_atom(tok):
                p = self._mul(p, self.power())
            else:
                return p

    def _divide(self, p, q, tok):
        zero_key = (0,) * self.nvars
        if not q:
            self.error(tok, "division by zero")
        if set(q) != {zero_key}:
            self.error(tok, "division by a non-constant expression")
        inv = self.fld.inv(q[zero_key])
        return {k: v * inv for k, v in p.items()}

    def unary(self):
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] in "+-":
            self.take()
            p = self.unary()
            return p if tok[1] == "+" else {k: -v for k, v in p.items()}
        return self.power()

    def power(self):
        base = self.atom()
        tok = self.peek()
        if tok and tok[0] == "op" and tok[1] == "^":
            self.take()
            exp_tok = self.take()
            if exp_tok[0] != "num":
                self.error(exp_tok, "exponent must be a non-negative integer literal")
            result = self._const(1)
            for _ in range(exp_tok[1]):
                result = self._mul(result, base)
            return result
        return base

    def atom(self):
        tok = self.take()
        kind, val, _ = tok
        if kind == "num":
            return self._const(val)
        if kind == "var":
            if val in self.vars:
                exps = tuple(1 if v == val else 0 for v in self.vars)
                return {exps: self.fld(1) if not self.fld.is_rational else 1}
            if self.generator is not None and val == self.generator:
                if self.fld.is_rational:
                    self.error(tok, "extension generator used over the rationals")
                return {(0,) * self.nvars: self.fld.gen}
            self.error(tok, "unknown variable")
        if val == "(":
            p = self.expr()
            close = self.take()
            if close[1] != ")":
                self.error(close, "expected ')'")
            return p
        self.error(tok, "unexpected token")


def parse_sparse(text: str, variables=("s", "t"), fld: FieldSpec = QQ, generator: str | None = "a"):
    return _Parser(text, tuple(variables), fld, generator).parse()


def parse_homog(text: str, fld: FieldSpec = QQ, degree: int | None = None) -> HomogPoly:
    """Parse a homogeneous form in ``s, t``; non-homogeneous input is rejected."""
    terms = parse_sparse(text, ("s", "t"), fld)
    if not terms:
        return HomogPoly.zero(fld)
    degrees = {}
    for (i, j) in terms:
        degrees.setdefault(i + j, []).append((i, j))
    if len(degrees) > 1:
        main = max(degrees, key=lambda d: (len(degrees[d]), d))
        bad = [_mono(i, j) for d, ms in sorted(degrees.items()) if d != main for (i, j) in ms]
        raise NonHomogeneousError(
            f"expression {text!r} is not homogeneous; monomials off degree {main}: {', '.join(bad)}",
            monomials=bad,
        )
    (d,) = degrees
    if degree is not None and d != degree:
        raise ParseError(f"expected a form of degree {degree}, got degree {d} in {text!r}")
    coeffs = [0] * (d + 1)
    for (i, _j), c in terms.items():
        coeffs[i] = c
    return HomogPoly(fld, coeffs, d)


def _mono(i, j):
    parts = []
    if i:
        parts.append("s" if i == 1 else f"s^{i}")
    if j:
        parts.append("t" if j == 1 else f"t^{j}")
    return "*".join(parts) or "1"


def parse_univariate(text: str, var: str = "x") -> list:
    """Rational univariate polynomial as a coefficient list (constant term first)."""
    terms = parse_sparse(text, (var,), QQ, generator=None)
    if not terms:
        return []
    n = max(k[0] for k in terms)
    out = [0] * (n + 1)
    for (k,), c in terms.items():
        out[k] = c
    return out


def parse_field_element(text: str, fld: FieldSpec = QQ):
    terms = parse_sparse(text, (), fld)
    if not terms:
        return fld(0)
    return terms[()]


def parse_point(text: str, fld: FieldSpec = QQ):
    """Parse a point of the projective line: ``inf``, ``a:b`` or a field element."""
    raw = text.strip()
    if raw.startswith("(") and raw.endswith(")") and ":" in raw:
        raw = raw[1:-1]
    if raw.lower() in ("inf", "infinity", "oo", "∞"):
        return (fld(1), fld(0))
    if ":" in raw:
        a, b = raw.split(":", 1)
        pt = (parse_field_element(a, fld), parse_field_element(b, fld))
    else:
        pt = (parse_field_element(raw, fld), fld(1))
    if not pt[0] and not pt[1]:
        raise ParseError(f"(0:0) is not a point: {text!r}", token=text)
    return pt


def parse_field(text: str) -> FieldSpec:
    """``rationals`` or ``extension: <polynomial in x>``."""
    raw = text.strip()
    if raw in ("rationals", "Q", "QQ"):
        return QQ
    if raw.startswith("extension"):
        _, _, poly = raw.partition(":")
        coeffs = parse_univariate(poly.strip(), "x")
        if len(coeffs) < 3:
            raise ParseError(f"extension modulus must have degree >= 2: {poly.strip()!r}", token=poly.strip())
        return FieldSpec.extension(coeffs)
    raise ParseError(f"unknown field specification {raw!r}", token=raw)
