"""Dense univariate polynomial kernels.

A polynomial is a list of coefficients, constant term first, with no
trailing zeros (the zero polynomial is ``[]``).  Coefficients may be ints,
Fractions or :class:`~ellfib.exactalg.fields.FieldElem`; the caller passes the
field's inversion function where division is needed.
"""

from __future__ import annotations

from fractions import Fraction


def trim(p):
    n = len(p)
    while n and not p[n - 1]:
        n -= 1
    return p[:n] if n != len(p) else p


def add(p, q):
    if len(p) < len(q):
        p, q = q, p
    r = list(p)
    for i, c in enumerate(q):
        r[i] = r[i] + c
    return trim(r)


def sub(p, q):
    r = list(p) + [0] * (len(q) - len(p))
    for i, c in enumerate(q):
        r[i] = r[i] - c
    return trim(r)


def neg(p):
    return [-c for c in p]


def scale(p, c):
    if not c:
        return []
    return [c * x for x in p]


def mul(p, q):
    if not p or not q:
        return []
    r = [0] * (len(p) + len(q) - 1)
    for i, a in enumerate(p):
        if not a:
            continue
        for j, b in enumerate(q):
            r[i + j] += a * b
    return trim(r)


def derivative(p):
    return trim([i * p[i] for i in range(1, len(p))])


def divmod_(p, q, inv):
    """Long division ``p = quo * q + rem`` with ``deg rem < deg q``."""
    if not q:
        raise ZeroDivisionError("polynomial division by zero")
    rem = list(p)
    dq = len(q) - 1
    if len(rem) <= dq:
        return [], trim(rem)
    lead_inv = inv(q[-1])
    quo = [0] * (len(rem) - dq)
    for k in range(len(rem) - 1, dq - 1, -1):
        c = rem[k]
        if not c:
            continue
        c = c * lead_inv
        quo[k - dq] = c
        for i in range(dq + 1):
            rem[k - dq + i] -= c * q[i]
    return trim(quo), trim(rem[:dq])


def monic(p, inv):
    if not p:
        return p
    lc = p[-1]
    if lc == 1:
        return list(p)
    li = inv(lc)
    return [c * li for c in p[:-1]] + [1]


def gcd(p, q, inv):
    """Monic gcd by the Euclidean algorithm (``[]`` when both are zero)."""
    p, q = trim(list(p)), trim(list(q))
    while q:
        _, r = divmod_(p, q, inv)
        p, q = q, monic(r, inv) if r else r
    return monic(p, inv)


def xgcd(p, q, inv):
    """Return ``(g, u, v)`` with ``u*p + v*q = g`` and ``g`` monic."""
    r0, r1 = trim(list(p)), trim(list(q))
    u0, u1 = [1], []
    v0, v1 = [], [1]
    while r1:
        quo, rem = divmod_(r0, r1, inv)
        r0, r1 = r1, rem
        u0, u1 = u1, sub(u0, mul(quo, u1))
        v0, v1 = v1, sub(v0, mul(quo, v1))
    if not r0:
        return [], [], []
    li = inv(r0[-1])
    return monic(r0, inv), scale(u0, li), scale(v0, li)


def is_constant(p):
    return len(p) <= 1


def power(p, e):
    result = [1]
    base = p
    while e:
        if e & 1:
            result = mul(result, base)
        e >>= 1
        if e:
            base = mul(base, base)
    return result


def squarefree_parts(p, inv):
    """Yun's algorithm: list of ``(factor, multiplicity)`` with monic factors.

    The unit (leading coefficient of ``p``) is not included.
    """
    p = trim(list(p))
    if len(p) <= 1:
        return []
    dp = derivative(p)
    a0 = gcd(p, dp, inv)
    b, _ = divmod_(p, a0, inv)
    c, _ = divmod_(dp, a0, inv)
    d = sub(c, derivative(b))
    out = []
    i = 1
    while len(b) > 1:
        a = gcd(b, d, inv)
        if len(a) > 1:
            out.append((monic(a, inv), i))
        b, _ = divmod_(b, a, inv)
        c, _ = divmod_(d, a, inv)
        d = sub(c, derivative(b))
        i += 1
    return out


def rational_inv(x):
    return 1 / Fraction(x)
