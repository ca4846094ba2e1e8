from __future__ import annotations

import pytest
import sympy as sp
from hypothesis import given, settings
from hypothesis import strategies as st

from ellfib.covers import RationalMap, pullback
from ellfib.errors import InconsistentOrders, NotMinimal, ParseError
from ellfib.exactalg import parse_homog
from ellfib.fibers import (
    Configuration,
    KodairaType,
    check_semistable_extremal_necessary,
    classify_fibers,
    classify_orders,
    configuration,
    parse_type,
    predict_pullback_type,
)
from ellfib.weier import WeierstrassModel, discriminant, euler_number, quadratic_twist
from oracle import s, t, to_sympy

P = parse_homog


def model(A, B, M=1):
    return WeierstrassModel(P(A), P(B), M)


SURFACES = {
    "[1,1,4*]": model("-3t^2(s^2-3t^2)", "s t^3(2s^2-9t^2)"),
    "[1,4,1*]": model("-3(s-2t)^2(s^2-3t^2)", "s(s-2t)^3(2s^2-9t^2)"),
    "[2,2,2*]": model("-3st(s-t)^2", "(s-t)^3(s^3+t^3)"),
    "[1,3,IV*]": model("-3(s-t)^3(s-9t)", "-2(s-t)^4(s^2+18st-27t^2)"),
    "[1,2,III*]": model("-3(s-t)^3(s-4t)", "-2(s-t)^5(s+8t)"),
}

ALL_TYPES = [KodairaType.I(n) for n in range(0, 5)] + [KodairaType.Istar(n) for n in range(0, 4)] + [
    KodairaType(f) for f in ("II", "III", "IV", "IV*", "III*", "II*")
]


def _order(expr, place):
    """Vanishing order along an irreducible place, computed with sympy."""
    if sp.expand(expr) == 0:
        return 10**6
    k = 0
    while True:
        q, r = sp.div(sp.Poly(expr, s, t), sp.Poly(place, s, t))
        if not r.is_zero:
            return k
        expr, k = q.as_expr(), k + 1


def _table_type(vA, vB, vD):
    """Kodaira's table, written out independently of the package."""
    if vD == 0:
        return "I0"
    if vA == 0 or vB == 0 and vA == 0:
        return f"I{vD}"
    if vA >= 2 and vB >= 3 and vD >= 6 and (vA == 2 or vB == 3 or vD == 6):
        return f"I{vD - 6}*"
    return {2: "II", 3: "III", 4: "IV", 8: "IV*", 9: "III*", 10: "II*"}[vD]


def _oracle_configuration(m):
    A, B = to_sympy(m.A), to_sympy(m.B)
    delta = sp.expand(-16 * (4 * A**3 + 27 * B**2))
    _, factors = sp.factor_list(delta, s, t)
    names = []
    for g, vD in factors:
        if sp.Poly(g, s, t).total_degree() == 0:
            continue
        name = _table_type(_order(A, g), _order(B, g), vD)
        names += [name] * sp.Poly(g, s, t).total_degree()
    return sorted(names)


@pytest.mark.parametrize("expected", sorted(SURFACES))
def test_classification_matches_sympy_table(expected):
    m = SURFACES[expected]
    conf = configuration(m)
    assert conf == expected
    assert sorted(k.name for k in conf) == _oracle_configuration(m)
    assert conf.euler == euler_number(m) == 12


def test_cluster_orders_and_json():
    clusters = classify_fibers(SURFACES["[1,1,4*]"])
    star = [c for c in clusters if c.ktype.is_starred][0]
    assert str(star.place) == "t"
    assert (star.vA, star.vB, star.vDelta) == (2, 3, 10)
    assert star.to_dict()["type"] == "I4*"


def test_classify_needs_minimal_model():
    m = SURFACES["[2,2,2*]"]
    raw = WeierstrassModel(m.A * P("s") ** 4, m.B * P("s") ** 6, 2)
    with pytest.raises(NotMinimal):
        classify_fibers(raw)


def test_kodaira_table_and_inconsistent_orders():
    assert classify_orders(0, 0, 5) == KodairaType.I(5)
    assert classify_orders(1, 2, 3) == KodairaType("III")
    assert classify_orders(2, 3, 9) == KodairaType.Istar(3)
    assert classify_orders(4, 5, 10) == KodairaType("II*")
    with pytest.raises(InconsistentOrders):
        classify_orders(1, 1, 5)


@pytest.mark.parametrize("k", ALL_TYPES, ids=str)
def test_toggle_is_involution_and_shifts_euler_by_six(k):
    assert k.toggled().toggled() == k
    assert abs(k.euler - k.toggled().euler) == 6


@pytest.mark.parametrize("k", ALL_TYPES, ids=str)
def test_label_round_trip(k):
    assert parse_type(k.label) == k
    assert parse_type(k.name) == k


def test_configuration_parse_is_order_free():
    assert Configuration.parse("[IV*,3,1]") == Configuration.parse("[1,3,IV*]")
    assert str(Configuration.parse("[3*, 1, 2]")) == "[1,2,3*]"
    assert Configuration.parse("[1,1,4*]").euler == 12
    with pytest.raises(ParseError):
        Configuration.parse("[1,,2]")
    with pytest.raises(ParseError):
        Configuration.parse("[V]")


def _realize_at_t(k):
    """A weight-1 model whose fiber over t = 0 has type ``k``."""
    if k.family in ("I", "I*"):
        # A = -3f^2, B = 2f^3 + t^n g with f = s^2, g = s^(6-n): Delta has order n at t.
        n = k.n
        m = WeierstrassModel(P("-3 s^4"), P(f"2 s^6 + s^{6 - n} t^{n}"), 1)
        return quadratic_twist(m, P("t (s + t)")) if k.family == "I*" else m
    vA, vB, _ = k.triple()
    return WeierstrassModel(P(f"t^{vA} s^{4 - vA}"), P(f"t^{vB} s^{6 - vB}"), 1)


def _type_at_t(m):
    return [c.ktype for c in classify_fibers(m) if c.place == P("t")] or [KodairaType.I(0)]


@pytest.mark.parametrize("k", [x for x in ALL_TYPES if x.n <= 3 and not x.is_smooth], ids=str)
@pytest.mark.parametrize("e", [1, 2, 3, 4, 6])
def test_predicted_type_matches_actual_pullback(k, e):
    m = _realize_at_t(k)
    assert _type_at_t(m) == [k]
    predicted, starred = predict_pullback_type(k, e)
    out = pullback(m, RationalMap(P(f"s^{e}"), P(f"t^{e}")))
    assert _type_at_t(out) == [predicted]
    assert starred == predicted.is_starred


@given(st.sampled_from(sorted(SURFACES)), st.sampled_from(["s^2 - 5t^2", "s t", "(s - 7t)(s + 11t)"]))
@settings(max_examples=15, deadline=None)
def test_twist_toggles_exactly_the_twisted_places(name, alpha):
    m = SURFACES[name]
    tw = quadratic_twist(m, P(alpha))
    before = {str(c.place): c.ktype for c in classify_fibers(m)}
    twisted = P(alpha)
    for c in classify_fibers(tw):
        if c.place.divides(twisted):
            assert before.get(str(c.place), KodairaType.I(0)).toggled() == c.ktype
        else:
            assert before[str(c.place)] == c.ktype
    assert sum(k.euler for k in configuration(tw)) == discriminant(tw).degree


def test_semistable_extremal_necessary_condition():
    assert not check_semistable_extremal_necessary(SURFACES["[1,1,4*]"])
