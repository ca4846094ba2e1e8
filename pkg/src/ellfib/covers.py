"""Rational self-maps of P^1 and base change of Weierstrass models along them."""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

from ellfib.errors import CatalogCorrupt, DegeneratePoints, FieldMismatch, NotStarred, OddTwistImbalance, ParseError
from ellfib.exactalg import QQ, FieldSpec, HomogPoly, hp_gcd, parse_field, parse_homog, squarefree_decompose
from ellfib.exactalg.fields import common_field
from ellfib.exactalg.homog import squarefree_part
from ellfib.fibers import classify_fibers
from ellfib.weier import (
    JInvariant,
    WeierstrassModel,
    _parse_keyvals,
    minimalize,
    quadratic_twist,
    reduce_fraction,
)


@dataclass(frozen=True)
class RationalMap:
    """The map ``(s:t) -> (N(s,t) : D(s,t))`` with coprime forms of equal degree."""

    N: HomogPoly
    D: HomogPoly

    def __post_init__(self):
        fld = common_field(self.N.field, self.D.field)
        N, D = self.N.lift(fld), self.D.lift(fld)
        d = max(N.degree, D.degree)
        if N.is_zero:
            N = HomogPoly(fld, [0], d)
        if D.is_zero:
            D = HomogPoly(fld, [0], d)
        if (not N.is_zero and N.degree != d) or (not D.is_zero and D.degree != d):
            raise ValueError("N and D must have the same degree")
        if d < 1:
            raise ValueError("a rational map needs degree at least 1")
        if not hp_gcd(N, D).is_constant:
            raise ValueError(f"N and D share the factor {hp_gcd(N, D)}")
        object.__setattr__(self, "N", N)
        object.__setattr__(self, "D", D)

    @classmethod
    def identity(cls, fld: FieldSpec = QQ) -> "RationalMap":
        return cls(HomogPoly.s(fld), HomogPoly.t(fld))

    @classmethod
    def parse(cls, N: str, D: str, fld: FieldSpec = QQ) -> "RationalMap":
        return cls(parse_homog(N, fld), parse_homog(D, fld))

    @property
    def degree(self) -> int:
        return max(self.N.degree, self.D.degree)

    def lift(self, fld: FieldSpec) -> "RationalMap":
        """The same map with coefficients viewed in the larger field ``fld``."""
        return RationalMap(self.N.lift(fld), self.D.lift(fld))

    @property
    def field(self) -> FieldSpec:
        return self.N.field if not self.N.is_zero else self.D.field

    def fiber_form(self, point) -> HomogPoly:
        """``b N - a D``: the form whose zeros are the preimages of ``(a:b)``."""
        a, b = point
        return self.N * b - self.D * a

    def wronskian(self) -> HomogPoly:
        """``N_s D_t - N_t D_s``, of degree ``2d - 2``; it vanishes exactly at ramification points."""
        return self.N.diff_s() * self.D.diff_t() - self.N.diff_t() * self.D.diff_s()

    def __call__(self, point):
        a, b = point
        return (self.N.evaluate(a, b), self.D.evaluate(a, b))

    def __str__(self):
        return f"({self.N} : {self.D})"


@dataclass(frozen=True)
class RamificationProfile:
    """Indices over one point, largest first, with the preimage clusters behind them."""

    point: tuple
    indices: tuple
    clusters: tuple = ()

    @property
    def preimages(self) -> int:
        return len(self.indices)

    @property
    def defect(self) -> int:
        """``sum(e - 1)``, the contribution to the Riemann-Hurwitz count."""
        return sum(e - 1 for e in self.indices)

    def __str__(self):
        return "(" + ",".join(map(str, self.indices)) + ")"


def ramification_profile(pi: RationalMap, point) -> RamificationProfile:
    form = pi.fiber_form(point)
    _, clusters = squarefree_decompose(form)
    indices = []
    for c in clusters:
        indices.extend([c.multiplicity] * c.factor.degree)
    return RamificationProfile(tuple(point), tuple(sorted(indices, reverse=True)), tuple(clusters))


def riemann_hurwitz_verify(pi: RationalMap, branch_points) -> bool:
    """True iff the given points carry all ``2d - 2`` ramification and nothing is ramified elsewhere."""
    d = pi.degree
    profiles = [ramification_profile(pi, p) for p in branch_points]
    if sum(p.defect for p in profiles) != 2 * d - 2:
        return False
    w = pi.wronskian()
    if w.is_zero:
        return False
    if w.is_constant:
        return True
    covered = HomogPoly.const(1, pi.field)
    for p in branch_points:
        covered = covered * pi.fiber_form(p)
    return squarefree_part(w).divides(covered)


@dataclass(frozen=True)
class PreimageCount:
    """Constraint "``points`` branch points with ``preimages`` preimages in total"."""

    points: int
    preimages: int


def hurwitz_excess(degree: int, profiles) -> tuple[int, int]:
    """Return ``(sum of d - #preimages, 2d - 2)`` for the given constraints.

    Each profile is either a multiset of indices summing to ``degree`` or a
    :class:`PreimageCount`.
    """
    total = 0
    for prof in profiles:
        if isinstance(prof, PreimageCount):
            total += prof.points * degree - prof.preimages
            continue
        prof = list(prof)
        if sum(prof) != degree or any(e < 1 for e in prof):
            raise ValueError(f"profile {prof} does not partition {degree}")
        total += degree - len(prof)
    return total, 2 * degree - 2


def hurwitz_feasible(degree: int, profiles) -> bool:
    """Necessary condition for a degree-``d`` cover of P^1 with these profiles to exist."""
    total, bound = hurwitz_excess(degree, profiles)
    return total <= bound


def compose(outer: RationalMap, inner: RationalMap) -> RationalMap:
    """``outer`` after ``inner``: ``outer(inner(x))``."""
    N = outer.N.substitute(inner.N, inner.D)
    D = outer.D.substitute(inner.N, inner.D)
    return RationalMap(N, D)


def mobius_from_three_points(p, q, r, fld: FieldSpec | None = None) -> RationalMap:
    """Degree-one substitution taking ``0, 1, oo`` to ``p, q, r``.

    Substituting it into a model moves the fibers over ``p``, ``q``, ``r``
    to ``0``, ``1``, ``oo``.  Points are pairs ``(a, b)`` standing for ``(a:b)``.
    """
    if fld is None:
        fld = QQ
        for pt in (p, q, r):
            for x in pt:
                fld = common_field(fld, getattr(x, "field", QQ))
    (p0, p1), (q0, q1), (r0, r1) = p, q, r
    det = r0 * p1 - p0 * r1
    if not det or not (q0 * p1 - p0 * q1) or not (r0 * q1 - q0 * r1):
        raise DegeneratePoints("the three points must be pairwise distinct")
    inv = fld.inv(det)
    lam = (q0 * p1 - p0 * q1) * inv
    mu = (r0 * q1 - q0 * r1) * inv
    N = HomogPoly(fld, [mu * p0, lam * r0], 1)
    D = HomogPoly(fld, [mu * p1, lam * r1], 1)
    return RationalMap(N, D)


def pullback_raw(m: WeierstrassModel, pi: RationalMap) -> WeierstrassModel:
    """Substitute ``pi`` into ``A`` and ``B`` without minimalizing."""
    if not pi.field.contains(m.field):
        raise FieldMismatch(f"cannot pull back a model over {m.field} along a map over {pi.field}")
    A = m.A.substitute(pi.N, pi.D) if not m.A.is_zero else m.A.lift(pi.field)
    B = m.B.substitute(pi.N, pi.D) if not m.B.is_zero else m.B.lift(pi.field)
    return WeierstrassModel(A, B, m.M * pi.degree)


def pullback(m: WeierstrassModel, pi: RationalMap) -> WeierstrassModel:
    """Base change along ``pi``, followed by minimalization."""
    return minimalize(pullback_raw(m, pi))[0]


def starred_places(m: WeierstrassModel) -> HomogPoly:
    """Product of the places carrying non-reduced fibers."""
    out = HomogPoly.const(1, m.field)
    for c in classify_fibers(m):
        if c.ktype.is_starred:
            out = out * c.place
    return out


def deflate(m: WeierstrassModel) -> WeierstrassModel:
    """Twist away every non-reduced fiber at once."""
    alpha = starred_places(m)
    if alpha.degree % 2:
        raise OddTwistImbalance("an odd number of starred places cannot be deflated together")
    if alpha.is_constant:
        return m
    return quadratic_twist(m, alpha)


def transfer_star(m: WeierstrassModel, from_place: HomogPoly, to_place: HomogPoly) -> WeierstrassModel:
    """Move the star from ``from_place`` to ``to_place`` by twisting with their product."""
    starred = starred_places(m)
    if from_place.is_constant or not from_place.divides(starred):
        raise NotStarred(f"{from_place} does not carry a non-reduced fiber")
    if not hp_gcd(from_place, to_place).is_constant:
        raise ValueError("transfer needs coprime places")
    return quadratic_twist(m, from_place * to_place)


def compose_j(j: JInvariant, pi: RationalMap) -> JInvariant:
    """The rational function ``j(pi)`` in lowest terms."""
    if j.numerator.is_zero:
        return reduce_fraction(HomogPoly.zero(pi.field), HomogPoly.const(1, pi.field))
    return reduce_fraction(j.numerator.substitute(pi.N, pi.D), j.denominator.substitute(pi.N, pi.D))


# ---------------------------------------------------------------------------
# map files


def parse_map(text: str) -> tuple[RationalMap, dict]:
    """Parse the ``key = value`` map format; ``identity_check`` must equal ``N - D``."""
    fields = _parse_keyvals(text)
    fld = parse_field(fields.pop("field", "rationals"))
    for key in ("N", "D"):
        if key not in fields:
            raise ParseError(f"map file is missing the key {key!r}", token=key)
    pi = RationalMap(parse_homog(fields.pop("N"), fld), parse_homog(fields.pop("D"), fld))
    if "degree" in fields:
        deg = int(fields.pop("degree"))
        if deg != pi.degree:
            raise ParseError(f"declared degree {deg} but the map has degree {pi.degree}", token="degree")
    if "identity_check" in fields:
        check = parse_homog(fields.pop("identity_check"), fld)
        verify_identity(pi, check)
    return pi, fields


def verify_identity(pi: RationalMap, check: HomogPoly) -> None:
    if pi.N - pi.D != check:
        raise CatalogCorrupt(f"identity check failed: N - D = {pi.N - pi.D}, expected {check}")


def format_map(pi: RationalMap, extra: dict | None = None) -> str:
    lines = [f"field = {pi.field}", f"degree = {pi.degree}", f"N = {pi.N}", f"D = {pi.D}"]
    for k, v in (extra or {}).items():
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


def load_map(path) -> RationalMap:
    return parse_map(Path(path).read_text())[0]
