"""Run catalog entries through the pipeline and collect a report.

For one entry the pipeline is: lift the base surface to the entry field,
pull back along the composed substitutions, minimalize, apply the twist and
the transfer of ``*``, classify.  The entry passes when the configuration is
the expected one and, if a printed equation is stored, the computed model
is rescale-equivalent to it after the stored change of coordinates.

The deep checks redo the configuration without touching the pulled-back
model: each base fiber is carried through the ramification over its place
with :func:`predict_pullback_type`, and the same twists are applied as
toggles.  They also test that the j-invariant is the base one composed with
the map.
"""

from __future__ import annotations

import json
import time
from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass

from ellfib.catalog.loader import ALL_STARRED, Catalog, CatalogEntry, _id_key, load_catalog
from ellfib.covers import (
    RationalMap,
    compose,
    compose_j,
    mobius_from_three_points,
    pullback,
    starred_places,
)
from ellfib.errors import EllfibError, FieldMismatch, NotStarred
from ellfib.exactalg import FieldSpec, HomogPoly, hp_gcd, parse_homog, squarefree_decompose
from ellfib.fibers import Configuration, KodairaType, classify_fibers, configuration, predict_pullback_type
from ellfib.weier import WeierstrassModel, j_invariant, minimalize, models_equivalent, quadratic_twist

PASS = "PASS"
CONFIG_MISMATCH = "CONFIG_MISMATCH"
EQUATION_MISMATCH = "EQUATION_MISMATCH"
SKIPPED = "SKIPPED"


@dataclass(frozen=True)
class ReportRow:
    id: str
    section: str
    field: str
    status: str
    expected: str = ""
    computed: str = ""
    euler: int | None = None
    cusps: int | None = None
    equation: str = "-"
    errata: tuple = ()
    prediction: bool | None = None
    j_law: bool | None = None
    detail: str = ""
    seconds: float = 0.0

    @property
    def is_failure(self) -> bool:
        return not (self.status == PASS or self.status.startswith(SKIPPED))

    def to_dict(self, timing: bool = True) -> dict:
        d = asdict(self)
        d["errata"] = list(self.errata)
        if not timing:
            d.pop("seconds")
        return d


@dataclass(frozen=True)
class Construction:
    """Everything the pipeline produced for one entry."""

    base: WeierstrassModel
    map: RationalMap | None
    steps: tuple  # ("twist", alpha) / ("transfer", from, to) with the raw recipe strings
    model: WeierstrassModel


class VerificationReport:
    def __init__(self, rows):
        self.rows = sorted(rows, key=lambda r: _id_key(r.id))

    def __iter__(self):
        return iter(self.rows)

    def __len__(self):
        return len(self.rows)

    def row(self, entry_id: str) -> ReportRow:
        for r in self.rows:
            if r.id == entry_id:
                return r
        raise KeyError(entry_id)

    @property
    def counts(self) -> Counter:
        return Counter(r.status for r in self.rows)

    @property
    def failures(self) -> list[ReportRow]:
        return [r for r in self.rows if r.is_failure]

    @property
    def exit_code(self) -> int:
        return 1 if self.failures else 0

    def passed(self, section: str | None = None, rational: bool | None = None) -> list[ReportRow]:
        out = [r for r in self.rows if r.status == PASS]
        if section is not None:
            out = [r for r in out if r.section == section]
        if rational is not None:
            out = [r for r in out if (r.field == "rationals") == rational]
        return out

    def summary(self) -> str:
        skipped = Counter(r.status for r in self.rows if r.status.startswith(SKIPPED))
        parts = [f"PASS {self.counts[PASS]}"]
        if skipped:
            inner = ", ".join(f"{k[len(SKIPPED) + 1:-1]} {v}" for k, v in sorted(skipped.items()))
            parts.append(f"SKIPPED {sum(skipped.values())} ({inner})")
        parts.append(f"FAIL {len(self.failures)}")
        return ", ".join(parts)

    def to_table(self, timing: bool = True) -> str:
        head = ["id", "section", "status", "computed", "expected", "e", "equation"]
        body = []
        for r in self.rows:
            eq = r.equation + (" [erratum recomputed]" if r.errata else "")
            line = [r.id, r.section, r.status, r.computed, r.expected,
                    "" if r.euler is None else str(r.euler), eq]
            if timing:
                line.append(f"{r.seconds:.2f}s")
            if r.detail and r.is_failure:
                line.append(r.detail)
            body.append(line)
        widths = [max(len(x) for x in col) for col in zip(head, *[b[:len(head)] for b in body])] if body else []
        out = ["  ".join(h.ljust(w) for h, w in zip(head, widths))]
        for b in body:
            cells = [c.ljust(w) for c, w in zip(b, widths)] + b[len(head):]
            out.append("  ".join(cells).rstrip())
        missing = [r.id for r in self.rows if r.status == f"{SKIPPED}(missing-base-surface)"]
        if missing:
            out.append("missing base surfaces: " + ", ".join(missing))
        out.append(self.summary())
        return "\n".join(out)

    def to_jsonl(self, timing: bool = True) -> str:
        return "\n".join(json.dumps(r.to_dict(timing), sort_keys=True) for r in self.rows)


# ---------------------------------------------------------------------------
# resolving references


def resolve_map(cat: Catalog, ref: str, fld: FieldSpec) -> RationalMap:
    """A map id from the catalog, or an inline ``(N : D)``."""
    ref = ref.strip()
    if ref.startswith("("):
        if not ref.endswith(")") or ":" not in ref:
            raise EllfibError(f"inline map must read '(N : D)', got {ref!r}")
        N, _, D = ref[1:-1].partition(":")
        return RationalMap(parse_homog(N, fld), parse_homog(D, fld))
    if ref not in cat.maps:
        raise EllfibError(f"unknown map id {ref!r}")
    pi = cat.maps[ref].map
    if not fld.contains(pi.field):
        raise FieldMismatch(f"map {ref} is defined over {pi.field}, not inside {fld}")
    return pi.lift(fld)


def composed_map(cat: Catalog, e: CatalogEntry, fld: FieldSpec) -> RationalMap | None:
    refs = list(e.pre) + ([e.map] if e.map else [])
    if not refs:
        return None
    total = resolve_map(cat, refs[0], fld)
    for ref in refs[1:]:
        total = compose(total, resolve_map(cat, ref, fld))
    return total


def _steps(e: CatalogEntry) -> tuple:
    out = []
    if e.twist:
        out.append(("twist", e.twist))
    if e.transfer:
        out.append(("transfer", *e.transfer))
    return tuple(out)


def _form(text: str, fld: FieldSpec) -> HomogPoly:
    return parse_homog(text, fld)


def apply_steps(m: WeierstrassModel, steps, fld: FieldSpec) -> WeierstrassModel:
    """Apply twist and transfer steps in order to a minimal model."""
    for step in steps:
        if step[0] == "twist":
            alpha = starred_places(m) if step[1] == ALL_STARRED else _form(step[1], fld)
            if not alpha.is_constant:
                m = quadratic_twist(m, alpha)
        else:
            _, src, dst = step
            to_place = _form(dst, fld)
            if src == ALL_STARRED:
                from_place = starred_places(m)
                if from_place.is_constant:
                    raise NotStarred("no non-reduced fiber to transfer")
            else:
                from_place = _form(src, fld)
                if not from_place.divides(starred_places(m)):
                    raise NotStarred(f"{from_place} does not carry a non-reduced fiber")
            if not hp_gcd(from_place, to_place).is_constant:
                raise EllfibError("transfer needs coprime places")
            m = quadratic_twist(m, from_place * to_place)
    return m


def build(cat: Catalog, e: CatalogEntry) -> Construction:
    """Run the entry's recipe and return the resulting minimal model."""
    fld = e.fieldspec
    base = cat.surfaces[e.base].model
    if not fld.contains(base.field):
        raise FieldMismatch(f"base {e.base} is defined over {base.field}, not inside {fld}")
    base = base.lift(fld)
    pi = composed_map(cat, e, fld)
    model = pullback(base, pi) if pi is not None else minimalize(base)[0]
    steps = _steps(e)
    model = apply_steps(model, steps, fld)
    return Construction(base, pi, steps, model)


# ---------------------------------------------------------------------------
# prediction


def predict_clusters(base: WeierstrassModel, pi: RationalMap | None, steps, fld: FieldSpec):
    """Predicted ``(place, type)`` pairs after base change and twists.

    Works from the base fibers and the ramification of ``pi`` alone.
    """
    base = minimalize(base)[0]
    pairs = []
    for c in classify_fibers(base):
        if pi is None:
            pairs.append((c.place, c.ktype))
            continue
        _, parts = squarefree_decompose(c.place.substitute(pi.N, pi.D))
        for part in parts:
            kt, _ = predict_pullback_type(c.ktype, part.multiplicity)
            pairs.append((part.factor, kt))
    for step in steps:
        starred = _product([p for p, k in pairs if k.is_starred], fld)
        if step[0] == "twist":
            alpha = starred if step[1] == ALL_STARRED else _form(step[1], fld)
        else:
            src = starred if step[1] == ALL_STARRED else _form(step[1], fld)
            alpha = src * _form(step[2], fld)
        pairs = _toggle(pairs, alpha, fld)
    return [(p, k) for p, k in pairs if not k.is_smooth]


def _product(forms, fld):
    out = HomogPoly.const(1, fld)
    for f in forms:
        out = out * f
    return out


def _toggle(pairs, alpha: HomogPoly, fld):
    """Twist the predicted fibers by the squarefree form ``alpha``."""
    if alpha.is_constant:
        return pairs
    rest = alpha
    out = []
    for place, kt in pairs:
        g = hp_gcd(place, rest)
        if g.is_constant:
            out.append((place, kt))
            continue
        out.append((g, kt.toggled()))
        other = place.divexact(g)
        if not other.is_constant:
            out.append((other, kt))
        rest = rest.divexact(g)
    if not rest.is_constant:
        out.append((rest, KodairaType.Istar(0)))
    return out


def predicted_configuration(base, pi, steps, fld) -> Configuration:
    types = []
    for place, kt in predict_clusters(base, pi, steps, fld):
        types.extend([kt] * place.degree)
    return Configuration(types)


def j_law_holds(c: Construction) -> bool:
    """``j(model) = j(base) o pi`` as reduced rational functions."""
    jb = j_invariant(minimalize(c.base)[0])
    want = compose_j(jb, c.map) if c.map is not None else jb
    return j_invariant(c.model) == want


# ---------------------------------------------------------------------------
# printed equations


def printed_check(cat: Catalog, e: CatalogEntry, model: WeierstrassModel) -> tuple[bool, str]:
    """Compare with the printed equation after the stored coordinates and constant twist."""
    fld = e.fieldspec
    printed = cat.surfaces[e.printed].model.lift(fld)
    target = model
    how = []
    if e.printed_coords:
        target = pullback(target, resolve_map(cat, e.printed_coords, fld))
        how.append(f"coordinates {e.printed_coords}")
    if e.printed_twist:
        d = _form(e.printed_twist, fld)
        if not d.is_constant or d.is_zero:
            raise EllfibError("printed_twist must be a nonzero constant")
        target = quadratic_twist(target, d)
        how.append(f"constant twist {e.printed_twist}")
    ok = models_equivalent(target, printed)
    if not ok:
        return False, "mismatch"
    return True, "equivalent" + (" after " + ", ".join(how) if how else "")


def _errata(cat: Catalog, e: CatalogEntry) -> tuple:
    found = []
    if e.erratum:
        found.append(f"entry:{e.id}")
    for sid in (e.base, e.printed):
        if sid and sid in cat.surfaces and cat.surfaces[sid].meta.get("erratum"):
            found.append(f"surface:{sid}")
    for ref in list(e.pre) + ([e.map] if e.map else []):
        if ref in cat.maps and cat.maps[ref].meta.get("erratum"):
            found.append(f"map:{ref}")
    return tuple(found)


# ---------------------------------------------------------------------------
# search recipes


def search_double_cover(cat: Catalog, e: CatalogEntry) -> Construction:
    """Double covers branched at a type III cusp and one more rational cusp.

    Used for entries whose base surface has to be supplied by the user.  Each
    choice of second branch cusp and each target for the transfer of ``*`` is
    tried; the first construction with the expected configuration wins.
    """
    fld = e.fieldspec
    base = cat.surfaces[e.base].model.lift(fld)
    base = minimalize(base)[0]
    clusters = classify_fibers(base)
    linear = [c for c in clusters if c.place.degree == 1]
    threes = [c for c in linear if c.ktype.name == "III"]
    expected = e.expected
    square = RationalMap(HomogPoly.s(fld) ** 2, HomogPoly.t(fld) ** 2)
    last = None
    for c3 in threes:
        for other in linear:
            if other is c3:
                continue
            p, r = _point(other.place), _point(c3.place)
            q = next(pt for pt in ((1, 1), (1, 2), (2, 1), (1, -1), (1, 3))
                     if _distinct(pt, p) and _distinct(pt, r))
            pi = compose(mobius_from_three_points(p, q, r, fld), square)
            pulled = pullback(base, pi)
            for cl in classify_fibers(pulled):
                if cl.ktype.is_starred:
                    continue
                steps = (("transfer", ALL_STARRED, str(cl.place)),)
                try:
                    model = apply_steps(pulled, steps, fld)
                except EllfibError:
                    continue
                last = Construction(base, pi, steps, model)
                if configuration(model) == expected:
                    return last
    if last is None:
        raise EllfibError("the base surface has no rational type III cusp with a second rational cusp")
    return last


def _point(place: HomogPoly):
    """The zero ``(a:b)`` of a linear form ``c1 s + c0 t``."""
    c0, c1 = place.coeffs
    return (-c0, c1)


def _distinct(p, q) -> bool:
    return p[0] * q[1] != p[1] * q[0]


# ---------------------------------------------------------------------------
# verification


def verify_entry(e: CatalogEntry, catalog: Catalog | None = None, deep: bool = False) -> ReportRow:
    """Run one entry; failures become report rows, never exceptions."""
    cat = catalog if catalog is not None else load_catalog()
    start = time.perf_counter()
    info = dict(id=e.id, section=e.section, field=e.field, expected=e.expect or "")
    if e.is_stub:
        return ReportRow(status=f"{SKIPPED}(metadata-only)", detail=e.meta.get("construction", ""), **info)
    if e.base not in cat.surfaces:
        return ReportRow(status=f"{SKIPPED}(missing-base-surface)", detail=f"needs surface {e.base}", **info)
    errata = _errata(cat, e)
    try:
        c = search_double_cover(cat, e) if e.search == "double-cover" else build(cat, e)
        conf = configuration(c.model)
    except (EllfibError, ValueError, ArithmeticError) as exc:
        return ReportRow(status=CONFIG_MISMATCH, errata=errata, detail=f"{type(exc).__name__}: {exc}",
                         seconds=time.perf_counter() - start, **info)
    row = dict(info, computed=str(conf), euler=conf.euler, cusps=conf.cusps, errata=errata)
    status, detail = PASS, ""
    if e.expect and conf != e.expected:
        status, detail = CONFIG_MISMATCH, f"computed {conf}, expected {e.expect}"
    if e.printed:
        try:
            ok, how = printed_check(cat, e, c.model)
        except (EllfibError, ValueError, ArithmeticError, KeyError) as exc:
            ok, how = False, f"error: {exc}"
        row["equation"] = how
        if not ok and status == PASS:
            status, detail = EQUATION_MISMATCH, f"not rescale-equivalent to {e.printed}"
    if deep:
        fld = e.fieldspec
        pred = predicted_configuration(c.base, c.map, c.steps, fld)
        row["prediction"] = pred == conf
        row["j_law"] = j_law_holds(c)
        if status == PASS and not row["prediction"]:
            status, detail = CONFIG_MISMATCH, f"prediction {pred} differs from computed {conf}"
        if status == PASS and not row["j_law"]:
            status, detail = CONFIG_MISMATCH, "j-invariant is not the base one composed with the map"
    return ReportRow(status=status, detail=detail, seconds=time.perf_counter() - start, **row)


def verify_all(catalog: Catalog | None = None, only: str | None = None, parallel: bool = True,
               deep: bool = False, workers: int | None = None) -> VerificationReport:
    cat = catalog if catalog is not None else load_catalog()
    entries = cat.select(only)
    if parallel and len(entries) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(lambda e: verify_entry(e, cat, deep), entries))
    else:
        rows = [verify_entry(e, cat, deep) for e in entries]
    return VerificationReport(rows)
