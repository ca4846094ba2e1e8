"""Catalog data: surfaces, maps and entries, read from plain-text files.

A catalog directory may contain ``surfaces/*.surf``, ``maps/*.map`` and
``entries/*.entries``.  The builtin catalog ships with the package; a user
directory named by ``ELLFIB_CATALOG_DIR`` is layered on top of it, and any
surface, map or entry there replaces the builtin one with the same id.

Entry files hold blocks of ``key = value`` lines separated by blank lines.
A block may also be written on a single line with ``;`` between the pairs::

    entry = fig2; base = X411; pre = norm411; map = pi4; expect = [1,1,1,2,3,16]
"""

from __future__ import annotations

import os
import re
from dataclasses import dataclass
from dataclasses import field as dc_field
from importlib import resources
from pathlib import Path

from ellfib.covers import RationalMap, parse_map
from ellfib.errors import CatalogCorrupt, EllfibError, ParseError
from ellfib.exactalg import FieldSpec, parse_field
from ellfib.fibers import Configuration
from ellfib.weier import WeierstrassModel, parse_surface

ENV_VAR = "ELLFIB_CATALOG_DIR"

# Keys understood by the pipeline; everything else is carried as metadata.
_RECIPE_KEYS = {
    "entry", "section", "base", "pre", "map", "twist", "transfer", "expect", "field",
    "printed", "printed_coords", "printed_twist", "printed_config", "search", "requires",
}
ALL_STARRED = "all-starred"
# ";" separates pairs only when a "key =" follows, so values may contain it.
_PAIR_SEP = re.compile(r";\s*(?=[A-Za-z_]+\s*=)")


@dataclass(frozen=True)
class SurfaceRecord:
    id: str
    model: WeierstrassModel
    meta: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class MapRecord:
    id: str
    map: RationalMap
    meta: dict = dc_field(default_factory=dict)


@dataclass(frozen=True)
class CatalogEntry:
    """One recipe: base surface, substitutions, twists and the expected configuration.

    ``pre`` and ``map`` are map references: a map id or an inline ``(N : D)``.
    The substitutions are applied in order, ``pre`` first, so the total map is
    ``pre[0](pre[1](...map...))``.  ``twist`` is a form or ``all-starred``;
    ``transfer`` is a pair ``(from, to)`` where ``from`` may be ``all-starred``.
    """

    id: str
    section: str = ""
    base: str | None = None
    pre: tuple = ()
    map: str | None = None
    twist: str | None = None
    transfer: tuple | None = None
    expect: str | None = None
    field: str = "rationals"
    printed: str | None = None
    printed_coords: str | None = None
    printed_twist: str | None = None
    printed_config: str | None = None
    search: str | None = None
    meta: dict = dc_field(default_factory=dict)

    @property
    def fieldspec(self) -> FieldSpec:
        return parse_field(self.field)

    @property
    def expected(self) -> Configuration | None:
        return Configuration.parse(self.expect) if self.expect else None

    @property
    def is_stub(self) -> bool:
        """Metadata only: nothing to compute."""
        return self.base is None

    @property
    def erratum(self) -> str | None:
        return self.meta.get("erratum")


def parse_entries(text: str, source: str = "<string>") -> list[CatalogEntry]:
    """Parse an entry file into :class:`CatalogEntry` objects."""
    out = []
    for block in _blocks(text):
        fields: dict[str, str] = {}
        for lineno, line in block:
            for part in _PAIR_SEP.split(line):
                part = part.strip()
                if not part:
                    continue
                if "=" not in part:
                    raise ParseError(f"{source}:{lineno}: expected 'key = value', got {part!r}", token=part)
                key, _, value = part.partition("=")
                fields[key.strip()] = value.strip()
        if "entry" not in fields:
            raise ParseError(f"{source}: block without an 'entry' key", token=str(fields))
        out.append(_entry_from_fields(fields, source))
    return out


def _blocks(text: str):
    block = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not raw.strip():
            if block:
                yield block
            block = []
            continue
        if line:
            block.append((lineno, line))
    if block:
        yield block


def _entry_from_fields(f: dict, source: str) -> CatalogEntry:
    transfer = None
    if "transfer" in f:
        src, arrow, dst = f["transfer"].partition("->")
        if not arrow or not src.strip() or not dst.strip():
            raise ParseError(f"{source}: transfer must read 'from -> to', got {f['transfer']!r}", token=f["transfer"])
        transfer = (src.strip(), dst.strip())
    pre = tuple(p.strip() for p in _split_refs(f.get("pre", "")) if p.strip())
    meta = {k: v for k, v in f.items() if k not in _RECIPE_KEYS}
    if "requires" in f:
        meta["requires"] = f["requires"]
    if "expect" in f:
        Configuration.parse(f["expect"])
    return CatalogEntry(
        id=f["entry"], section=f.get("section", ""), base=f.get("base"), pre=pre, map=f.get("map"),
        twist=f.get("twist"), transfer=transfer, expect=f.get("expect"), field=f.get("field", "rationals"),
        printed=f.get("printed"), printed_coords=f.get("printed_coords"), printed_twist=f.get("printed_twist"),
        printed_config=f.get("printed_config"), search=f.get("search"), meta=meta,
    )


def _split_refs(text: str):
    """Split a comma list of map references, keeping inline ``(N : D)`` maps whole."""
    depth, cur = 0, ""
    for ch in text:
        if ch == "(":
            depth += 1
        elif ch == ")":
            depth -= 1
        if ch == "," and depth == 0:
            yield cur
            cur = ""
        else:
            cur += ch
    yield cur


def format_entry(e: CatalogEntry) -> str:
    lines = [f"entry = {e.id}"]
    for key in ("section", "base"):
        if getattr(e, key):
            lines.append(f"{key} = {getattr(e, key)}")
    if e.pre:
        lines.append("pre = " + ", ".join(e.pre))
    for key in ("map", "twist"):
        if getattr(e, key):
            lines.append(f"{key} = {getattr(e, key)}")
    if e.transfer:
        lines.append(f"transfer = {e.transfer[0]} -> {e.transfer[1]}")
    if e.field != "rationals":
        lines.append(f"field = {e.field}")
    for key in ("expect", "printed", "printed_coords", "printed_twist", "printed_config", "search"):
        if getattr(e, key):
            lines.append(f"{key} = {getattr(e, key)}")
    for k, v in e.meta.items():
        lines.append(f"{k} = {v}")
    return "\n".join(lines) + "\n"


class Catalog:
    """Surfaces, maps and entries, keyed by id.  Immutable once loaded."""

    def __init__(self, surfaces=None, maps=None, entries=None):
        self.surfaces: dict[str, SurfaceRecord] = dict(surfaces or {})
        self.maps: dict[str, MapRecord] = dict(maps or {})
        self._entries: dict[str, CatalogEntry] = {}
        for e in entries or ():
            self._entries[e.id] = e

    @property
    def entries(self) -> list[CatalogEntry]:
        return sorted(self._entries.values(), key=lambda e: _id_key(e.id))

    def __iter__(self):
        return iter(self.entries)

    def __len__(self):
        return len(self._entries)

    def __getitem__(self, entry_id: str) -> CatalogEntry:
        return self._entries[entry_id]

    def __contains__(self, entry_id: str) -> bool:
        return entry_id in self._entries

    def merged(self, other: "Catalog") -> "Catalog":
        """``other`` layered over this catalog; ids in ``other`` win."""
        return Catalog({**self.surfaces, **other.surfaces}, {**self.maps, **other.maps},
                       [*self._entries.values(), *other._entries.values()])

    def select(self, only: str | None) -> list[CatalogEntry]:
        """Entries whose id starts with ``only`` or whose section equals it."""
        if not only:
            return self.entries
        return [e for e in self.entries if e.id.startswith(only) or e.section == only]


def _id_key(entry_id: str):
    """Sort ``fig2`` before ``fig10``: split trailing digits numerically."""
    parts, num = [], ""
    for ch in entry_id:
        if ch.isdigit():
            num += ch
        else:
            if num:
                parts.append((1, int(num), ""))
                num = ""
            parts.append((0, 0, ch))
    if num:
        parts.append((1, int(num), ""))
    return tuple(parts)


def load_dir(path) -> Catalog:
    """Read a catalog directory.  Raises :class:`CatalogCorrupt` on bad data."""
    root = Path(path)
    surfaces, maps, entries = {}, {}, []
    for f in sorted((root / "surfaces").glob("*.surf")) if (root / "surfaces").is_dir() else ():
        model, meta = _load(parse_surface, f)
        surfaces[f.stem] = SurfaceRecord(f.stem, model, meta)
    for f in sorted((root / "maps").glob("*.map")) if (root / "maps").is_dir() else ():
        pi, meta = _load(parse_map, f)
        maps[f.stem] = MapRecord(f.stem, pi, meta)
    for f in sorted((root / "entries").glob("*.entries")) if (root / "entries").is_dir() else ():
        try:
            entries.extend(parse_entries(f.read_text(), source=f.name))
        except ParseError as exc:
            raise CatalogCorrupt(f"{f.name}: {exc}") from exc
    return Catalog(surfaces, maps, entries)


def _load(parser, f: Path):
    try:
        return parser(f.read_text())
    except CatalogCorrupt as exc:
        raise CatalogCorrupt(f"{f.parent.name}/{f.name}: {exc}") from exc
    except (EllfibError, ValueError) as exc:
        raise CatalogCorrupt(f"{f.parent.name}/{f.name}: {exc}") from exc


def builtin_dir() -> Path:
    return Path(str(resources.files("ellfib.catalog") / "data"))


def load_builtin() -> Catalog:
    """The catalog shipped with the package."""
    return load_dir(builtin_dir())


def load_catalog(extra_dir=None, builtin: bool = True) -> Catalog:
    """Builtin catalog overlaid with ``extra_dir`` (default: ``$ELLFIB_CATALOG_DIR``)."""
    cat = load_builtin() if builtin else Catalog()
    extra_dir = extra_dir if extra_dir is not None else os.environ.get(ENV_VAR)
    if extra_dir:
        cat = cat.merged(load_dir(extra_dir))
    return cat
