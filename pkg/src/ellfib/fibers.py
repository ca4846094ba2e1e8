"""Kodaira types of singular fibers and configurations of them.

In characteristic zero the fiber type over a place is determined by the
vanishing orders of ``A``, ``B`` and the discriminant there.  The place
clusters come from a squarefree decomposition of the discriminant refined by
:func:`order_split`, so no roots are ever computed: a quadratic cluster with
two conjugate ``I8`` fibers is reported once, with ``places_count == 2``.
"""

from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass

from ellfib.errors import InconsistentOrders, NotMinimal, ParseError
from ellfib.exactalg import INFINITE, HomogPoly, order_split, squarefree_decompose
from ellfib.weier import WeierstrassModel, discriminant, is_minimal

_ADDITIVE_EULER = {"II": 2, "III": 3, "IV": 4, "IV*": 8, "III*": 9, "II*": 10}
_STAR_PARTNER = {"II": "IV*", "III": "III*", "IV": "II*", "IV*": "II", "III*": "III", "II*": "IV"}
# Order used when rendering configurations after the I_n and I_n^* entries.
_RENDER_RANK = {"II*": 2, "III*": 3, "IV*": 4, "II": 5, "III": 6, "IV": 7}
# Representative (vA, vB, vDelta) triples; used to predict types under base change.
_TRIPLES = {"II": (1, 1, 2), "III": (1, 2, 3), "IV": (2, 2, 4),
            "IV*": (3, 4, 8), "III*": (3, 5, 9), "II*": (4, 5, 10)}


@dataclass(frozen=True, order=True)
class KodairaType:
    """``family`` is ``"I"``, ``"I*"`` or one of the additive names; ``n`` applies to I and I*."""

    family: str
    n: int = 0

    def __post_init__(self):
        if self.family in ("I", "I*"):
            if self.n < 0:
                raise ValueError("I_n needs n >= 0")
        elif self.family in _ADDITIVE_EULER:
            if self.n:
                raise ValueError(f"type {self.family} takes no index")
        else:
            raise ValueError(f"unknown Kodaira family {self.family!r}")

    @classmethod
    def I(cls, n: int) -> "KodairaType":
        return cls("I", n)

    @classmethod
    def Istar(cls, n: int) -> "KodairaType":
        return cls("I*", n)

    @property
    def euler(self) -> int:
        if self.family == "I":
            return self.n
        if self.family == "I*":
            return self.n + 6
        return _ADDITIVE_EULER[self.family]

    @property
    def is_semistable(self) -> bool:
        return self.family == "I" and self.n >= 1

    @property
    def is_smooth(self) -> bool:
        return self.family == "I" and self.n == 0

    @property
    def is_starred(self) -> bool:
        return self.family.endswith("*")

    def toggled(self) -> "KodairaType":
        """The type after a quadratic twist at this place (I_n <-> I_n^*, II <-> IV^*, ...)."""
        if self.family == "I":
            return KodairaType("I*", self.n)
        if self.family == "I*":
            return KodairaType("I", self.n)
        return KodairaType(_STAR_PARTNER[self.family])

    def triple(self) -> tuple[int, int, int]:
        """A representative minimal ``(vA, vB, vDelta)``."""
        if self.family == "I":
            return (0, 0, self.n)
        if self.family == "I*":
            return (2, 3, 6 + self.n)
        return _TRIPLES[self.family]

    @property
    def label(self) -> str:
        """Configuration-string token: ``"3"``, ``"2*"``, ``"IV*"``."""
        if self.family == "I":
            return str(self.n)
        if self.family == "I*":
            return f"{self.n}*"
        return self.family

    @property
    def name(self) -> str:
        """Kodaira notation: ``I3``, ``I2*``, ``IV*``."""
        if self.family == "I":
            return f"I{self.n}"
        if self.family == "I*":
            return f"I{self.n}*"
        return self.family

    def render_key(self):
        if self.family == "I":
            return (0, self.n)
        if self.family == "I*":
            return (1, self.n)
        return (_RENDER_RANK[self.family], 0)

    def __str__(self):
        return self.name


def classify_orders(vA, vB, vD) -> KodairaType:
    """The Kodaira type for vanishing orders of A, B and the discriminant."""
    if vD == 0:
        return KodairaType.I(0)
    if vA == 0:
        return KodairaType.I(vD)
    if vD == 2 and vA >= 1 and vB == 1:
        return KodairaType("II")
    if vD == 3 and vA == 1 and vB >= 2:
        return KodairaType("III")
    if vD == 4 and vA >= 2 and vB == 2:
        return KodairaType("IV")
    if vD == 6 and vA >= 2 and vB >= 3:
        return KodairaType.Istar(0)
    if vD > 6 and vA == 2 and vB == 3:
        return KodairaType.Istar(vD - 6)
    if vD == 8 and vA >= 3 and vB == 4:
        return KodairaType("IV*")
    if vD == 9 and vA == 3 and vB >= 5:
        return KodairaType("III*")
    if vD == 10 and vA >= 4 and vB == 5:
        return KodairaType("II*")
    raise InconsistentOrders(f"orders (vA, vB, vDelta) = ({vA}, {vB}, {vD}) match no Kodaira type")


@dataclass(frozen=True)
class FiberCluster:
    """A squarefree place on which the fiber type is constant."""

    place: HomogPoly
    places_count: int
    vA: object
    vB: object
    vDelta: int
    ktype: KodairaType

    def to_dict(self) -> dict:
        return {
            "place": str(self.place),
            "count": self.places_count,
            "type": self.ktype.name,
            "vA": _order_json(self.vA),
            "vB": _order_json(self.vB),
            "vDelta": self.vDelta,
        }


def _order_json(v):
    return "inf" if v == INFINITE else int(v)


def classify_fibers(m: WeierstrassModel) -> list[FiberCluster]:
    """All singular fibers of a minimal model, grouped into place clusters."""
    if not is_minimal(m):
        raise NotMinimal("classify_fibers needs a minimal model; call minimalize first")
    _, clusters = squarefree_decompose(discriminant(m))
    out = []
    for cl in clusters:
        for sub, va in order_split(cl.factor, m.A):
            for place, vb in order_split(sub, m.B):
                ktype = classify_orders(va, vb, cl.multiplicity)
                out.append(FiberCluster(place, place.degree, va, vb, cl.multiplicity, ktype))
    out.sort(key=lambda c: (c.ktype.render_key(), c.place.degree, str(c.place)))
    return out


class Configuration:
    """Multiset of Kodaira types, compared as a multiset."""

    __slots__ = ("_items",)

    def __init__(self, types=()):
        self._items = tuple(sorted(types, key=KodairaType.render_key))

    @classmethod
    def from_clusters(cls, clusters) -> "Configuration":
        types = []
        for c in clusters:
            types.extend([c.ktype] * c.places_count)
        return cls(types)

    @classmethod
    def parse(cls, text: str) -> "Configuration":
        """Parse ``[1,1,2,3*,IV*]``; entries may come in any order."""
        raw = text.strip()
        if raw.startswith("[") and raw.endswith("]"):
            raw = raw[1:-1]
        types = []
        for tok in raw.split(","):
            tok = tok.strip().rstrip(".")
            if not tok:
                raise ParseError(f"empty entry in configuration {text!r}", token=tok)
            types.append(parse_type(tok))
        return cls(types)

    @property
    def types(self) -> tuple[KodairaType, ...]:
        return self._items

    def counts(self) -> Counter:
        return Counter(self._items)

    @property
    def euler(self) -> int:
        return sum(k.euler for k in self._items)

    @property
    def cusps(self) -> int:
        return len(self._items)

    @property
    def is_semistable(self) -> bool:
        return all(k.is_semistable for k in self._items)

    def __len__(self):
        return len(self._items)

    def __iter__(self):
        return iter(self._items)

    def __eq__(self, other):
        if isinstance(other, str):
            other = Configuration.parse(other)
        if not isinstance(other, Configuration):
            return NotImplemented
        return self._items == other._items

    def __hash__(self):
        return hash(self._items)

    def __str__(self):
        return "[" + ",".join(k.label for k in self._items) + "]"

    def __repr__(self):
        return f"Configuration({self})"


_TOKEN = re.compile(r"^(?:I?(\d+)(\*?)|(II|III|IV)(\*?))$")


def parse_type(tok: str) -> KodairaType:
    """Parse one configuration token: ``3``, ``I3``, ``2*``, ``IV*``."""
    m = _TOKEN.match(tok.strip())
    if not m:
        raise ParseError(f"unknown fiber type {tok!r}", token=tok)
    num, star, name, nstar = m.groups()
    if num is not None:
        return KodairaType("I*" if star else "I", int(num))
    return KodairaType(name + nstar)


def configuration(m: WeierstrassModel) -> Configuration:
    return Configuration.from_clusters(classify_fibers(m))


def check_semistable_extremal_necessary(m: WeierstrassModel) -> bool:
    """Euler number 24, every fiber semistable and exactly six cusps."""
    clusters = classify_fibers(m)
    if 12 * m.M != 24:
        return False
    if not all(c.ktype.is_semistable for c in clusters):
        return False
    return sum(c.places_count for c in clusters) == 6


def predict_pullback_type(ktype: KodairaType, e: int) -> tuple[KodairaType, bool]:
    """Fiber type over a preimage with ramification index ``e``.

    Multiplies a representative order triple by ``e`` and removes the
    largest multiple of ``(4, 6, 12)`` that keeps the orders non-negative,
    the arithmetic shadow of substituting and minimalizing.  The flag says
    whether the result is starred, i.e. whether it would need deflating.
    """
    if e < 1:
        raise ValueError("ramification index must be positive")
    if ktype.family == "I":
        out = KodairaType.I(ktype.n * e)
        return out, False
    vA, vB, vD = (e * v for v in ktype.triple())
    k = min(vA // 4, vB // 6)
    vA, vB, vD = vA - 4 * k, vB - 6 * k, vD - 12 * k
    out = classify_orders(vA, vB, vD)
    return out, out.is_starred
