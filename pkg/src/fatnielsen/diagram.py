"""Marked linear chord diagrams.

Positions are 0-indexed internally; anything user facing (files, slides,
reports) uses 1-indexed positions.
"""
from __future__ import annotations

import json
from collections.abc import Mapping, Sequence
from dataclasses import dataclass, field
from functools import cached_property

from . import pairings
from .errors import BoundaryNotFixed, IdentityLabel, InvalidDiagram, ParseError
from .freegroup import (
    Basepoint,
    Word,
    format_word,
    invert,
    is_reduced,
    parse_letter,
    parse_word,
    product,
    substitute,
)
from .pairings import Shape


@dataclass
class ValidationReport:
    checks: dict[str, bool] = field(default_factory=dict)
    messages: dict[str, str] = field(default_factory=dict)

    def record(self, name: str, ok: bool, message: str = "") -> bool:
        self.checks[name] = ok
        if not ok and message:
            self.messages[name] = message
        return ok

    @property
    def ok(self) -> bool:
        return all(self.checks.values())

    def failures(self) -> list[str]:
        return [f"{name}: {self.messages.get(name, 'failed')}" for name, ok in self.checks.items() if not ok]

    def __bool__(self) -> bool:
        return self.ok


def validate(base: Basepoint, partner: Sequence[int], labels: Sequence[Word]) -> ValidationReport:
    """Check every marked-diagram invariant and report each one."""
    rep = ValidationReport()
    n = 4 * base.genus
    if not rep.record("size", len(partner) == n and len(labels) == n,
                      f"expected {n} chord ends, got {len(partner)} pairs-slots and {len(labels)} labels"):
        return rep
    if not rep.record("pairing", pairings.is_perfect_matching(partner), "not a perfect matching"):
        return rep
    letters_ok = all(0 < abs(x) <= 2 * base.genus for w in labels for x in w)
    rep.record("letters", letters_ok, "letter index out of range")
    bad = [j + 1 for j, w in enumerate(labels) if not is_reduced(w)]
    rep.record("reduced", not bad, f"labels at {bad} are not reduced")
    empty = [j + 1 for j, w in enumerate(labels) if not w]
    rep.record("nonempty", not empty, f"identity label at {empty}")
    not_inv = [(j + 1, p + 1) for j, p in enumerate(partner) if j < p and labels[p] != invert(labels[j])]
    rep.record("pairs_inverse", not not_inv, f"paired labels not inverse at {not_inv}")
    adj = [(j + 1, j + 2) for j in range(n - 1) if partner[j] == j + 1]
    rep.record("no_adjacent_partners", not adj, f"chords with adjacent ends {adj}")
    b = pairings.boundary_count(partner)
    rep.record("one_boundary_cycle", b == 1, f"{b} boundary cycles")
    if letters_ok:
        prod = product(labels)
        rep.record("boundary_product", prod == base.boundary_word,
                   f"product {format_word(prod, base.genus)!r} != {format_word(base.boundary_word, base.genus)!r}")
    return rep


@dataclass(frozen=True)
class DiagramEnergy:
    total_length: int
    total_energy: int


@dataclass(frozen=True, eq=False)
class MarkedDiagram:
    """Chord ends at positions 0..4g-1 with their pairing and word labels.

    Construction validates the whole diagram and raises
    :class:`InvalidDiagram` on any failed invariant.
    """

    base: Basepoint
    partner: Shape
    labels: tuple[Word, ...]

    def __post_init__(self):
        object.__setattr__(self, "partner", tuple(self.partner))
        object.__setattr__(self, "labels", tuple(tuple(w) for w in self.labels))
        rep = validate(self.base, self.partner, self.labels)
        if not rep.ok:
            raise InvalidDiagram(rep)

    def __eq__(self, other):
        if not isinstance(other, MarkedDiagram):
            return NotImplemented
        return (self.base == other.base and self.partner == other.partner
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.base.sigma, self.partner, self.labels))

    @property
    def genus(self) -> int:
        return self.base.genus

    @property
    def size(self) -> int:
        return len(self.labels)

    @property
    def shape(self) -> Shape:
        return self.partner

    @cached_property
    def label_energies(self) -> tuple[int, ...]:
        return tuple(self.base.energy(w) for w in self.labels)

    @cached_property
    def total_energy(self) -> int:
        return sum(self.label_energies)

    @property
    def total_length(self) -> int:
        return sum(len(w) for w in self.labels)

    def pairs(self) -> list[tuple[int, int]]:
        return pairings.shape_pairs(self.partner)

    def format_labels(self) -> list[str]:
        return [format_word(w, self.genus) for w in self.labels]

    def __repr__(self):
        return f"MarkedDiagram(pairs={self.pairs()}, labels={self.format_labels()})"

    # -- file format ---------------------------------------------------------

    def to_record(self) -> dict:
        rec = {
            "genus": self.genus,
            "pairs": [list(p) for p in self.pairs()],
            "labels": self.format_labels(),
        }
        if self.base != Basepoint.standard(self.genus):
            rec["sigma"] = format_word(self.base.sigma, self.genus)
        return rec

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True) + "\n"

    @classmethod
    def from_record(cls, rec: Mapping, base: Basepoint | None = None) -> MarkedDiagram:
        try:
            genus = int(rec["genus"])
            if base is None:
                if "sigma" in rec:
                    base = Basepoint(genus, tuple(parse_letter(t, genus) for t in rec["sigma"].split()))
                else:
                    base = Basepoint.standard(genus)
            partner = pairings.shape_from_pairs(rec["pairs"], 4 * genus)
            labels = tuple(parse_word(s, genus) for s in rec["labels"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed diagram record: {exc}") from None
        return cls(base, partner, labels)

    @classmethod
    def from_json(cls, text: str, base: Basepoint | None = None) -> MarkedDiagram:
        try:
            rec = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ParseError(f"diagram file is not JSON: {exc}") from None
        return cls.from_record(rec, base)


def basepoint_diagram(base: Basepoint) -> MarkedDiagram:
    return MarkedDiagram(base, base.partner, tuple((x,) for x in base.sigma))


def diagram_from_automorphism(images: Sequence[Word], base: Basepoint) -> MarkedDiagram:
    """Diagram whose label at position j is the image of sigma_j.

    ``images[i - 1]`` is the image of generator ``s_i``.
    """
    g = base.genus
    if len(images) != 2 * g:
        raise ValueError(f"expected {2 * g} images, got {len(images)}")
    for i, w in enumerate(images):
        if not w:
            raise IdentityLabel(f"image of generator {i + 1} is the identity")
    labels = tuple(substitute((x,), images) for x in base.sigma)
    prod = product(labels)
    if prod != base.boundary_word:
        raise BoundaryNotFixed(
            f"boundary word maps to {format_word(prod, g)!r}, "
            f"expected {format_word(base.boundary_word, g)!r}"
        )
    return MarkedDiagram(base, base.partner, labels)


def diagram_energy(d: MarkedDiagram) -> DiagramEnergy:
    return DiagramEnergy(d.total_length, d.total_energy)


def is_basepoint(d: MarkedDiagram) -> bool:
    return all(len(w) == 1 and w[0] == s for w, s in zip(d.labels, d.base.sigma))
