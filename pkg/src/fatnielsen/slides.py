"""Chord slides on marked linear chord diagrams.

Sliding the end at ``j`` over the chord whose near end is its neighbour
``j -/+ 1`` (far end ``k``):

* Left:  near ``c_{j-1} -> c_{j-1} c_j``, far ``-> c̄_j c̄_{j-1}``, and the slid
  end is re-inserted immediately left of the far end.
* Right: near ``c_{j+1} -> c_j c_{j+1}``, far ``-> c̄_{j+1} c̄_j``, and the slid
  end is re-inserted immediately right of the far end.

Among all re-insertion points these are the only ones that keep the ordered
label product equal to the boundary word (see ``docs/landing_rule.md``).  The
four pictured slide types all reduce to these two rules.
"""
from __future__ import annotations

import enum
import json
from collections.abc import Iterable, Iterator
from dataclasses import dataclass

from .diagram import MarkedDiagram
from .errors import EmptyLabelProduced, IllegalSlide, InconsistentRecord, InvalidDiagram, ParseError
from .freegroup import Word, concat, invert
from .pairings import Shape


class Direction(str, enum.Enum):
    LEFT = "L"
    RIGHT = "R"

    @property
    def step(self) -> int:
        return -1 if self is Direction.LEFT else 1

    def flipped(self) -> Direction:
        return Direction.RIGHT if self is Direction.LEFT else Direction.LEFT


L, R = Direction.LEFT, Direction.RIGHT


@dataclass(frozen=True)
class Slide:
    position: int  # 1-indexed, numbering before the slide
    direction: Direction

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))

    @property
    def sort_key(self) -> tuple[int, int]:
        return (self.position, 0 if self.direction is L else 1)

    def __str__(self):
        return f"({self.position},{self.direction.value})"

    def to_record(self) -> dict:
        return {"pos": self.position, "dir": self.direction.value}

    @classmethod
    def from_record(cls, rec) -> Slide:
        try:
            return cls(int(rec["pos"]), Direction(rec["dir"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed slide record {rec!r}: {exc}") from None


@dataclass(frozen=True)
class SlideRecord:
    slide: Slide
    landing_position: int  # 1-indexed position of the slid end afterwards
    energy_after: int


def is_legal_on_shape(partner: Shape, s: Slide) -> bool:
    n = len(partner)
    j = s.position - 1
    near = j + s.direction.step
    return 0 <= j < n and 0 <= near < n and partner[j] != near


def is_legal(d: MarkedDiagram, s: Slide) -> bool:
    return is_legal_on_shape(d.partner, s)


def enumerate_shape_slides(partner: Shape) -> list[Slide]:
    out = []
    for j in range(len(partner)):
        for direction in (L, R):
            s = Slide(j + 1, direction)
            if is_legal_on_shape(partner, s):
                out.append(s)
    return out


def enumerate_slides(d: MarkedDiagram) -> list[Slide]:
    """Legal slides in (position, Left-before-Right) order."""
    return enumerate_shape_slides(d.partner)


def _landing_order(partner: Shape, j: int, far: int, direction: Direction) -> tuple[list[int], int]:
    """Old positions in their new order, and the new index of the slid end."""
    order = [i for i in range(len(partner)) if i != j]
    at = order.index(far)
    if direction is R:
        at += 1
    order.insert(at, j)
    return order, at


def slide_shape(partner: Shape, s: Slide) -> tuple[Shape, int]:
    """Successor shape and 1-indexed landing position, labels ignored."""
    if not is_legal_on_shape(partner, s):
        raise IllegalSlide(f"slide {s} is not legal on this shape")
    j = s.position - 1
    far = partner[j + s.direction.step]
    order, at = _landing_order(partner, j, far, s.direction)
    new_index = {old: new for new, old in enumerate(order)}
    return tuple(new_index[partner[old]] for old in order), at + 1


def new_labels(d: MarkedDiagram, s: Slide) -> tuple[int, int, Word, Word]:
    """Positions and replacement labels of the near and far ends."""
    if not is_legal(d, s):
        raise IllegalSlide(f"slide {s} is not legal on {d!r}")
    j = s.position - 1
    near = j + s.direction.step
    far = d.partner[near]
    c = d.labels
    if s.direction is L:
        new_near = concat(c[near], c[j])
        new_far = concat(invert(c[j]), c[far])
    else:
        new_near = concat(c[j], c[near])
        new_far = concat(c[far], invert(c[j]))
    if not new_near or not new_far:
        raise EmptyLabelProduced(f"slide {s} produced an identity label; the input is not a CG set")
    return near, far, new_near, new_far


def successor_energy(d: MarkedDiagram, s: Slide) -> int:
    """Energy of ``apply_slide(d, s)`` without building the diagram."""
    near, far, new_near, new_far = new_labels(d, s)
    e = d.label_energies
    energy = d.base.energy
    return d.total_energy - e[near] - e[far] + energy(new_near) + energy(new_far)


def slide_with_record(d: MarkedDiagram, s: Slide) -> tuple[MarkedDiagram, SlideRecord]:
    near, far, new_near, new_far = new_labels(d, s)
    j = s.position - 1
    labels = list(d.labels)
    labels[near], labels[far] = new_near, new_far
    order, at = _landing_order(d.partner, j, far, s.direction)
    new_index = {old: new for new, old in enumerate(order)}
    partner = tuple(new_index[d.partner[old]] for old in order)
    try:
        out = MarkedDiagram(d.base, partner, tuple(labels[old] for old in order))
    except InvalidDiagram as exc:
        # product and pairing invariance are theorems for valid inputs
        raise AssertionError(f"slide {s} broke a diagram invariant: {exc}") from exc
    return out, SlideRecord(s, at + 1, out.total_energy)


def apply_slide(d: MarkedDiagram, s: Slide) -> MarkedDiagram:
    return slide_with_record(d, s)[0]


def inverse_slide(d_before: MarkedDiagram, rec: SlideRecord) -> Slide:
    """The slide on the successor that undoes ``rec``.

    The slid end sits next to the old far end, which is now the near end of
    the reverse move.
    """
    s = rec.slide
    if not is_legal(d_before, s):
        raise InconsistentRecord(f"slide {s} is not legal on the recorded diagram")
    _, landing = slide_shape(d_before.partner, s)
    if landing != rec.landing_position:
        raise InconsistentRecord(f"landing position {rec.landing_position} does not match {landing}")
    return Slide(landing, s.direction.flipped())


def replay(d: MarkedDiagram, slides: Iterable[Slide]) -> Iterator[tuple[MarkedDiagram, SlideRecord]]:
    for s in slides:
        d, rec = slide_with_record(d, s)
        yield d, rec


# -- slide sequence file: one JSON record per line ---------------------------

def dump_slides(slides: Iterable[Slide]) -> str:
    return "".join(json.dumps(s.to_record(), sort_keys=True) + "\n" for s in slides)


def load_slides(text: str) -> list[Slide]:
    out = []
    for n, line in enumerate(text.splitlines(), 1):
        if not line.strip():
            continue
        try:
            rec = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"line {n}: {exc}") from None
        out.append(Slide.from_record(rec))
    return out
