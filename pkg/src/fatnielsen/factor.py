"""Mapping-class frontend: automorphisms in, replayable certificates out."""
from __future__ import annotations

import hashlib
import json
import random
from collections import deque
from collections.abc import Mapping, Sequence
from dataclasses import dataclass

from .diagram import MarkedDiagram, basepoint_diagram, diagram_from_automorphism, is_basepoint
from .errors import (
    BoundaryNotFixed,
    FatgraphNielsenError,
    IdentityImage,
    ParseError,
    ShapeRecurrenceTimeout,
)
from .freegroup import (
    Basepoint,
    Word,
    format_word,
    generator_tokens,
    parse_letter,
    parse_word,
    product,
    substitute,
)
from .pairings import Shape
from .reduction import ReductionTrace, Strategy, reduce_to_basepoint
from .slides import Slide, SlideRecord, enumerate_shape_slides, slide_shape, slide_with_record

CERTIFICATE_FORMAT = "fatnielsen-certificate"
CERTIFICATE_VERSION = 1


@dataclass(frozen=True)
class Automorphism:
    """Images of the generators: ``images[i - 1]`` is the image of ``s_i``."""

    genus: int
    images: tuple[Word, ...]

    def __call__(self, w: Word) -> Word:
        return substitute(w, self.images)

    def to_record(self) -> dict:
        tokens = generator_tokens(self.genus)
        return {
            "genus": self.genus,
            "images": {t: format_word(w, self.genus) for t, w in zip(tokens, self.images)},
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True) + "\n"

    @classmethod
    def from_record(cls, rec: Mapping) -> Automorphism:
        """Parse and validate against the standard basepoint's boundary word."""
        genus, images = parse_images(rec)
        return validate_automorphism(images, Basepoint.standard(genus))

    @classmethod
    def from_json(cls, text: str) -> Automorphism:
        return cls.from_record(_loads(text))


def _loads(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"not JSON: {exc}") from None


def _genus(rec: Mapping) -> int:
    try:
        genus = int(rec["genus"])
    except (KeyError, TypeError, ValueError):
        raise ParseError("record needs an integer 'genus'") from None
    if genus < 1:
        raise ParseError(f"genus must be positive, got {genus}")
    return genus


def parse_images(rec: Mapping) -> tuple[int, dict[int, Word]]:
    genus = _genus(rec)
    images = rec.get("images")
    if not isinstance(images, Mapping):
        raise ParseError("record needs an 'images' mapping")
    out: dict[int, Word] = {}
    for token, text in images.items():
        x = parse_letter(token, genus)
        if x < 0:
            raise ParseError(f"image key {token!r} must be a generator, not an inverse")
        if x in out:
            raise ParseError(f"generator {token!r} given twice")
        if not isinstance(text, str):
            raise ParseError(f"image of {token!r} must be a word string")
        out[x] = parse_word(text, genus)
    missing = [t for i, t in enumerate(generator_tokens(genus), 1) if i not in out]
    if missing:
        raise ParseError(f"missing images for {missing}")
    return genus, out


def validate_automorphism(images: Mapping[int, Word] | Sequence[Word], base: Basepoint) -> Automorphism:
    """Check the boundary condition; automorphy itself is certified by reduction.

    ``images`` maps generator index ``i`` (1-based) to its image, or lists
    the images in generator order.
    """
    if isinstance(images, Mapping):
        images = [images[i] for i in range(1, 2 * base.genus + 1)]
    if len(images) != 2 * base.genus:
        raise ValueError(f"expected {2 * base.genus} images, got {len(images)}")
    images = tuple(tuple(w) for w in images)
    for i, w in enumerate(images):
        if not w:
            raise IdentityImage(f"image of generator {i + 1} is the identity")
    prod = product(substitute((x,), images) for x in base.sigma)
    if prod != base.boundary_word:
        raise BoundaryNotFixed(
            f"boundary word maps to {format_word(prod, base.genus)!r}, "
            f"expected {format_word(base.boundary_word, base.genus)!r}"
        )
    return Automorphism(base.genus, images)


def identity(genus: int) -> Automorphism:
    return Automorphism(genus, tuple((i,) for i in range(1, 2 * genus + 1)))


def compose(phi: Automorphism, psi: Automorphism) -> Automorphism:
    """``phi ∘ psi``: first ``psi``, then ``phi``."""
    return Automorphism(phi.genus, tuple(phi(w) for w in psi.images))


def automorphism_from_diagram(d: MarkedDiagram) -> Automorphism:
    """Read generator images off a diagram with the basepoint shape."""
    if d.partner != d.base.partner:
        raise ValueError("diagram does not have the basepoint shape")
    where = {x: j for j, x in enumerate(d.base.sigma)}
    return Automorphism(d.genus, tuple(d.labels[where[i]] for i in range(1, 2 * d.genus + 1)))


# -- certificates ------------------------------------------------------------

@dataclass
class Certificate:
    automorphism: Automorphism
    base: Basepoint
    trace: ReductionTrace

    def start(self) -> MarkedDiagram:
        return diagram_from_automorphism(self.automorphism.images, self.base)

    def lines(self) -> list[str]:
        g = self.base.genus
        head = {"format": CERTIFICATE_FORMAT, "version": CERTIFICATE_VERSION}
        auto = dict(self.automorphism.to_record(), sigma=format_word(self.base.sigma, g))
        trace = {
            "genus": g,
            "strategy": self.trace.strategy.value,
            "initial_energy": str(self.trace.initial_energy),
            "final_energy": str(self.trace.final_energy),
            "steps": len(self.trace.slides),
        }
        out = [head, auto, trace]
        for rec in self.trace.slides:
            out.append(dict(rec.slide.to_record(), landing=rec.landing_position, energy=str(rec.energy_after)))
        return [json.dumps(x, sort_keys=True) for x in out]

    def dumps(self) -> str:
        body = "".join(line + "\n" for line in self.lines())
        digest = hashlib.sha256(body.encode()).hexdigest()
        return body + json.dumps({"digest": f"sha256:{digest}"}) + "\n"

    @classmethod
    def loads(cls, text: str) -> Certificate:
        """Parse a certificate file, checking the digest before anything else.

        Parsing does not replay; call :func:`verify` for that.
        """
        lines = text.splitlines()
        if len(lines) < 4:
            raise ParseError("certificate is truncated")
        last = _loads(lines[-1])
        if not isinstance(last, Mapping) or "digest" not in last:
            raise ParseError("certificate has no digest line")
        body = "".join(line + "\n" for line in lines[:-1])
        digest = "sha256:" + hashlib.sha256(body.encode()).hexdigest()
        if last["digest"] != digest:
            raise ParseError("certificate digest mismatch")
        head, auto, header, *slide_lines = [_loads(line) for line in lines[:-1]]
        if head.get("format") != CERTIFICATE_FORMAT or head.get("version") != CERTIFICATE_VERSION:
            raise ParseError("not a certificate file of a supported version")
        try:
            genus = _genus(auto)
            base = Basepoint(genus, tuple(parse_letter(t, genus) for t in auto["sigma"].split()))
            _, images = parse_images(auto)
            phi = Automorphism(genus, tuple(images[i] for i in range(1, 2 * genus + 1)))
            trace = ReductionTrace(Strategy(header["strategy"]), energies=[int(header["initial_energy"])])
            for rec in slide_lines:
                trace.slides.append(SlideRecord(Slide.from_record(rec), int(rec["landing"]), int(rec["energy"])))
                trace.energies.append(int(rec["energy"]))
            if int(header["steps"]) != len(trace.slides) or int(header["final_energy"]) != trace.energies[-1]:
                raise ParseError("trace header disagrees with its slides")
        except ParseError:
            raise
        except (KeyError, TypeError, ValueError, FatgraphNielsenError) as exc:
            raise ParseError(f"malformed certificate: {exc}") from None
        return cls(phi, base, trace)


def factor(
    phi: Automorphism,
    base: Basepoint | None = None,
    strategy: Strategy | str = Strategy.EXHAUSTIVE,
    max_steps: int | None = None,
) -> Certificate:
    base = base or Basepoint.standard(phi.genus)
    d = diagram_from_automorphism(phi.images, base)
    return Certificate(phi, base, reduce_to_basepoint(d, strategy, max_steps))


@dataclass(frozen=True)
class Verdict:
    ok: bool
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok


def verify(cert: Certificate) -> Verdict:
    """Replay the trace from scratch and re-check every claim it makes."""
    try:
        d = cert.start()
    except FatgraphNielsenError as exc:
        return Verdict(False, f"start diagram rejected: {exc}")
    energies = cert.trace.energies
    if len(energies) != len(cert.trace.slides) + 1:
        return Verdict(False, "energy list does not match slide count")
    if d.total_energy != energies[0]:
        return Verdict(False, f"initial energy {energies[0]} != {d.total_energy}")
    for step, rec in enumerate(cert.trace.slides, 1):
        try:
            d, replayed = slide_with_record(d, rec.slide)
        except (FatgraphNielsenError, AssertionError) as exc:
            return Verdict(False, f"step {step}: slide {rec.slide} failed: {exc}")
        if product(d.labels) != cert.base.boundary_word:
            return Verdict(False, f"step {step}: boundary product changed")
        if replayed.landing_position != rec.landing_position:
            return Verdict(False, f"step {step}: landing position {rec.landing_position} != {replayed.landing_position}")
        if replayed.energy_after != rec.energy_after or rec.energy_after != energies[step]:
            return Verdict(False, f"step {step}: recorded energy does not match replay")
        if not energies[step] < energies[step - 1]:
            return Verdict(False, f"step {step}: energy did not decrease")
    if not is_basepoint(d):
        return Verdict(False, "replay does not end at the basepoint diagram")
    return Verdict(True)


# -- random mapping classes --------------------------------------------------

def _path_to_shape(start: Shape, target: Shape, rng: random.Random) -> list[Slide]:
    """Shortest slide path between shapes, ties broken by ``rng``."""
    if start == target:
        return []
    prev: dict[Shape, tuple[Shape, Slide] | None] = {start: None}
    queue = deque([start])
    while queue:
        shape = queue.popleft()
        moves = enumerate_shape_slides(shape)
        rng.shuffle(moves)
        for s in moves:
            nxt, _ = slide_shape(shape, s)
            if nxt in prev:
                continue
            prev[nxt] = (shape, s)
            if nxt == target:
                path = []
                while prev[nxt] is not None:
                    nxt, s = prev[nxt]
                    path.append(s)
                return path[::-1]
            queue.append(nxt)
    raise ShapeRecurrenceTimeout("basepoint shape unreachable")


def random_walk(base: Basepoint, steps: int, rng: random.Random) -> MarkedDiagram:
    """Diagram reached by ``steps`` uniformly random legal slides from the basepoint."""
    d = basepoint_diagram(base)
    for _ in range(steps):
        d, _ = slide_with_record(d, rng.choice(enumerate_shape_slides(d.partner)))
    return d


def random_mapping_class(
    genus: int,
    walk_length: int,
    seed: int,
    base: Basepoint | None = None,
    max_steps: int | None = None,
    homing: bool = True,
    attempts: int = 20,
) -> Automorphism:
    """Mapping class read off a random slide walk that returns to the basepoint shape.

    The walk takes ``walk_length`` random slides, then heads back to the
    basepoint shape.  With ``homing`` (the default) it follows a shortest
    shape path; otherwise it keeps walking at random, which rarely returns
    for genus above 2 within a sensible ``max_steps``.
    """
    base = base or Basepoint.standard(genus)
    if walk_length < 0:
        raise ValueError("walk_length must be nonnegative")
    if max_steps is None:
        max_steps = walk_length + (40 * genus if homing else 200 * genus ** 3)
    for attempt in range(attempts):
        rng = random.Random(f"{seed}:{attempt}")
        d = random_walk(base, walk_length, rng)
        taken = walk_length
        if homing:
            path = _path_to_shape(d.partner, base.partner, rng)
            if taken + len(path) > max_steps:
                continue
            for s in path:
                d, _ = slide_with_record(d, s)
        else:
            while d.partner != base.partner and taken < max_steps:
                d, _ = slide_with_record(d, rng.choice(enumerate_shape_slides(d.partner)))
                taken += 1
            if d.partner != base.partner:
                continue
        return automorphism_from_diagram(d)
    raise ShapeRecurrenceTimeout(f"no return to the basepoint shape within {max_steps} steps after {attempts} attempts")


def replay_slides(d: MarkedDiagram, slides: Sequence[Slide]) -> MarkedDiagram:
    for s in slides:
        d, _ = slide_with_record(d, s)
    return d

