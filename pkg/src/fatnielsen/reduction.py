"""Fatgraph Nielsen reduction.

Repeatedly apply an energy-decreasing chord slide until the basepoint
diagram is reached.  Two slide finders are provided:

``exhaustive``
    tries every legal slide and keeps the cheapest successor.  Needs no case
    analysis and serves as the oracle.
``guided``
    follows the case analysis that proves a reducing slide exists:
    length-reducing slides first, then balanced chord ends, then the
    leftmost chord end whose surviving letter is followed by cancelled ones.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .diagram import MarkedDiagram, is_basepoint
from .errors import GuidedInvariantViolated, StepLimitExceeded, StuckNotAtBasepoint
from .freegroup import Word, invert, left_cancellation
from .slides import L, R, Slide, SlideRecord, enumerate_slides, slide_with_record, successor_energy


class Strategy(str, enum.Enum):
    EXHAUSTIVE = "exhaustive"
    GUIDED = "guided"


@dataclass(frozen=True)
class CancellationProfile:
    left: tuple[int, ...]
    right: tuple[int, ...]


def cancellation_profile(d: MarkedDiagram) -> CancellationProfile:
    c = d.labels
    left = (0,) + tuple(left_cancellation(c[j - 1], c[j]) for j in range(1, len(c)))
    right = left[1:] + (0,)
    return CancellationProfile(left, right)


@dataclass(frozen=True)
class CancellationScheme:
    """Factorisations ``c_j = L_j W_j R_j`` from one left-to-right reduction."""

    left: tuple[Word, ...]
    kept: tuple[Word, ...]
    right: tuple[Word, ...]

    @property
    def cancelled(self) -> int:
        return (sum(len(w) for w in self.left) + sum(len(w) for w in self.right)) // 2


def cancellation_scheme(d: MarkedDiagram) -> CancellationScheme:
    """Stack reduction of ``c_1 ... c_4g`` recording which letters survive.

    Each label first cancels a prefix against the stack and pushes the rest;
    later labels can only pop a suffix of what was pushed, so survivors form
    a contiguous middle block.
    """
    stack: list[tuple[int, int]] = []  # (letter, owning position)
    popped_prefix = []
    for j, w in enumerate(d.labels):
        k = 0
        while k < len(w) and stack and stack[-1][0] == -w[k]:
            stack.pop()
            k += 1
        popped_prefix.append(k)
        stack.extend((x, j) for x in w[k:])
    survivors = [0] * len(d.labels)
    for _, j in stack:
        survivors[j] += 1
    left, kept, right = [], [], []
    for j, w in enumerate(d.labels):
        a = popped_prefix[j]
        b = a + survivors[j]
        left.append(w[:a])
        kept.append(w[a:b])
        right.append(w[b:])
    return CancellationScheme(tuple(left), tuple(kept), tuple(right))


# -- slide finders -----------------------------------------------------------

def find_slide_exhaustive(d: MarkedDiagram) -> tuple[Slide, int] | None:
    """Cheapest strictly reducing slide; ties go to the smaller position, then Left."""
    if is_basepoint(d):
        return None
    current = d.total_energy
    best: tuple[int, tuple[int, int], Slide] | None = None
    for s in enumerate_slides(d):
        e = successor_energy(d, s)
        if e < current and (best is None or (e, s.sort_key) < best[:2]):
            best = (e, s.sort_key, s)
    if best is None:
        raise StuckNotAtBasepoint(f"no energy-reducing slide from {d!r}")
    return best[2], best[0]


def balanced_ends(d: MarkedDiagram, profile: CancellationProfile | None = None) -> list[int]:
    profile = profile or cancellation_profile(d)
    out = []
    for j, w in enumerate(d.labels):
        n = len(w)
        if n % 2 == 0 and 2 * profile.left[j] == n and 2 * profile.right[j] == n:
            out.append(j)
    return out


def _length_reducing(d: MarkedDiagram, profile: CancellationProfile) -> Slide | None:
    n = d.size
    for j, w in enumerate(d.labels):
        if j > 0 and 2 * profile.left[j] > len(w):
            return Slide(j + 1, L)
        if j < n - 1 and 2 * profile.right[j] > len(w):
            return Slide(j + 1, R)
    return None


def guided_case(d: MarkedDiagram) -> tuple[str, Slide] | None:
    """The slide chosen by the case analysis, tagged with the case that fired.

    Cases are ``"length"``, ``"balanced"`` and ``"scan"``.  Returns None at
    the basepoint.
    """
    if is_basepoint(d):
        return None
    profile = cancellation_profile(d)
    s = _length_reducing(d, profile)
    if s is not None:
        return "length", s

    balanced = balanced_ends(d, profile)
    if balanced:
        j = balanced[0]
        w = d.labels[j]
        half = len(w) // 2
        p, q = w[:half], invert(w[half:])
        energy = d.base.energy
        return "balanced", Slide(j + 1, R if energy(p) < energy(q) else L)

    return "scan", scan_slide(cancellation_scheme(d), d.base.sigma)


def scan_slide(scheme: CancellationScheme, sigma: Word) -> Slide:
    """Right slide of the first end with a cancelled right part.

    Only valid once every surviving block is the single basepoint letter.
    """
    if any(kept != (x,) for kept, x in zip(scheme.kept, sigma)):
        empty = [j + 1 for j, kept in enumerate(scheme.kept) if not kept]
        raise GuidedInvariantViolated(
            f"no length-reducing slide and no balanced end, but surviving letters "
            f"are not the basepoint letters (empty at {empty})"
        )
    for j, r in enumerate(scheme.right):
        if r:
            return Slide(j + 1, R)
    raise StuckNotAtBasepoint("guided scan found no cancelled letters")


def find_slide_guided(d: MarkedDiagram) -> tuple[Slide, int] | None:
    chosen = guided_case(d)
    if chosen is None:
        return None
    case, s = chosen
    e = successor_energy(d, s)
    if e >= d.total_energy:
        raise GuidedInvariantViolated(f"{case} slide {s} does not reduce energy of {d!r}")
    return s, e


_FINDERS = {
    Strategy.EXHAUSTIVE: find_slide_exhaustive,
    Strategy.GUIDED: find_slide_guided,
}


# -- full algorithm ----------------------------------------------------------

@dataclass
class ReductionTrace:
    strategy: Strategy
    slides: list[SlideRecord] = field(default_factory=list)
    energies: list[int] = field(default_factory=list)

    def __len__(self):
        return len(self.slides)

    @property
    def initial_energy(self) -> int:
        return self.energies[0]

    @property
    def final_energy(self) -> int:
        return self.energies[-1]


def reduce_to_basepoint(
    d: MarkedDiagram,
    strategy: Strategy | str = Strategy.EXHAUSTIVE,
    max_steps: int | None = None,
) -> ReductionTrace:
    strategy = Strategy(strategy)
    finder = _FINDERS[strategy]
    trace = ReductionTrace(strategy, energies=[d.total_energy])
    while True:
        found = finder(d)
        if found is None:
            return trace
        if max_steps is not None and len(trace.slides) >= max_steps:
            raise StepLimitExceeded(f"no basepoint after {max_steps} slides")
        s, expected = found
        d, rec = slide_with_record(d, s)
        assert rec.energy_after == expected < trace.energies[-1]
        trace.slides.append(rec)
        trace.energies.append(rec.energy_after)


def reduction_states(d: MarkedDiagram, trace: ReductionTrace) -> list[MarkedDiagram]:
    """Every diagram visited by ``trace`` starting from ``d``."""
    states = [d]
    for rec in trace.slides:
        d, _ = slide_with_record(d, rec.slide)
        states.append(d)
    return states


# -- lemma-level runtime checks ----------------------------------------------

def has_length_reducing_slide(d: MarkedDiagram) -> bool:
    return _length_reducing(d, cancellation_profile(d)) is not None


def check_empty_kept_lemma(d: MarkedDiagram) -> bool:
    """If no slide shortens ``d`` and some surviving block is empty, an end is balanced."""
    if has_length_reducing_slide(d):
        return True
    scheme = cancellation_scheme(d)
    if all(scheme.kept):
        return True
    return bool(balanced_ends(d))


def check_kept_letters_lemma(d: MarkedDiagram) -> bool:
    """If no slide shortens ``d`` and no surviving block is empty, block j is sigma_j,
    neighbouring cancelled parts are mutually inverse, and an end equal to
    sigma_j is the only end containing that letter."""
    if has_length_reducing_slide(d):
        return True
    scheme = cancellation_scheme(d)
    if not all(scheme.kept):
        return True
    sigma = d.base.sigma
    if any(kept != (sigma[j],) for j, kept in enumerate(scheme.kept)):
        return False
    n = d.size
    if any(scheme.right[j] != invert(scheme.left[j + 1]) for j in range(n - 1)):
        return False
    for j, w in enumerate(d.labels):
        if w == (sigma[j],):
            if any(sigma[j] in other for k, other in enumerate(d.labels) if k != j):
                return False
    return True
