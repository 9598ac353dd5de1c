"""Independent oracles and random-state generators shared by the tests.

The oracles deliberately take a different route from the library code:
pair deletion instead of a stack, explicit positional sums instead of
string parsing, full rebuilds instead of incremental updates.
"""
from __future__ import annotations

import random

from fatnielsen.diagram import MarkedDiagram, is_basepoint
from fatnielsen.factor import random_walk
from fatnielsen.freegroup import Basepoint
from fatnielsen.slides import apply_slide, enumerate_slides

# criterion number -> (passed, one-line detail); printed at the end of the run
ACCEPTANCE: dict[int, tuple[bool, str]] = {}


def reduce_by_deletion(letters) -> tuple[int, ...]:
    """Delete the first adjacent inverse pair until none is left."""
    w = list(letters)
    changed = True
    while changed:
        changed = False
        for i in range(len(w) - 1):
            if w[i] == -w[i + 1]:
                del w[i:i + 2]
                changed = True
                break
    return tuple(w)


def energy_oracle(w, base: Basepoint) -> int:
    """Sum of digit * radix**place with the last letter in place 0."""
    radix = 4 * base.genus + 1
    n = len(w)
    return sum((base.sigma.index(x) + 1) * radix ** (n - 1 - i) for i, x in enumerate(w))


def cancellation_oracle(u, v) -> int:
    return (len(u) + len(v) - len(reduce_by_deletion(u + v))) // 2


def random_reduced_word(rng: random.Random, genus: int, max_len: int, min_len: int = 0) -> tuple[int, ...]:
    n = rng.randint(min_len, max_len)
    letters = [x for x in range(-2 * genus, 2 * genus + 1) if x]
    w: list[int] = []
    while len(w) < n:
        x = rng.choice(letters)
        if w and w[-1] == -x:
            continue
        w.append(x)
    return tuple(w)


def random_states(genus: int, count: int, seed: int, max_walk: int = 30,
                  skip_basepoint: bool = True) -> list[MarkedDiagram]:
    """Diagrams reached by seeded random slide walks from the basepoint."""
    rng = random.Random(f"states:{genus}:{seed}")
    base = Basepoint.standard(genus)
    out = []
    while len(out) < count:
        d = random_walk(base, rng.randint(1, max_walk), rng)
        if skip_basepoint and is_basepoint(d):
            continue
        out.append(d)
    return out


def best_successor_by_rebuild(d: MarkedDiagram):
    """Minimum-energy successor found by applying every slide in full."""
    best = None
    for s in enumerate_slides(d):
        e = apply_slide(d, s).total_energy
        if best is None or (e, s.sort_key) < (best[0], best[1].sort_key):
            best = (e, s)
    return best
