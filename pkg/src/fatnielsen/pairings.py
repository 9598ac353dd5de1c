"""Perfect matchings on the points of a linear chord diagram.

A pairing (or *shape*) on ``n`` points is stored as a tuple ``partner`` with
``partner[i]`` the 0-indexed position paired with ``i``.  The boundary count
here treats the core plus its tail as one backbone circle, so faces are the
cycles of ``i -> partner[i] + 1 (mod n)``.  The fatgraph module counts the
same thing by tracing half-edges; the two are kept independent on purpose.
"""
from __future__ import annotations

from collections.abc import Iterator, Sequence

Shape = tuple[int, ...]


def is_perfect_matching(partner: Sequence[int]) -> bool:
    n = len(partner)
    if n % 2:
        return False
    for i, p in enumerate(partner):
        if not 0 <= p < n or p == i or partner[p] != i:
            return False
    return True


def shape_from_pairs(pairs: Sequence[Sequence[int]], n: int) -> Shape:
    """Build a partner tuple from 1-indexed position pairs."""
    partner = [-1] * n
    for pair in pairs:
        if len(pair) != 2:
            raise ValueError(f"chord {pair!r} does not have two ends")
        i, j = pair[0] - 1, pair[1] - 1
        for k in (i, j):
            if not 0 <= k < n:
                raise ValueError(f"position {k + 1} outside 1..{n}")
            if partner[k] != -1:
                raise ValueError(f"position {k + 1} used twice")
        if i == j:
            raise ValueError(f"position {i + 1} paired with itself")
        partner[i], partner[j] = j, i
    if -1 in partner:
        raise ValueError(f"position {partner.index(-1) + 1} is not paired")
    return tuple(partner)


def shape_pairs(partner: Sequence[int]) -> list[tuple[int, int]]:
    """1-indexed ``(left, right)`` pairs sorted by left end."""
    return [(i + 1, p + 1) for i, p in enumerate(partner) if i < p]


def boundary_count(partner: Sequence[int]) -> int:
    n = len(partner)
    seen = [False] * n
    cycles = 0
    for start in range(n):
        if seen[start]:
            continue
        cycles += 1
        i = start
        while not seen[i]:
            seen[i] = True
            i = (partner[i] + 1) % n
    return cycles


def genus_of(partner: Sequence[int]) -> int:
    """Genus of the bordered surface thickening the diagram."""
    chords = len(partner) // 2
    return (chords + 1 - boundary_count(partner)) // 2


def has_adjacent_partners(partner: Sequence[int]) -> bool:
    return any(abs(p - i) == 1 for i, p in enumerate(partner))


def all_pairings(n: int) -> Iterator[Shape]:
    """Every perfect matching of ``n`` points, (n-1)!! of them."""
    if n % 2:
        return
    partner = [-1] * n

    def rec() -> Iterator[Shape]:
        try:
            i = partner.index(-1)
        except ValueError:
            yield tuple(partner)
            return
        for j in range(i + 1, n):
            if partner[j] == -1:
                partner[i], partner[j] = j, i
                yield from rec()
                partner[i] = partner[j] = -1

    yield from rec()


def double_factorial(k: int) -> int:
    out = 1
    while k > 1:
        out *= k
        k -= 2
    return out
