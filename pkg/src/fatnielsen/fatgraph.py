"""Bordered fatgraphs, boundary cycles and Whitehead moves.

A fatgraph is stored on half-edges: ``vertices[v]`` lists the half-edges at
``v`` in counter-clockwise cyclic order and ``opposite`` is the fixed-point
free involution pairing the two halves of each edge.  The oriented edge
leaving a vertex along half-edge ``h`` is identified with ``h``.
"""
from __future__ import annotations

import json
from collections import deque
from collections.abc import Sequence
from dataclasses import dataclass, field

from .errors import InvalidMove, LoopEdge, ParseError, TailEdge


@dataclass(frozen=True)
class Fatgraph:
    vertices: tuple[tuple[int, ...], ...]
    opposite: tuple[int, ...]
    tail: int | None = None  # half-edge of the tail at the univalent vertex
    vertex_of: tuple[int, ...] = field(init=False, repr=False, compare=False)
    succ: tuple[int, ...] = field(init=False, repr=False, compare=False)

    def __post_init__(self):
        n = len(self.opposite)
        vertex_of = [-1] * n
        succ = [-1] * n
        for v, cyc in enumerate(self.vertices):
            for k, h in enumerate(cyc):
                if not 0 <= h < n or vertex_of[h] != -1:
                    raise ValueError(f"half-edge {h} is out of range or appears twice")
                vertex_of[h] = v
                succ[h] = cyc[(k + 1) % len(cyc)]
        if -1 in vertex_of:
            raise ValueError(f"half-edge {vertex_of.index(-1)} belongs to no vertex")
        for h, o in enumerate(self.opposite):
            if o == h or self.opposite[o] != h:
                raise ValueError(f"opposite is not an involution at {h}")
        if self.tail is not None and len(self.vertices[vertex_of[self.tail]]) != 1:
            raise ValueError("tail half-edge must sit at a univalent vertex")
        object.__setattr__(self, "vertex_of", tuple(vertex_of))
        object.__setattr__(self, "succ", tuple(succ))

    @property
    def num_vertices(self) -> int:
        return len(self.vertices)

    @property
    def num_edges(self) -> int:
        return len(self.opposite) // 2

    def edges(self) -> list[int]:
        """Edge ids: the smaller half-edge of each edge."""
        return [h for h, o in enumerate(self.opposite) if h < o]

    def edge_id(self, h: int) -> int:
        return min(h, self.opposite[h])

    def valence(self, v: int) -> int:
        return len(self.vertices[v])

    def is_bordered(self) -> bool:
        vals = sorted(len(c) for c in self.vertices)
        return (self.tail is not None and vals[0] == 1 and all(x == 3 for x in vals[1:])
                and len(boundary_cycles(self)) == 1)

    # -- file format ---------------------------------------------------------

    def to_record(self) -> dict:
        return {
            "vertices": [list(c) for c in self.vertices],
            "edges": [[h, self.opposite[h]] for h in self.edges()],
            "tail": self.tail,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_record(), sort_keys=True) + "\n"

    @classmethod
    def from_record(cls, rec) -> Fatgraph:
        try:
            vertices = tuple(tuple(int(h) for h in c) for c in rec["vertices"])
            n = sum(len(c) for c in vertices)
            opposite = [-1] * n
            for a, b in rec["edges"]:
                opposite[a], opposite[b] = b, a
            tail = rec.get("tail")
            return cls(vertices, tuple(opposite), None if tail is None else int(tail))
        except (KeyError, TypeError, ValueError, IndexError) as exc:
            raise ParseError(f"malformed fatgraph record: {exc}") from None


def boundary_cycles(f: Fatgraph) -> list[list[int]]:
    """Orbits of ``h -> succ(opposite(h))``: arriving along an edge, leave by
    the next half-edge in the cyclic order at the arrival vertex."""
    seen = [False] * len(f.opposite)
    out = []
    for start in range(len(f.opposite)):
        if seen[start]:
            continue
        cyc = []
        h = start
        while not seen[h]:
            seen[h] = True
            cyc.append(h)
            h = f.succ[f.opposite[h]]
        out.append(cyc)
    return out


def genus(f: Fatgraph) -> int:
    b = len(boundary_cycles(f))
    twice = 2 - b - f.num_vertices + f.num_edges
    if twice % 2 or twice < 0:
        raise ValueError("fatgraph is not connected")
    return twice // 2


def is_connected(f: Fatgraph) -> bool:
    if not f.vertices:
        return True
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for h in f.vertices[v]:
            w = f.vertex_of[f.opposite[h]]
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == f.num_vertices


# -- linear chord diagrams ---------------------------------------------------
#
# Position p (1-indexed, p < n) becomes a trivalent vertex with half-edges
# W(p)=3p-2 (core, west), C(p)=3p-1 (chord) and E(p)=3p (core, east), cyclic
# order (E, C, W).  Half-edge 0 is the tail at the univalent vertex.  The end
# at position n would be bivalent, so the last core segment runs straight
# into the chord of n's partner.

def _west(p: int) -> int:
    return 3 * p - 2


def _chord(p: int) -> int:
    return 3 * p - 1


def _east(p: int) -> int:
    return 3 * p


def from_shape(partner: Sequence[int]) -> Fatgraph:
    n = len(partner)
    opp = [-1] * (3 * n - 2)

    def pair(a, b):
        opp[a], opp[b] = b, a

    pair(0, _west(1))
    for p in range(1, n - 1):
        pair(_east(p), _west(p + 1))
    for p in range(1, n):
        q = partner[p - 1] + 1
        if q == n:
            pair(_chord(p), _east(n - 1))
        elif p < q:
            pair(_chord(p), _chord(q))
    vertices = ((0,),) + tuple((_east(p), _chord(p), _west(p)) for p in range(1, n))
    return Fatgraph(vertices, tuple(opp), tail=0)


def from_diagram(d) -> Fatgraph:
    """Bordered fatgraph of a marked diagram (labels are not carried over)."""
    return from_shape(d.partner)


# -- Whitehead moves ---------------------------------------------------------

@dataclass(frozen=True)
class WhiteheadMove:
    edge: int  # smaller half-edge id of the collapsed edge


def whitehead_move(f: Fatgraph, m: WhiteheadMove) -> Fatgraph:
    """Collapse ``m.edge`` and re-expand the 4-valent vertex the other way.

    With ``(h, a, b)`` and ``(h', c, d)`` the two endpoints, the collapsed
    vertex reads ``(a, b, c, d)``; the new endpoints are ``(h, b, c)`` and
    ``(h', d, a)``.  Half-edge ids are preserved, so the same edge id undoes
    the move up to swapping ``h`` and ``h'``.
    """
    h = m.edge
    if not 0 <= h < len(f.opposite):
        raise InvalidMove(f"no half-edge {h}")
    h2 = f.opposite[h]
    if f.tail is not None and f.edge_id(f.tail) == f.edge_id(h):
        raise TailEdge("cannot collapse the tail")
    v, w = f.vertex_of[h], f.vertex_of[h2]
    if v == w:
        raise LoopEdge(f"edge {h} is a loop")
    if f.valence(v) != 3 or f.valence(w) != 3:
        raise InvalidMove(f"edge {h} does not join two trivalent vertices")
    a = f.succ[h]
    b = f.succ[a]
    c = f.succ[h2]
    d = f.succ[c]
    vertices = list(f.vertices)
    vertices[v] = (h, b, c)
    vertices[w] = (h2, d, a)
    return Fatgraph(tuple(vertices), f.opposite, f.tail)


def whitehead_edges(f: Fatgraph) -> list[WhiteheadMove]:
    """Every edge on which a Whitehead move is defined."""
    out = []
    for e in f.edges():
        v, w = f.vertex_of[e], f.vertex_of[f.opposite[e]]
        if v == w or f.valence(v) != 3 or f.valence(w) != 3:
            continue
        if f.tail is not None and f.edge_id(f.tail) == e:
            continue
        out.append(WhiteheadMove(e))
    return out


# -- isomorphism of fatgraphs with a tail ------------------------------------

def _canonical_labelling(f: Fatgraph) -> dict[int, int]:
    """Number half-edges by a traversal that starts at the tail.

    Rooted fatgraphs have no nontrivial automorphisms, so this numbering is
    canonical.
    """
    if f.tail is None:
        raise ValueError("canonical labelling needs a tail")
    label = {f.tail: 0}
    queue = deque([f.tail])
    while queue:
        h = queue.popleft()
        for x in (f.succ[h], f.opposite[h]):
            if x not in label:
                label[x] = len(label)
                queue.append(x)
    return label


def canonical_form(f: Fatgraph) -> tuple[tuple[int, int], ...]:
    label = _canonical_labelling(f)
    inv = sorted(label, key=label.__getitem__)
    return tuple((label[f.opposite[h]], label[f.succ[h]]) for h in inv)


def isomorphism(f: Fatgraph, g: Fatgraph) -> dict[int, int] | None:
    """Half-edge bijection f -> g respecting tails, pairing and cyclic orders."""
    if len(f.opposite) != len(g.opposite) or f.num_vertices != g.num_vertices:
        return None
    if canonical_form(f) != canonical_form(g):
        return None
    lf, lg = _canonical_labelling(f), _canonical_labelling(g)
    if len(lf) != len(f.opposite):
        return None
    back = {k: h for h, k in lg.items()}
    return {h: back[k] for h, k in lf.items()}


# -- chord slides as pairs of Whitehead moves --------------------------------

@dataclass(frozen=True)
class SlideDecomposition:
    """Whitehead moves realising one chord slide.

    ``second`` is None when the slide touches the smoothed rightmost end:
    one of the two moves then happens at the bivalent vertex that the
    bordered fatgraph does not have, and a single move remains.
    """

    first: WhiteheadMove
    second: WhiteheadMove | None
    isomorphism: dict[int, int]  # result of the moves -> from_diagram(successor)

    @property
    def moves(self) -> tuple[WhiteheadMove, ...]:
        return (self.first,) if self.second is None else (self.first, self.second)


def apply_moves(f: Fatgraph, moves) -> Fatgraph:
    for m in moves:
        f = whitehead_move(f, m)
    return f


def _edge_at(f: Fatgraph, n: int, p: int, kind: str) -> int | None:
    """Edge id of the core-east or chord half-edge at 1-indexed position p."""
    if p >= n:
        return None
    h = _east(p) if kind == "east" else _chord(p)
    return f.edge_id(h)


def _candidate_pairs(f: Fatgraph, n: int, j: int, near: int) -> list[tuple[int, int]]:
    core = _edge_at(f, n, min(j, near), "east")
    cands = []
    for e2 in (_edge_at(f, n, near, "chord"), _edge_at(f, n, j, "chord")):
        if core is not None and e2 is not None and e2 != core:
            cands.append((core, e2))
    return cands


def slide_to_whitehead_pair(d, s) -> SlideDecomposition:
    """Two Whitehead moves taking ``from_diagram(d)`` to ``from_diagram(apply_slide(d, s))``.

    First tries the core edge between the slid and near ends followed by the
    near end's chord.  Slides touching the smoothed last end need other
    edges or only one move; those are found by searching against the target.
    """
    from .slides import slide_shape

    f = from_shape(d.partner)
    target_shape, _ = slide_shape(d.partner, s)
    target = from_shape(target_shape)
    want = canonical_form(target)
    n = len(d.partner)
    j = s.position
    near = j + s.direction.step

    def attempt(*edges: int) -> SlideDecomposition | None:
        moves = [WhiteheadMove(e) for e in edges]
        try:
            out = apply_moves(f, moves)
        except (InvalidMove, LoopEdge, TailEdge):
            return None
        if canonical_form(out) != want:
            return None
        second = moves[1] if len(moves) == 2 else None
        return SlideDecomposition(moves[0], second, isomorphism(out, target))

    for e1, e2 in _candidate_pairs(f, n, j, near):
        found = attempt(e1, e2)
        if found:
            return found
    for m1 in whitehead_edges(f):
        mid = whitehead_move(f, m1)
        for m2 in whitehead_edges(mid):
            found = attempt(m1.edge, m2.edge)
            if found:
                return found
    for m1 in whitehead_edges(f):
        found = attempt(m1.edge)
        if found:
            return found
    raise InvalidMove(f"no pair of Whitehead moves realises slide {s}")
