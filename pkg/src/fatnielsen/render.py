"""Pictures of marked diagrams: hand-written SVG and plain ASCII.

The core is a horizontal line with the ends at equal spacing, chords are
semicircles above it and labels sit below their ends.  All layout constants
live in :class:`Layout` so that output is reproducible byte for byte.
"""
from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass
from xml.sax.saxutils import escape

from .diagram import MarkedDiagram


@dataclass(frozen=True)
class Layout:
    spacing: int = 60
    margin: int = 40
    label_gap: int = 18
    caption_gap: int = 22
    line_height: int = 14
    font_size: int = 12
    stroke: str = "#222"
    chord_stroke: str = "#1f5fa8"


DEFAULT_LAYOUT = Layout()


def _frame_height(d: MarkedDiagram, lay: Layout) -> tuple[int, int]:
    """Height of one frame and the y coordinate of its core line."""
    widest = max(r - l for l, r in d.pairs())
    radius = widest * lay.spacing // 2
    core_y = lay.caption_gap + radius + 10
    return core_y + lay.label_gap + lay.line_height + 10, core_y


def _frame(d: MarkedDiagram, lay: Layout, top: int, caption: str | None) -> list[str]:
    height, core_y = _frame_height(d, lay)
    y = top + core_y
    n = d.size
    xs = [lay.margin + i * lay.spacing for i in range(n)]
    out = []
    if caption is not None:
        out.append(f'<text x="{lay.margin}" y="{top + lay.caption_gap - 8}" font-size="{lay.font_size}">'
                   f"{escape(caption)}</text>")
    out.append(f'<line x1="{xs[0] - lay.margin // 2}" y1="{y}" x2="{xs[-1] + lay.margin // 2}" y2="{y}" '
               f'stroke="{lay.stroke}" stroke-width="2"/>')
    for l, r in d.pairs():
        x1, x2 = xs[l - 1], xs[r - 1]
        rad = (x2 - x1) // 2
        out.append(f'<path d="M {x1} {y} A {rad} {rad} 0 0 1 {x2} {y}" fill="none" '
                   f'stroke="{lay.chord_stroke}" stroke-width="1.5"/>')
    for x, label in zip(xs, d.format_labels()):
        out.append(f'<circle cx="{x}" cy="{y}" r="3" fill="{lay.stroke}"/>')
        out.append(f'<text x="{x}" y="{y + lay.label_gap}" font-size="{lay.font_size}" '
                   f'text-anchor="middle">{escape(label)}</text>')
    return out


def svg(frames: Sequence[MarkedDiagram], captions: Sequence[str] | None = None,
        layout: Layout = DEFAULT_LAYOUT) -> str:
    """One SVG document with the frames stacked top to bottom."""
    if not frames:
        raise ValueError("nothing to render")
    width = 2 * layout.margin + (max(d.size for d in frames) - 1) * layout.spacing
    body = []
    top = 0
    for k, d in enumerate(frames):
        body += _frame(d, layout, top, captions[k] if captions else None)
        top += _frame_height(d, layout)[0]
    head = (f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{top}" '
            f'viewBox="0 0 {width} {top}" font-family="monospace">')
    return "\n".join([head, *body, "</svg>"]) + "\n"


def ascii_art(d: MarkedDiagram, spacing: int = 4) -> str:
    """Chords as bars above the core, longest on top; labels listed below.

    A ``|`` passing through another chord's bar marks a crossing.
    """
    chords = sorted(d.pairs(), key=lambda p: (p[1] - p[0], p[0]))
    row_of = {}
    for row, (l, r) in enumerate(reversed(chords)):
        row_of[l] = row_of[r] = row
    cols = [i * spacing for i in range(d.size)]
    width = cols[-1] + 1
    lines = []
    for row, (l, r) in enumerate(reversed(chords)):
        cells = [" "] * width
        for c in range(cols[l - 1], cols[r - 1] + 1):
            cells[c] = "-"
        for p in range(1, d.size + 1):
            if p in (l, r):
                cells[cols[p - 1]] = "+"
            elif row_of[p] < row:
                cells[cols[p - 1]] = "|"
        lines.append("".join(cells).rstrip())
    core = ["="] * width
    for c in cols:
        core[c] = "o"
    lines.append("".join(core))
    numbers = [" "] * (width + 4)
    for p, c in enumerate(cols, 1):
        for k, ch in enumerate(str(p)):
            numbers[c + k] = ch
    lines.append("".join(numbers).rstrip())
    for p, label in enumerate(d.format_labels(), 1):
        lines.append(f"{p:>3}: {label}")
    return "\n".join(lines) + "\n"


def ascii_frames(frames: Sequence[MarkedDiagram], captions: Sequence[str] | None = None) -> str:
    parts = []
    for k, d in enumerate(frames):
        head = f"# {captions[k]}\n" if captions else ""
        parts.append(head + ascii_art(d))
    return "\n".join(parts)
