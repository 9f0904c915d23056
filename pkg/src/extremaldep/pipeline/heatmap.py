"""Upper-triangular SVG heatmap of a dependence matrix, grouped by sector."""
from __future__ import annotations

from itertools import groupby
from xml.sax.saxutils import escape

import numpy as np

from .matrix import DependenceMatrix

# independence, weak, strong, full
CLASS_COLORS = (
    (255, 255, 255),
    (140, 140, 140),
    (242, 197, 31),
    (31, 78, 201),
)
WHITE = np.array(CLASS_COLORS[0], dtype=np.float64)

CELL = 16
LABEL = 110
PAD = 10
LEGEND = 28


class MetadataError(KeyError):
    pass


def cell_rgb(weights) -> tuple[int, int, int]:
    """Colour of one cell from its class weights.

    The hue is the weighted average of the three dependence colours; it is
    then mixed with white so that saturation equals the largest dependence
    weight. Independence contributes only whiteness.
    """
    w = np.asarray(weights, dtype=np.float64)
    dep = w[1:]
    s = float(dep.max())
    if s <= 0:
        return CLASS_COLORS[0]
    hue = (dep[:, None] * np.array(CLASS_COLORS[1:], dtype=np.float64)).sum(axis=0) / dep.sum()
    rgb = WHITE + s * (hue - WHITE)
    return tuple(int(v) for v in np.floor(rgb + 0.5))


def hex_color(rgb) -> str:
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def ordered_assets(assets, grouping) -> list[str]:
    missing = [a for a in assets if a not in grouping]
    if missing:
        raise MetadataError(f"no market/sector for {', '.join(sorted(missing))}")
    return sorted(assets, key=lambda a: (grouping[a][0], grouping[a][1], a))


def render_heatmap(matrix: DependenceMatrix, grouping: dict, title: str = "") -> str:
    """SVG text for the matrix; assets ordered by (market, sector, id).

    Only cells above the diagonal are drawn. Unclassified pairs are hatched.
    Sector boundaries are ruled thin, market boundaries thick.
    """
    order = ordered_assets(matrix.assets, grouping)
    n = len(order)
    top = PAD + LABEL + (24 if title else 0)
    left = PAD + LABEL
    grid = n * CELL
    width = left + grid + PAD
    height = top + grid + PAD + LEGEND + PAD

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="sans-serif" font-size="10">',
        "<defs>",
        '<pattern id="hatch" patternUnits="userSpaceOnUse" width="4" height="4">'
        '<rect width="4" height="4" fill="#ffffff"/>'
        '<path d="M0,4 L4,0" stroke="#b03030" stroke-width="1"/></pattern>',
        "</defs>",
        f'<rect x="0" y="0" width="{width}" height="{height}" fill="#ffffff"/>',
    ]
    if title:
        out.append(f'<text x="{left}" y="{PAD + 14}" font-size="13">{escape(title)}</text>')

    for i, a in enumerate(order):
        y = top + i * CELL + CELL - 4
        out.append(f'<text x="{left - 4}" y="{y}" text-anchor="end">{escape(a)}</text>')
        x = left + i * CELL + CELL - 4
        out.append(f'<text x="{x}" y="{top - 4}" transform="rotate(-90 {x} {top - 4})">{escape(a)}</text>')

    for i in range(n):
        for j in range(i + 1, n):
            res = matrix.get(order[i], order[j])
            x, y = left + j * CELL, top + i * CELL
            if res is None:
                continue
            if res.status != "ok":
                fill = "url(#hatch)"
            else:
                fill = hex_color(cell_rgb(res.weights))
            out.append(
                f'<rect x="{x}" y="{y}" width="{CELL}" height="{CELL}" fill="{fill}" '
                f'stroke="#dddddd" stroke-width="0.5"><title>{escape(order[i])} / {escape(order[j])}</title></rect>'
            )

    # group rules
    pos = 0
    for (market, sector), members in groupby(order, key=lambda a: grouping[a]):
        pos += len(list(members))
        if pos >= n:
            break
        nxt = grouping[order[pos]]
        stroke = 2 if nxt[0] != market else 1
        c = pos * CELL
        out.append(f'<line x1="{left + c}" y1="{top}" x2="{left + c}" y2="{top + grid}" stroke="#000000" stroke-width="{stroke}"/>')
        out.append(f'<line x1="{left}" y1="{top + c}" x2="{left + grid}" y2="{top + c}" stroke="#000000" stroke-width="{stroke}"/>')
    out.append(f'<rect x="{left}" y="{top}" width="{grid}" height="{grid}" fill="none" stroke="#000000" stroke-width="1"/>')

    ly = top + grid + PAD
    entries = [("full", hex_color(CLASS_COLORS[3])), ("strong", hex_color(CLASS_COLORS[2])),
               ("weak", hex_color(CLASS_COLORS[1])), ("independence", "#ffffff"),
               ("unclassified", "url(#hatch)")]
    lx = PAD
    for name, fill in entries:
        out.append(f'<rect x="{lx}" y="{ly}" width="12" height="12" fill="{fill}" stroke="#888888" stroke-width="0.5"/>')
        out.append(f'<text x="{lx + 16}" y="{ly + 10}">{name}</text>')
        lx += 16 + 7 * len(name) + 12
    out.append("</svg>")
    return "\n".join(out) + "\n"
