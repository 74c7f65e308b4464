import html
from typing import List, Sequence, Tuple, Dict

import pandas as pd

from ..exceptions import HSKDataException
from ..types import MapPoint, HighlightReport

MAP_WIDTH = 800
MAP_HEIGHT = 600
MAP_MARGIN = 20
MAP_PLOT_SIZE = 560
MARKER_SIZE = 4
LEGEND_X = 610
LEGEND_Y = 30
LEGEND_STEP = 20

PALETTE = [
    "#1f77b4", "#ff7f0e", "#2ca02c", "#d62728", "#9467bd",
    "#8c564b", "#e377c2", "#7f7f7f", "#bcbd22", "#17becf",
]
HIGHLIGHT_RGB = (255, 0, 0)


def class_colors(points: Sequence[MapPoint]) -> Dict[Tuple[str, str], str]:
    keys = sorted({(p.task, p.gold) for p in points})
    return {key: PALETTE[i % len(PALETTE)] for i, key in enumerate(keys)}


def _scale(points: Sequence[MapPoint]):
    xs = [p.x for p in points]
    ys = [p.y for p in points]
    xmin, ymin = min(xs), min(ys)
    xspan = (max(xs) - xmin) or 1.0
    yspan = (max(ys) - ymin) or 1.0
    scale = min(MAP_PLOT_SIZE / xspan, MAP_PLOT_SIZE / yspan)
    bottom = MAP_MARGIN + MAP_PLOT_SIZE

    def project(p: MapPoint) -> Tuple[float, float]:
        return MAP_MARGIN + (p.x - xmin) * scale, bottom - (p.y - ymin) * scale

    return project


def _marker(x: float, y: float, color: str, correct: bool) -> str:
    if correct:
        return f'<circle class="marker circle" cx="{x:.2f}" cy="{y:.2f}" r="{MARKER_SIZE}" ' \
               f'fill="{color}"/>'
    r = MARKER_SIZE
    d = f"M {x - r:.2f} {y - r:.2f} L {x + r:.2f} {y + r:.2f} " \
        f"M {x - r:.2f} {y + r:.2f} L {x + r:.2f} {y - r:.2f}"
    return f'<path class="marker cross" d="{d}" stroke="{color}" stroke-width="2" fill="none"/>'


def render_map(points: Sequence[MapPoint], fpath: str = None) -> str:
    """
    Standalone SVG scatter of the projected posts. Color encodes (task, gold label),
    circles mark correct predictions and crosses incorrect ones.
    """
    if not points:
        raise HSKDataException("Cannot render a map without points.")
    project = _scale(points)
    colors = class_colors(points)
    lines: List[str] = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{MAP_WIDTH}" '
        f'height="{MAP_HEIGHT}" viewBox="0 0 {MAP_WIDTH} {MAP_HEIGHT}">',
        f'<rect width="{MAP_WIDTH}" height="{MAP_HEIGHT}" fill="#ffffff"/>',
        '<g id="markers">',
    ]
    for p in points:
        x, y = project(p)
        lines.append(_marker(x, y, colors[(p.task, p.gold)], p.correct))
    lines.append('</g>')
    lines.append('<g id="legend">')
    for i, ((task, label), color) in enumerate(colors.items()):
        top = LEGEND_Y + LEGEND_STEP * i
        lines.append(f'<rect x="{LEGEND_X}" y="{top}" width="12" height="12" fill="{color}"/>')
        lines.append(f'<text x="{LEGEND_X + 20}" y="{top + 10}" font-family="sans-serif" '
                     f'font-size="12">{html.escape(task)}: {html.escape(label)}</text>')
    lines.append('</g>')
    lines.append('</svg>')
    svg = "\n".join(lines) + "\n"
    if fpath is not None:
        with open(fpath, "wt", encoding="utf-8") as fout:
            fout.write(svg)
    return svg


def render_highlight(report: HighlightReport, fpath: str = None) -> str:
    """
    Standalone HTML page, one span per token with a background opacity equal to its score.
    """
    r, g, b = HIGHLIGHT_RGB
    spans = [
        f'<span class="token" style="background-color: rgba({r},{g},{b},{score:.3f})" '
        f'title="{score:.3f}">{html.escape(token)}</span>'
        for token, score in zip(report.tokens, report.scores)
    ]
    lines = [
        '<!DOCTYPE html>',
        '<html>',
        '<head>',
        '<meta charset="utf-8">',
        f'<title>{html.escape(report.task)}</title>',
        '</head>',
        '<body style="font-family: sans-serif;">',
        f'<p>Task: <b>{html.escape(report.task)}</b> | '
        f'Predicted: <b>{html.escape(report.predicted)}</b> | '
        f'Gold: <b>{html.escape(report.gold or "n/a")}</b></p>',
        '<p>',
        *spans,
        '</p>',
        '</body>',
        '</html>',
    ]
    page = "\n".join(lines) + "\n"
    if fpath is not None:
        with open(fpath, "wt", encoding="utf-8") as fout:
            fout.write(page)
    return page


def write_coordinates(points: Sequence[MapPoint], fpath: str):
    rows = [[p.id, p.task, p.gold, p.predicted, repr(p.x), repr(p.y)] for p in points]
    pd.DataFrame(rows, columns=["id", "task", "gold", "pred", "x", "y"]).to_csv(
        fpath, index=False, lineterminator="\n")
