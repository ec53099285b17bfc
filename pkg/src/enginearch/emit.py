"""Text renderers for every artifact the tool writes, plus readers for the
ones a later pipeline stage consumes.

All renderers are pure: same input, same bytes. SVG is written by hand.
"""

from __future__ import annotations

import csv
import io
import math
import re
from pathlib import Path

import numpy as np

from .aggregate import CouplingMatrix, EmergentArchitecture
from .metrics import MetricsReport, SubsystemGraph, canonical_sorted
from .resolver import FileGraph
from .subsystems import CODES


def write_text(path, text: str) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)
    return path


def _csv(rows, header) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue()


def _fmt(x: float) -> str:
    return f"{x:.6f}"


# -- DOT -------------------------------------------------------------------

def _q(s: str) -> str:
    return '"' + s.replace('"', '\\"') + '"'


def file_graph_dot(graph: FileGraph) -> str:
    lines = ["digraph G {"]
    lines += [f"{_q(s)} -> {_q(t)};" for s, t in sorted(graph.edges)]
    lines.append("}")
    return "\n".join(lines) + "\n"


def subsystem_graph_dot(graph: SubsystemGraph) -> str:
    """Node statements first (canonical order), then weighted edges."""
    lines = ["digraph G {"]
    lines += [f"{_q(n)};" for n in graph.nodes]
    lines += [f'{_q(a)} -> {_q(b)} [label="{w}"];' for (a, b), w in graph.edges.items()]
    lines.append("}")
    return "\n".join(lines) + "\n"


def emit_dot(graph, out) -> Path:
    if isinstance(graph, SubsystemGraph):
        return write_text(out, subsystem_graph_dot(graph))
    return write_text(out, file_graph_dot(graph))


_QSTR = r'"((?:[^"\\]|\\.)*)"'
_NODE_LINE = re.compile(rf"^\s*{_QSTR}\s*;\s*$")
_EDGE_LINE = re.compile(rf'^\s*{_QSTR}\s*->\s*{_QSTR}\s*(?:\[\s*label\s*=\s*"(\d+)"\s*\])?\s*;\s*$')


def _unq(s: str) -> str:
    return s.replace('\\"', '"')


def parse_dot(text: str):
    """Read back a DOT file written by this module.

    Returns ``(nodes, edges)`` where edges maps (source, target) to the
    label weight (1 when unlabelled). Only the subset of DOT emitted here
    is understood.
    """
    lines = text.strip().splitlines()
    if not lines or not re.match(r"^\s*digraph\s+\w*\s*\{\s*$", lines[0]) or lines[-1].strip() != "}":
        raise ValueError("not a digraph written by enginearch")
    nodes, edges = [], {}
    for lineno, line in enumerate(lines[1:-1], start=2):
        if not line.strip():
            continue
        m = _EDGE_LINE.match(line)
        if m:
            a, b = _unq(m.group(1)), _unq(m.group(2))
            edges[(a, b)] = int(m.group(3)) if m.group(3) else 1
            continue
        m = _NODE_LINE.match(line)
        if m:
            nodes.append(_unq(m.group(1)))
            continue
        raise ValueError(f"line {lineno}: unrecognised DOT statement {line!r}")
    return nodes, edges


def read_subsystem_graph(path, engine: str) -> SubsystemGraph:
    nodes, edges = parse_dot(Path(path).read_text(encoding="utf-8"))
    return SubsystemGraph(engine, nodes, edges)


# -- CSV reports -----------------------------------------------------------

def unresolved_csv(unresolved) -> str:
    rows = sorted((u.including_file, u.directive_text, u.reason.value) for u in unresolved)
    return _csv(rows, ["including_file", "directive", "reason"])


def ambiguity_csv(ambiguities) -> str:
    rows = sorted(
        (a.including_file, a.directive_text, a.chosen or "", ";".join(a.candidates)) for a in ambiguities
    )
    return _csv(rows, ["including_file", "directive", "chosen", "candidates"])


def metrics_csv(report: MetricsReport, codes) -> str:
    rows = [
        (c, report.in_degree[c], report.out_degree[c], _fmt(report.betweenness[c])) for c in canonical_sorted(codes)
    ]
    return _csv(rows, ["subsystem", "in_degree", "out_degree", "betweenness"])


def heatmap_csv(matrix: CouplingMatrix) -> str:
    rows = [[code, *(int(v) for v in row)] for code, row in zip(CODES, matrix.counts)]
    return _csv(rows, ["", *CODES])


def read_heatmap_csv(text: str) -> np.ndarray:
    rows = list(csv.reader(io.StringIO(text)))
    if rows[0][1:] != list(CODES) or [r[0] for r in rows[1:]] != list(CODES):
        raise ValueError("heatmap CSV headers are not the canonical subsystem codes")
    return np.array([[int(v) for v in r[1:]] for r in rows[1:]], dtype=np.int64)


def pairs_csv(pairs) -> str:
    rows = [(p.source, p.target, p.count, _fmt(p.centrality_sum)) for p in pairs]
    return _csv(rows, ["source", "target", "count", "centrality_sum"])


def architecture_text(arch: EmergentArchitecture) -> str:
    lines = [
        f"inner_core: {' '.join(arch.inner_core)}",
        f"outer_core: {' '.join(arch.outer_core)}",
        f"periphery: {' '.join(arch.periphery)}",
        "edges:",
    ]
    lines += [f"  {p.source} -> {p.target} count={p.count} centrality_sum={_fmt(p.centrality_sum)}"
              for p in arch.edges]
    return "\n".join(lines) + "\n"


# -- SVG -------------------------------------------------------------------

HEAT_LOW = (255, 255, 255)
HEAT_HIGH = (103, 0, 13)
CELL = 36
HEAT_MARGIN = 64


def heat_color(count: int, n_engines: int) -> str:
    """Linear white -> dark red ramp over [0, n_engines]."""
    f = 0.0 if n_engines <= 0 else min(max(count / n_engines, 0.0), 1.0)
    rgb = (round(lo + (hi - lo) * f) for lo, hi in zip(HEAT_LOW, HEAT_HIGH))
    return "#{:02x}{:02x}{:02x}".format(*rgb)


def heatmap_svg(matrix: CouplingMatrix) -> str:
    n = len(CODES)
    size = HEAT_MARGIN + n * CELL + 8
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{size}" height="{size}" '
        f'viewBox="0 0 {size} {size}" font-family="sans-serif" font-size="11">',
        f'<rect class="background" x="0" y="0" width="{size}" height="{size}" fill="#ffffff"/>',
        f'<text x="{HEAT_MARGIN}" y="14" font-size="12">'
        f'coupling counts over {matrix.n_engines} engines (row includes column)</text>',
    ]
    for j, code in enumerate(CODES):
        x = HEAT_MARGIN + j * CELL + CELL / 2
        out.append(f'<text class="col-label" x="{x:.1f}" y="{HEAT_MARGIN - 8}" text-anchor="middle">{code}</text>')
    for i, code in enumerate(CODES):
        y = HEAT_MARGIN + i * CELL + CELL / 2 + 4
        out.append(f'<text class="row-label" x="{HEAT_MARGIN - 8}" y="{y:.1f}" text-anchor="end">{code}</text>')
    for i, src in enumerate(CODES):
        for j, dst in enumerate(CODES):
            count = int(matrix.counts[i, j])
            x, y = HEAT_MARGIN + j * CELL, HEAT_MARGIN + i * CELL
            dark = matrix.n_engines > 0 and count / matrix.n_engines > 0.5
            out.append(
                f'<rect class="cell" data-source="{src}" data-target="{dst}" x="{x}" y="{y}" '
                f'width="{CELL}" height="{CELL}" fill="{heat_color(count, matrix.n_engines)}" '
                f'stroke="#cccccc" stroke-width="0.5"/>'
            )
            out.append(
                f'<text x="{x + CELL / 2:.1f}" y="{y + CELL / 2 + 4:.1f}" text-anchor="middle" '
                f'fill="{"#ffffff" if dark else "#000000"}">{count}</text>'
            )
    out.append("</svg>")
    return "\n".join(out) + "\n"


ARCH_SIZE = 640
NODE_R = 22
# (zone radius, node ring radius, fill) per tier
TIERS = {
    "inner_core": (95, 50, "#a50f15"),
    "outer_core": (195, 145, "#fcae91"),
    "periphery": (300, 250, "#ffffff"),
}


def architecture_positions(arch: EmergentArchitecture) -> dict[str, tuple[float, float]]:
    """Evenly spaced ring positions, starting at 12 o'clock, clockwise.

    Inner-core nodes keep their centrality rank order; the other rings
    follow canonical code order. A lone inner-core node sits at the centre.
    """
    c = ARCH_SIZE / 2
    pos = {}
    for tier, codes in (("inner_core", arch.inner_core), ("outer_core", arch.outer_core),
                        ("periphery", arch.periphery)):
        _, ring, _ = TIERS[tier]
        k = len(codes)
        for i, code in enumerate(codes):
            if tier == "inner_core" and k == 1:
                pos[code] = (c, c)
                continue
            theta = -math.pi / 2 + 2 * math.pi * i / k
            pos[code] = (round(c + ring * math.cos(theta), 2), round(c + ring * math.sin(theta), 2))
    return pos


def architecture_svg(arch: EmergentArchitecture) -> str:
    c = ARCH_SIZE / 2
    pos = architecture_positions(arch)
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{ARCH_SIZE}" height="{ARCH_SIZE}" '
        f'viewBox="0 0 {ARCH_SIZE} {ARCH_SIZE}" font-family="sans-serif" font-size="12">',
        "<defs>",
        '<marker id="arrow" viewBox="0 0 10 10" refX="10" refY="5" markerWidth="7" markerHeight="7" '
        'orient="auto-start-reverse"><path d="M 0 0 L 10 5 L 0 10 z" fill="#333333"/></marker>',
        "</defs>",
    ]
    for tier in ("periphery", "outer_core", "inner_core"):
        zone, _, fill = TIERS[tier]
        zone_fill = {"inner_core": "#fee0d2", "outer_core": "#fff5f0", "periphery": "#ffffff"}[tier]
        out.append(f'<circle class="zone {tier}" cx="{c:.1f}" cy="{c:.1f}" r="{zone}" '
                   f'fill="{zone_fill}" stroke="#999999" stroke-dasharray="4 3"/>')
    for p in arch.edges:
        (x1, y1), (x2, y2) = pos[p.source], pos[p.target]
        d = math.hypot(x2 - x1, y2 - y1)
        if d <= 2 * NODE_R:
            continue
        ux, uy = (x2 - x1) / d, (y2 - y1) / d
        out.append(
            f'<line class="edge" data-count="{p.count}" x1="{x1 + ux * NODE_R:.2f}" y1="{y1 + uy * NODE_R:.2f}" '
            f'x2="{x2 - ux * NODE_R:.2f}" y2="{y2 - uy * NODE_R:.2f}" stroke="#333333" '
            f'stroke-width="1.5" marker-end="url(#arrow)"><title>{p.source} -&gt; {p.target} ({p.count})</title></line>'
        )
    for tier, codes in (("inner_core", arch.inner_core), ("outer_core", arch.outer_core),
                        ("periphery", arch.periphery)):
        fill = TIERS[tier][2]
        text_fill = "#ffffff" if tier == "inner_core" else "#000000"
        for code in codes:
            x, y = pos[code]
            out.append(f'<g class="node {tier}" data-code="{code}">'
                       f'<circle cx="{x:.2f}" cy="{y:.2f}" r="{NODE_R}" fill="{fill}" stroke="#333333"/>'
                       f'<text x="{x:.2f}" y="{y + 4:.2f}" text-anchor="middle" fill="{text_fill}">{code}</text></g>')
    out.append("</svg>")
    return "\n".join(out) + "\n"


def emit_heatmap_svg(matrix: CouplingMatrix, out) -> Path:
    return write_text(out, heatmap_svg(matrix))


def emit_architecture_svg(arch: EmergentArchitecture, out) -> Path:
    return write_text(out, architecture_svg(arch))


def artifact_name(engine: str, kind: str) -> str:
    """Per-engine output filename, e.g. ``godot-includes.dot``."""
    names = {
        "includes": "{}-includes.dot",
        "unresolved": "{}-includes-unr.csv",
        "ambiguous": "{}-includes-amb.csv",
        "subsystems": "{}-subsystems.dot",
        "metrics": "{}-metrics.csv",
    }
    return names[kind].format(engine)


CORPUS_FILES = {
    "heatmap_csv": "corpus-heatmap.csv",
    "heatmap_svg": "corpus-heatmap.svg",
    "pairs": "corpus-pairs.csv",
    "architecture_svg": "corpus-architecture.svg",
    "architecture_txt": "corpus-architecture.txt",
}
