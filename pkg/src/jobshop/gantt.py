"""Static SVG Gantt chart of a decoded schedule.

One lane per machine, one rectangle per operation. Bars are drawn inside
a group shifted right by the label margin, so a rectangle's x is exactly the
start time and its width the processing time (scale 1).
"""

from __future__ import annotations

from pathlib import Path
from xml.sax.saxutils import escape

from .errors import IoError
from .instance import JsspInstance
from .schedule import Schedule

LANE = 24
BAR = 18
MARGIN = 48

# Fixed palette, indexed by job
COLORS = [
    "#4e79a7", "#f28e2b", "#e15759", "#76b7b2", "#59a14f",
    "#edc948", "#b07aa1", "#ff9da7", "#9c755f", "#bab0ac",
]


def emit_gantt(schedule: Schedule, instance: JsspInstance, path=None) -> str:
    """Return the SVG text; also write it to ``path`` when given."""
    span = schedule.makespan
    width = MARGIN + span + 8
    height = LANE * instance.n_machines + 20
    out = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width}" height="{height}" '
        f'viewBox="0 0 {width} {height}" font-family="monospace" font-size="9">',
        f"<title>{escape(instance.name)} makespan {span}</title>",
    ]
    for mc in range(instance.n_machines):
        y = LANE * mc
        out.append(f'<g class="lane" data-machine="{mc}">')
        out.append(f'<text x="2" y="{y + 13}">M{mc}</text>')
        out.append(f'<g transform="translate({MARGIN},0)">')
        out.append(f'<line x1="0" y1="{y + LANE - 2}" x2="{span}" y2="{y + LANE - 2}" stroke="#ddd"/>')
        ops = [(int(schedule.start[j, k]), j, k) for j in range(instance.n_jobs)
               for k in range(instance.n_machines) if instance.machines[j, k] == mc]
        for s, j, k in sorted(ops):
            d = int(instance.times[j, k])
            out.append(
                f'<rect x="{s}" y="{y + 2}" width="{d}" height="{BAR}" '
                f'fill="{COLORS[j % len(COLORS)]}" stroke="#222" stroke-width="0.5">'
                f"<title>J{j}.{k} [{s}, {s + d})</title></rect>"
            )
            out.append(f'<text x="{s + 1}" y="{y + 14}">J{j}.{k}</text>')
        out.append("</g>")
        out.append("</g>")
    axis = LANE * instance.n_machines + 12
    out.append(f'<text x="{MARGIN}" y="{axis}">0</text>')
    out.append(f'<text x="{MARGIN + span}" y="{axis}" text-anchor="end">{span}</text>')
    out.append("</svg>")
    text = "\n".join(out) + "\n"
    if path is not None:
        try:
            Path(path).write_text(text, encoding="utf-8")
        except OSError as e:
            raise IoError(f"cannot write Gantt chart to {path}: {e}") from e
    return text
