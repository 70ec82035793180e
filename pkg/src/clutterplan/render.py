"""SVG snapshots of scenes and plans.

Top-down view with the open edge at the bottom. Obstacles are red, the
target green; slots are dashed blue (valid), dashed magenta (invalid) or
solid grey (occupied). Objects in the current relocation sequence get a bold
outline, and the action taken from a snapshot is drawn as an arrow.
"""

from __future__ import annotations

from pathlib import Path
from typing import Sequence
from xml.sax.saxutils import escape

from clutterplan.accessibility import DEFAULT_REACH, ReachParams
from clutterplan.geometry import Scene, SlotState
from clutterplan.planner import Action, PlanTrace, relocate_plan, replay
from clutterplan.slots import classify, find_valid_candidates

CANVAS_PX = 640.0
MARGIN_PX = 24.0
SLOT_STYLE = {
    SlotState.VALID: 'stroke="#1f4fd1" stroke-dasharray="4 3" fill="none"',
    SlotState.INVALID: 'stroke="#d11fc2" stroke-dasharray="4 3" fill="none"',
    SlotState.CANDIDATE: 'stroke="#888" stroke-dasharray="2 2" fill="none"',
    SlotState.OCCUPIED: 'stroke="#555" fill="none"',
}


def annotate(scene: Scene, reach: ReachParams = DEFAULT_REACH) -> tuple[Scene, tuple[str, ...]]:
    """Label slots valid/invalid for the scene's current relocation sequence.

    Returns the relabelled scene and the sequence (empty when none exists).
    """
    targets = [o for o in scene.objects if o.is_target]
    if len(targets) != 1:
        return scene, ()
    target = targets[0]
    seq = relocate_plan(scene, target, reach)
    if seq is None:
        return scene.with_slots(classify(scene.slots, [])), ()
    valid = find_valid_candidates(scene.free_slots, scene, seq.ids, target, reach)
    return scene.with_slots(classify(scene.slots, valid)), seq.ids


def scene_svg(scene: Scene, sequence: Sequence[str] = (), action: Action | None = None, title: str = "") -> str:
    w = scene.workspace
    scale = CANVAS_PX / max(w.width, w.depth)
    width_px = w.width * scale + 2 * MARGIN_PX
    height_px = w.depth * scale + 2 * MARGIN_PX

    def px(x, y):
        return MARGIN_PX + x * scale, MARGIN_PX + (w.depth - y) * scale

    x0, y0 = px(0, w.depth)
    x1, y1 = px(w.width, 0)
    parts = [
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{width_px:.1f}" height="{height_px:.1f}" '
        f'viewBox="0 0 {width_px:.1f} {height_px:.1f}">',
        '<defs><marker id="head" markerWidth="8" markerHeight="8" refX="6" refY="3" orient="auto">'
        '<path d="M0,0 L6,3 L0,6 z" fill="#222"/></marker></defs>',
        f'<rect x="0" y="0" width="{width_px:.1f}" height="{height_px:.1f}" fill="white"/>',
        # walls: left, back, right; the open edge is drawn dashed
        f'<polyline points="{x0:.1f},{y1:.1f} {x0:.1f},{y0:.1f} {x1:.1f},{y0:.1f} {x1:.1f},{y1:.1f}" '
        'fill="none" stroke="black" stroke-width="3"/>',
        f'<line x1="{x0:.1f}" y1="{y1:.1f}" x2="{x1:.1f}" y2="{y1:.1f}" stroke="#999" stroke-dasharray="6 4"/>',
    ]
    if title:
        parts.append(f'<text x="{MARGIN_PX:.1f}" y="{MARGIN_PX * 0.7:.1f}" font-size="12">{escape(title)}</text>')
    for s in scene.slots:
        cx, cy = px(s.x, s.y)
        parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{s.r * scale:.2f}" {SLOT_STYLE[s.state]} stroke-width="1.5">'
            f"<title>{escape(s.id)} ({s.state.value})</title></circle>"
        )
    bold = set(sequence)
    for o in scene.objects:
        cx, cy = px(o.x, o.y)
        fill = "#2ca02c" if o.is_target else "#d62728"
        stroke = 'stroke="black" stroke-width="3"' if o.id in bold else 'stroke="#333" stroke-width="1"'
        parts.append(
            f'<circle cx="{cx:.2f}" cy="{cy:.2f}" r="{o.r * scale:.2f}" fill="{fill}" fill-opacity="0.8" {stroke}>'
            f"<title>{escape(o.id)}</title></circle>"
        )
        parts.append(
            f'<text x="{cx:.2f}" y="{cy + 4:.2f}" font-size="11" text-anchor="middle" fill="white">{escape(o.id)}</text>'
        )
    if action is not None:
        ax, ay = px(*action.source)
        bx, by = px(*action.destination)
        parts.append(
            f'<line x1="{ax:.2f}" y1="{ay:.2f}" x2="{bx:.2f}" y2="{by:.2f}" stroke="#222" stroke-width="2" '
            'marker-end="url(#head)"/>'
        )
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def _write(path: Path, text: str) -> Path:
    try:
        path.write_text(text)
    except OSError as exc:
        raise OSError(f"cannot write SVG to {path}: {exc.strerror or exc}") from exc
    return path


def render_svg(scene: Scene, path, trace: PlanTrace | None = None, reach: ReachParams = DEFAULT_REACH) -> list[Path]:
    """Write SVG snapshots and return their paths.

    Without a trace ``path`` is the output file. With a trace ``path`` is a
    directory that receives ``step_000.svg`` (the initial scene) plus one
    file per action.
    """
    path = Path(path)
    if trace is None:
        labelled, seq = annotate(scene, reach)
        return [_write(path, scene_svg(labelled, seq, title="scene"))]
    try:
        path.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise OSError(f"cannot create output directory {path}: {exc.strerror or exc}") from exc
    written = []
    states = list(replay(scene, trace.actions))
    for i, snap in enumerate(states):
        labelled, seq = annotate(snap, reach)
        action = trace.actions[i] if i < len(trace.actions) else None
        title = f"step {i}" + (f": {action.object} -> {action.slot}" if action else " (final)")
        written.append(_write(path / f"step_{i:03d}.svg", scene_svg(labelled, seq, action, title)))
    return written
