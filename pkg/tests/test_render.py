import xml.etree.ElementTree as ET

import pytest

from clutterplan.demo_scenes import monotone_scene, occluding_slot_scene
from clutterplan.geometry import Scene, Workspace
from clutterplan.planner import plan_rearrangement
from clutterplan.render import render_svg, scene_svg

SVG = "{http://www.w3.org/2000/svg}"


def test_empty_scene_draws_only_the_frame(tmp_path):
    out = render_svg(Scene(Workspace(90, 45, 45), []), tmp_path / "empty.svg")
    root = ET.parse(out[0]).getroot()
    assert root.findall(f"{SVG}circle") == []
    assert len(root.findall(f"{SVG}polyline")) == 1  # three walls
    assert len(root.findall(f"{SVG}line")) == 1  # open edge


def test_one_file_per_plan_step(tmp_path):
    scene = monotone_scene()
    trace = plan_rearrangement(scene)
    files = render_svg(scene, tmp_path / "steps", trace)
    assert len(files) == trace.k + 1 == 4
    for f in files:
        ET.parse(f)
    first = files[0].read_text()
    assert 'marker-end="url(#head)"' in first
    assert "marker-end" not in files[-1].read_text()


def test_colours_follow_roles_and_states():
    text = scene_svg(monotone_scene())
    assert "#2ca02c" in text and "#d62728" in text


def test_invalid_slots_are_magenta(tmp_path):
    [path] = render_svg(occluding_slot_scene(), tmp_path / "s.svg")
    text = path.read_text()
    assert text.count('stroke="#d11fc2"') == 2


def test_bad_output_path_reports_path(tmp_path):
    blocker = tmp_path / "file"
    blocker.write_text("x")
    with pytest.raises(OSError, match="file"):
        render_svg(monotone_scene(), blocker / "sub" / "x.svg")
    with pytest.raises(OSError, match="file"):
        render_svg(monotone_scene(), blocker / "steps", plan_rearrangement(monotone_scene()))
