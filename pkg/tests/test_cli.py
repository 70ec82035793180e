import json

from clutterplan.cli import main
from clutterplan.geometry import Scene


def test_gen_plan_render_roundtrip(tmp_path, capsys):
    scene = tmp_path / "scene.json"
    trace = tmp_path / "trace.json"
    assert main(["gen", "--demo", "monotone", "-o", str(scene)]) == 0
    assert main(["plan", str(scene), "--validate", "-o", str(trace)]) == 0
    doc = json.loads(trace.read_text())
    assert doc["k"] == 3 and doc["validation"]["ok"]
    assert main(["render", str(scene), "--trace", str(trace), "-o", str(tmp_path / "svg")]) == 0
    assert len(list((tmp_path / "svg").glob("step_*.svg"))) == 4


def test_gen_random_scene(tmp_path):
    out = tmp_path / "s.json"
    assert main(["gen", "--n", "9", "--seed", "3", "--trials", "100", "-o", str(out)]) == 0
    scene = Scene.from_json(out.read_text())
    assert len(scene.objects) == 10 and len(scene.slots) > 0


def test_plan_failure_exit_code(tmp_path):
    scene = tmp_path / "scene.json"
    main(["gen", "--demo", "overfull", "-o", str(scene)])
    assert main(["plan", str(scene), "-o", str(tmp_path / "t.json")]) == 1
    assert json.loads((tmp_path / "t.json").read_text())["reason"] == "insufficient-space"


def test_invalid_input_exit_code(tmp_path, capsys):
    assert main(["plan", str(tmp_path / "missing.json")]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert main(["plan", str(bad)]) == 2
    bad.write_text(json.dumps({"workspace": {"w": -1, "d": 5}}))
    assert main(["plan", str(bad)]) == 2
    assert main(["gen", "--n", "200"]) == 2
    assert "error" in capsys.readouterr().err


def test_bench_writes_csv_and_summary(tmp_path, monkeypatch):
    cfg = tmp_path / "cfg.json"
    cfg.write_text(json.dumps({"n_values": [5], "instances": 2, "trials": 100}))
    monkeypatch.setenv("CLUTTERPLAN_OUT", str(tmp_path / "out"))
    assert main(["bench", str(cfg)]) == 0
    assert (tmp_path / "out" / "metrics.csv").exists()
    assert (tmp_path / "out" / "summary.json").exists()
    cfg.write_text(json.dumps({"instances": 0}))
    assert main(["bench", str(cfg)]) == 2


def test_histogram_dump(tmp_path):
    scene = tmp_path / "scene.json"
    main(["gen", "--demo", "monotone", "-o", str(scene)])
    out = tmp_path / "h.json"
    assert main(["render", str(scene), "--histogram", "ot", "--bins", "12", "-o", str(out)]) == 0
    assert len(json.loads(out.read_text())["bins"]) == 12
    assert main(["render", str(scene), "--histogram", "nope"]) == 2
