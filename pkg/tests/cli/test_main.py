import json

import pytest

from app.main import build_parser, main
from app.storage.dataset_file import load_dataset
from app.storage.frames import read_metrics
from app.storage.model_file import load_map


def test_parser_requires_a_command():
    with pytest.raises(SystemExit):
        build_parser().parse_args([])


def test_simulate_shipped_scene(tmp_path, capsys):
    assert main(["simulate", "--scene", "empty", "--out-dir", str(tmp_path)]) == 0
    out_dir = tmp_path / "empty"
    assert (out_dir / "frames.jsonl").exists()
    assert len(read_metrics(out_dir / "metrics.csv")) == 3
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["steps"] == 10
    assert json.loads(capsys.readouterr().out)["frames"] == 3


def test_simulate_duration_override(tmp_path):
    assert main(["simulate", "--scene", "empty", "--duration", "0.002", "--out-dir", str(tmp_path)]) == 0
    assert json.loads((tmp_path / "empty" / "summary.json").read_text())["steps"] == 2


def test_missing_scene_is_a_config_error(tmp_path):
    assert main(["simulate", "--scene", str(tmp_path / "nowhere.json")]) == 2


def test_invalid_scene_is_a_config_error(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"name": "bad", "world": {"dt": -1.0}, "duration": 1.0}))
    assert main(["simulate", "--scene", str(path), "--out-dir", str(tmp_path)]) == 2


def test_oracle_against_halfplane(capsys):
    code = main(["oracle", "--shape-b", "incline_box", "--qb", "0", "0", "3", "--halfplane", "0", "1", "0"])
    assert code == 0
    read = json.loads(capsys.readouterr().out)
    assert read["d"] > 0.0
    assert read["grad_cfg"][2] == pytest.approx(1.0)


def test_oracle_needs_a_first_body():
    assert main(["oracle", "--shape-b", "octagon"]) == 2
    assert main(["oracle", "--shape-a", "missing", "--shape-b", "octagon"]) == 2
    assert main(["oracle", "--shape-b", "octagon", "--halfplane", "0", "0", "0"]) == 2


def test_report_summarizes_metrics(tmp_path, capsys):
    main(["simulate", "--scene", "empty", "--out-dir", str(tmp_path)])
    capsys.readouterr()
    out = tmp_path / "summary.json"
    assert main(["report", "--metrics", str(tmp_path / "empty" / "metrics.csv"), "--out", str(out)]) == 0
    summary = json.loads(out.read_text())
    assert summary["rows"] == 3
    assert summary["angle_of_repose_deg"] is None
    assert json.loads(capsys.readouterr().out) == summary


def test_report_frames_need_scene(tmp_path):
    main(["simulate", "--scene", "empty", "--out-dir", str(tmp_path)])
    run_dir = tmp_path / "empty"
    code = main(["report", "--metrics", str(run_dir / "metrics.csv"), "--frames", str(run_dir / "frames.jsonl")])
    assert code == 2


def test_gen_data_then_train(tmp_path):
    code = main([
        "gen-data", "--shape-a", "octagon", "--shape-b", "octagon", "--count", "60",
        "--resolution", "31", "--seed", "3", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    dataset_path = tmp_path / "octagon__octagon.ced"
    assert len(load_dataset(dataset_path)) == 60

    code = main([
        "train", "--dataset", str(dataset_path), "--arch", "1x8", "--epochs", "2",
        "--batch-size", "16", "--out-dir", str(tmp_path),
    ])
    assert code == 0
    contact_map = load_map(tmp_path / "octagon__octagon.cem")
    assert contact_map.key == ("octagon", "octagon")
    assert json.loads((tmp_path / "octagon__octagon.json").read_text())["n_train"] == 54


def test_unknown_shape_in_gen_data(tmp_path):
    assert main(["gen-data", "--shape-a", "octagon", "--shape-b", "blob", "--out-dir", str(tmp_path)]) == 2


def test_gen_data_is_reproducible_for_a_seed(tmp_path):
    outputs = []
    for run in ("first", "second"):
        code = main([
            "gen-data", "--shape-a", "octagon", "--shape-b", "hashtag", "--count", "40",
            "--resolution", "31", "--seed", "11", "--out-dir", str(tmp_path / run),
        ])
        assert code == 0
        outputs.append((tmp_path / run / "octagon__hashtag.ced").read_bytes())
    assert outputs[0] == outputs[1]
