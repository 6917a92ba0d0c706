import csv
import json
import os

import pytest

from camadapt.cli import main
from camadapt.imaging import Frame, save_frame

from conftest import DATA_DIR, MOCK_SCENE_MANIFEST

EXPERIMENT_CONFIG = os.path.join(DATA_DIR, "mock_scene", "experiment.json")


def tiny_config(tmp_path, **overrides):
    doc = {
        "manifest": os.path.relpath(MOCK_SCENE_MANIFEST, tmp_path),
        "agent": {"alpha": 0.9, "gamma": 0.0, "epsilon": 0.9, "seed": 7},
        "estimator": {"kind": "composite"},
        "initial_setting": "S1",
        "duration": 4.0,
        "train_steps": 50,
        "train_reset_interval": 10,
        "train_epsilon": 0.1,
    }
    doc.update(overrides)
    path = tmp_path / "cfg.json"
    path.write_text(json.dumps(doc))
    return str(path)


def test_measure_prints_metrics_json(tmp_path, capsys):
    image = str(tmp_path / "gray.png")
    save_frame(Frame.full(16, 16, (128, 128, 128)), image)
    assert main(["measure", "--image", image]) == 0
    doc = json.loads(capsys.readouterr().out)
    assert set(doc) == {"brightness", "contrast", "colorfulness", "sharpness", "score"}
    assert doc["contrast"] == 0.0
    assert doc["brightness"] == pytest.approx(128 / 255, abs=1e-6)


def test_train_then_compare_round_trip(tmp_path, capsys):
    cfg = tiny_config(tmp_path)
    qtable_path = str(tmp_path / "q.json")
    csv_path = str(tmp_path / "run.csv")

    assert main(["train", "--config", cfg, "--out", qtable_path]) == 0
    assert os.path.isfile(qtable_path)

    assert main(["compare", "--config", cfg, "--qtable", qtable_path, "--out", csv_path]) == 0
    with open(csv_path, newline="") as fh:
        rows = list(csv.reader(fh))
    assert rows[0][0] == "t"
    assert len(rows) == 1 + 2 * 40  # 4 s at 10 fps, two cameras


def test_compare_without_qtable(tmp_path):
    cfg = tiny_config(tmp_path)
    csv_path = str(tmp_path / "run.csv")
    assert main(["compare", "--config", cfg, "--out", csv_path]) == 0
    assert os.path.isfile(csv_path)


def test_compare_rewards_cli(tmp_path):
    cfg = tiny_config(
        tmp_path,
        estimators=[
            {"kind": "composite", "name": "composite"},
            {"kind": "constant", "value": 0.5, "name": "flat"},
        ],
    )
    out = str(tmp_path / "rewards.csv")
    assert main(["compare-rewards", "--config", cfg, "--out", out]) == 0
    with open(out, newline="") as fh:
        rows = list(csv.reader(fh))
    assert [r[0] for r in rows] == ["estimator", "composite", "flat"]


def test_checked_in_experiment_config_loads():
    from camadapt.harness import load_experiment_config

    cfg = load_experiment_config(EXPERIMENT_CONFIG)
    assert cfg.train_steps == 20000
    assert cfg.fps == 10
    assert os.path.isfile(cfg.manifest)
