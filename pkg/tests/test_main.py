import json

from src.main import main


def _config(tmp_path, **data):
    path = tmp_path / "game.json"
    path.write_text(json.dumps({"seed": 5, "horizon": 5.0, **data}))
    return path


def test_validate_accepts_a_good_config(tmp_path, capsys):
    path = _config(tmp_path)
    assert main(["validate", "--config", str(path)]) == 0
    assert capsys.readouterr().out.strip().endswith(": ok")


def test_invalid_config_exits_with_two(tmp_path, capsys):
    path = _config(tmp_path, blue={"name": "Nobody"})
    assert main(["validate", "--config", str(path)]) == 2
    err = capsys.readouterr().err
    report = json.loads(err[err.index("{"):])
    assert report["error"] == "CONFIG_INVALID"


def test_play_writes_a_log_and_prints_scores(tmp_path, capsys):
    path = _config(tmp_path, blue={"name": "Inert"}, red={"name": "Inert"})
    out = tmp_path / "runs"
    assert main(["play", "--config", str(path), "--seed", "12", "--out-dir", str(out)]) == 0
    assert json.loads(capsys.readouterr().out) == {"blue": 0, "red": 0}
    log = out / "game_12.jsonl"
    assert log.is_file()
    assert main(["replay", str(log), "--verify"]) == 0


def test_tourney_writes_metrics(tmp_path):
    path = _config(tmp_path, tournament={"games": 2, "matchups": [{"a": {"name": "Inert"}, "b": {"name": "Pav01"}}]})
    out = tmp_path / "t"
    assert main(["tourney", "--config", str(path), "--out-dir", str(out), "--jobs", "1"]) == 0
    assert (out / "metrics.csv").is_file()


def test_corrupted_log_exits_with_one(tmp_path, capsys):
    log = tmp_path / "bad.jsonl"
    log.write_text("not json\n")
    assert main(["replay", str(log)]) == 1
    err = capsys.readouterr().err
    assert json.loads(err[err.index("{"):])["error"] == "LOG_CORRUPTED"
