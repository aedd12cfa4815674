import pytest

from src.harness.game_log import GameLog, read_log, verify_line
from src.models.errors import LogCorruptedError


def _log():
    log = GameLog()
    log.append("header", {"config": {"seed": 1}})
    log.append("step", {"step": 7, "t": 0.7})
    log.append("final", {"step": 7, "scores": {"blue": 0, "red": 1}})
    return log


def test_round_trip_through_disk(tmp_path):
    log = _log()
    loaded = read_log(log.write(tmp_path / "game.jsonl"))
    assert loaded.lines == log.lines
    assert loaded.final["scores"] == {"blue": 0, "red": 1}
    assert [r["type"] for r in loaded.records()] == ["header", "step", "final"]


def test_truncated_last_line_is_reported(tmp_path):
    path = tmp_path / "cut.jsonl"
    path.write_text(_log().text()[:-20])
    with pytest.raises(LogCorruptedError) as info:
        read_log(path)
    assert info.value.line_number == 3
    assert info.value.to_dict()["line"] == 3


def test_checksum_mismatch_names_the_line(tmp_path):
    path = tmp_path / "edited.jsonl"
    path.write_text(_log().text().replace('"step":7,"t"', '"step":8,"t"'))
    with pytest.raises(LogCorruptedError) as info:
        read_log(path)
    assert info.value.line_number == 2


def test_missing_final_record(tmp_path):
    log = _log()
    log.lines.pop()
    with pytest.raises(LogCorruptedError) as info:
        read_log(log.write(tmp_path / "open.jsonl"))
    assert info.value.line_number == 3


def test_log_must_start_with_a_header(tmp_path):
    log = _log()
    log.lines.pop(0)
    with pytest.raises(LogCorruptedError) as info:
        read_log(log.write(tmp_path / "headless.jsonl"))
    assert info.value.line_number == 1


def test_empty_log(tmp_path):
    path = tmp_path / "empty.jsonl"
    path.write_text("")
    with pytest.raises(LogCorruptedError):
        read_log(path)


def test_compressed_logs_are_byte_identical(tmp_path):
    log = _log()
    path = tmp_path / "game.jsonl.gz"
    first = log.write(path).read_bytes()
    second = log.write(path).read_bytes()
    assert first == second
    assert read_log(path).lines == log.lines


def test_verify_line_rejects_records_without_checksum():
    with pytest.raises(LogCorruptedError):
        verify_line('{"v":1,"type":"step"}', 5)


def test_unknown_record_type():
    with pytest.raises(ValueError):
        GameLog().append("comment", {})
