import time

import pytest

from src.harness.config import GameConfig
from src.harness.game_log import GameLog
from src.harness.runner import replay, run_game, team_totals
from src.models.errors import ReplayMismatchError
from src.models.game import EventKind, GameEvent, Team
from tests.helpers import quick_config


def test_inert_teams_never_score():
    log = run_game(quick_config(horizon=20.0))
    final = log.final
    assert final["scores"] == {"blue": 0, "red": 0}
    assert final["events"] == 0
    assert log.events == []
    assert final["step"] == 200


def test_games_are_reproducible_and_verify_on_replay():
    config = quick_config(seed=3, horizon=60.0, blue={"name": "Strategy4"}, red={"name": "Pav01"})
    first, second = run_game(config), run_game(config)
    assert first.lines == second.lines
    records = list(replay(first, verify=True))
    assert records[0]["type"] == "header"
    assert records[-1]["type"] == "final"


def test_single_attacker_grabs_an_undefended_flag():
    log = run_game(quick_config(horizon=150.0, blue={"name": "EasyAttackerOnly"}))
    totals = log.final["totals"]
    assert totals["blue"]["grabs"] >= 1
    assert log.final["scores"]["blue"] >= 1
    assert totals["blue"]["score"] == log.final["scores"]["blue"]


def test_final_totals_match_the_event_records():
    log = run_game(quick_config(seed=8, horizon=120.0, blue={"name": "Strategy3"}, red={"name": "Strategy2"}))
    for team in ("blue", "red"):
        grabs = sum(1 for e in log.events if e["kind"] == "grab" and e["team"] == team)
        assert log.final["totals"][team]["grabs"] == grabs
    assert log.final["events"] == len(log.events)


def test_spliced_log_fails_verification():
    pav = run_game(quick_config(seed=3, horizon=20.0, blue={"name": "Strategy4"}, red={"name": "Pav01"}))
    other = run_game(quick_config(seed=3, horizon=20.0, blue={"name": "Strategy4"}, red={"name": "Strategy3"}))
    spliced = GameLog([pav.lines[0]] + other.lines[1:])
    with pytest.raises(ReplayMismatchError):
        list(replay(spliced, verify=True))


def test_replay_reads_compressed_logs(tmp_path):
    path = tmp_path / "game.jsonl.gz"
    log = run_game(quick_config(horizon=10.0, blue={"name": "Pav01"}), path)
    assert [r["type"] for r in replay(path)] == [r["type"] for r in log.records()]
    list(replay(path, verify=True))


def test_record_every_thins_step_records():
    log = run_game(quick_config(horizon=10.0, log={"record_every": 10}))
    assert [r["step"] for r in log.steps] == list(range(10, 101, 10))


def test_classifier_plays_a_full_game():
    log = run_game(quick_config(horizon=40.0, blue={"name": "Classifier"}, red={"name": "Pav01"}))
    assert log.final is not None
    assert log.steps[0]["modes"][0] in ("watch", "returning")


def test_team_totals_counts_tags_and_scores():
    events = [GameEvent(EventKind.GRAB, 0, Team.BLUE, 1.0),
              GameEvent(EventKind.CAPTURE, 0, Team.BLUE, 9.0),
              GameEvent(EventKind.TAG, 1, Team.BLUE, 9.0, victim=2, victim_team=Team.RED),
              GameEvent(EventKind.OUT_OF_BOUNDS, 3, Team.RED, 9.5)]
    assert team_totals(events, Team.BLUE) == {"grabs": 1, "captures": 1, "tags": 1, "out_of_bounds": 0, "score": 3}
    assert team_totals(events, Team.RED)["out_of_bounds"] == 1


@pytest.mark.slow
def test_a_full_default_game_runs_in_under_a_second():
    config = GameConfig.from_dict({"seed": 3})
    run_game(config)
    started = time.perf_counter()
    log = run_game(config)
    elapsed = time.perf_counter() - started
    assert log.final["step"] == 6000
    assert elapsed < 1.0, f"{elapsed:.2f} s"
