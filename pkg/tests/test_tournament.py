import json

import numpy as np
import pandas as pd
import pytest

from src.agents.base import POLICY_REGISTRY, TeamAgent
from src.harness.config import Matchup
from src.harness.tournament import bootstrap_mean_difference, game_seed, run_tournament
from tests.helpers import quick_config

INERT = {"name": "Inert"}


def test_inert_matchup_scores_nothing():
    result = run_tournament([Matchup(INERT, INERT, games=2)], quick_config(horizon=10.0))
    frame = result.frame()
    assert list(frame["games"]) == [2, 2]
    assert (frame[["mean_grabs", "mean_captures", "mean_tags", "mean_score"]] == 0.0).all().all()


def test_sides_alternate_between_games():
    result = run_tournament([Matchup({"name": "Pav01"}, INERT, games=3)], quick_config(horizon=5.0))
    assert [g.a_side for g in result.games] == ["blue", "red", "blue"]


def test_mean_score_identity():
    matchup = Matchup({"name": "Strategy4"}, {"name": "Pav01"}, games=2)
    frame = run_tournament([matchup], quick_config(horizon=60.0)).frame()
    for _, row in frame.iterrows():
        assert row["mean_score"] == pytest.approx(row["mean_grabs"] + 2 * row["mean_captures"])


def test_results_do_not_depend_on_parallelism():
    matchups = [Matchup({"name": "Strategy2"}, {"name": "Pav01"}, games=2),
                Matchup({"name": "EasyAttackerOnly"}, INERT, games=2)]
    base = quick_config(horizon=20.0)
    serial = run_tournament(matchups, base, jobs=1)
    parallel = run_tournament(matchups, base, jobs=2)
    pd.testing.assert_frame_equal(serial.frame(), parallel.frame())
    assert serial.games == parallel.games


def test_game_seeds_are_order_free():
    matchup = Matchup({"name": "Pav01"}, INERT, games=2)
    assert game_seed(1, matchup, 0) == game_seed(1, matchup, 0)
    assert game_seed(1, matchup, 0) != game_seed(1, matchup, 1)
    assert game_seed(1, Matchup({"name": "Pav01"}, INERT, seed=9), 0) == game_seed(9, matchup, 0)


def test_outputs_are_written(tmp_path):
    run_tournament([Matchup(INERT, INERT, games=2)], quick_config(horizon=5.0), out_dir=tmp_path)
    assert (tmp_path / "metrics.csv").is_file()
    games = json.loads((tmp_path / "games.json").read_text())
    assert [g["index"] for g in games] == [0, 1]
    assert (tmp_path / "Inert_vs_Inert" / "game_000.jsonl.gz").is_file()
    assert not (tmp_path / "failures.json").exists()


def test_failed_games_are_reported_not_raised(tmp_path):
    broken = Matchup({"name": "Options", "qtable": "/nonexistent"}, INERT, games=1)
    fine = Matchup(INERT, INERT, games=1)
    result = run_tournament([broken, fine], quick_config(horizon=5.0), out_dir=tmp_path)
    assert [f["error"] for f in result.failures] == ["TRAINING_INVALID"]
    assert [r.policy for r in result.rows] == ["Inert", "Inert"]
    assert json.loads((tmp_path / "failures.json").read_text())[0]["matchup"] == "Options_vs_Inert"


def test_bootstrap_of_identical_samples():
    assert bootstrap_mean_difference([1, 2, 3], [1, 2, 3]) == (0.0, 0.0, 0.0)


def test_bootstrap_of_a_constant_shift():
    mean, low, high = bootstrap_mean_difference([2, 3, 4, 5], [1, 2, 3, 4])
    assert (mean, low, high) == pytest.approx((1.0, 1.0, 1.0))


def test_bootstrap_interval_brackets_the_mean():
    mean, low, high = bootstrap_mean_difference([3, 0, 2, 5, 1], [1, 1, 1, 1, 1], seed=3)
    assert low <= mean <= high


class _CrashingAgent(TeamAgent):
    def decide(self, world):
        raise RuntimeError("helm exploded")


def test_a_crashing_policy_is_reported_not_raised(tmp_path, monkeypatch):
    monkeypatch.setitem(POLICY_REGISTRY, "Crashing", _CrashingAgent)
    crashing = Matchup({"name": "Crashing"}, INERT, games=1)
    fine = Matchup(INERT, INERT, games=1)
    result = run_tournament([crashing, fine], quick_config(horizon=5.0), out_dir=tmp_path)
    assert [(f["matchup"], f["error"]) for f in result.failures] == [("Crashing_vs_Inert", "GAME_CRASHED")]
    assert "helm exploded" in result.failures[0]["message"]
    assert [r.policy for r in result.rows] == ["Inert", "Inert"]
    assert (tmp_path / "metrics.csv").is_file()


def _margin(name, base, games=50):
    result = run_tournament([Matchup({"name": name}, {"name": "Pav01"}, games=games)], base, jobs=4)
    key = f"{name}_vs_Pav01"
    return bootstrap_mean_difference(result.scores(key, "a"), result.scores(key, "b"))


@pytest.mark.slow
def test_strategy4_beats_the_baseline_head_to_head():
    """Over 50 seeded games the bootstrap 95% interval of the score margin lies above zero"""
    mean, low, _ = _margin("Strategy4", quick_config(seed=2024, horizon=600.0))
    assert low > 0.0, (mean, low)


@pytest.mark.slow
def test_static_role_strategies_improve_on_the_baseline():
    """Mean score against Pav01 is monotone: Strategy3 >= Strategy2 >= Pav01"""
    base = quick_config(seed=2024, horizon=600.0)
    means = {}
    for name in ("Pav01", "Strategy2", "Strategy3"):
        result = run_tournament([Matchup({"name": name}, {"name": "Pav01"}, games=50)], base, jobs=4)
        means[name] = float(np.mean(result.scores(f"{name}_vs_Pav01", "a")))
    assert means["Strategy3"] >= means["Strategy2"] >= means["Pav01"], means
