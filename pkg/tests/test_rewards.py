import pytest

from src.learning.rewards import RewardTable, compute_reward, team_reward
from src.models.game import EventKind, GameEvent, Team


def _event(kind, actor, team, victim=None):
    victim_team = None if victim is None else team.opponent
    return GameEvent(kind, actor, team, 1.0, victim=victim, victim_team=victim_team)


@pytest.mark.parametrize("kind,victim,own,other", [
    (EventKind.TAG, 2, 100.0, -100.0),
    (EventKind.TAG_WITH_FLAG, 2, 50.0, -100.0),
    (EventKind.GRAB, None, 50.0, -50.0),
    (EventKind.CAPTURE, None, 100.0, -100.0),
    (EventKind.OUT_OF_BOUNDS, None, -100.0, 0.0),
])
def test_default_table_pays_both_teams(kind, victim, own, other):
    events = [_event(kind, 0, Team.BLUE, victim)]
    assert compute_reward(events, 0, RewardTable()) == own
    assert compute_reward(events, 1, RewardTable()) == own
    assert compute_reward(events, 2, RewardTable()) == other
    assert compute_reward(events, 3, RewardTable()) == other


def test_rewards_sum_over_simultaneous_events():
    """Carrier tagged by red agent 2 while its teammate leaves the field"""
    events = [_event(EventKind.TAG_WITH_FLAG, 2, Team.RED, victim=0),
              _event(EventKind.OUT_OF_BOUNDS, 1, Team.BLUE)]
    assert compute_reward(events, 0, RewardTable()) == -200.0
    assert compute_reward(events, 2, RewardTable()) == 50.0


def test_quiet_step_pays_nothing():
    assert compute_reward([], 0, RewardTable()) == 0.0


def test_team_reward_is_additive():
    table = RewardTable()
    first = [_event(EventKind.GRAB, 0, Team.BLUE)]
    second = [_event(EventKind.TAG, 3, Team.RED, victim=1), _event(EventKind.CAPTURE, 2, Team.RED)]
    for team in Team:
        assert team_reward(first + second, team, table) == team_reward(first, team, table) + team_reward(second, team, table)


def test_explicit_team_overrides_the_id_convention():
    events = [_event(EventKind.GRAB, 0, Team.BLUE)]
    assert compute_reward(events, 7, RewardTable(), team=Team.BLUE) == 50.0
    assert compute_reward(events, 2, RewardTable(), team_size=3) == 50.0


def test_reward_table_from_config():
    table = RewardTable.from_dict({"grab": [10, -5]})
    assert table.grab == (10.0, -5.0)
    assert table.capture == (100.0, -100.0)
    assert table.max_magnitude == 100.0
    assert RewardTable.from_dict({"grab": [float("nan"), 0]}).validate()
