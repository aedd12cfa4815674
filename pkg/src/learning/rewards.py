"""
Sparse event rewards.

Each entry is an (own team, opponent team) pair: the first value goes to every
member of the team whose agent caused the event, the second to every member of
the other team. Steps without events reward nothing.
"""
from dataclasses import dataclass
from typing import Any, Dict, Iterable, List, Optional, Tuple

import numpy as np

from src.models.game import EventKind, GameEvent, Team

RewardPair = Tuple[float, float]


@dataclass(frozen=True)
class RewardTable:
    tag_no_flag: RewardPair = (100.0, -100.0)
    tag_with_flag: RewardPair = (50.0, -100.0)
    grab: RewardPair = (50.0, -50.0)
    capture: RewardPair = (100.0, -100.0)
    out_of_bounds: RewardPair = (-100.0, 0.0)

    def pair(self, kind: EventKind) -> RewardPair:
        return {
            EventKind.TAG: self.tag_no_flag,
            EventKind.TAG_WITH_FLAG: self.tag_with_flag,
            EventKind.GRAB: self.grab,
            EventKind.CAPTURE: self.capture,
            EventKind.OUT_OF_BOUNDS: self.out_of_bounds,
        }[kind]

    @property
    def max_magnitude(self) -> float:
        return max(abs(v) for pair in self.to_dict().values() for v in pair)

    def validate(self) -> List[str]:
        return [f"rewards: {name} must be two finite numbers"
                for name, pair in self.to_dict().items()
                if len(pair) != 2 or not np.all(np.isfinite(pair))]

    def to_dict(self) -> Dict[str, List[float]]:
        return {
            "tag_no_flag": list(self.tag_no_flag),
            "tag_with_flag": list(self.tag_with_flag),
            "grab": list(self.grab),
            "capture": list(self.capture),
            "out_of_bounds": list(self.out_of_bounds),
        }

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "RewardTable":
        return cls(**{k: (float(v[0]), float(v[1])) for k, v in (data or {}).items()})


def team_reward(events: Iterable[GameEvent], team: Team, table: RewardTable) -> float:
    total = 0.0
    for event in events:
        own, opp = table.pair(event.kind)
        total += own if event.team is team else opp
    return total


def compute_reward(events: Iterable[GameEvent],
                   agent_id: int,
                   table: RewardTable,
                   team: Optional[Team] = None,
                   team_size: int = 2) -> float:
    """Reward for one agent from one step's events.

    Agent ids list blue agents first, so the team follows from the id when
    it is not given.
    """
    if team is None:
        team = Team.BLUE if agent_id < team_size else Team.RED
    return team_reward(events, team, table)
