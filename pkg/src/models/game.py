"""
Game-state domain types for 2-v-2 maritime capture the flag
"""
import math
from dataclasses import dataclass, field, replace
from enum import Enum
from typing import Any, Dict, List, Optional, Tuple

Point = Tuple[float, float]


class Team(Enum):
    BLUE = "blue"
    RED = "red"

    @property
    def opponent(self) -> "Team":
        return Team.RED if self is Team.BLUE else Team.BLUE


class EventKind(Enum):
    TAG = "tag"
    TAG_WITH_FLAG = "tag_with_flag"
    GRAB = "grab"
    CAPTURE = "capture"
    OUT_OF_BOUNDS = "out_of_bounds"

    @property
    def has_victim(self) -> bool:
        return self in (EventKind.TAG, EventKind.TAG_WITH_FLAG)


def distance(a: Point, b: Point) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


@dataclass(frozen=True)
class FieldSpec:
    """Rectangular, obstacle-free playing area split at midfield.

    Blue owns the left half (x < width/2), red the right half. Each base is a
    circle centered base_offset meters in front of the team's back line, and the
    team's flag home sits at the base center.
    """
    width: float = 160.0
    depth: float = 80.0
    base_radius: float = 10.0
    base_offset: float = 10.0
    tag_radius: float = 10.0
    grab_radius: float = 10.0

    @property
    def midfield_x(self) -> float:
        return self.width / 2.0

    @property
    def boundary(self) -> Dict[str, float]:
        return {"lower": 0.0, "upper": self.depth, "left": 0.0, "right": self.width}

    def base_center(self, team: Team) -> Point:
        if team is Team.BLUE:
            return (self.base_offset, self.depth / 2.0)
        return (self.width - self.base_offset, self.depth / 2.0)

    def flag_home(self, team: Team) -> Point:
        return self.base_center(team)

    def zone_rect(self, team: Team) -> Tuple[float, float, float, float]:
        """(x_min, y_min, x_max, y_max) of the team's half"""
        if team is Team.BLUE:
            return (0.0, 0.0, self.midfield_x, self.depth)
        return (self.midfield_x, 0.0, self.width, self.depth)

    def zone_center(self, team: Team) -> Point:
        x_min, y_min, x_max, y_max = self.zone_rect(team)
        return ((x_min + x_max) / 2.0, (y_min + y_max) / 2.0)

    def zone_of(self, point: Point) -> Team:
        return Team.BLUE if point[0] < self.midfield_x else Team.RED

    def in_zone(self, point: Point, team: Team) -> bool:
        return self.zone_of(point) is team

    def in_bounds(self, point: Point) -> bool:
        return 0.0 <= point[0] <= self.width and 0.0 <= point[1] <= self.depth

    def in_base(self, point: Point, team: Team) -> bool:
        return distance(point, self.flag_home(team)) <= self.base_radius

    def start_position(self, team: Team, index: int, team_size: int = 2) -> Point:
        cx, cy = self.base_center(team)
        offset = (index - (team_size - 1) / 2.0) * 14.0
        return (cx, cy + offset)

    def start_heading(self, team: Team) -> float:
        return 90.0 if team is Team.BLUE else 270.0

    def validate(self) -> List[str]:
        violations = []
        if self.width <= 0 or self.depth <= 0:
            violations.append("field: width and depth must be positive")
            return violations
        for name in ("tag_radius", "grab_radius"):
            value = getattr(self, name)
            if not 0 < value < self.depth / 2.0:
                violations.append(f"field: {name} must be in (0, depth/2), got {value}")
        if self.base_radius <= 0:
            violations.append("field: base_radius must be positive")
        for team in Team:
            cx, cy = self.base_center(team)
            x_min, y_min, x_max, y_max = self.zone_rect(team)
            inside = (cx - self.base_radius >= x_min and cx + self.base_radius <= x_max
                      and cy - self.base_radius >= y_min and cy + self.base_radius <= y_max)
            if not inside:
                violations.append(f"field: {team.value} base must lie inside the {team.value} zone")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "width": self.width,
            "depth": self.depth,
            "base_radius": self.base_radius,
            "base_offset": self.base_offset,
            "tag_radius": self.tag_radius,
            "grab_radius": self.grab_radius,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FieldSpec":
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class AgentState:
    agent_id: int
    team: Team
    index: int
    x: float
    y: float
    heading: float
    speed: float = 0.0
    has_flag: bool = False
    tagged: bool = False
    oob: bool = False

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    @property
    def velocity(self) -> Point:
        rad = math.radians(self.heading)
        return (self.speed * math.sin(rad), self.speed * math.cos(rad))

    def to_dict(self) -> Dict[str, Any]:
        return {
            "id": self.agent_id,
            "team": self.team.value,
            "index": self.index,
            "x": self.x,
            "y": self.y,
            "heading": self.heading,
            "speed": self.speed,
            "has_flag": self.has_flag,
            "tagged": self.tagged,
            "oob": self.oob,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "AgentState":
        return cls(
            agent_id=data["id"],
            team=Team(data["team"]),
            index=data["index"],
            x=data["x"],
            y=data["y"],
            heading=data["heading"],
            speed=data["speed"],
            has_flag=data["has_flag"],
            tagged=data["tagged"],
            oob=data["oob"],
        )


@dataclass(frozen=True)
class FlagState:
    team: Team
    x: float
    y: float
    carrier: Optional[int] = None

    @property
    def at_home(self) -> bool:
        return self.carrier is None

    @property
    def position(self) -> Point:
        return (self.x, self.y)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "team": self.team.value,
            "x": self.x,
            "y": self.y,
            "carrier": self.carrier,
            "at_home": self.at_home,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "FlagState":
        return cls(team=Team(data["team"]), x=data["x"], y=data["y"], carrier=data["carrier"])


@dataclass(frozen=True)
class GameEvent:
    kind: EventKind
    actor: int
    team: Team
    time: float
    victim: Optional[int] = None
    victim_team: Optional[Team] = None

    def to_dict(self) -> Dict[str, Any]:
        return {
            "kind": self.kind.value,
            "actor": self.actor,
            "team": self.team.value,
            "time": self.time,
            "victim": self.victim,
            "victim_team": self.victim_team.value if self.victim_team else None,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameEvent":
        return cls(
            kind=EventKind(data["kind"]),
            actor=data["actor"],
            team=Team(data["team"]),
            time=data["time"],
            victim=data.get("victim"),
            victim_team=Team(data["victim_team"]) if data.get("victim_team") else None,
        )


@dataclass(frozen=True)
class GameState:
    """Joint snapshot of the game; agents are indexed by their global id"""
    field: FieldSpec
    time: float
    step_index: int
    agents: Tuple[AgentState, ...]
    flags: Tuple[FlagState, ...]
    scores: Dict[Team, int] = field(default_factory=lambda: {Team.BLUE: 0, Team.RED: 0})
    event_history: Tuple[GameEvent, ...] = ()

    def agent(self, agent_id: int) -> AgentState:
        return self.agents[agent_id]

    def team_agents(self, team: Team) -> List[AgentState]:
        return [a for a in self.agents if a.team is team]

    def opponents(self, team: Team) -> List[AgentState]:
        return [a for a in self.agents if a.team is not team]

    def teammates(self, agent_id: int) -> List[AgentState]:
        me = self.agents[agent_id]
        return [a for a in self.agents if a.team is me.team and a.agent_id != agent_id]

    def flag(self, team: Team) -> FlagState:
        for flag in self.flags:
            if flag.team is team:
                return flag
        raise KeyError(team)

    def score(self, team: Team) -> int:
        return self.scores[team]

    def evolve(self, **changes: Any) -> "GameState":
        return replace(self, **changes)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "time": self.time,
            "step_index": self.step_index,
            "agents": [a.to_dict() for a in self.agents],
            "flags": [f.to_dict() for f in self.flags],
            "scores": {team.value: score for team, score in self.scores.items()},
            "event_history": [e.to_dict() for e in self.event_history],
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "GameState":
        return cls(
            field=FieldSpec.from_dict(data["field"]),
            time=data["time"],
            step_index=data["step_index"],
            agents=tuple(AgentState.from_dict(a) for a in data["agents"]),
            flags=tuple(FlagState.from_dict(f) for f in data["flags"]),
            scores={Team(k): v for k, v in data["scores"].items()},
            event_history=tuple(GameEvent.from_dict(e) for e in data.get("event_history", [])),
        )
