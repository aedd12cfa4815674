"""
Discrete observation features for tabular learning.

The world is seen from the observing team's side: red agents observe a mirror
image of the field (x -> width - x, heading -> 360 - heading), so one table
serves either side.
"""
import math
from dataclasses import dataclass, replace
from typing import Any, Dict, List, Tuple

from src.engine.dynamics import wrap_heading
from src.helm.facts import bearing
from src.models.game import AgentState, FieldSpec, GameState, Team, distance


@dataclass(frozen=True)
class ObservationGrid:
    columns: int = 8
    rows: int = 4
    heading_segments: int = 8
    range_edges: Tuple[float, ...] = (10.0, 25.0, 50.0)

    @property
    def range_buckets(self) -> int:
        return len(self.range_edges) + 1

    def state_count(self, team_size: int = 2) -> int:
        others = 2 * team_size - 1
        own = self.columns * self.rows * self.heading_segments * 4
        return own * (self.heading_segments * self.range_buckets * 4) ** others * 4

    def validate(self) -> List[str]:
        violations = []
        if min(self.columns, self.rows, self.heading_segments) < 1:
            violations.append("observation: columns, rows and heading_segments must be positive")
        if list(self.range_edges) != sorted(self.range_edges) or any(e <= 0 for e in self.range_edges):
            violations.append("observation: range_edges must be positive and ascending")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {"columns": self.columns, "rows": self.rows,
                "heading_segments": self.heading_segments, "range_edges": list(self.range_edges)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ObservationGrid":
        data = dict(data or {})
        if "range_edges" in data:
            data["range_edges"] = tuple(float(e) for e in data["range_edges"])
        return cls(**data)


@dataclass(frozen=True)
class ObservationFeatures:
    cell: Tuple[int, int]
    heading_segment: int
    has_flag: bool
    tagged: bool
    others: Tuple[Tuple[int, int, bool, bool], ...]
    own_flag_home: bool
    opponent_flag_home: bool

    @property
    def key(self) -> Tuple[int, ...]:
        flat = [self.cell[0], self.cell[1], self.heading_segment, int(self.has_flag), int(self.tagged)]
        for segment, bucket, has_flag, tagged in self.others:
            flat.extend((segment, bucket, int(has_flag), int(tagged)))
        flat.extend((int(self.own_flag_home), int(self.opponent_flag_home)))
        return tuple(flat)


def heading_segment(heading: float, segments: int) -> int:
    """Floor segment of a heading: segment k covers [k*360/K, (k+1)*360/K)"""
    return int(math.floor(wrap_heading(heading) / (360.0 / segments))) % segments


def range_bucket(rng: float, edges: Tuple[float, ...]) -> int:
    for i, edge in enumerate(edges):
        if rng < edge:
            return i
    return len(edges)


def _mirror(agent: AgentState, field: FieldSpec) -> AgentState:
    return replace(agent, x=field.width - agent.x, heading=wrap_heading(360.0 - agent.heading))


def discretize_observation(world: GameState, agent_id: int, grid: ObservationGrid = ObservationGrid()) -> ObservationFeatures:
    field = world.field
    own = world.agent(agent_id)
    mirrored = own.team is Team.RED
    view = (lambda a: _mirror(a, field)) if mirrored else (lambda a: a)
    me = view(own)
    column = min(grid.columns - 1, max(0, int(me.x // (field.width / grid.columns))))
    row = min(grid.rows - 1, max(0, int(me.y // (field.depth / grid.rows))))
    others = []
    ordered = world.teammates(agent_id) + world.opponents(own.team)
    for other in (view(a) for a in ordered):
        relative = bearing(me.position, other.position) - me.heading
        others.append((heading_segment(relative, grid.heading_segments),
                       range_bucket(distance(me.position, other.position), grid.range_edges),
                       other.has_flag, other.tagged))
    return ObservationFeatures(
        cell=(column, row),
        heading_segment=heading_segment(me.heading, grid.heading_segments),
        has_flag=own.has_flag,
        tagged=own.tagged,
        others=tuple(others),
        own_flag_home=world.flag(own.team).at_home,
        opponent_flag_home=world.flag(own.team.opponent).at_home,
    )
