"""
Observables the mode-tree predicate language reads, and the anchors and agent
selectors behaviors are parameterized with.

Facts cover flag possession, positions, headings, tagging status and flag
locations, plus the game clock.
"""
import math
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Optional, Sequence, Union

from src.engine.dynamics import heading_difference
from src.models.errors import BehaviorError
from src.models.game import AgentState, GameState, Point, distance

INF = float("inf")


@dataclass
class HelmContext:
    """Per-agent information a team controller supplies to its helm"""
    assigned_opponent: Optional[int] = None
    anchors: Dict[str, Point] = field(default_factory=dict)


def bearing(origin: Point, target: Point) -> float:
    """Compass bearing from origin to target, degrees in [0, 360)"""
    return math.degrees(math.atan2(target[0] - origin[0], target[1] - origin[1])) % 360.0


def intruders(own: AgentState, world: GameState) -> List[AgentState]:
    """Untagged opponents inside own's zone, nearest first (ties by id)"""
    found = [a for a in world.opponents(own.team)
             if not a.tagged and world.field.in_zone(a.position, own.team)]
    return sorted(found, key=lambda a: (distance(a.position, own.position), a.agent_id))


def active_opponents(own: AgentState, world: GameState) -> List[AgentState]:
    found = [a for a in world.opponents(own.team) if not a.tagged]
    return sorted(found, key=lambda a: (distance(a.position, own.position), a.agent_id))


def _assigned(own: AgentState, world: GameState, ctx: HelmContext) -> Optional[AgentState]:
    if ctx.assigned_opponent is None:
        return None
    return world.agent(ctx.assigned_opponent)


def _nearest_distance(own: AgentState, agents: Sequence[AgentState]) -> float:
    return distance(own.position, agents[0].position) if agents else INF


def _assigned_value(fn: Callable[[AgentState, AgentState, GameState], Any], default: Any):
    def fact(own: AgentState, world: GameState, ctx: HelmContext) -> Any:
        opp = _assigned(own, world, ctx)
        return default if opp is None else fn(own, opp, world)
    return fact


def _flag_bearing_error(own: AgentState, opp: AgentState, world: GameState) -> float:
    to_flag = bearing(opp.position, world.field.flag_home(own.team))
    return abs(heading_difference(to_flag, opp.heading))


FACTS: Dict[str, Callable[[AgentState, GameState, HelmContext], Any]] = {
    "time": lambda own, world, ctx: world.time,
    # possession and flag locations
    "self_has_flag": lambda own, world, ctx: own.has_flag,
    "teammate_has_flag": lambda own, world, ctx: any(a.has_flag for a in world.teammates(own.agent_id)),
    "own_flag_at_home": lambda own, world, ctx: world.flag(own.team).at_home,
    "opponent_flag_at_home": lambda own, world, ctx: world.flag(own.team.opponent).at_home,
    # tagging status
    "self_tagged": lambda own, world, ctx: own.tagged,
    "teammate_tagged": lambda own, world, ctx: any(a.tagged for a in world.teammates(own.agent_id)),
    "assigned_opponent_tagged": _assigned_value(lambda own, opp, world: opp.tagged, False),
    # positions
    "self_in_own_zone": lambda own, world, ctx: world.field.in_zone(own.position, own.team),
    "intruder_in_zone": lambda own, world, ctx: bool(intruders(own, world)),
    "nearest_intruder_distance": lambda own, world, ctx: _nearest_distance(own, intruders(own, world)),
    "nearest_opponent_distance": lambda own, world, ctx: _nearest_distance(own, active_opponents(own, world)),
    "self_to_own_flag": lambda own, world, ctx: distance(own.position, world.field.flag_home(own.team)),
    "self_to_opponent_flag": lambda own, world, ctx: distance(
        own.position, world.field.flag_home(own.team.opponent)),
    "assigned_opponent_in_zone": _assigned_value(
        lambda own, opp, world: not opp.tagged and world.field.in_zone(opp.position, own.team), False),
    "assigned_opponent_range": _assigned_value(
        lambda own, opp, world: distance(own.position, opp.position), INF),
    "assigned_opponent_to_own_flag": _assigned_value(
        lambda own, opp, world: distance(opp.position, world.field.flag_home(own.team)), INF),
    "assigned_opponent_to_its_flag": _assigned_value(
        lambda own, opp, world: distance(opp.position, world.field.flag_home(opp.team)), INF),
    # headings
    "assigned_opponent_flag_bearing_error": _assigned_value(_flag_bearing_error, 180.0),
}


def evaluate_fact(name: str, own: AgentState, world: GameState, ctx: HelmContext) -> Any:
    return FACTS[name](own, world, ctx)


AGENT_SELECTORS = ("nearest_intruder", "nearest_opponent", "assigned_opponent", "teammate")
POINT_ANCHORS = ("own_flag", "opponent_flag", "own_zone_center", "opponent_zone_center", "start")

Target = Union[str, int, Sequence[float]]


def resolve_agent(selector: Target, own: AgentState, world: GameState, ctx: HelmContext) -> AgentState:
    """Resolve an agent selector; BehaviorError when no such agent exists now"""
    candidates: List[AgentState] = []
    if isinstance(selector, int) and not isinstance(selector, bool):
        if 0 <= selector < len(world.agents):
            candidates = [world.agent(selector)]
    elif selector == "nearest_intruder":
        candidates = intruders(own, world)
    elif selector == "nearest_opponent":
        candidates = active_opponents(own, world)
    elif selector == "assigned_opponent":
        opp = _assigned(own, world, ctx)
        candidates = [opp] if opp is not None else []
    elif selector == "teammate":
        candidates = world.teammates(own.agent_id)
    if not candidates:
        raise BehaviorError(f"no agent matches target {selector!r} for agent {own.agent_id}")
    return candidates[0]


def resolve_point(anchor: Target, own: AgentState, world: GameState, ctx: HelmContext) -> Point:
    """Resolve a point anchor: literal [x, y], a named anchor, or an agent's position"""
    if isinstance(anchor, (list, tuple)):
        return (float(anchor[0]), float(anchor[1]))
    if isinstance(anchor, str) and anchor in ctx.anchors:
        return ctx.anchors[anchor]
    field_spec = world.field
    if anchor == "own_flag":
        return field_spec.flag_home(own.team)
    if anchor == "opponent_flag":
        return field_spec.flag_home(own.team.opponent)
    if anchor == "own_zone_center":
        return field_spec.zone_center(own.team)
    if anchor == "opponent_zone_center":
        return field_spec.zone_center(own.team.opponent)
    if anchor == "start":
        team_size = len(world.team_agents(own.team))
        return field_spec.start_position(own.team, own.index, team_size)
    return resolve_agent(anchor, own, world, ctx).position
