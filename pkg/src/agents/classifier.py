"""
Rule-based strategy using opponent observation and classification.

Each own agent is assigned a distinct opposing agent. It first watches that
opponent to decide whether it is offensive (crosses midfield within the
observation window) and then whether it is aggressive: an offensive opponent
is tested against a blocking defender, a non-offensive one is probed by
crossing midfield and pausing. Once both labels are known the agent switches,
for the rest of the game, to the counter plan for that classification.
"""
import logging
import math
from dataclasses import asdict, dataclass, replace
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional, Tuple

from src.agents.base import HelmTeamAgent, PolicyContext, register_policy
from src.agents.roles import (Calibration, RoleArchetype, evasion_behavior, role_tree, safety_behaviors,
                              waypoint)
from src.engine.dynamics import heading_difference
from src.helm.facts import HelmContext, bearing
from src.helm.mode_tree import ModeTree
from src.models.errors import StrategyError
from src.models.game import AgentState, FieldSpec, GameState, Point, Team, distance

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class OpponentModel:
    """What one own agent has learned about its assigned opponent.

    offensive / aggressive are None while unknown and never change once set.
    """
    agent_id: int
    assigned_opponent: int
    offensive: Optional[bool] = None
    aggressive: Optional[bool] = None
    observation_deadline: float = 120.0
    crossing_point: Optional[Point] = None
    aligned_since: Optional[float] = None
    probe_started: Optional[float] = None

    @property
    def complete(self) -> bool:
        return self.offensive is not None and self.aggressive is not None

    @property
    def label(self) -> str:
        def bit(value: Optional[bool], yes: str, no: str) -> str:
            return "?" if value is None else (yes if value else no)
        return bit(self.offensive, "O", "N") + bit(self.aggressive, "A", "N")

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


class Maneuver(Enum):
    TIMED_ATTACK = "timed_attack"
    HERDING = "herding"
    PROBE_RETREAT = "probe_retreat"
    OPPORTUNE_LOITER = "opportune_loiter"


@dataclass(frozen=True)
class CounterPlan:
    label: str
    roles: Tuple[RoleArchetype, RoleArchetype]
    maneuver: Maneuver


COUNTER_PLANS = {
    (True, True): CounterPlan("OA", (RoleArchetype.MEDIUM_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
                              Maneuver.TIMED_ATTACK),
    (True, False): CounterPlan("ON", (RoleArchetype.EASY_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
                               Maneuver.HERDING),
    (False, True): CounterPlan("NA", (RoleArchetype.MEDIUM_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
                               Maneuver.PROBE_RETREAT),
    (False, False): CounterPlan("NN", (RoleArchetype.EASY_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
                                Maneuver.OPPORTUNE_LOITER),
}


def assign_opponents(world: GameState, team: Team) -> Dict[int, int]:
    """Greedy by own id: each agent takes the nearest still-free opponent, ties by id"""
    free = list(world.opponents(team))
    assigned = {}
    for own in world.team_agents(team):
        pool = free or list(world.opponents(team))
        choice = min(pool, key=lambda a: (distance(own.position, a.position), a.agent_id))
        assigned[own.agent_id] = choice.agent_id
        if choice in free:
            free.remove(choice)
    return assigned


def _line_distance(point: Point, start: Point, end: Point) -> float:
    dx, dy = end[0] - start[0], end[1] - start[1]
    length = math.hypot(dx, dy)
    if length == 0.0:
        return distance(point, start)
    return abs(dx * (point[1] - start[1]) - dy * (point[0] - start[0])) / length


def _segment_distance(point: Point, start: Point, end: Point) -> float:
    dx, dy = end[0] - start[0], end[1] - start[1]
    span = dx * dx + dy * dy
    if span == 0.0:
        return distance(point, start)
    t = max(0.0, min(1.0, ((point[0] - start[0]) * dx + (point[1] - start[1]) * dy) / span))
    return distance(point, (start[0] + t * dx, start[1] + t * dy))


def _classify_offensive_test(model: OpponentModel, own: AgentState, opp: AgentState,
                             world: GameState, elapsed: float, cal: Calibration) -> OpponentModel:
    field = world.field
    flag = field.flag_home(own.team)
    if opp.tagged:
        # ran into our defense
        return replace(model, aggressive=True)
    if not field.in_zone(opp.position, own.team):
        return replace(model, aggressive=False)
    if _line_distance(opp.position, model.crossing_point, flag) > cal.circumvent_factor * field.tag_radius:
        return replace(model, aggressive=False)
    heading_error = abs(heading_difference(bearing(opp.position, flag), opp.heading))
    blocking = _segment_distance(own.position, opp.position, flag) <= cal.block_line_factor * field.tag_radius
    if heading_error <= cal.aggression_heading_tolerance and blocking:
        since = elapsed if model.aligned_since is None else model.aligned_since
        if elapsed - since >= cal.aggression_hold:
            return replace(model, aggressive=True, aligned_since=since)
        return replace(model, aligned_since=since)
    return replace(model, aligned_since=None)


def _classify_probe(model: OpponentModel, own: AgentState, opp: AgentState,
                    world: GameState, elapsed: float, cal: Calibration) -> OpponentModel:
    field = world.field
    if model.probe_started is None:
        if field.in_zone(own.position, own.team.opponent):
            return replace(model, probe_started=elapsed)
        return model
    gap = distance(own.position, opp.position)
    close = not opp.tagged and gap <= cal.pursuit_factor * field.tag_radius
    if close and gap > 0.0:
        # speed of the opponent along its line of sight to us
        vx, vy = opp.velocity
        closing = ((own.x - opp.x) * vx + (own.y - opp.y) * vy) / gap
        close = closing >= cal.pursuit_closing_speed
    if close or own.tagged:
        return replace(model, aggressive=True)
    if elapsed - model.probe_started >= cal.probe_pause:
        return replace(model, aggressive=False)
    return model


def classify_opponent(model: OpponentModel,
                      world: GameState,
                      elapsed: float,
                      cal: Optional[Calibration] = None) -> OpponentModel:
    """Advance the classification by one observation; known labels never change"""
    cal = cal or Calibration()
    if model.complete:
        return model
    own = world.agent(model.agent_id)
    opp = world.agent(model.assigned_opponent)
    if model.offensive is None:
        if not opp.tagged and world.field.in_zone(opp.position, own.team):
            return replace(model, offensive=True, crossing_point=opp.position)
        if elapsed >= model.observation_deadline:
            return replace(model, offensive=False)
        return model
    if model.offensive:
        return _classify_offensive_test(model, own, opp, world, elapsed, cal)
    return _classify_probe(model, own, opp, world, elapsed, cal)


def select_counter_strategy(model: OpponentModel) -> CounterPlan:
    if not model.complete:
        raise StrategyError(
            f"agent {model.agent_id}: classification of opponent {model.assigned_opponent} "
            f"is incomplete ({model.label})", code="CLASSIFICATION_INCOMPLETE")
    return COUNTER_PLANS[(model.offensive, model.aggressive)]


def _returning() -> Dict[str, Any]:
    return {"name": "returning", "when": {"fact": "self_tagged"}, "behaviors": [waypoint("own_flag")]}


def observation_tree() -> ModeTree:
    return ModeTree.from_dict({"name": "observe", "behaviors": safety_behaviors(), "children": [
        _returning(),
        {"name": "watch", "behaviors": [{"kind": "StationKeep", "params": {"hold": "observation_post"}}]},
    ]})


def block_tree() -> ModeTree:
    return ModeTree.from_dict({"name": "block_test", "behaviors": safety_behaviors(), "children": [
        _returning(),
        {"name": "block", "behaviors": [{"kind": "StationKeep", "params": {"hold": "block_point"}}]},
    ]})


def probe_tree() -> ModeTree:
    return ModeTree.from_dict({"name": "probe", "behaviors": safety_behaviors(), "children": [
        _returning(),
        {"name": "advance", "when": {"fact": "self_in_own_zone"}, "behaviors": [waypoint("probe_point")]},
        {"name": "pause", "behaviors": [{"kind": "StationKeep", "params": {"hold": "probe_point"}}]},
    ]})


def _role_modes(role: RoleArchetype, field: FieldSpec, team: Team, cal: Calibration) -> List[Dict[str, Any]]:
    """The role's own modes without its returning branch; counter trees supply their own"""
    data = role_tree(role, field, team, cal).to_dict()
    return [child for child in data["children"] if child["name"] != "returning"]


def _maneuver_modes(plan: CounterPlan, role: RoleArchetype, field: FieldSpec, team: Team,
                    cal: Calibration) -> List[Dict[str, Any]]:
    chase_assigned = {"name": "defend", "when": {"fact": "assigned_opponent_in_zone"},
                      "behaviors": [{"kind": "CutRange", "params": {"target": "assigned_opponent"}}]}
    herd = {"name": "herd", "when": {"fact": "assigned_opponent_in_zone"}, "behaviors": [waypoint("herd_point")]}
    attacking = role in (RoleArchetype.EASY_ATTACKER, RoleArchetype.MEDIUM_ATTACKER)
    if plan.maneuver is Maneuver.TIMED_ATTACK:
        if not attacking:
            return []
        return [chase_assigned,
                {"name": "wait", "when": {"fact": "assigned_opponent_to_own_flag", "le": cal.attack_timing_distance},
                 "behaviors": [{"kind": "StationKeep", "params": {"hold": "own_zone_center"}}]}]
    if plan.maneuver is Maneuver.HERDING:
        return [herd]
    if plan.maneuver is Maneuver.PROBE_RETREAT:
        if not attacking:
            return [chase_assigned]
        return [chase_assigned,
                {"name": "luring", "when": {"fact": "assigned_opponent_to_its_flag", "le": cal.lure_attack_distance},
                 "children": [
                     {"name": "retreat", "when": {"fact": "assigned_opponent_range", "lt": cal.lure_retreat_distance},
                      "behaviors": [waypoint("retreat_point")]},
                     {"name": "lure", "behaviors": [{"kind": "StationKeep", "params": {"hold": "probe_point"}}]},
                 ]}]
    if not attacking:
        return []
    into_enemy = 1.0 if team is Team.BLUE else -1.0
    center = [field.midfield_x + into_enemy * cal.opportune_loiter_depth, field.depth / 2.0]
    return [{"name": "defend", "when": {"fact": "intruder_in_zone"},
             "behaviors": [{"kind": "CutRange", "params": {"target": "nearest_intruder"}}]},
            {"name": "loiter", "when": {"fact": "assigned_opponent_to_its_flag", "le": cal.opportune_distance},
             "behaviors": [{"kind": "Loiter", "params": {"center": center, "radius": cal.opportune_loiter_radius}}]}]


def counter_tree(plan: CounterPlan, field: FieldSpec, team: Team, cal: Calibration, slot: int = 0) -> ModeTree:
    """The mode tree one agent runs under a counter plan.

    `slot` picks the agent's role from the plan's role pair; the plan's maneuver
    modes come first and the role's own modes are the fallback.
    """
    role = plan.roles[slot]
    carrying = {"name": "carrying", "when": {"fact": "self_has_flag"}, "behaviors": [waypoint("own_flag")]}
    if role is RoleArchetype.MEDIUM_ATTACKER:
        carrying["behaviors"].append(evasion_behavior(cal))
    children = ([_returning(), carrying] + _maneuver_modes(plan, role, field, team, cal)
                + _role_modes(role, field, team, cal))
    return ModeTree.from_dict({"name": f"counter_{plan.label}_{role.value}", "behaviors": safety_behaviors(),
                               "children": children})


def herd_point(opp: AgentState, field: FieldSpec, team: Team, cal: Calibration) -> Point:
    """A point on the evader's flag side, rotated toward the field interior"""
    to_flag = bearing(opp.position, field.flag_home(team))
    candidates = []
    for offset in (cal.herd_offset_deg, -cal.herd_offset_deg):
        rad = math.radians(to_flag + offset)
        candidates.append((opp.x + cal.herd_lead * math.sin(rad), opp.y + cal.herd_lead * math.cos(rad)))
    return min(candidates, key=lambda p: abs(p[1] - field.depth / 2.0))


@register_policy("Classifier")
class ClassifierAgent(HelmTeamAgent):
    """Observe, classify, then counter, one assigned opponent per own agent"""

    def __init__(self, team: Team, context: PolicyContext, spec: Optional[Mapping[str, Any]] = None):
        super().__init__(team, context, spec)
        self.models: Dict[int, OpponentModel] = {}
        self.plans: Dict[int, CounterPlan] = {}
        self._phase_trees: Dict[str, ModeTree] = {}
        self._counter_trees: Dict[int, ModeTree] = {}
        self._start_y: Dict[int, float] = {}

    @property
    def calibration(self) -> Calibration:
        return self.context.calibration or Calibration()

    def reset(self, world: GameState) -> None:
        super().reset(world)
        cal = self.calibration
        self.models = {
            own_id: OpponentModel(own_id, opp_id, observation_deadline=cal.observation_window)
            for own_id, opp_id in assign_opponents(world, self.team).items()
        }
        self.plans = {}
        self._counter_trees = {}
        self._phase_trees = {"observe": observation_tree(), "block": block_tree(), "probe": probe_tree()}
        self._start_y = {a.agent_id: a.y for a in world.team_agents(self.team)}
        logger.info(f"{self.team.value} classifier assignments: "
                    + ", ".join(f"{k}->{m.assigned_opponent}" for k, m in self.models.items()))

    def observe(self, world: GameState, last_events) -> None:
        if not self.models:
            self.reset(world)
        for own_id, model in self.models.items():
            updated = classify_opponent(model, world, world.time, self.calibration)
            if updated.complete and own_id not in self.plans:
                plan = select_counter_strategy(updated)
                self.plans[own_id] = plan
                self._counter_trees[own_id] = counter_tree(plan, world.field, self.team, self.calibration,
                                                          slot=min(world.agent(own_id).index, 1))
                logger.info(f"t={world.time:.1f} agent {own_id} classified opponent "
                            f"{updated.assigned_opponent} as {plan.label}; countering with {plan.maneuver.value}")
            self.models[own_id] = updated

    def trees(self, world: GameState) -> Dict[int, ModeTree]:
        trees = {}
        for own_id, model in self.models.items():
            if own_id in self._counter_trees:
                trees[own_id] = self._counter_trees[own_id]
            elif model.offensive is None:
                trees[own_id] = self._phase_trees["observe"]
            elif model.offensive:
                trees[own_id] = self._phase_trees["block"]
            else:
                trees[own_id] = self._phase_trees["probe"]
        return trees

    def anchors(self, own: AgentState, world: GameState) -> Dict[str, Point]:
        field = world.field
        cal = self.calibration
        model = self.models[own.agent_id]
        opp = world.agent(model.assigned_opponent)
        home = 1.0 if self.team is Team.BLUE else -1.0
        start_y = self._start_y.get(own.agent_id, own.y)
        late = world.time >= cal.observation_window - cal.observation_advance_lead
        depth = cal.observation_post_late_depth if late else cal.observation_post_depth
        flag = field.flag_home(self.team)
        gap = distance(opp.position, flag)
        if gap > 0.0:
            block = (flag[0] + cal.block_distance * (opp.x - flag[0]) / gap,
                     flag[1] + cal.block_distance * (opp.y - flag[1]) / gap)
        else:
            block = (flag[0] + home * cal.block_distance, flag[1])
        return {
            "observation_post": (field.midfield_x - home * depth, start_y),
            "retreat_point": (field.midfield_x - home * cal.observation_post_depth, start_y),
            "probe_point": (field.midfield_x + home * cal.probe_depth, start_y),
            "block_point": block,
            "herd_point": herd_point(opp, field, self.team, cal),
        }

    def helm_context(self, own: AgentState, world: GameState) -> HelmContext:
        model = self.models[own.agent_id]
        return HelmContext(assigned_opponent=model.assigned_opponent, anchors=self.anchors(own, world))

    def classification(self) -> List[Dict[str, Any]]:
        return [m.to_dict() for m in self.models.values()]
