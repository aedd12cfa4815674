"""
The four role archetypes as mode trees, plus the calibration constants shared
by the rule-based strategies and the classifier.
"""
from dataclasses import asdict, dataclass, fields
from enum import Enum
from typing import Any, Dict, List, Optional

from src.helm.mode_tree import ModeTree
from src.models.game import FieldSpec, Team


class RoleArchetype(Enum):
    EASY_ATTACKER = "EasyAttacker"
    EASY_DEFENDER = "EasyDefender"
    MEDIUM_ATTACKER = "MediumAttacker"
    MEDIUM_DEFENDER = "MediumDefender"


@dataclass(frozen=True)
class Calibration:
    # EasyDefender orbit
    defender_loiter_offset: float = 15.0
    defender_loiter_radius: float = 12.0
    # MediumAttacker evasion
    evasion_standoff: float = 10.0
    evasion_weight: float = 80.0
    # classifier observation
    observation_window: float = 120.0
    observation_post_depth: float = 25.0
    observation_post_late_depth: float = 5.0
    observation_advance_lead: float = 20.0
    block_distance: float = 30.0
    aggression_heading_tolerance: float = 15.0
    aggression_hold: float = 5.0
    block_line_factor: float = 1.5
    circumvent_factor: float = 2.0
    probe_depth: float = 8.0
    probe_pause: float = 20.0
    pursuit_factor: float = 2.5
    pursuit_closing_speed: float = 0.2
    # counter plans
    attack_timing_distance: float = 40.0
    herd_lead: float = 8.0
    herd_offset_deg: float = 30.0
    lure_attack_distance: float = 40.0
    lure_retreat_distance: float = 25.0
    opportune_distance: float = 30.0
    opportune_loiter_depth: float = 20.0
    opportune_loiter_radius: float = 10.0

    def validate(self) -> List[str]:
        return [f"calibration: {f.name} must be positive"
                for f in fields(self) if getattr(self, f.name) <= 0]

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: Optional[Dict[str, Any]]) -> "Calibration":
        return cls(**{k: float(v) for k, v in (data or {}).items()})


def safety_behaviors() -> List[Dict[str, Any]]:
    """The two behaviors every leaf runs"""
    return [{"kind": "OpRegion"}, {"kind": "AvoidCollision"}]


def evasion_behavior(cal: Calibration) -> Dict[str, Any]:
    return {"kind": "AvoidCollision", "weight": cal.evasion_weight,
            "params": {"standoff": cal.evasion_standoff, "halt": False, "contacts": "opponents"}}


def waypoint(target: Any) -> Dict[str, Any]:
    return {"kind": "Waypoint", "params": {"target": target}}


RETURNING = {"any": [{"fact": "self_has_flag"}, {"fact": "self_tagged"}]}


def easy_attacker_tree() -> Dict[str, Any]:
    return {"name": "easy_attacker", "behaviors": safety_behaviors(), "children": [
        {"name": "returning", "when": RETURNING, "behaviors": [waypoint("own_flag")]},
        {"name": "attack", "behaviors": [waypoint("opponent_flag")]},
    ]}


def easy_defender_tree(field: FieldSpec, team: Team, cal: Calibration) -> Dict[str, Any]:
    fx, fy = field.flag_home(team)
    toward_midfield = 1.0 if team is Team.BLUE else -1.0
    center = [fx + toward_midfield * cal.defender_loiter_offset, fy]
    return {"name": "easy_defender", "behaviors": safety_behaviors(), "children": [
        {"name": "orbit", "behaviors": [
            {"kind": "Loiter", "params": {"center": center, "radius": cal.defender_loiter_radius}}]},
    ]}


def medium_attacker_tree(cal: Calibration) -> Dict[str, Any]:
    evade = evasion_behavior(cal)
    return {"name": "medium_attacker", "behaviors": safety_behaviors(), "children": [
        {"name": "returning", "when": RETURNING, "behaviors": [waypoint("own_flag"), evade]},
        {"name": "attack", "behaviors": [waypoint("opponent_flag"), evade]},
    ]}


def medium_defender_tree() -> Dict[str, Any]:
    return {"name": "medium_defender", "behaviors": safety_behaviors(), "children": [
        {"name": "returning", "when": {"fact": "self_tagged"}, "behaviors": [waypoint("own_flag")]},
        {"name": "intercept", "when": {"fact": "intruder_in_zone"},
         "behaviors": [{"kind": "CutRange", "params": {"target": "nearest_intruder"}}]},
        {"name": "hold", "behaviors": [{"kind": "StationKeep", "params": {"hold": "own_zone_center"}}]},
    ]}


def role_tree(role: RoleArchetype, field: FieldSpec, team: Team,
              cal: Optional[Calibration] = None) -> ModeTree:
    cal = cal or Calibration()
    if role is RoleArchetype.EASY_ATTACKER:
        data = easy_attacker_tree()
    elif role is RoleArchetype.EASY_DEFENDER:
        data = easy_defender_tree(field, team, cal)
    elif role is RoleArchetype.MEDIUM_ATTACKER:
        data = medium_attacker_tree(cal)
    else:
        data = medium_defender_tree()
    return ModeTree.from_dict(data)
