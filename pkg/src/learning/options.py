"""
The six behavior options a learned policy chooses between. Each option is a
fixed mode-tree fragment run by the helm, so option execution always emits
actions inside the decision domain.
"""
from enum import Enum
from typing import Dict

from src.agents.roles import safety_behaviors, waypoint
from src.helm.mode_tree import ModeTree
from src.models.game import AgentState, FieldSpec, GameState, Point, Team, distance


class OptionId(Enum):
    PICKUP_OPPONENT_FLAG = "PickupOpponentFlag"
    GUARD_OWN_FLAG = "GuardOwnFlag"
    TAG_OPPONENT = "TagOpponent"
    AVOID_OPPONENTS = "AvoidOpponents"
    RETREAT = "Retreat"
    SHIELD_TEAMMATE = "ShieldTeammate"


OPTIONS = tuple(OptionId)

GUARD_RADIUS = 15.0
AVOID_STANDOFF = 15.0


def _tree(name: str, children) -> ModeTree:
    return ModeTree.from_dict({"name": name, "behaviors": safety_behaviors(), "children": children})


def _returning() -> Dict:
    return {"name": "returning", "when": {"fact": "self_tagged"}, "behaviors": [waypoint("own_flag")]}


def option_tree(option: OptionId, field: FieldSpec, team: Team) -> ModeTree:
    if option is OptionId.PICKUP_OPPONENT_FLAG:
        return _tree("pickup", [
            {"name": "returning", "when": {"any": [{"fact": "self_has_flag"}, {"fact": "self_tagged"}]},
             "behaviors": [waypoint("own_flag")]},
            {"name": "attack", "behaviors": [waypoint("opponent_flag")]},
        ])
    if option is OptionId.GUARD_OWN_FLAG:
        return _tree("guard", [
            _returning(),
            {"name": "orbit", "behaviors": [
                {"kind": "Loiter", "params": {"center": list(field.flag_home(team)), "radius": GUARD_RADIUS}}]},
        ])
    if option is OptionId.TAG_OPPONENT:
        return _tree("tag", [
            _returning(),
            {"name": "intercept", "when": {"fact": "intruder_in_zone"},
             "behaviors": [{"kind": "CutRange", "params": {"target": "nearest_intruder"}}]},
            {"name": "hold", "behaviors": [{"kind": "StationKeep", "params": {"hold": "own_zone_center"}}]},
        ])
    if option is OptionId.AVOID_OPPONENTS:
        return _tree("avoid", [
            {"name": "evade", "behaviors": [
                {"kind": "AvoidCollision", "params": {"standoff": AVOID_STANDOFF, "halt": False,
                                                      "contacts": "opponents"}},
                {"kind": "StationKeep", "params": {"hold": "own_zone_center"}}]},
        ])
    if option is OptionId.RETREAT:
        return _tree("retreat", [{"name": "home", "behaviors": [waypoint("own_flag")]}])
    return _tree("shield", [
        _returning(),
        {"name": "screen", "behaviors": [{"kind": "StationKeep", "params": {"hold": "shield_point"}}]},
    ])


def option_trees(field: FieldSpec, team: Team) -> Dict[OptionId, ModeTree]:
    return {option: option_tree(option, field, team) for option in OPTIONS}


def shield_point(own: AgentState, world: GameState) -> Point:
    """Midpoint between the flag-carrying teammate and the nearest untagged
    opponent to it; the teammate's own position when nobody needs shielding
    """
    mates = world.teammates(own.agent_id)
    if not mates:
        return own.position
    carriers = [a for a in mates if a.has_flag]
    mate = carriers[0] if carriers else mates[0]
    threats = [a for a in world.opponents(own.team) if not a.tagged]
    if not carriers or not threats:
        return mate.position
    threat = min(threats, key=lambda a: (distance(a.position, mate.position), a.agent_id))
    return ((mate.x + threat.x) / 2.0, (mate.y + threat.y) / 2.0)
