"""
Team strategies: the Pav01 baseline, the static role pairings of Strategies 2
and 3, the rule-based switching of Strategy 4, and the Inert and Custom
reference policies.
"""
import logging
from enum import Enum
from typing import Any, Dict, List, Mapping, Optional

from src.agents.base import HelmTeamAgent, PolicyContext, register_policy
from src.agents.roles import (Calibration, RoleArchetype, easy_attacker_tree, evasion_behavior,
                              role_tree, safety_behaviors, waypoint)
from src.helm.mode_tree import ModeTree
from src.models.errors import CTFError, StrategyError
from src.models.game import GameState, Team

logger = logging.getLogger(__name__)


class TeamStrategy(Enum):
    PAV01 = "Pav01"
    STRATEGY2 = "Strategy2"
    STRATEGY3 = "Strategy3"
    STRATEGY4 = "Strategy4"
    CLASSIFIER = "Classifier"


ROLE_PAIRS = {
    TeamStrategy.PAV01: (RoleArchetype.EASY_ATTACKER, RoleArchetype.EASY_DEFENDER),
    TeamStrategy.STRATEGY2: (RoleArchetype.EASY_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
    TeamStrategy.STRATEGY3: (RoleArchetype.MEDIUM_ATTACKER, RoleArchetype.MEDIUM_DEFENDER),
}


def strategy4_tree(cal: Optional[Calibration] = None) -> ModeTree:
    """Attack until an untagged opponent enters our zone, then both agents pursue it"""
    cal = cal or Calibration()
    evade = evasion_behavior(cal)
    return ModeTree.from_dict({"name": "strategy4", "behaviors": safety_behaviors(), "children": [
        {"name": "returning", "when": {"fact": "self_tagged"}, "behaviors": [waypoint("own_flag")]},
        {"name": "pursue", "when": {"fact": "intruder_in_zone"},
         "behaviors": [{"kind": "CutRange", "params": {"target": "nearest_intruder"}}]},
        {"name": "carrying", "when": {"fact": "self_has_flag"}, "behaviors": [waypoint("own_flag"), evade]},
        {"name": "attack", "behaviors": [waypoint("opponent_flag"), evade]},
    ]})


def inert_tree() -> ModeTree:
    return ModeTree.from_dict({"name": "inert", "behaviors": safety_behaviors(), "children": [
        {"name": "hold", "behaviors": [{"kind": "StationKeep", "params": {"hold": "start"}}]},
    ]})


def _role_pair(pair, world: GameState, team: Team, cal: Calibration) -> Dict[int, ModeTree]:
    trees = {}
    for agent in world.team_agents(team):
        role = pair[min(agent.index, len(pair) - 1)]
        trees[agent.agent_id] = role_tree(role, world.field, team, cal)
    return trees


def pav01_policy(world: GameState, team: Team, cal: Optional[Calibration] = None) -> Dict[int, ModeTree]:
    """Agent index 0 runs EasyAttacker, index 1 EasyDefender, for the whole game"""
    return _role_pair(ROLE_PAIRS[TeamStrategy.PAV01], world, team, cal or Calibration())


def strategy_mode_switch(strategy: TeamStrategy, world: GameState, team: Team,
                         cal: Optional[Calibration] = None) -> Dict[int, ModeTree]:
    cal = cal or Calibration()
    if strategy is TeamStrategy.STRATEGY4:
        tree = strategy4_tree(cal)
        return {agent.agent_id: tree for agent in world.team_agents(team)}
    if strategy not in (TeamStrategy.STRATEGY2, TeamStrategy.STRATEGY3):
        raise StrategyError(f"{strategy.value} is not a mode-switching strategy")
    return _role_pair(ROLE_PAIRS[strategy], world, team, cal)


class StaticTreeAgent(HelmTeamAgent):
    """Builds its trees once at reset; any switching happens inside the trees"""

    def __init__(self, team: Team, context: PolicyContext, spec: Optional[Mapping[str, Any]] = None):
        super().__init__(team, context, spec)
        self._trees: Dict[int, ModeTree] = {}

    @property
    def calibration(self) -> Calibration:
        return self.context.calibration or Calibration()

    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        raise NotImplementedError

    def reset(self, world: GameState) -> None:
        super().reset(world)
        self._trees = self.build_trees(world)

    def trees(self, world: GameState) -> Dict[int, ModeTree]:
        if not self._trees:
            self._trees = self.build_trees(world)
        return self._trees


@register_policy("Pav01")
class Pav01Agent(StaticTreeAgent):
    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        return pav01_policy(world, self.team, self.calibration)


@register_policy("Strategy2")
class Strategy2Agent(StaticTreeAgent):
    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        return strategy_mode_switch(TeamStrategy.STRATEGY2, world, self.team, self.calibration)


@register_policy("Strategy3")
class Strategy3Agent(StaticTreeAgent):
    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        return strategy_mode_switch(TeamStrategy.STRATEGY3, world, self.team, self.calibration)


@register_policy("Strategy4")
class Strategy4Agent(StaticTreeAgent):
    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        return strategy_mode_switch(TeamStrategy.STRATEGY4, world, self.team, self.calibration)


@register_policy("Inert")
class InertAgent(StaticTreeAgent):
    """Every agent station-keeps at its starting position"""

    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        tree = inert_tree()
        return {agent.agent_id: tree for agent in world.team_agents(self.team)}


@register_policy("EasyAttackerOnly")
class EasyAttackerOnlyAgent(StaticTreeAgent):
    """Index 0 attacks, the rest station-keep; a single-agent pursuit reference"""

    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        attacker = ModeTree.from_dict(easy_attacker_tree())
        inert = inert_tree()
        return {a.agent_id: attacker if a.index == 0 else inert for a in world.team_agents(self.team)}


@register_policy("Custom")
class CustomTreeAgent(StaticTreeAgent):
    """Mode trees declared in the policy spec: {"name": "Custom", "trees": [tree, ...]}.

    Tree i drives the agent with within-team index i; the last tree covers any
    remaining agents.
    """

    @classmethod
    def spec_violations(cls, spec: Mapping[str, Any]) -> List[str]:
        trees = spec.get("trees")
        if not isinstance(trees, list) or not trees:
            return ["Custom policy needs a non-empty 'trees' list"]
        found = []
        for i, data in enumerate(trees):
            try:
                found.extend(f"tree {i}: {v}" for v in ModeTree.from_dict(data).violations())
            except CTFError as e:
                found.append(f"tree {i}: [{e.code}] {e.message}")
        return found

    def build_trees(self, world: GameState) -> Dict[int, ModeTree]:
        parsed = [ModeTree.from_dict(data) for data in self.spec["trees"]]
        return {a.agent_id: parsed[min(a.index, len(parsed) - 1)] for a in world.team_agents(self.team)}
