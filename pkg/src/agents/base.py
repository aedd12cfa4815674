"""
Team controllers and the policy registry.

A TeamAgent drives every agent of one team. The game loop calls act() once per
simulation step; the controller observes every step but runs its helm only
every `period_steps` steps, or right after a step that produced game events,
and holds the chosen actions in between.
"""
import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple, Type

from src.helm.behaviors import behavior_objective
from src.helm.domain import DecisionDomain
from src.helm.facts import HelmContext
from src.helm.mode_tree import ModeTree, select_mode
from src.helm.solver import solve_helm
from src.models.errors import BehaviorError, StrategyError
from src.models.game import AgentState, GameEvent, GameState, Team
from src.models.settings import SimulationSettings
from src.models.vehicle import STOP, Action

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class HelmDecision:
    action: Action
    label: str


@dataclass(frozen=True)
class PolicyContext:
    """Everything a controller needs from the game configuration"""
    settings: SimulationSettings = field(default_factory=SimulationSettings)
    domain: DecisionDomain = field(default_factory=DecisionDomain)
    period_steps: int = 5
    calibration: Any = None
    rewards: Any = None
    seed: int = 0


def helm_step(tree: ModeTree,
              own: AgentState,
              world: GameState,
              domain: DecisionDomain,
              ctx: Optional[HelmContext] = None) -> HelmDecision:
    """One helm iteration for one agent: select a mode, rate, solve"""
    ctx = ctx or HelmContext()
    selection = select_mode(tree, own, world, ctx)
    active = []
    for spec in selection.behaviors:
        try:
            active.append((spec, behavior_objective(spec, own, world, domain, ctx)))
        except BehaviorError as e:
            # a target that vanished this step; the mandatory behaviors still run
            logger.warning(f"agent {own.agent_id} mode {selection.mode}: {e.message}")
    return HelmDecision(solve_helm(active, domain), selection.mode)


class TeamAgent:
    """Base class for a team controller"""

    name = "base"

    def __init__(self, team: Team, context: PolicyContext, spec: Optional[Mapping[str, Any]] = None):
        self.team = team
        self.context = context
        self.spec = dict(spec or {"name": self.name})
        self._held: Dict[int, HelmDecision] = {}

    @property
    def domain(self) -> DecisionDomain:
        return self.context.domain

    def own_agents(self, world: GameState) -> List[AgentState]:
        return world.team_agents(self.team)

    def reset(self, world: GameState) -> None:
        """Called once with the initial state before the first step"""
        self._held = {}

    def observe(self, world: GameState, last_events: Sequence[GameEvent]) -> None:
        """Called every step, before any helm iteration"""

    def decide(self, world: GameState) -> Dict[int, HelmDecision]:
        raise NotImplementedError

    def helm_due(self, world: GameState, last_events: Sequence[GameEvent]) -> bool:
        return (not self._held
                or bool(last_events)
                or world.step_index % self.context.period_steps == 0)

    def act(self, world: GameState, last_events: Sequence[GameEvent] = ()) -> Dict[int, HelmDecision]:
        """Decisions for every own agent, keyed by agent id"""
        self.observe(world, last_events)
        if self.helm_due(world, last_events):
            self._held = self.decide(world)
        return dict(self._held)

    def provenance(self) -> Dict[str, Any]:
        """Extra header fields a replay needs to rebuild this controller"""
        return {}


class HelmTeamAgent(TeamAgent):
    """A controller whose agents each run a mode tree through the helm"""

    def trees(self, world: GameState) -> Dict[int, ModeTree]:
        raise NotImplementedError

    def helm_context(self, own: AgentState, world: GameState) -> HelmContext:
        return HelmContext()

    def decide(self, world: GameState) -> Dict[int, HelmDecision]:
        trees = self.trees(world)
        decisions = {}
        for own in self.own_agents(world):
            tree = trees.get(own.agent_id)
            if tree is None:
                decisions[own.agent_id] = HelmDecision(STOP, "idle")
                continue
            decisions[own.agent_id] = helm_step(tree, own, world, self.domain, self.helm_context(own, world))
        return decisions


POLICY_REGISTRY: Dict[str, Type[TeamAgent]] = {}


def register_policy(name: str):
    """Class decorator registering a TeamAgent under a policy name"""
    def wrap(cls: Type[TeamAgent]) -> Type[TeamAgent]:
        cls.name = name
        POLICY_REGISTRY[name] = cls
        return cls
    return wrap


def load_builtin_policies() -> None:
    # registration happens on import
    import src.agents.classifier  # noqa: F401
    import src.agents.strategies  # noqa: F401
    import src.learning.trainer  # noqa: F401


def policy_names() -> List[str]:
    load_builtin_policies()
    return sorted(POLICY_REGISTRY)


def policy_violations(spec: Mapping[str, Any], where: str) -> List[str]:
    """Semantic problems with a policy spec; empty when it can be built"""
    load_builtin_policies()
    name = spec.get("name")
    cls = POLICY_REGISTRY.get(name)
    if cls is None:
        return [f"{where}: unknown policy {name!r} (known: {', '.join(sorted(POLICY_REGISTRY))})"]
    check = getattr(cls, "spec_violations", None)
    return [f"{where}: {v}" for v in check(spec)] if check else []


def create_policy(spec: Mapping[str, Any], team: Team, context: PolicyContext) -> TeamAgent:
    load_builtin_policies()
    name = spec.get("name")
    cls = POLICY_REGISTRY.get(name)
    if cls is None:
        raise StrategyError(f"unknown policy {name!r}")
    logger.debug(f"creating {name} controller for team {team.value}")
    return cls(team, context, spec)


def joint_action(world: GameState, decisions: Sequence[Dict[int, HelmDecision]]) -> Tuple[List[Action], List[str]]:
    """Merge per-team decisions into the id-ordered joint action and mode labels"""
    merged: Dict[int, HelmDecision] = {}
    for part in decisions:
        merged.update(part)
    actions, labels = [], []
    for agent in world.agents:
        decision = merged.get(agent.agent_id, HelmDecision(STOP, "idle"))
        actions.append(decision.action)
        labels.append(decision.label)
    return actions, labels
