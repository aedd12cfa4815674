import numpy as np
import pytest

from src.agents.base import PolicyContext, create_policy, policy_names
from src.agents.roles import RoleArchetype, role_tree
from src.agents.strategies import (CustomTreeAgent, TeamStrategy, inert_tree, pav01_policy,
                                   strategy4_tree, strategy_mode_switch)
from src.helm.mode_tree import select_mode
from src.models.errors import StrategyError
from src.models.game import EventKind, GameEvent, Team
from tests.helpers import clear_field, place


def test_pav01_assigns_attacker_and_defender(world):
    trees = pav01_policy(world, Team.BLUE)
    assert trees[0].root.name == "easy_attacker"
    assert trees[1].root.name == "easy_defender"


def test_easy_attacker_heads_home_after_a_grab(world):
    tree = role_tree(RoleArchetype.EASY_ATTACKER, world.field, Team.BLUE)
    world = place(world, 0, x=145.0, y=40.0, has_flag=True)
    assert select_mode(tree, world.agent(0), world).mode == "returning"


def test_easy_attacker_ignores_opponents(world):
    tree = role_tree(RoleArchetype.EASY_ATTACKER, world.field, Team.BLUE)
    assert tree.facts() <= {"self_has_flag", "self_tagged"}


def test_easy_defender_keeps_orbiting_near_an_enemy(world):
    tree = role_tree(RoleArchetype.EASY_DEFENDER, world.field, Team.BLUE)
    world = place(clear_field(world, keep=(1, 2)), 2, x=world.agent(1).x + 5.0, y=world.agent(1).y)
    assert select_mode(tree, world.agent(1), world).mode == "orbit"


def test_strategy2_defender_intercepts_only_intruders(world):
    trees = strategy_mode_switch(TeamStrategy.STRATEGY2, world, Team.BLUE)
    assert select_mode(trees[0], world.agent(0), world).mode == "attack"
    assert select_mode(trees[1], world.agent(1), world).mode == "hold"
    invaded = place(clear_field(world, keep=(0, 1, 2)), 2, x=50.0, y=40.0)
    assert select_mode(trees[1], invaded.agent(1), invaded).mode == "intercept"
    assert select_mode(trees[0], invaded.agent(0), invaded).mode == "attack"


def test_strategy3_pairs_medium_roles(world):
    trees = strategy_mode_switch(TeamStrategy.STRATEGY3, world, Team.RED)
    assert trees[2].root.name == "medium_attacker"
    assert trees[3].root.name == "medium_defender"


def test_pav01_is_not_a_mode_switching_strategy(world):
    with pytest.raises(StrategyError):
        strategy_mode_switch(TeamStrategy.PAV01, world, Team.BLUE)


def test_strategy4_untagged_agents_pursue_together(world):
    """Untagged agents either both pursue or neither does"""
    tree = strategy4_tree()
    rng = np.random.default_rng(17)
    for _ in range(300):
        for agent_id in range(4):
            world = place(world, agent_id, x=float(rng.uniform(0, 160)), y=float(rng.uniform(0, 80)),
                          tagged=bool(agent_id >= 2 and rng.random() < 0.3))
        pursuing = [select_mode(tree, world.agent(i), world).mode == "pursue" for i in (0, 1)]
        assert pursuing[0] == pursuing[1]


def test_unknown_policy_is_rejected():
    with pytest.raises(StrategyError) as info:
        create_policy({"name": "Pav99"}, Team.BLUE, PolicyContext())
    assert info.value.code == "UNKNOWN_POLICY"


def test_builtin_policies_are_registered():
    names = policy_names()
    for name in ("Pav01", "Strategy2", "Strategy3", "Strategy4", "Classifier", "Options", "Inert", "Custom"):
        assert name in names


def test_custom_policy_reports_tree_problems():
    assert CustomTreeAgent.spec_violations({"name": "Custom"})
    broken = {"name": "root", "children": [{"name": "x", "when": {"fact": "self_tagged"}}]}
    found = CustomTreeAgent.spec_violations({"name": "Custom", "trees": [broken]})
    assert found and "NO_DEFAULT_LEAF" in found[0]


def test_custom_policy_runs_declared_trees(world):
    spec = {"name": "Custom", "trees": [inert_tree().to_dict()]}
    agent = create_policy(spec, Team.RED, PolicyContext())
    agent.reset(world)
    decisions = agent.act(world)
    assert sorted(decisions) == [2, 3]
    assert {d.label for d in decisions.values()} == {"hold"}


@pytest.mark.parametrize("name", ["Pav01", "Strategy2", "Strategy3", "Strategy4", "Classifier"])
def test_actions_lie_in_the_decision_domain(world, name):
    context = PolicyContext()
    agent = create_policy({"name": name}, Team.BLUE, context)
    agent.reset(world)
    for decision in agent.act(world).values():
        assert decision.action.desired_heading in set(context.domain.headings.tolist())
        assert decision.action.desired_speed in context.domain.speed_bins


def test_decisions_are_held_between_helm_iterations(world):
    agent = create_policy({"name": "Pav01"}, Team.BLUE, PolicyContext(period_steps=5))
    agent.reset(world)
    first = agent.act(world)
    later = place(world.evolve(step_index=1, time=0.1), 0, x=40.0, y=60.0)
    assert not agent.helm_due(later, [])
    assert agent.act(later) == first
    assert agent.helm_due(later.evolve(step_index=5, time=0.5), [])
    grab = GameEvent(EventKind.GRAB, 2, Team.RED, 0.1)
    assert agent.helm_due(later, [grab])
