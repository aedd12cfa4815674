import pytest

from src.agents.roles import safety_behaviors
from src.agents.strategies import strategy4_tree
from src.helm.behaviors import BehaviorKind
from src.helm.facts import HelmContext
from src.helm.mode_tree import ModeTree, evaluate_condition, select_mode
from src.models.errors import ModeTreeError
from tests.helpers import clear_field, place


def _tree(children):
    return {"name": "root", "behaviors": safety_behaviors(), "children": children}


HOLD = {"name": "hold", "behaviors": [{"kind": "StationKeep"}]}


def test_tree_without_default_leaf_is_rejected():
    data = _tree([{"name": "only", "when": {"fact": "self_tagged"}, "behaviors": []}])
    with pytest.raises(ModeTreeError) as info:
        ModeTree.from_dict(data)
    assert info.value.code == "NO_DEFAULT_LEAF"


def test_unknown_fact_is_rejected():
    data = _tree([{"name": "odd", "when": {"fact": "moon_phase"}}, HOLD])
    with pytest.raises(ModeTreeError) as info:
        ModeTree.from_dict(data)
    assert info.value.code == "UNKNOWN_FACT"


def test_leaf_missing_a_safety_behavior_is_rejected():
    data = {"name": "root", "behaviors": [{"kind": "OpRegion"}], "children": [HOLD]}
    with pytest.raises(ModeTreeError, match="AvoidCollision"):
        ModeTree.from_dict(data)


def test_malformed_condition_is_rejected():
    data = _tree([{"name": "odd", "when": {"all": []}}, HOLD])
    with pytest.raises(ModeTreeError):
        ModeTree.from_dict(data)


def test_leaves_inherit_ancestor_behaviors(world):
    tree = ModeTree.from_dict(_tree([HOLD]))
    selection = select_mode(tree, world.agent(0), world)
    kinds = [b.kind for b in selection.behaviors]
    assert kinds == [BehaviorKind.OP_REGION, BehaviorKind.AVOID_COLLISION, BehaviorKind.STATION_KEEP]


def test_all_conditions_false_falls_through_to_default(world):
    tree = ModeTree.from_dict(_tree([
        {"name": "returning", "when": {"fact": "self_tagged"}, "behaviors": [{"kind": "StationKeep"}]},
        {"name": "late", "when": {"fact": "time", "ge": 300}, "behaviors": [{"kind": "StationKeep"}]},
        HOLD,
    ]))
    assert select_mode(tree, world.agent(0), world).mode == "hold"
    assert select_mode(tree, world.agent(0), world.evolve(time=301.0)).mode == "late"


def test_first_satisfied_leaf_wins_depth_first(world):
    tree = ModeTree.from_dict(_tree([
        {"name": "outer", "when": {"fact": "own_flag_at_home"}, "children": [
            {"name": "inner_tagged", "when": {"fact": "self_tagged"}, "behaviors": [{"kind": "StationKeep"}]},
            {"name": "inner_default", "behaviors": [{"kind": "StationKeep"}]},
        ]},
        HOLD,
    ]))
    assert select_mode(tree, world.agent(0), world).mode == "inner_default"


def test_strategy4_attacks_without_intruders(world):
    tree = strategy4_tree()
    assert select_mode(tree, world.agent(0), world).mode == "attack"
    assert select_mode(tree, world.agent(1), world).mode == "attack"


def test_strategy4_pursues_an_intruder_with_both_agents(world):
    world = place(clear_field(world, keep=(0, 1, 2)), 2, x=60.0, y=40.0)
    tree = strategy4_tree()
    assert select_mode(tree, world.agent(0), world).mode == "pursue"
    assert select_mode(tree, world.agent(1), world).mode == "pursue"


def test_combinators_and_comparisons(world):
    agent = world.agent(0)
    ctx = HelmContext()
    assert evaluate_condition({"not": {"fact": "self_tagged"}}, agent, world, ctx)
    assert evaluate_condition({"all": [{"fact": "own_flag_at_home"}, {"fact": "self_in_own_zone"}]}, agent, world, ctx)
    assert not evaluate_condition({"any": [{"fact": "self_has_flag"}, {"fact": "teammate_tagged"}]}, agent, world, ctx)
    assert evaluate_condition({"fact": "self_to_opponent_flag", "gt": 100, "lt": 200}, agent, world, ctx)
    assert not evaluate_condition({"fact": "nearest_intruder_distance", "lt": 1e6}, agent, world, ctx)


def test_tree_facts_lists_every_read_observable():
    assert strategy4_tree().facts() == {"self_tagged", "intruder_in_zone", "self_has_flag"}


def test_tree_document_reloads_unchanged():
    tree = strategy4_tree()
    assert ModeTree.from_dict(tree.to_dict()) == tree
