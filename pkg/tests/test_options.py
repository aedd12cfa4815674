from src.helm.mode_tree import select_mode
from src.learning.options import OPTIONS, OptionId, option_trees, shield_point
from src.models.game import Team
from tests.helpers import clear_field, place


def test_every_option_has_a_valid_tree(field):
    trees = option_trees(field, Team.BLUE)
    assert list(trees) == list(OPTIONS)
    for tree in trees.values():
        assert tree.violations() == []


def test_tagged_agents_head_home_whatever_the_option(world):
    trees = option_trees(world.field, Team.BLUE)
    tagged = place(world, 0, x=60.0, y=40.0, tagged=True)
    for option in (OptionId.PICKUP_OPPONENT_FLAG, OptionId.GUARD_OWN_FLAG,
                   OptionId.TAG_OPPONENT, OptionId.SHIELD_TEAMMATE):
        assert select_mode(trees[option], tagged.agent(0), tagged).mode == "returning"


def test_shield_point_sits_between_carrier_and_threat(world):
    world = clear_field(world, keep=(0, 1, 2))
    world = place(world, 1, x=100.0, y=40.0, has_flag=True)
    world = place(world, 2, x=120.0, y=40.0)
    assert shield_point(world.agent(0), world) == (110.0, 40.0)


def test_shield_point_without_a_carrier_is_the_teammate(world):
    assert shield_point(world.agent(0), world) == world.agent(1).position
