import pytest

from src.learning.observation import (ObservationGrid, discretize_observation, heading_segment,
                                      range_bucket)
from tests.helpers import place


def test_agent_on_its_flag_facing_north(world):
    world = place(world, 0, x=10.0, y=40.0, heading=0.0)
    features = discretize_observation(world, 0)
    assert features.cell == (0, 2)
    assert features.heading_segment == 0
    assert features.own_flag_home and features.opponent_flag_home
    assert len(features.others) == 3


@pytest.mark.parametrize("heading,segments,expected", [
    (359.9, 36, 35), (0.0, 8, 0), (44.99, 8, 0), (45.0, 8, 1), (-10.0, 8, 7), (360.0, 8, 0),
])
def test_heading_segments_use_floor(heading, segments, expected):
    assert heading_segment(heading, segments) == expected


def test_range_buckets():
    edges = (10.0, 25.0, 50.0)
    assert [range_bucket(r, edges) for r in (0.0, 9.99, 10.0, 30.0, 50.0, 500.0)] == [0, 0, 1, 2, 3, 3]


def test_small_shift_inside_a_cell_keeps_features(world):
    """Moving every agent 1 m east keeps cells, relative bearings and ranges"""
    shifted = world
    for agent in world.agents:
        shifted = place(shifted, agent.agent_id, x=agent.x + 1.0)
    for agent_id in range(4):
        assert discretize_observation(shifted, agent_id) == discretize_observation(world, agent_id)


def test_red_observes_the_mirrored_field(world):
    assert discretize_observation(world, 2).key == discretize_observation(world, 0).key
    assert discretize_observation(world, 3).key == discretize_observation(world, 1).key


def test_keys_have_fixed_width(world):
    key = discretize_observation(world, 1).key
    assert len(key) == 5 + 3 * 4 + 2


def test_grid_validation():
    assert not ObservationGrid().validate()
    assert ObservationGrid(range_edges=(25.0, 10.0)).validate()
    assert ObservationGrid(columns=0).validate()
    assert ObservationGrid.from_dict(ObservationGrid().to_dict()) == ObservationGrid()
