"""Shared world-building helpers for the test suite"""
from dataclasses import replace

from src.harness.config import GameConfig
from src.models.game import FlagState, GameState


def place(world: GameState, agent_id: int, **changes) -> GameState:
    """Copy of `world` with one agent's fields replaced; carried flags follow their carrier"""
    agents = list(world.agents)
    agents[agent_id] = replace(agents[agent_id], **changes)
    flags = []
    for flag in world.flags:
        carrier = next((a for a in agents if a.has_flag and a.team is flag.team.opponent), None)
        if carrier is not None:
            flags.append(FlagState(flag.team, carrier.x, carrier.y, carrier.agent_id))
        else:
            flags.append(FlagState(flag.team, *world.field.flag_home(flag.team)))
    return world.evolve(agents=tuple(agents), flags=tuple(flags))


def clear_field(world: GameState, keep=()) -> GameState:
    """Park every agent not in `keep` away from flags, bases and each other"""
    parking = {0: (30.0, 5.0), 1: (30.0, 75.0), 2: (130.0, 5.0), 3: (130.0, 75.0)}
    for agent_id, (x, y) in parking.items():
        if agent_id not in keep:
            world = place(world, agent_id, x=x, y=y)
    return world


def quick_config(seed: int = 7, horizon: float = 30.0, blue=None, red=None, **extra) -> GameConfig:
    data = {"seed": seed, "horizon": horizon,
            "blue": blue or {"name": "Inert"}, "red": red or {"name": "Inert"}}
    data.update(extra)
    return GameConfig.from_dict(data)
