"""
Plays single games to the horizon and replays recorded ones
"""
import logging
from pathlib import Path
from typing import Any, Dict, Iterator, List, Optional, Sequence, Union

import numpy as np

from src import __version__
from src.agents.base import TeamAgent, create_policy, joint_action
from src.engine.rules import initial_state, step_game
from src.harness.config import GameConfig
from src.harness.game_log import GameLog, read_log
from src.learning.trainer import file_sha256
from src.models.errors import ReplayMismatchError
from src.models.game import EventKind, GameEvent, GameState, Team

logger = logging.getLogger(__name__)


def team_totals(events: Sequence[GameEvent], team: Team) -> Dict[str, int]:
    mine = [e for e in events if e.team is team]
    grabs = sum(e.kind is EventKind.GRAB for e in mine)
    captures = sum(e.kind is EventKind.CAPTURE for e in mine)
    return {
        "grabs": grabs,
        "captures": captures,
        "tags": sum(e.kind.has_victim for e in mine),
        "out_of_bounds": sum(e.kind is EventKind.OUT_OF_BOUNDS for e in mine),
        "score": grabs + 2 * captures,
    }


def _step_record(world: GameState, actions, labels: List[str]) -> Dict[str, Any]:
    return {
        "step": world.step_index,
        "t": round(world.time, 6),
        "agents": [a.to_dict() for a in world.agents],
        "flags": [f.to_dict() for f in world.flags],
        "modes": labels,
        "actions": [a.to_list() for a in actions],
    }


def build_teams(config: GameConfig) -> Dict[Team, TeamAgent]:
    context = config.policy_context()
    return {team: create_policy(config.policy(team), team, context) for team in (Team.BLUE, Team.RED)}


def run_game(config: GameConfig, log_path: Optional[Union[str, Path]] = None) -> GameLog:
    """Play one game to the horizon. The log is a pure function of the config"""
    settings = config.settings
    teams = build_teams(config)
    world = initial_state(settings.field, settings.team_size)
    for agent in teams.values():
        agent.reset(world)
    noise = np.random.default_rng(config.seed)

    log = GameLog()
    log.append("header", {
        "version": __version__,
        "config": config.to_dict(),
        "provenance": {team.value: agent.provenance() for team, agent in teams.items()},
    })
    logger.info(f"game {config.blue['name']} (blue) vs {config.red['name']} (red), seed {config.seed}")

    events: List[GameEvent] = []
    for _ in range(settings.horizon_steps):
        decisions = [teams[Team.BLUE].act(world, events), teams[Team.RED].act(world, events)]
        actions, labels = joint_action(world, decisions)
        world, events = step_game(world, actions, settings, noise)
        if world.step_index % config.record_every == 0 or events:
            log.append("step", _step_record(world, actions, labels))
        for event in events:
            log.append("event", {"step": world.step_index, **event.to_dict()})

    history = world.event_history
    totals = {team.value: team_totals(history, team) for team in Team}
    log.append("final", {
        "step": world.step_index,
        "t": round(world.time, 6),
        "scores": {team.value: world.score(team) for team in Team},
        "totals": totals,
        "events": len(history),
    })
    logger.info(f"final score blue {world.score(Team.BLUE)} - red {world.score(Team.RED)} "
                f"after {len(history)} event(s)")
    if log_path is not None:
        log.write(log_path)
    return log


def _check_provenance(header: Dict[str, Any]) -> None:
    for team, info in header.get("provenance", {}).items():
        path = info.get("qtable")
        if path is None:
            continue
        if not Path(path).is_file() or file_sha256(Path(path)) != info.get("qtable_sha256"):
            raise ReplayMismatchError(f"{team} Q-table {path} is missing or changed since the game was logged")


def replay(log: Union[GameLog, str, Path], verify: bool = False) -> Iterator[Dict[str, Any]]:
    """Re-emit the recorded records in order.

    With verify=True the game is first re-simulated from the header config and
    every line compared; the first difference raises ReplayMismatchError.
    """
    if not isinstance(log, GameLog):
        log = read_log(log)
    if verify:
        header = log.header
        _check_provenance(header)
        fresh = run_game(GameConfig.from_dict(header["config"]))
        for number, (recorded, replayed) in enumerate(zip(log.lines, fresh.lines), start=1):
            if recorded != replayed:
                raise ReplayMismatchError(f"re-simulation differs from the log at line {number}")
        if len(log.lines) != len(fresh.lines):
            raise ReplayMismatchError(
                f"re-simulation produced {len(fresh.lines)} records, the log has {len(log.lines)}")
        logger.info(f"replay verified: {len(log.lines)} records match")
    return log.records()
