"""
Capture-the-flag rules: tagging, grabbing, capturing, boundaries and the step
transition of the game
"""
import logging
from dataclasses import replace
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np

from src.engine.dynamics import clamp_action, integrate_motion, wrap_heading
from src.models.errors import ActionError
from src.models.game import (AgentState, EventKind, FieldSpec, FlagState, GameEvent,
                             GameState, Team, distance)
from src.models.settings import SimulationSettings
from src.models.vehicle import Action

logger = logging.getLogger(__name__)

TIME_EPSILON = 1e-9


def initial_state(field: FieldSpec, team_size: int = 2) -> GameState:
    """Both teams in their bases, flags at home, clock and scores at zero"""
    agents = []
    for team in (Team.BLUE, Team.RED):
        for index in range(team_size):
            x, y = field.start_position(team, index, team_size)
            agents.append(AgentState(
                agent_id=len(agents),
                team=team,
                index=index,
                x=x,
                y=y,
                heading=field.start_heading(team),
            ))
    flags = tuple(FlagState(team, *field.flag_home(team)) for team in (Team.BLUE, Team.RED))
    return GameState(
        field=field,
        time=0.0,
        step_index=0,
        agents=tuple(agents),
        flags=flags,
        scores={Team.BLUE: 0, Team.RED: 0},
    )


def check_tag_eligibility(tagger: AgentState, target: AgentState, field: FieldSpec) -> bool:
    if tagger.team is target.team:
        return False
    if tagger.tagged or target.tagged:
        return False
    if not field.in_zone(tagger.position, tagger.team):
        return False
    if not field.in_zone(target.position, tagger.team):
        return False
    return distance(tagger.position, target.position) <= field.tag_radius


def _sync_flags(agents: Sequence[AgentState], flags: Dict[Team, FlagState]) -> None:
    for team, flag in flags.items():
        if flag.carrier is not None:
            carrier = agents[flag.carrier]
            flags[team] = FlagState(team, carrier.x, carrier.y, carrier.agent_id)


def resolve_events(state: GameState, field: Optional[FieldSpec] = None) -> Tuple[GameState, List[GameEvent]]:
    """Apply boundary, tag, untag, grab and capture rules in that fixed order.

    Within each phase agents are visited by ascending id.
    """
    field = field or state.field
    agents: List[AgentState] = list(state.agents)
    flags: Dict[Team, FlagState] = {f.team: f for f in state.flags}
    scores = dict(state.scores)
    events: List[GameEvent] = []
    now = state.time

    def drop_flag(agent: AgentState) -> AgentState:
        if not agent.has_flag:
            return agent
        carried = agent.team.opponent
        flags[carried] = FlagState(carried, *field.flag_home(carried))
        return replace(agent, has_flag=False)

    # 1. boundaries
    for i, agent in enumerate(agents):
        outside = not field.in_bounds(agent.position)
        if outside and not agent.oob:
            agents[i] = replace(drop_flag(agent), tagged=True, oob=True)
            events.append(GameEvent(EventKind.OUT_OF_BOUNDS, agent.agent_id, agent.team, now))
        elif outside and not agent.tagged:
            agents[i] = replace(drop_flag(agent), tagged=True)
        elif not outside and agent.oob:
            agents[i] = replace(agent, oob=False)

    # 2. tags
    for tagger_id in range(len(agents)):
        for target_id in range(len(agents)):
            tagger, target = agents[tagger_id], agents[target_id]
            if not check_tag_eligibility(tagger, target, field):
                continue
            kind = EventKind.TAG_WITH_FLAG if target.has_flag else EventKind.TAG
            agents[target_id] = replace(drop_flag(target), tagged=True)
            events.append(GameEvent(kind, tagger.agent_id, tagger.team, now,
                                    victim=target.agent_id, victim_team=target.team))

    # 3. untag inside the home-flag region
    for i, agent in enumerate(agents):
        if agent.tagged and not agent.oob and field.in_base(agent.position, agent.team):
            agents[i] = replace(agent, tagged=False)

    # 4. grabs
    for i, agent in enumerate(agents):
        if agent.tagged or agent.has_flag:
            continue
        target_team = agent.team.opponent
        flag = flags[target_team]
        if flag.at_home and distance(agent.position, flag.position) <= field.grab_radius:
            agents[i] = replace(agent, has_flag=True)
            flags[target_team] = FlagState(target_team, agent.x, agent.y, agent.agent_id)
            scores[agent.team] += 1
            events.append(GameEvent(EventKind.GRAB, agent.agent_id, agent.team, now))

    # 5. captures
    for i, agent in enumerate(agents):
        if agent.has_flag and field.in_base(agent.position, agent.team):
            carried = agent.team.opponent
            flags[carried] = FlagState(carried, *field.flag_home(carried))
            agents[i] = replace(agent, has_flag=False)
            scores[agent.team] += 2
            events.append(GameEvent(EventKind.CAPTURE, agent.agent_id, agent.team, now))

    # untag and oob recovery change agents without emitting events
    if not events and tuple(agents) == state.agents:
        return state, events

    _sync_flags(agents, flags)
    for event in events:
        logger.debug(f"t={now:.1f} {event.kind.value} by agent {event.actor}"
                     + (f" on agent {event.victim}" if event.victim is not None else ""))
    resolved = state.evolve(
        agents=tuple(agents),
        flags=tuple(flags[f.team] for f in state.flags),
        scores=scores,
        event_history=state.event_history + tuple(events),
    )
    return resolved, events


def step_game(state: GameState,
              joint_action: Sequence[Action],
              settings: SimulationSettings,
              rng: Optional[np.random.Generator] = None) -> Tuple[GameState, List[GameEvent]]:
    """Integrate every agent's motion for one dt, then resolve game events.

    The transition is deterministic; when settings.actuation_noise_deg is
    positive and an rng is supplied, commanded headings are perturbed by a
    Gaussian draw from that rng.
    """
    if len(joint_action) != len(state.agents):
        raise ActionError(
            f"expected {len(state.agents)} actions, got {len(joint_action)}", code="ACTION_ARITY")

    noisy = settings.actuation_noise_deg > 0 and rng is not None
    moved = []
    for agent, action in zip(state.agents, joint_action):
        action = clamp_action(action, settings.vehicle)
        if noisy:
            jitter = float(rng.normal(0.0, settings.actuation_noise_deg))
            action = Action(action.desired_speed, wrap_heading(action.desired_heading + jitter))
        moved.append(integrate_motion(agent, action, settings.vehicle))

    flags = {f.team: f for f in state.flags}
    _sync_flags(moved, flags)
    step_index = state.step_index + 1
    advanced = state.evolve(
        agents=tuple(moved),
        flags=tuple(flags[f.team] for f in state.flags),
        time=step_index * settings.dt,
        step_index=step_index,
    )
    return resolve_events(advanced)


def is_terminal(state: GameState, horizon: float) -> bool:
    return state.time >= horizon - TIME_EPSILON
