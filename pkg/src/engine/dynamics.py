"""
First-order unicycle kinematics with a rate-limited heading
"""
import math

from src.models.errors import ActionError
from src.models.game import AgentState
from src.models.vehicle import Action, VehicleSpec


def wrap_heading(heading: float) -> float:
    wrapped = heading % 360.0
    # -1e-20 % 360 rounds to 360.0
    return 0.0 if wrapped >= 360.0 else wrapped


def heading_difference(target: float, current: float) -> float:
    """Signed shortest-arc difference target - current, in [-180, 180)"""
    return (target - current + 180.0) % 360.0 - 180.0


def clamp_action(action: Action, spec: VehicleSpec) -> Action:
    """Clamp speed into [0, max_speed] and wrap the heading into [0, 360)"""
    speed, heading = action.desired_speed, action.desired_heading
    if not (math.isfinite(speed) and math.isfinite(heading)):
        raise ActionError(f"non-finite action ({speed}, {heading})")
    if speed < 0:
        raise ActionError(f"negative speed {speed} is not a physical command")
    return Action(desired_speed=min(speed, spec.max_speed), desired_heading=wrap_heading(heading))


def integrate_motion(state: AgentState, action: Action, spec: VehicleSpec) -> AgentState:
    """Advance one agent by spec.dt under the already clamped action"""
    max_turn = spec.max_turn_rate * spec.dt
    turn = heading_difference(action.desired_heading, state.heading)
    turn = max(-max_turn, min(max_turn, turn))
    heading = wrap_heading(state.heading + turn)

    cap = spec.max_speed * spec.tagged_speed_factor if state.tagged else spec.max_speed
    target_speed = min(action.desired_speed, cap)
    alpha = 1.0 - math.exp(-spec.speed_response * spec.dt)
    speed = state.speed + (target_speed - state.speed) * alpha
    speed = max(0.0, min(cap, speed))

    rad = math.radians(heading)
    x = state.x + speed * spec.dt * math.sin(rad)
    y = state.y + speed * spec.dt * math.cos(rad)

    return AgentState(
        agent_id=state.agent_id,
        team=state.team,
        index=state.index,
        x=x,
        y=y,
        heading=heading,
        speed=speed,
        has_flag=state.has_flag,
        tagged=state.tagged,
        oob=state.oob,
    )
