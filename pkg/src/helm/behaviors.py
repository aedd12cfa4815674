"""
Helm behaviors: each one rates every (heading, speed) cell of the decision
domain for one agent in the current world.
"""
import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Any, Dict, List, Optional

import numpy as np

from src.helm.domain import DecisionDomain, ObjectiveSurface
from src.helm.facts import (AGENT_SELECTORS, HelmContext, active_opponents, bearing,
                            resolve_agent, resolve_point)
from src.models.errors import ModeTreeError
from src.models.game import AgentState, GameState, Point, distance


class BehaviorKind(Enum):
    WAYPOINT = "Waypoint"
    LOITER = "Loiter"
    CUT_RANGE = "CutRange"
    AVOID_COLLISION = "AvoidCollision"
    OP_REGION = "OpRegion"
    STATION_KEEP = "StationKeep"


DEFAULT_WEIGHTS = {
    BehaviorKind.WAYPOINT: 100.0,
    BehaviorKind.LOITER: 100.0,
    BehaviorKind.CUT_RANGE: 100.0,
    BehaviorKind.AVOID_COLLISION: 200.0,
    BehaviorKind.OP_REGION: 300.0,
    BehaviorKind.STATION_KEEP: 50.0,
}

DEFAULT_PARAMS: Dict[BehaviorKind, Dict[str, Any]] = {
    BehaviorKind.WAYPOINT: {"target": None},
    BehaviorKind.LOITER: {"center": None, "radius": 12.0, "clockwise": True, "points": 8,
                          "capture_radius": 5.0},
    BehaviorKind.CUT_RANGE: {"target": None, "lead_time": 3.0},
    BehaviorKind.AVOID_COLLISION: {"standoff": 5.0, "halt": True, "contacts": "all"},
    BehaviorKind.OP_REGION: {"box": None, "margin": 5.0},
    BehaviorKind.STATION_KEEP: {"hold": "start", "hold_radius": 3.0},
}

REQUIRED_PARAMS = {
    BehaviorKind.WAYPOINT: ("target",),
    BehaviorKind.LOITER: ("center",),
    BehaviorKind.CUT_RANGE: ("target",),
}


@dataclass(frozen=True)
class BehaviorSpec:
    kind: BehaviorKind
    params: Dict[str, Any] = field(default_factory=dict)
    priority_weight: Optional[float] = None

    def __post_init__(self):
        merged = dict(DEFAULT_PARAMS[self.kind])
        merged.update(self.params)
        object.__setattr__(self, "params", merged)
        if self.priority_weight is None:
            object.__setattr__(self, "priority_weight", DEFAULT_WEIGHTS[self.kind])

    def validate(self) -> List[str]:
        label = self.kind.value
        violations = []
        unknown = set(self.params) - set(DEFAULT_PARAMS[self.kind])
        if unknown:
            violations.append(f"{label}: unknown parameter(s) {sorted(unknown)}")
        if self.priority_weight < 0:
            violations.append(f"{label}: priority_weight must be non-negative")
        for name in REQUIRED_PARAMS.get(self.kind, ()):
            if self.params.get(name) is None:
                violations.append(f"{label}: parameter '{name}' is required")
        for name in ("radius", "capture_radius", "standoff", "hold_radius", "margin"):
            if name in self.params and self.params[name] <= 0:
                violations.append(f"{label}: {name} must be positive")
        if self.kind is BehaviorKind.LOITER and int(self.params["points"]) < 3:
            violations.append(f"{label}: points must be at least 3")
        if self.kind is BehaviorKind.CUT_RANGE:
            target = self.params.get("target")
            if isinstance(target, str) and target not in AGENT_SELECTORS:
                violations.append(f"{label}: target must be an agent selector or id, got {target!r}")
        box = self.params.get("box") if self.kind is BehaviorKind.OP_REGION else None
        if box is not None and (len(box) != 4 or box[0] >= box[2] or box[1] >= box[3]):
            violations.append(f"{label}: box must be [x_min, y_min, x_max, y_max] with positive extent")
        if self.kind is BehaviorKind.AVOID_COLLISION and self.params["contacts"] not in ("all", "opponents"):
            violations.append(f"{label}: contacts must be 'all' or 'opponents'")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {"kind": self.kind.value, "weight": self.priority_weight, "params": dict(self.params)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "BehaviorSpec":
        try:
            kind = BehaviorKind(data["kind"])
        except ValueError:
            raise ModeTreeError(f"unknown behavior kind {data['kind']!r}", code="UNKNOWN_BEHAVIOR")
        weight = data.get("weight")
        return cls(kind=kind, params=dict(data.get("params", {})),
                   priority_weight=None if weight is None else float(weight))


def _closing_surface(dom: DecisionDomain, target_bearing: float) -> np.ndarray:
    """Normalized closing rate toward a bearing: 100 at full speed on it, 0 directly away"""
    return 50.0 + 50.0 * np.outer(dom.cos_offset(target_bearing), dom.speed_fraction())


def _waypoint(own: AgentState, point: Point, dom: DecisionDomain) -> ObjectiveSurface:
    return ObjectiveSurface(_closing_surface(dom, bearing(own.position, point)))


def _loiter_target(own: AgentState, params: Dict[str, Any], center: Point) -> Point:
    radius = float(params["radius"])
    count = int(params["points"])
    capture = float(params["capture_radius"])
    direction = 1.0 if params["clockwise"] else -1.0
    polar = bearing(center, own.position)
    vertices = []
    for k in range(count):
        angle = k * 360.0 / count
        advance = ((angle - polar) * direction) % 360.0 or 360.0
        rad = math.radians(angle)
        vertices.append((advance, (center[0] + radius * math.sin(rad), center[1] + radius * math.cos(rad))))
    vertices.sort(key=lambda item: item[0])
    for _, point in vertices:
        if distance(own.position, point) > capture:
            return point
    return vertices[0][1]


def _avoid_collision(own: AgentState, world: GameState, params: Dict[str, Any],
                     dom: DecisionDomain) -> ObjectiveSurface:
    standoff = float(params["standoff"])
    if params["contacts"] == "opponents":
        contacts = active_opponents(own, world)
    else:
        contacts = [a for a in world.agents if a.agent_id != own.agent_id]
    values = np.full(dom.shape, 100.0)
    halt = False
    own_vx, own_vy = own.velocity
    fraction = dom.speed_fraction()
    for contact in contacts:
        rng = distance(own.position, contact.position)
        if rng >= 2.0 * standoff:
            continue
        # teammates inside the stand-off only halt us while the gap is shrinking
        if params["halt"] and rng < standoff and contact.team is not own.team:
            halt = True
        if rng == 0.0:
            halt = halt or bool(params["halt"])
            continue
        cvx, cvy = contact.velocity
        range_rate = ((contact.x - own.x) * (cvx - own_vx) + (contact.y - own.y) * (cvy - own_vy)) / rng
        if params["halt"] and rng < standoff and range_rate < 0.0:
            halt = True
        severity = min(1.0, max(0.0, (2.0 * standoff - rng) / standoff))
        closing = np.clip(np.outer(dom.cos_offset(bearing(own.position, contact.position)), fraction), 0.0, 1.0)
        values *= 1.0 - severity * closing
    if not halt:
        return ObjectiveSurface(values)
    stopped = np.broadcast_to(dom.speeds <= 0.0, dom.shape).copy()
    return ObjectiveSurface(np.where(stopped, 100.0, 0.0), feasible=stopped)


def _op_region(own: AgentState, world: GameState, params: Dict[str, Any],
               dom: DecisionDomain) -> ObjectiveSurface:
    box = params["box"] or (0.0, 0.0, world.field.width, world.field.depth)
    x_min, y_min, x_max, y_max = (float(v) for v in box)
    margin = float(params["margin"])
    edges = (
        (own.x - x_min, (1.0, 0.0)),
        (x_max - own.x, (-1.0, 0.0)),
        (own.y - y_min, (0.0, 1.0)),
        (y_max - own.y, (0.0, -1.0)),
    )
    nearest = min(gap for gap, _ in edges)
    if nearest >= margin:
        return ObjectiveSurface.constant(dom)
    inward_x = inward_y = 0.0
    for gap, (nx, ny) in edges:
        if gap < margin:
            weight = (margin - gap) / margin
            inward_x += nx * weight
            inward_y += ny * weight
    inward = math.degrees(math.atan2(inward_x, inward_y)) % 360.0
    heading_score = (1.0 + dom.cos_offset(inward)) / 2.0
    if nearest < 0.0:
        speeds = dom.speeds
        low = dom.speed_bins[dom.lowest_moving_index]
        top = dom.max_speed
        if top > low:
            moving = 1.0 - 0.6 * (speeds - low) / (top - low)
        else:
            moving = np.ones_like(speeds)
        speed_score = np.where(speeds <= 0.0, 0.4, moving)
        return ObjectiveSurface(100.0 * np.outer(heading_score, speed_score))
    proximity = min(1.0, max(0.0, 1.0 - nearest / margin))
    fraction = dom.speed_fraction()
    penalty = np.outer(1.0 - heading_score, 0.5 + 0.5 * fraction) + np.outer(heading_score, 0.1 * fraction)
    return ObjectiveSurface(100.0 * (1.0 - proximity * penalty))


def _station_keep(own: AgentState, hold: Point, params: Dict[str, Any],
                  dom: DecisionDomain) -> ObjectiveSurface:
    hold_radius = float(params["hold_radius"])
    gap = distance(own.position, hold)
    stay = np.broadcast_to(100.0 * (1.0 - dom.speed_fraction()), dom.shape)
    if gap <= hold_radius:
        return ObjectiveSurface(stay.copy())
    pull = min(1.0, gap / (4.0 * hold_radius))
    return ObjectiveSurface((1.0 - pull) * stay + pull * _closing_surface(dom, bearing(own.position, hold)))


def behavior_objective(spec: BehaviorSpec,
                       own: AgentState,
                       world: GameState,
                       dom: DecisionDomain,
                       ctx: Optional[HelmContext] = None) -> ObjectiveSurface:
    """Rate every decision cell for `own` under one behavior"""
    ctx = ctx or HelmContext()
    params = spec.params
    kind = spec.kind
    if kind is BehaviorKind.WAYPOINT:
        return _waypoint(own, resolve_point(params["target"], own, world, ctx), dom)
    if kind is BehaviorKind.LOITER:
        center = resolve_point(params["center"], own, world, ctx)
        return _waypoint(own, _loiter_target(own, params, center), dom)
    if kind is BehaviorKind.CUT_RANGE:
        target = resolve_agent(params["target"], own, world, ctx)
        vx, vy = target.velocity
        lead = float(params["lead_time"])
        return _waypoint(own, (target.x + vx * lead, target.y + vy * lead), dom)
    if kind is BehaviorKind.AVOID_COLLISION:
        return _avoid_collision(own, world, params, dom)
    if kind is BehaviorKind.OP_REGION:
        return _op_region(own, world, params, dom)
    return _station_keep(own, resolve_point(params["hold"], own, world, ctx), params, dom)
