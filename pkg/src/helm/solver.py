"""
Weighted multi-objective solver over the decision domain
"""
from typing import Sequence, Tuple

import numpy as np

from src.helm.behaviors import BehaviorSpec
from src.helm.domain import DecisionDomain, ObjectiveSurface
from src.models.errors import HelmError
from src.models.vehicle import Action


def combine_surfaces(active: Sequence[Tuple[BehaviorSpec, ObjectiveSurface]],
                     dom: DecisionDomain) -> Tuple[np.ndarray, np.ndarray]:
    """Weighted sum of the surfaces and the intersection of their feasibility masks"""
    total = np.zeros(dom.shape)
    feasible = np.ones(dom.shape, dtype=bool)
    for spec, surface in active:
        total += spec.priority_weight * surface.values
        if surface.feasible is not None:
            feasible &= surface.feasible
    if not feasible.any():
        feasible[:] = True
    return total, feasible


def solve_helm(active: Sequence[Tuple[BehaviorSpec, ObjectiveSurface]], dom: DecisionDomain) -> Action:
    """Pick the cell maximizing the weighted sum of the active surfaces.

    Ties go to the lowest heading bin, then the lowest speed bin: np.argmax
    returns the first maximum in row-major order. The heading emitted is the
    bin center.
    """
    if not active:
        raise HelmError("solve_helm needs at least one active behavior")
    total, feasible = combine_surfaces(active, dom)
    masked = np.where(feasible, total, -np.inf)
    heading_index, speed_index = divmod(int(np.argmax(masked)), dom.shape[1])
    return Action(desired_speed=float(dom.speeds[speed_index]),
                  desired_heading=float(dom.headings[heading_index]))
