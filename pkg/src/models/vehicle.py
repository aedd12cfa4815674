"""
Vehicle kinematic limits and the (speed, heading) action of one agent
"""
from dataclasses import dataclass
from typing import Any, Dict, List


@dataclass(frozen=True)
class VehicleSpec:
    max_speed: float = 2.5            # m/s
    max_turn_rate: float = 40.0       # deg/s
    speed_response: float = 0.5       # 1/s, first-order lag constant
    dt: float = 0.1                   # s
    tagged_speed_factor: float = 0.5

    def validate(self) -> List[str]:
        violations = []
        for name in ("max_speed", "max_turn_rate", "speed_response", "dt"):
            if getattr(self, name) <= 0:
                violations.append(f"vehicle: {name} must be positive")
        if self.max_turn_rate * self.dt >= 180.0:
            violations.append("vehicle: max_turn_rate * dt must be below 180 degrees")
        if not 0 < self.tagged_speed_factor <= 1:
            violations.append("vehicle: tagged_speed_factor must be in (0, 1]")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "max_speed": self.max_speed,
            "max_turn_rate": self.max_turn_rate,
            "speed_response": self.speed_response,
            "dt": self.dt,
            "tagged_speed_factor": self.tagged_speed_factor,
        }

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "VehicleSpec":
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class Action:
    desired_speed: float
    desired_heading: float

    def to_list(self) -> List[float]:
        return [self.desired_speed, self.desired_heading]


STOP = Action(0.0, 0.0)
