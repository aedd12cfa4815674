"""
Simulation settings shared by the engine, the team controllers and the harness
"""
from dataclasses import dataclass, field as dc_field
from typing import Any, Dict, List

from src.models.game import FieldSpec
from src.models.vehicle import VehicleSpec


@dataclass(frozen=True)
class SimulationSettings:
    field: FieldSpec = dc_field(default_factory=FieldSpec)
    vehicle: VehicleSpec = dc_field(default_factory=VehicleSpec)
    horizon: float = 600.0
    team_size: int = 2
    actuation_noise_deg: float = 0.0

    @property
    def dt(self) -> float:
        return self.vehicle.dt

    @property
    def horizon_steps(self) -> int:
        return int(round(self.horizon / self.vehicle.dt))

    def validate(self) -> List[str]:
        violations = self.field.validate() + self.vehicle.validate()
        if self.horizon <= 0:
            violations.append("horizon must be positive")
        if self.team_size < 1:
            violations.append("team_size must be at least 1")
        if self.actuation_noise_deg < 0:
            violations.append("actuation_noise_deg must be non-negative")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {
            "field": self.field.to_dict(),
            "vehicle": self.vehicle.to_dict(),
            "horizon": self.horizon,
            "team_size": self.team_size,
            "actuation_noise_deg": self.actuation_noise_deg,
        }
