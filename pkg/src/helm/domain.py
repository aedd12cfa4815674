"""
The discretized (heading, speed) decision domain and the objective surfaces
behaviors emit over it
"""
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple

import numpy as np

DEFAULT_SPEEDS = (0.0, 0.5, 1.0, 1.5, 2.0, 2.5)


@dataclass(frozen=True)
class DecisionDomain:
    """K heading bins centered on k*360/K, times a sorted list of speeds"""
    heading_bins: int = 36
    speed_bins: Tuple[float, ...] = DEFAULT_SPEEDS

    def __post_init__(self):
        object.__setattr__(self, "speed_bins", tuple(float(s) for s in self.speed_bins))
        headings = np.arange(self.heading_bins, dtype=float) * (360.0 / self.heading_bins)
        radians = np.radians(headings)
        object.__setattr__(self, "_headings", headings)
        object.__setattr__(self, "_sin", np.sin(radians))
        object.__setattr__(self, "_cos", np.cos(radians))
        object.__setattr__(self, "_speeds", np.asarray(self.speed_bins, dtype=float))

    @property
    def shape(self) -> Tuple[int, int]:
        return (self.heading_bins, len(self.speed_bins))

    @property
    def headings(self) -> np.ndarray:
        return self._headings

    @property
    def speeds(self) -> np.ndarray:
        return self._speeds

    @property
    def max_speed(self) -> float:
        return self.speed_bins[-1]

    @property
    def lowest_moving_index(self) -> int:
        for i, speed in enumerate(self.speed_bins):
            if speed > 0:
                return i
        return 0

    def cos_offset(self, bearing: float) -> np.ndarray:
        """cos(h_k - bearing) for every heading bin"""
        rad = np.radians(bearing)
        return self._cos * np.cos(rad) + self._sin * np.sin(rad)

    def speed_fraction(self) -> np.ndarray:
        top = self.max_speed
        return self._speeds / top if top > 0 else np.zeros_like(self._speeds)

    def heading_index(self, heading: float) -> int:
        width = 360.0 / self.heading_bins
        return int(np.floor(((heading + width / 2.0) % 360.0) / width)) % self.heading_bins

    def validate(self, max_speed: Optional[float] = None) -> List[str]:
        violations = []
        if self.heading_bins < 4:
            violations.append("domain: heading_bins must be at least 4")
        if not self.speed_bins:
            violations.append("domain: speed_bins must be non-empty")
        elif list(self.speed_bins) != sorted(self.speed_bins):
            violations.append("domain: speed_bins must be sorted")
        elif self.speed_bins[0] < 0 or (max_speed is not None and self.speed_bins[-1] > max_speed):
            violations.append("domain: speed_bins must lie within [0, max_speed]")
        return violations

    def to_dict(self) -> Dict[str, Any]:
        return {"heading_bins": self.heading_bins, "speed_bins": list(self.speed_bins)}

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "DecisionDomain":
        return cls(heading_bins=int(data.get("heading_bins", 36)),
                   speed_bins=tuple(data.get("speed_bins", DEFAULT_SPEEDS)))


@dataclass
class ObjectiveSurface:
    """Utility in [0, 100] per (heading_bin, speed_bin) cell.

    `feasible` marks the cells a hard constraint allows; None means all.
    """
    values: np.ndarray
    feasible: Optional[np.ndarray] = None

    def __post_init__(self):
        # rounding in blended surfaces can overshoot the range by an ulp
        self.values = np.clip(np.asarray(self.values, dtype=float), 0.0, 100.0)

    @classmethod
    def constant(cls, domain: DecisionDomain, value: float = 100.0) -> "ObjectiveSurface":
        return cls(np.full(domain.shape, value))

    def is_valid(self) -> bool:
        return bool(np.all(np.isfinite(self.values))
                    and self.values.min() >= 0.0 and self.values.max() <= 100.0)

    def argmax(self) -> Tuple[int, int]:
        flat = int(np.argmax(self.values))
        return divmod(flat, self.values.shape[1])
