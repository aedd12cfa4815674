"""
Tabular double Q-learning over options.

Both tables are sparse: a dict from the observation key to a vector of one
value per option, in OptionId order. Missing rows read as zeros and are only
stored once an update actually moves them.
"""
import json
import logging
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np

from src.learning.observation import ObservationFeatures, ObservationGrid
from src.learning.options import OPTIONS, OptionId
from src.models.errors import TrainingError

logger = logging.getLogger(__name__)

QTABLE_VERSION = 1

Key = Tuple[int, ...]
Observation = Union[ObservationFeatures, Key]
RngLike = Union[np.random.Generator, int, None]


def _key(obs: Observation) -> Key:
    return obs.key if isinstance(obs, ObservationFeatures) else tuple(obs)


def _rng(rng: RngLike) -> np.random.Generator:
    return rng if isinstance(rng, np.random.Generator) else np.random.default_rng(rng)


@dataclass
class QTables:
    learning_rate: float = 0.1
    gamma: float = 0.99
    option_commit: int = 10
    epsilon_start: float = 1.0
    epsilon_end: float = 0.05
    epsilon_decay: float = 0.995
    table_a: Dict[Key, np.ndarray] = field(default_factory=dict)
    table_b: Dict[Key, np.ndarray] = field(default_factory=dict)

    def values(self, table: Dict[Key, np.ndarray], obs: Observation) -> np.ndarray:
        row = table.get(_key(obs))
        return row if row is not None else np.zeros(len(OPTIONS))

    def mean_values(self, obs: Observation) -> np.ndarray:
        return (self.values(self.table_a, obs) + self.values(self.table_b, obs)) / 2.0

    def epsilon(self, episode: int) -> float:
        return max(self.epsilon_end, self.epsilon_start * self.epsilon_decay ** episode)

    def copy(self) -> "QTables":
        return QTables(
            learning_rate=self.learning_rate, gamma=self.gamma, option_commit=self.option_commit,
            epsilon_start=self.epsilon_start, epsilon_end=self.epsilon_end, epsilon_decay=self.epsilon_decay,
            table_a={k: v.copy() for k, v in self.table_a.items()},
            table_b={k: v.copy() for k, v in self.table_b.items()},
        )

    def max_abs_value(self) -> float:
        rows = list(self.table_a.values()) + list(self.table_b.values())
        return float(max((np.abs(r).max() for r in rows), default=0.0))

    def validate(self) -> List[str]:
        violations = []
        if not 0.0 < self.gamma < 1.0:
            violations.append("training: gamma must be in (0, 1)")
        if not 0.0 <= self.learning_rate <= 1.0:
            violations.append("training: learning_rate must be in [0, 1]")
        if self.option_commit < 1:
            violations.append("training: option_commit must be at least 1")
        for name in ("epsilon_start", "epsilon_end"):
            if not 0.0 <= getattr(self, name) <= 1.0:
                violations.append(f"training: {name} must be in [0, 1]")
        if not 0.0 < self.epsilon_decay <= 1.0:
            violations.append("training: epsilon_decay must be in (0, 1]")
        for name, table in (("A", self.table_a), ("B", self.table_b)):
            if any(not np.all(np.isfinite(row)) for row in table.values()):
                violations.append(f"training: table {name} holds non-finite values")
        return violations

    def hyper_parameters(self) -> Dict[str, Any]:
        return {
            "learning_rate": self.learning_rate,
            "gamma": self.gamma,
            "option_commit": self.option_commit,
            "epsilon_start": self.epsilon_start,
            "epsilon_end": self.epsilon_end,
            "epsilon_decay": self.epsilon_decay,
        }

    @classmethod
    def merge(cls, tables: Sequence["QTables"]) -> "QTables":
        """Per-entry average of several tables; rows a table lacks count as zeros"""
        if not tables:
            raise TrainingError("nothing to merge")
        merged = tables[0].copy()
        for attr in ("table_a", "table_b"):
            keys = sorted(set().union(*(getattr(t, attr).keys() for t in tables)))
            setattr(merged, attr, {
                k: sum(t.values(getattr(t, attr), k) for t in tables) / len(tables) for k in keys
            })
        return merged

    def save(self, path: Union[str, Path], grid: ObservationGrid, seed: int) -> Path:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        header = {
            "version": QTABLE_VERSION,
            "grid": grid.to_dict(),
            "heading_segments": grid.heading_segments,
            "options": [o.value for o in OPTIONS],
            "seed": seed,
            "hyper": self.hyper_parameters(),
        }
        with open(path, "w") as f:
            f.write(json.dumps(header, sort_keys=True) + "\n")
            for k in sorted(set(self.table_a) | set(self.table_b)):
                row = {"key": list(k),
                       "a": self.values(self.table_a, k).tolist(),
                       "b": self.values(self.table_b, k).tolist()}
                f.write(json.dumps(row) + "\n")
        logger.info(f"saved {len(self.table_a)}+{len(self.table_b)} Q rows to {path}")
        return path

    @classmethod
    def load(cls, path: Union[str, Path]) -> Tuple["QTables", ObservationGrid, Dict[str, Any]]:
        path = Path(path)
        try:
            with open(path) as f:
                header = json.loads(f.readline())
                if header.get("version") != QTABLE_VERSION:
                    raise TrainingError(f"{path}: unsupported Q-table version {header.get('version')}")
                if header.get("options") != [o.value for o in OPTIONS]:
                    raise TrainingError(f"{path}: option list does not match this build")
                tables = cls(**header["hyper"])
                for line in f:
                    row = json.loads(line)
                    k = tuple(row["key"])
                    tables.table_a[k] = np.asarray(row["a"], dtype=float)
                    tables.table_b[k] = np.asarray(row["b"], dtype=float)
        except (OSError, ValueError, KeyError) as e:
            raise TrainingError(f"cannot read Q-tables from {path}: {e}")
        return tables, ObservationGrid.from_dict(header["grid"]), header


@dataclass(frozen=True)
class Transition:
    """One option decision: reward is the discounted sum over the `steps` it was held"""
    obs: Observation
    option: OptionId
    reward: float
    next_obs: Optional[Observation]
    terminal: bool
    steps: int = 1


def select_option(q: QTables, obs: Observation, epsilon: float, rng: RngLike = None) -> OptionId:
    """Epsilon-greedy on the mean of both tables; ties go to the first option"""
    rng = _rng(rng)
    if epsilon > 0.0 and rng.random() < epsilon:
        return OPTIONS[int(rng.integers(len(OPTIONS)))]
    return OPTIONS[int(np.argmax(q.mean_values(obs)))]


def double_q_update(q: QTables, transition: Transition, rng: RngLike = None) -> QTables:
    """Update one table toward the other table's value of its own argmax.

    A fair coin picks which table learns. Terminal transitions bootstrap 0;
    otherwise the next value is discounted by gamma ** steps.
    """
    if q.learning_rate == 0.0:
        return q
    rng = _rng(rng)
    learner, critic = (q.table_a, q.table_b) if rng.random() < 0.5 else (q.table_b, q.table_a)
    index = OPTIONS.index(transition.option)
    target = transition.reward
    if not transition.terminal and transition.next_obs is not None:
        best = int(np.argmax(q.values(learner, transition.next_obs)))
        target += q.gamma ** transition.steps * q.values(critic, transition.next_obs)[best]
    key = _key(transition.obs)
    current = q.values(learner, key)[index]
    delta = target - current
    if delta != 0.0:
        row = learner.setdefault(key, np.zeros(len(OPTIONS)))
        row[index] += q.learning_rate * delta
    return q
