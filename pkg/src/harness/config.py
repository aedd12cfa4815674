"""
Game configuration: one JSON document, schema-checked with jsonschema and then
checked against the domain invariants. Every violation is collected before
anything is reported.

Process-level defaults (log level, output directory, worker count) come from
environment variables, optionally loaded from a .env file.
"""
import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Any, Dict, List, Mapping, Optional, Union

from dotenv import load_dotenv
from jsonschema import Draft7Validator

from src.agents.base import PolicyContext, policy_violations
from src.agents.roles import Calibration
from src.helm.domain import DecisionDomain
from src.learning.observation import ObservationGrid
from src.learning.rewards import RewardTable
from src.learning.trainer import TrainingConfig
from src.models.errors import ConfigValidationError
from src.models.game import FieldSpec, Team
from src.models.settings import SimulationSettings
from src.models.vehicle import VehicleSpec

logger = logging.getLogger(__name__)

_NUMBER = {"type": "number"}
_PAIR = {"type": "array", "items": _NUMBER, "minItems": 2, "maxItems": 2}


def _object(properties: Dict[str, Any], required: Optional[List[str]] = None) -> Dict[str, Any]:
    schema = {"type": "object", "properties": properties, "additionalProperties": False}
    if required:
        schema["required"] = required
    return schema


BEHAVIOR_SCHEMA = _object({
    "kind": {"type": "string"},
    "weight": {"type": "number", "minimum": 0},
    "params": {"type": "object"},
}, required=["kind"])

POLICY_SCHEMA = _object({
    "name": {"type": "string"},
    "trees": {"type": "array", "items": {"$ref": "#/definitions/mode_node"}},
    "qtable": {"type": "string"},
    "mode": {"type": "string", "enum": ["greedy", "random"]},
}, required=["name"])

CONFIG_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "definitions": {
        "mode_node": _object({
            "name": {"type": "string", "minLength": 1},
            "when": {"type": "object"},
            "behaviors": {"type": "array", "items": BEHAVIOR_SCHEMA},
            "children": {"type": "array", "items": {"$ref": "#/definitions/mode_node"}},
        }, required=["name"]),
        "policy": POLICY_SCHEMA,
    },
    **_object({
        "seed": {"type": "integer"},
        "horizon": {"type": "number", "exclusiveMinimum": 0},
        "field": _object({k: _NUMBER for k in FieldSpec().to_dict()}),
        "vehicle": _object({k: _NUMBER for k in VehicleSpec().to_dict()}),
        "domain": _object({
            "heading_bins": {"type": "integer"},
            "speed_bins": {"type": "array", "items": _NUMBER, "minItems": 1},
        }),
        "helm": _object({"period_steps": {"type": "integer", "minimum": 1}}),
        "actuation_noise_deg": {"type": "number", "minimum": 0},
        "blue": {"$ref": "#/definitions/policy"},
        "red": {"$ref": "#/definitions/policy"},
        "rewards": _object({k: _PAIR for k in RewardTable().to_dict()}),
        "calibration": _object({k: _NUMBER for k in Calibration().to_dict()}),
        "log": _object({"record_every": {"type": "integer", "minimum": 1}}),
        "tournament": _object({
            "games": {"type": "integer", "minimum": 1},
            "matchups": {"type": "array", "items": _object({
                "a": {"$ref": "#/definitions/policy"},
                "b": {"$ref": "#/definitions/policy"},
                "games": {"type": "integer", "minimum": 1},
                "seed": {"type": "integer"},
            }, required=["a", "b"])},
        }),
        "training": _object({
            "episodes": {"type": "integer", "minimum": 0},
            "horizon": {"type": "number", "exclusiveMinimum": 0},
            "team": {"type": "string", "enum": [t.value for t in Team]},
            "opponent": {"$ref": "#/definitions/policy"},
            "learning_rate": _NUMBER,
            "gamma": _NUMBER,
            "option_commit": {"type": "integer", "minimum": 1},
            "epsilon_start": _NUMBER,
            "epsilon_end": _NUMBER,
            "epsilon_decay": _NUMBER,
            "eval_every": {"type": "integer", "minimum": 0},
            "eval_episodes": {"type": "integer", "minimum": 1},
            "workers": {"type": "integer", "minimum": 1},
            "sync_every": {"type": "integer", "minimum": 1},
            "log_every": {"type": "integer", "minimum": 0},
            "grid": _object({
                "columns": {"type": "integer", "minimum": 1},
                "rows": {"type": "integer", "minimum": 1},
                "heading_segments": {"type": "integer", "minimum": 1},
                "range_edges": {"type": "array", "items": _NUMBER},
            }),
        }),
    }, required=["seed"]),
}


@dataclass(frozen=True)
class Matchup:
    policy_a: Mapping[str, Any]
    policy_b: Mapping[str, Any]
    games: int = 1
    seed: Optional[int] = None

    @property
    def key(self) -> str:
        return f"{self.policy_a['name']}_vs_{self.policy_b['name']}"

    def to_dict(self) -> Dict[str, Any]:
        data = {"a": dict(self.policy_a), "b": dict(self.policy_b), "games": self.games}
        if self.seed is not None:
            data["seed"] = self.seed
        return data


@dataclass(frozen=True)
class GameConfig:
    seed: int
    settings: SimulationSettings = field(default_factory=SimulationSettings)
    domain: DecisionDomain = field(default_factory=DecisionDomain)
    period_steps: int = 5
    blue: Mapping[str, Any] = field(default_factory=lambda: {"name": "Strategy4"})
    red: Mapping[str, Any] = field(default_factory=lambda: {"name": "Pav01"})
    rewards: RewardTable = field(default_factory=RewardTable)
    calibration: Calibration = field(default_factory=Calibration)
    record_every: int = 1
    matchups: tuple = ()
    training: Mapping[str, Any] = field(default_factory=dict)

    def policy(self, team: Team) -> Mapping[str, Any]:
        return self.blue if team is Team.BLUE else self.red

    def policy_context(self) -> PolicyContext:
        return PolicyContext(settings=self.settings, domain=self.domain, period_steps=self.period_steps,
                             calibration=self.calibration, rewards=self.rewards, seed=self.seed)

    def with_game(self, blue: Mapping[str, Any], red: Mapping[str, Any], seed: int) -> "GameConfig":
        return replace(self, blue=dict(blue), red=dict(red), seed=seed)

    def training_config(self, **overrides: Any) -> TrainingConfig:
        data = dict(self.training)
        data.update({k: v for k, v in overrides.items() if v is not None})
        if "team" in data:
            data["team"] = Team(data["team"])
        if "grid" in data:
            data["grid"] = ObservationGrid.from_dict(data["grid"])
        data.setdefault("seed", self.seed)
        return TrainingConfig(settings=self.settings, domain=self.domain, period_steps=self.period_steps,
                              calibration=self.calibration, rewards=self.rewards, **data)

    def to_dict(self) -> Dict[str, Any]:
        """The fully resolved document, every default filled in"""
        settings = self.settings
        return {
            "seed": self.seed,
            "horizon": settings.horizon,
            "field": settings.field.to_dict(),
            "vehicle": settings.vehicle.to_dict(),
            "domain": self.domain.to_dict(),
            "helm": {"period_steps": self.period_steps},
            "actuation_noise_deg": settings.actuation_noise_deg,
            "blue": dict(self.blue),
            "red": dict(self.red),
            "rewards": self.rewards.to_dict(),
            "calibration": self.calibration.to_dict(),
            "log": {"record_every": self.record_every},
            "tournament": {"matchups": [m.to_dict() for m in self.matchups]},
            "training": dict(self.training),
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "GameConfig":
        violations = validate_config(data)
        if violations:
            raise ConfigValidationError(violations)
        return _build(data)


def _build(data: Mapping[str, Any]) -> GameConfig:
    field_spec = FieldSpec.from_dict(data.get("field", {}))
    vehicle = VehicleSpec.from_dict(data.get("vehicle", {}))
    settings = SimulationSettings(
        field=field_spec,
        vehicle=vehicle,
        horizon=float(data.get("horizon", 600.0)),
        actuation_noise_deg=float(data.get("actuation_noise_deg", 0.0)),
    )
    tournament = data.get("tournament", {})
    default_games = tournament.get("games", 1)
    matchups = tuple(
        Matchup(m["a"], m["b"], m.get("games", default_games), m.get("seed"))
        for m in tournament.get("matchups", [])
    )
    return GameConfig(
        seed=int(data["seed"]),
        settings=settings,
        domain=DecisionDomain.from_dict(data.get("domain", {})),
        period_steps=int(data.get("helm", {}).get("period_steps", 5)),
        blue=dict(data.get("blue", {"name": "Strategy4"})),
        red=dict(data.get("red", {"name": "Pav01"})),
        rewards=RewardTable.from_dict(data.get("rewards")),
        calibration=Calibration.from_dict(data.get("calibration")),
        record_every=int(data.get("log", {}).get("record_every", 1)),
        matchups=matchups,
        training=dict(data.get("training", {})),
    )


def _schema_violations(data: Mapping[str, Any]) -> List[str]:
    validator = Draft7Validator(CONFIG_SCHEMA)
    found = []
    for error in sorted(validator.iter_errors(data), key=lambda e: list(e.absolute_path)):
        where = "/".join(str(p) for p in error.absolute_path) or "<root>"
        found.append(f"{where}: {error.message}")
    return found


def validate_config(data: Mapping[str, Any]) -> List[str]:
    """Every schema and semantic violation of a config document"""
    if not isinstance(data, Mapping):
        return ["<root>: config must be a JSON object"]
    found = _schema_violations(data)
    if found:
        return found
    config = _build(data)
    found += config.settings.validate()
    found += config.domain.validate(config.settings.vehicle.max_speed)
    found += config.calibration.validate()
    found += config.rewards.validate()
    found += policy_violations(config.blue, "blue")
    found += policy_violations(config.red, "red")
    for i, matchup in enumerate(config.matchups):
        found += policy_violations(matchup.policy_a, f"tournament/matchups/{i}/a")
        found += policy_violations(matchup.policy_b, f"tournament/matchups/{i}/b")
    if config.training:
        found += config.training_config().validate()
    return found


def load_config(path: Union[str, Path]) -> GameConfig:
    path = Path(path)
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise ConfigValidationError([f"{path}: {e.strerror}"])
    except json.JSONDecodeError as e:
        raise ConfigValidationError([f"{path}: invalid JSON at line {e.lineno}: {e.msg}"])
    config = GameConfig.from_dict(data)
    logger.debug(f"loaded config {path} (seed {config.seed})")
    return config


@dataclass(frozen=True)
class Environment:
    log_level: str = "INFO"
    out_dir: str = "runs"
    jobs: int = 1


def load_environment(dotenv_path: Optional[Union[str, Path]] = None) -> Environment:
    """Read CTF_LOG_LEVEL, CTF_OUT_DIR and CTF_JOBS, after loading .env if present"""
    load_dotenv(dotenv_path)
    return Environment(
        log_level=os.getenv("CTF_LOG_LEVEL", "INFO").upper(),
        out_dir=os.getenv("CTF_OUT_DIR", "runs"),
        jobs=int(os.getenv("CTF_JOBS", "1")),
    )
