import json
import os
from pathlib import Path

import pytest

from src.harness.config import (GameConfig, load_config, load_environment, validate_config)
from src.models.errors import ConfigValidationError
from src.models.game import FieldSpec, Team
from src.models.settings import SimulationSettings
from src.models.vehicle import VehicleSpec


def test_minimal_document_fills_in_defaults():
    config = GameConfig.from_dict({"seed": 1})
    assert config.settings.horizon == 600.0
    assert config.settings.field.width == 160.0
    assert config.blue == {"name": "Strategy4"}
    assert config.red == {"name": "Pav01"}
    assert config.domain.heading_bins == 36
    assert config.period_steps == 5


def test_missing_seed_is_reported():
    violations = validate_config({"horizon": 10})
    assert any("'seed' is a required property" in v for v in violations)


def test_unknown_keys_are_reported():
    with pytest.raises(ConfigValidationError) as info:
        GameConfig.from_dict({"seed": 1, "colour": "blue"})
    assert info.value.code == "CONFIG_INVALID"
    assert any("colour" in v for v in info.value.violations)


def test_every_semantic_violation_is_collected():
    violations = validate_config({
        "seed": 1,
        "field": {"tag_radius": -1},
        "domain": {"speed_bins": [0.0, 3.0]},
        "calibration": {"probe_pause": 0},
        "blue": {"name": "Nope"},
    })
    assert len(violations) >= 4
    joined = "\n".join(violations)
    for fragment in ("tag_radius", "probe_pause", "blue: unknown policy 'Nope'"):
        assert fragment in joined


def test_custom_tree_without_default_leaf_is_a_config_error():
    tree = {"name": "root", "behaviors": [{"kind": "OpRegion"}, {"kind": "AvoidCollision"}],
            "children": [{"name": "only", "when": {"fact": "self_tagged"}}]}
    violations = validate_config({"seed": 1, "red": {"name": "Custom", "trees": [tree]}})
    assert len(violations) == 1
    assert violations[0].startswith("red: tree 0: [NO_DEFAULT_LEAF]")


def test_matchup_policies_are_checked():
    violations = validate_config({"seed": 1, "tournament": {"matchups": [{"a": {"name": "Pav01"},
                                                                           "b": {"name": "Ghost"}}]}})
    assert violations == [v for v in violations if v.startswith("tournament/matchups/0/b")]
    assert violations


def test_resolved_document_reloads_to_the_same_config():
    config = GameConfig.from_dict({"seed": 4, "horizon": 60, "blue": {"name": "Classifier"},
                                   "tournament": {"games": 3, "matchups": [{"a": {"name": "Strategy4"},
                                                                            "b": {"name": "Pav01"}}]},
                                   "training": {"episodes": 5}})
    again = GameConfig.from_dict(config.to_dict())
    assert again.to_dict() == config.to_dict()
    assert again.matchups[0].games == 3


def test_training_overrides():
    config = GameConfig.from_dict({"seed": 4, "training": {"episodes": 5, "team": "red"}})
    training = config.training_config(episodes=7, seed=None)
    assert training.episodes == 7
    assert training.seed == 4
    assert training.team is Team.RED


def test_invalid_json_file(tmp_path):
    path = tmp_path / "broken.json"
    path.write_text("{\"seed\": 1,")
    with pytest.raises(ConfigValidationError) as info:
        load_config(path)
    assert "invalid JSON" in info.value.violations[0]


def test_missing_config_file(tmp_path):
    with pytest.raises(ConfigValidationError):
        load_config(tmp_path / "absent.json")


def test_load_config_from_disk(tmp_path):
    path = tmp_path / "game.json"
    path.write_text(json.dumps({"seed": 11, "red": {"name": "Strategy3"}}))
    config = load_config(path)
    assert config.seed == 11
    assert config.red == {"name": "Strategy3"}


def test_environment_defaults_and_overrides(tmp_path, monkeypatch):
    monkeypatch.setattr(os, "environ", {})
    assert load_environment(tmp_path / "none.env").jobs == 1
    dotenv = tmp_path / ".env"
    dotenv.write_text("CTF_OUT_DIR=elsewhere\nCTF_JOBS=4\n")
    monkeypatch.setitem(os.environ, "CTF_LOG_LEVEL", "debug")
    env = load_environment(dotenv)
    assert env.out_dir == "elsewhere"
    assert env.jobs == 4
    assert env.log_level == "DEBUG"


def test_shipped_configs_are_valid():
    configs = sorted(Path(__file__).resolve().parent.parent.joinpath("configs").glob("*.json"))
    assert configs
    for path in configs:
        assert validate_config(json.loads(path.read_text())) == [], path.name


def test_simulation_settings_build_their_own_defaults():
    settings = SimulationSettings()
    assert settings.field == FieldSpec()
    assert settings.vehicle == VehicleSpec()
    assert settings.dt == 0.1
    assert settings.horizon_steps == 6000
    assert settings.validate() == []
