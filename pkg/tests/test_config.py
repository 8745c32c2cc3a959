from pathlib import Path

import pytest
import yaml

from core.config import ConfigManager, flatten, validate
from core.errors import ConfigError
from pipeline.experiment import Experiment, growth_policy

CONFIG_DIR = Path(__file__).resolve().parent.parent / "config"


@pytest.fixture(scope="module")
def manager():
    return ConfigManager(CONFIG_DIR)


def write_config(tmp_path, data, name="experiment.yaml"):
    path = tmp_path / name
    path.write_text(yaml.safe_dump(data))
    return path


def test_defaults_validate(manager):
    for values in manager.defaults.values():
        validate(values)


def test_flatten_nested():
    assert flatten({"a": {"b": 1, "c": {"d": [1, 2]}}, "e": None}) == {"a.b": 1, "a.c.d": [1, 2], "e": None}


def test_frame_defaults(manager, monkeypatch):
    monkeypatch.delenv("SURROGATE_CONFIG", raising=False)
    monkeypatch.delenv("SURROGATE_WORKERS", raising=False)
    config = manager.load_experiment()
    assert config.structure == "frame"
    assert config["frame.masses"] == [0.3, 0.3, 0.18]
    policy = growth_policy(config)
    assert policy.lr_min == pytest.approx(0.5 / 256)
    assert policy.initial_hidden == (5, 5)


def test_rocking_file_picks_rocking_defaults(manager, tmp_path):
    config = manager.load_experiment(write_config(tmp_path, {"structure": "rocking"}))
    assert config["rocking.full_width"] == 4.0
    assert config["records.scaling.rule"] == "pga"
    assert config.base_dir == tmp_path.resolve()


def test_unknown_key_is_named(manager, tmp_path):
    path = write_config(tmp_path, {"training": {"learning_rate": 0.1}})
    with pytest.raises(ConfigError) as info:
        manager.load_experiment(path)
    assert info.value.key == "training.learning_rate"


def test_invalid_value(manager, tmp_path):
    with pytest.raises(ConfigError, match="integrator.alpha"):
        manager.load_experiment(write_config(tmp_path, {"integrator": {"alpha": 0.5}}))


def test_missing_record_names_path(manager, tmp_path):
    path = write_config(tmp_path, {"records": {"paths": ["motions/missing.AT2"]}})
    with pytest.raises(ConfigError) as info:
        manager.load_experiment(path)
    assert info.value.key == str(tmp_path.resolve() / "motions" / "missing.AT2")


def test_missing_config_file(manager, tmp_path):
    with pytest.raises(ConfigError, match="not found"):
        manager.load_experiment(tmp_path / "nope.yaml")


def test_malformed_yaml(manager, tmp_path):
    path = tmp_path / "bad.yaml"
    path.write_text("records: [unclosed\n")
    with pytest.raises(ConfigError, match="malformed"):
        manager.load_experiment(path)


def test_overrides_win(manager, tmp_path, monkeypatch):
    monkeypatch.delenv("SURROGATE_WORKERS", raising=False)
    path = write_config(tmp_path, {"seed": 3})
    config = manager.load_experiment(path, {"seed": 9, "workers": None, "structure": "rocking"})
    assert config["seed"] == 9
    assert config.structure == "rocking"
    assert config["workers"] == 2


def test_environment(manager, tmp_path, monkeypatch):
    path = write_config(tmp_path, {"seed": 4})
    monkeypatch.setenv("SURROGATE_CONFIG", str(path))
    monkeypatch.setenv("SURROGATE_WORKERS", "3")
    config = manager.load_experiment()
    assert config["seed"] == 4
    assert config["workers"] == 3
    monkeypatch.setenv("SURROGATE_WORKERS", "many")
    with pytest.raises(ConfigError):
        manager.load_experiment()


def test_glob_and_output_dir(manager, tmp_path, at2_file):
    path = write_config(tmp_path, {"records": {"glob": "*.AT2"}, "output_dir": "out"})
    config = manager.load_experiment(path)
    assert config.record_paths() == [at2_file.resolve()]
    assert config.output_dir == tmp_path.resolve() / "out"


def test_digest_tracks_values(manager, tmp_path):
    a = manager.load_experiment(write_config(tmp_path, {"seed": 1}, "a.yaml"))
    b = manager.load_experiment(write_config(tmp_path, {"seed": 2}, "b.yaml"))
    assert a.digest != b.digest
    assert a.digest == a.with_overrides({}).digest


def test_section_is_one_level(manager, monkeypatch):
    monkeypatch.delenv("SURROGATE_CONFIG", raising=False)
    section = manager.load_experiment(None).section("records")
    assert "rollout_dt" in section
    assert not any("." in key for key in section)


def test_description_lists_commands(manager):
    text = manager.get_description()
    for name in ("simulate", "scale", "spectrum", "train", "eval", "bench", "plot"):
        assert name in text


def test_experiment_roles(manager, tmp_path):
    path = write_config(tmp_path, {"records": {"synthetic": {"count": 3, "duration": 2.0},
                                               "training": [0], "validation": ["SYN002"]}})
    experiment = Experiment(manager.load_experiment(path))
    assert experiment.roles() == {"SYN000": "Training", "SYN001": "Testing", "SYN002": "Validation"}
    assert all(r.dt == 0.01 for r in experiment.records)


def test_no_training_records(manager, tmp_path):
    path = write_config(tmp_path, {"records": {"synthetic": {"count": 1, "duration": 1.0}, "training": []}})
    with pytest.raises(ConfigError, match="records.training"):
        Experiment(manager.load_experiment(path)).normalizer()
