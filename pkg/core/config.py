# config_manager.py
import glob as globlib
import hashlib
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable, Dict, Mapping

import yaml
from jinja2 import Template

from core.errors import ConfigError

Check = Callable[[Any], bool]


def _number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool)


def positive(value: Any) -> bool:
    return _number(value) and value > 0


def non_negative_int(value: Any) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) and value >= 0


def positive_int(value: Any) -> bool:
    return non_negative_int(value) and value > 0


def positive_list(value: Any) -> bool:
    return isinstance(value, list) and bool(value) and all(positive(v) for v in value)


def optional(check: Check) -> Check:
    return lambda value: value is None or check(value)


def one_of(*choices: str) -> Check:
    return lambda value: value in choices


def in_range(low: float, high: float) -> Check:
    return lambda value: _number(value) and low <= value <= high


def string_list(value: Any) -> bool:
    return isinstance(value, list) and all(isinstance(v, str) for v in value)


def selection(value: Any) -> bool:
    return isinstance(value, list) and all(isinstance(v, (str, int)) and not isinstance(v, bool) for v in value)


# Every recognised dotted key and the check its value must pass.
SCHEMA: Dict[str, Check] = {
    "structure": one_of("frame", "rocking"),
    "seed": non_negative_int,
    "output_dir": lambda v: isinstance(v, str) and bool(v),
    "workers": positive_int,
    "timeout": optional(positive),
    "frame.masses": positive_list,
    "frame.story_height": positive,
    "frame.target_periods": positive_list,
    "frame.stiffness": optional(positive_list),
    "frame.damping_ratio": in_range(0.0, 1.0),
    "frame.yield_drift_ratio": positive,
    "frame.b": in_range(0.0, 0.999),
    "frame.r0": positive,
    "frame.cr1": positive,
    "frame.cr2": positive,
    "rocking.full_width": positive,
    "rocking.full_height": positive,
    "rocking.mass": positive,
    "rocking.restitution": optional(in_range(1e-3, 1.0)),
    "rocking.dt": in_range(1e-7, 1e-3),
    "integrator.alpha": in_range(2.0 / 3.0, 1.0),
    "integrator.dt": positive,
    "integrator.newton_tol": positive,
    "integrator.newton_max_iter": positive_int,
    "integrator.max_halvings": non_negative_int,
    "records.paths": string_list,
    "records.glob": optional(lambda v: isinstance(v, str)),
    "records.rollout_dt": positive,
    "records.synthetic.count": non_negative_int,
    "records.synthetic.seed": non_negative_int,
    "records.synthetic.duration": positive,
    "records.synthetic.dt": positive,
    "records.scaling.rule": one_of("sa", "pga", "none"),
    "records.scaling.target": positive,
    "records.scaling.damping": in_range(0.0, 1.0),
    "records.scaling.period": optional(positive),
    "records.training": selection,
    "records.validation": selection,
    "spectrum.periods": optional(positive_list),
    "spectrum.damping": in_range(0.0, 1.0),
    "training.lr0": positive,
    "training.lr_halve_patience": positive_int,
    "training.lr_min": optional(positive),
    "training.error_threshold_pct": positive,
    "training.widens_per_deepen": positive_int,
    "training.frozen_iterations": positive_int,
    "training.pretrain_epochs": non_negative_int,
    "training.max_growth_steps": non_negative_int,
    "training.min_improvement": in_range(0.0, 1.0),
    "training.max_epochs": positive_int,
    "training.initial_hidden": lambda v: isinstance(v, list) and bool(v) and all(positive_int(h) for h in v),
    "training.widen_mode": one_of("paper_random", "function_preserving"),
    "training.deepen_mode": one_of("paper_random", "near_identity"),
    "training.frozen_unit": one_of("samples", "epochs"),
    "training.output_activation": one_of("identity", "tanh"),
    "network.path": optional(lambda v: isinstance(v, str)),
    "bench.count": non_negative_int,
}


def flatten(mapping: Mapping[str, Any], prefix: str = "") -> Dict[str, Any]:
    """Nested mappings become dotted keys; lists and scalars are leaves."""
    flat: Dict[str, Any] = {}
    for key, value in mapping.items():
        dotted = f"{prefix}{key}"
        if isinstance(value, Mapping):
            flat.update(flatten(value, f"{dotted}."))
        else:
            flat[dotted] = value
    return flat


def validate(values: Mapping[str, Any]) -> None:
    for key, value in values.items():
        check = SCHEMA.get(key)
        if check is None:
            raise ConfigError("unknown configuration key", key)
        if not check(value):
            raise ConfigError(f"invalid value {value!r}", key)


@dataclass(frozen=True)
class ExperimentConfig:
    """Validated, flattened experiment settings."""

    values: Dict[str, Any]
    base_dir: Path = field(default_factory=Path.cwd)
    source: Path | None = None

    def __getitem__(self, key: str) -> Any:
        return self.values[key]

    def get(self, key: str, default: Any = None) -> Any:
        return self.values.get(key, default)

    @property
    def structure(self) -> str:
        return self.values["structure"]

    @property
    def output_dir(self) -> Path:
        out = Path(self.values["output_dir"])
        return out if out.is_absolute() else self.base_dir / out

    def section(self, prefix: str) -> Dict[str, Any]:
        """Keys under `prefix.` with the prefix stripped (one level deep only)."""
        head = prefix + "."
        return {k[len(head):]: v for k, v in self.values.items() if k.startswith(head) and "." not in k[len(head):]}

    def resolve(self, path: str) -> Path:
        p = Path(path)
        return p if p.is_absolute() else self.base_dir / p

    def record_paths(self) -> list[Path]:
        paths = [self.resolve(p) for p in self.values.get("records.paths", [])]
        pattern = self.values.get("records.glob")
        if pattern:
            paths.extend(Path(p) for p in sorted(globlib.glob(str(self.resolve(pattern)))))
        return paths

    @property
    def digest(self) -> str:
        text = yaml.safe_dump(self.values, sort_keys=True)
        return hashlib.sha256(text.encode()).hexdigest()[:16]

    def with_overrides(self, overrides: Mapping[str, Any]) -> "ExperimentConfig":
        values = dict(self.values)
        values.update({k: v for k, v in overrides.items() if v is not None})
        validate(values)
        return ExperimentConfig(values, self.base_dir, self.source)


class ConfigManager:
    """Manages loading and templating of YAML configurations."""

    def __init__(self, config_dir: Path):
        self.config_dir = config_dir
        self.cli = None
        self.commands = {}
        self.defaults = {}
        self._load_configs()

    def _load_configs(self) -> None:
        """Load all configuration files."""
        with open(self.config_dir / "cli.yaml") as f:
            self.cli = yaml.safe_load(f)

        for command_file in sorted((self.config_dir / "commands").glob("*.yaml")):
            with open(command_file) as f:
                command_config = yaml.safe_load(f)
                self.commands[command_config["name"]] = command_config

        for defaults_file in sorted((self.config_dir / "defaults").glob("*.yaml")):
            with open(defaults_file) as f:
                self.defaults[defaults_file.stem] = flatten(yaml.safe_load(f) or {})

    def get_description(self) -> str:
        """Get CLI description with command summaries templated in."""
        if not self.cli:
            raise ValueError("CLI description not loaded")
        summaries = [f"  {c['name']:<10} {c['description']}" for c in self.commands.values()]
        template = Template(self.cli["description"])
        return template.render(command_descriptions="\n".join(summaries), version=self.cli.get("version", ""))

    def get_command_configs(self) -> Dict[str, Any]:
        """Get command configurations."""
        return self.commands

    def load_experiment(
        self,
        path: str | Path | None = None,
        overrides: Mapping[str, Any] | None = None,
        check_paths: bool = True,
    ) -> ExperimentConfig:
        """Merge a user file over the defaults of its structure and validate the result.

        Without a path the `SURROGATE_CONFIG` environment variable is consulted;
        without either, the frame defaults are used as-is.
        """
        path = path or os.environ.get("SURROGATE_CONFIG")
        user: Dict[str, Any] = {}
        base_dir = Path.cwd()
        source = None
        if path:
            source = Path(path)
            if not source.is_file():
                raise ConfigError("configuration file not found", str(source))
            try:
                with open(source) as f:
                    loaded = yaml.safe_load(f) or {}
            except yaml.YAMLError as exc:
                raise ConfigError(f"malformed YAML: {exc}", str(source)) from exc
            if not isinstance(loaded, Mapping):
                raise ConfigError("top level must be a mapping", str(source))
            user = flatten(loaded)
            base_dir = source.parent.resolve()

        structure = (overrides or {}).get("structure") or user.get("structure", "frame")
        if structure not in self.defaults:
            raise ConfigError(f"unknown structure {structure!r}", "structure")
        values = dict(self.defaults[structure])
        values.update(user)
        values.update({k: v for k, v in (overrides or {}).items() if v is not None})
        if "workers" not in user and not (overrides or {}).get("workers") and os.environ.get("SURROGATE_WORKERS"):
            try:
                values["workers"] = int(os.environ["SURROGATE_WORKERS"])
            except ValueError as exc:
                raise ConfigError("SURROGATE_WORKERS must be an integer", "workers") from exc
        validate(values)

        config = ExperimentConfig(values, base_dir, source)
        if check_paths:
            for record_path in config.record_paths():
                if not record_path.is_file():
                    raise ConfigError("record file not found", str(record_path))
        return config
