"""Pipeline configuration: one JSON file, overridable from the command line.

Layout (every key optional)::

    {
      "cleaning": {"robot_hosts": [...], "robot_paths": [...], "notes_path_patterns": [...]},
      "session_timeout_mins": 30,
      "features": {"campus_networks": [...], "day_start": 8, "day_end": 20,
                   "lab_weekdays": ["Tue", "Thu"], "hits_cap": null, "downloads_cap": null},
      "clustering": {"clusters": 3, "method": "kfcm", "m": 2.0, "sigma": null,
                     "eps": 1e-5, "max_iter": 300, "seed": 0},
      "regions": {"theta_sure": 0.6, "theta_member": 0.25},
      "out_dir": "."
    }
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, replace
from datetime import timedelta
from typing import Optional

from .errors import ConfigError, LearnerClustError
from .features import FeatureConfig
from .fuzzyclust import KFCM, METHODS
from .regions import RegionRule
from .sessions import CleaningRules

_SECTIONS = {
    "cleaning": {"robot_hosts", "robot_paths", "notes_path_patterns"},
    "features": {"campus_networks", "day_start", "day_end", "lab_weekdays", "hits_cap",
                 "downloads_cap"},
    "clustering": {"clusters", "method", "m", "sigma", "eps", "max_iter", "seed"},
    "regions": {"theta_sure", "theta_member"},
}
_TOP_LEVEL = {"session_timeout_mins", "out_dir"}


@dataclass(frozen=True)
class PipelineConfig:
    rules: CleaningRules = field(default_factory=CleaningRules.defaults)
    timeout_mins: float = 30.0
    features: FeatureConfig = field(default_factory=FeatureConfig)
    clusters: int = 3
    method: str = KFCM
    m: float = 2.0
    sigma: Optional[float] = None
    eps: float = 1e-5
    max_iter: int = 300
    seed: int = 0
    region_rule: RegionRule = field(default_factory=RegionRule)
    out_dir: str = "."

    def __post_init__(self):
        if not self.timeout_mins > 0:
            raise ConfigError("session timeout must be positive")
        if self.method not in METHODS:
            raise ConfigError(f"method must be one of {METHODS}")
        if self.clusters < 2:
            raise ConfigError("need at least 2 clusters")
        if not self.m > 1:
            raise ConfigError("fuzzifier m must exceed 1")
        if self.sigma is not None and not self.sigma > 0:
            raise ConfigError("sigma must be positive")
        if not self.eps > 0 or self.max_iter < 1:
            raise ConfigError("eps must be positive and max_iter at least 1")

    @property
    def timeout(self) -> timedelta:
        return timedelta(minutes=self.timeout_mins)


def config_from_dict(raw: dict) -> PipelineConfig:
    if not isinstance(raw, dict):
        raise ConfigError("config must be a JSON object")
    unknown = set(raw) - set(_SECTIONS) - _TOP_LEVEL
    if unknown:
        raise ConfigError(f"unknown config keys: {sorted(unknown)}")
    for name, allowed in _SECTIONS.items():
        section = raw.get(name, {})
        if not isinstance(section, dict):
            raise ConfigError(f"config section {name!r} must be an object")
        bad = set(section) - allowed
        if bad:
            raise ConfigError(f"unknown keys in {name!r}: {sorted(bad)}")

    cleaning = raw.get("cleaning", {})
    clustering = raw.get("clustering", {})
    try:
        base = CleaningRules.defaults()
        rules = CleaningRules(
            robot_hosts=cleaning.get("robot_hosts", base.robot_hosts),
            robot_paths=cleaning.get("robot_paths", base.robot_paths),
            notes_path_patterns=cleaning.get("notes_path_patterns", base.notes_path_patterns),
        )
        feats = dict(raw.get("features", {}))
        for key in ("campus_networks", "lab_weekdays"):
            if key in feats:
                feats[key] = tuple(feats[key])
        return PipelineConfig(
            rules=rules,
            timeout_mins=float(raw.get("session_timeout_mins", 30.0)),
            features=FeatureConfig(**feats),
            clusters=int(clustering.get("clusters", 3)),
            method=str(clustering.get("method", KFCM)).lower(),
            m=float(clustering.get("m", 2.0)),
            sigma=None if clustering.get("sigma") is None else float(clustering["sigma"]),
            eps=float(clustering.get("eps", 1e-5)),
            max_iter=int(clustering.get("max_iter", 300)),
            seed=int(clustering.get("seed", 0)),
            region_rule=RegionRule(**raw.get("regions", {})),
            out_dir=str(raw.get("out_dir", ".")),
        )
    except LearnerClustError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"invalid config value: {exc}") from None


def load_config(path=None) -> PipelineConfig:
    if path is None:
        return PipelineConfig()
    try:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc.strerror or exc}") from None
    except json.JSONDecodeError as exc:
        raise ConfigError(f"{path}: invalid JSON ({exc})") from None
    return config_from_dict(raw)


def with_overrides(cfg: PipelineConfig, **overrides) -> PipelineConfig:
    """Apply non-``None`` overrides; ``theta_sure``/``theta_member`` go to the region rule."""
    overrides = {k: v for k, v in overrides.items() if v is not None}
    rule = {k: overrides.pop(k) for k in ("theta_sure", "theta_member") if k in overrides}
    try:
        if rule:
            overrides["region_rule"] = replace(cfg.region_rule, **rule)
        return replace(cfg, **overrides)
    except LearnerClustError:
        raise
    except (TypeError, ValueError) as exc:
        raise ConfigError(str(exc)) from None
