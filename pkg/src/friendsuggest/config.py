"""Flat ``key = value`` run configuration with built-in defaults."""
from __future__ import annotations

import math
from typing import Dict, List, Mapping, Optional

from .baselines import BaselineKind, CurrentApproachParams
from .evaluation import PROPOSED, CohortSpec
from .features import FeatureWeights
from .rwr import RwrParams
from .suggester import SuggestionParams

__all__ = ["DEFAULTS", "ConfigError", "RunConfig", "parse_cohorts", "read_config_file"]


class ConfigError(ValueError):
    pass


DEFAULTS: Dict[str, str] = {
    "w_friends": "0.5",
    "w_schools": "0.3",
    "w_groups": "0.2",
    "w_ips": "0",
    "w_interactions": "0",
    "w_direct": "0.4",
    "w_indirect": "0.6",
    "alpha": "0.4",
    "epsilon": "1e-4",
    "max_iters": "50",
    "L": "10000",
    "mu": "5",
    "t1": "1.7",
    "t2": "1.5",
    "t3": "1.4",
    "t4": "1.1",
    "e12": "2.0",
    "e13": "1.9",
    "e14": "1.6",
    "e23": "1.8",
    "e24": "1.7",
    "e34": "1.4",
    "boundary": "",
    "validation_boundary": "",
    "min_new": "5",
    "cohorts": "T20:20:30:1000,T50:50:60:1000,T100:100:*:1000",
    "approaches": ",".join([PROPOSED, *(k.value for k in BaselineKind)]),
    "sweep_step": "0.1",
    "seed": "0",
}


def read_config_file(path) -> Dict[str, str]:
    out = {}
    with open(path, encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, 1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            key, sep, value = line.partition("=")
            if not sep or not key.strip():
                raise ConfigError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
            out[key.strip()] = value.strip()
    return out


def parse_cohorts(text: str) -> List[CohortSpec]:
    """``name:min:max:size`` items separated by commas; ``*`` as max means unbounded."""
    specs = []
    for item in filter(None, (s.strip() for s in text.split(","))):
        parts = item.split(":")
        if len(parts) != 4:
            raise ConfigError(f"cohort spec {item!r} is not name:min:max:size")
        name, lo, hi, size = parts
        try:
            spec = CohortSpec(name, int(lo), None if hi.strip() in ("*", "") else int(hi), int(size))
        except ValueError:
            raise ConfigError(f"cohort spec {item!r} has a non-integer field") from None
        if spec.sample_size <= 0:
            raise ConfigError(f"cohort {name}: sample size must be > 0")
        specs.append(spec)
    return specs


class RunConfig:
    """Layered settings: built-in defaults, then each mapping passed to :meth:`layered`."""

    def __init__(self, values: Mapping[str, str] = None):
        self.values = dict(DEFAULTS)
        self.update(values or {})

    @classmethod
    def layered(cls, *layers: Optional[Mapping[str, str]]) -> "RunConfig":
        cfg = cls()
        for layer in layers:
            if layer:
                cfg.update(layer)
        return cfg

    def update(self, values: Mapping[str, str]) -> None:
        unknown = sorted(set(values) - set(DEFAULTS))
        if unknown:
            raise ConfigError(f"unrecognized config key(s): {', '.join(unknown)}")
        self.values.update({k: str(v) for k, v in values.items()})

    def __getitem__(self, key):
        return self.values[key]

    def _float(self, key) -> float:
        try:
            return float(self.values[key])
        except ValueError:
            raise ConfigError(f"{key} must be a number, got {self.values[key]!r}") from None

    def _int(self, key) -> int:
        try:
            return int(self.values[key])
        except ValueError:
            raise ConfigError(f"{key} must be an integer, got {self.values[key]!r}") from None

    def optional_int(self, key) -> Optional[int]:
        text = self.values[key].strip().lower()
        if text in ("", "none", "inf", "*"):
            return None
        return self._int(key)

    @property
    def seed(self) -> int:
        return self._int("seed")

    @property
    def min_new(self) -> int:
        return self._int("min_new")

    @property
    def sweep_step(self) -> float:
        return self._float("sweep_step")

    @property
    def approaches(self) -> List[str]:
        names = [a.strip() for a in self.values["approaches"].split(",") if a.strip()]
        for a in names:
            if a != PROPOSED and a not in {k.value for k in BaselineKind}:
                raise ConfigError(f"unknown approach {a!r}")
        return names

    def cohort_specs(self) -> List[CohortSpec]:
        return parse_cohorts(self.values["cohorts"])

    def suggestion_params(self) -> SuggestionParams:
        try:
            fw = FeatureWeights(*(self._float(k) for k in ("w_friends", "w_schools", "w_groups", "w_ips", "w_interactions")))
            rwr = RwrParams(self._float("alpha"), self._float("epsilon"), self._int("max_iters"))
            L = self.optional_int("L")
            return SuggestionParams(fw, self._float("w_direct"), self._float("w_indirect"), rwr, L, self._int("mu"))
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def current_params(self) -> CurrentApproachParams:
        t = [self._float(f"t{i}") for i in range(1, 5)]
        upper = [self._float(k) for k in ("e12", "e13", "e14", "e23", "e24", "e34")]
        if not all(math.isfinite(x) for x in t + upper):
            raise ConfigError("current-approach parameters must be finite")
        try:
            return CurrentApproachParams.from_upper(t, upper)
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
