# reprosamples/simulation/scenario.py
from dataclasses import asdict, dataclass, field
from pathlib import Path
from typing import Any, Dict, Tuple, Union

import numpy as np
import yaml

from reprosamples.utils.config import bootstrap_defaults
from reprosamples.utils.errors import InvalidConfig

SCALES = ("desk", "full")


@dataclass(frozen=True)
class ScenarioConfig:
    """A simulation design y = X beta + sigma u with AR(1)-correlated covariates

    ``beta`` lists the nonzero coefficients placed on the first columns unless
    ``signal_index`` says where they go (0-based).
    """

    name: str = "custom"
    n: int = 50
    p: int = 1000
    beta: Tuple[float, ...] = (3.0, 2.0, 1.5)
    signal_index: Tuple[int, ...] = ()
    corr_decay: float = 0.5
    sigma: float = 1.0
    reps: int = 50
    d: int = 500
    J: int = 200
    alpha: float = 0.95
    B_bootstrap: int = 500
    criteria: Tuple[str, ...] = ("aic", "bic")
    seed: int = 2024
    scale: str = "desk"
    extra: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        object.__setattr__(self, "beta", tuple(float(b) for b in self.beta))
        object.__setattr__(self, "signal_index", tuple(int(j) for j in self.signal_index))
        object.__setattr__(self, "criteria", tuple(str(c).lower() for c in self.criteria))
        self.validate()

    @property
    def tau0(self) -> Tuple[int, ...]:
        return self.signal_index or tuple(range(len(self.beta)))

    def validate(self) -> None:
        if self.n < 2 or self.p < 1:
            raise InvalidConfig(f"need n >= 2 and p >= 1, got n={self.n}, p={self.p}")
        if any(b == 0.0 for b in self.beta):
            raise InvalidConfig("beta lists the nonzero coefficients only; zeros belong outside the true model")
        if self.signal_index and len(self.signal_index) != len(self.beta):
            raise InvalidConfig("signal_index must have one entry per coefficient in beta")
        if len(set(self.tau0)) != len(self.tau0) or (self.tau0 and (min(self.tau0) < 0 or max(self.tau0) >= self.p)):
            raise InvalidConfig(f"signal positions {self.tau0} invalid for p={self.p}")
        if len(self.tau0) >= self.n:
            raise InvalidConfig("the true model must be smaller than n")
        if not -1.0 < self.corr_decay < 1.0:
            raise InvalidConfig(f"corr_decay must lie in (-1, 1), got {self.corr_decay}")
        if self.sigma < 0:
            raise InvalidConfig(f"sigma must be nonnegative, got {self.sigma}")
        if self.reps < 1 or self.d < 1 or self.J < 1 or self.B_bootstrap < 0:
            raise InvalidConfig("reps, d and J must be >= 1 and B_bootstrap >= 0")
        if not 0.0 < self.alpha < 1.0:
            raise InvalidConfig(f"alpha must lie in (0, 1), got {self.alpha}")
        if self.scale not in SCALES:
            raise InvalidConfig(f"scale must be one of {SCALES}, got {self.scale!r}")

    def beta_full(self) -> np.ndarray:
        full = np.zeros(self.p)
        full[list(self.tau0)] = self.beta
        return full

    def to_dict(self) -> Dict[str, Any]:
        out = asdict(self)
        out["beta"] = list(self.beta)
        out["signal_index"] = [j + 1 for j in self.signal_index]
        out["criteria"] = list(self.criteria)
        return out


_DESIGNS: Dict[str, Dict[str, Any]] = {
    "M1": {"n": 50, "p": 1000, "beta": (3.0, 2.0, 1.5), "corr_decay": 0.5},
    "M2": {"n": 80, "p": 150, "beta": (2.0, 1.5, 1.0, 0.8, 0.6), "corr_decay": 0.1},
    "M3": {"n": 100, "p": 500, "beta": (3.0, 2.0, 1.5, 1.0, 0.8, 0.6), "corr_decay": 0.1},
}

# Desk scale keeps (n, p) and shrinks replications and Monte-Carlo sizes
_EFFORT: Dict[str, Dict[str, Dict[str, Any]]] = {
    "desk": {
        "M1": {"reps": 50, "d": 500, "B_bootstrap": 500},
        "M2": {"reps": 50, "d": 2000, "B_bootstrap": 500},
        "M3": {"reps": 50, "d": 2000, "B_bootstrap": 500},
    },
    "full": {
        "M1": {"reps": 200, "d": 1000, "B_bootstrap": 1000, "criteria": ("aic", "bic", "cv")},
        "M2": {"reps": 200, "d": 10000, "B_bootstrap": 10000, "criteria": ("aic", "bic", "cv")},
        "M3": {"reps": 200, "d": 100000, "B_bootstrap": 100000, "criteria": ("aic", "bic", "cv")},
    },
}


def preset_names() -> Tuple[str, ...]:
    return tuple(sorted(_DESIGNS))


def preset(name: str, scale: str = "desk", **overrides: Any) -> ScenarioConfig:
    """
    One of the built-in designs M1, M2, M3

    Raises:
        InvalidConfig: for unknown names or scales, listing the valid ones
    """
    key = name.upper()
    if key not in _DESIGNS:
        raise InvalidConfig(f"unknown scenario {name!r}; valid names: {', '.join(preset_names())}")
    if scale not in SCALES:
        raise InvalidConfig(f"unknown scale {scale!r}; valid scales: {', '.join(SCALES)}")
    values: Dict[str, Any] = {"name": key, "scale": scale, "sigma": 1.0}
    values.update(_DESIGNS[key])
    values.update(_EFFORT[scale][key])
    values.update({k: v for k, v in overrides.items() if v is not None})
    return ScenarioConfig(**values)


def load_scenario(path: Union[str, Path], **overrides: Any) -> ScenarioConfig:
    """Read a scenario from YAML; a ``base`` key starts from a preset"""
    try:
        with open(path, "r") as handle:
            values = yaml.safe_load(handle) or {}
    except FileNotFoundError as e:
        raise InvalidConfig(f"scenario file {path} not found") from e
    except yaml.YAMLError as e:
        raise InvalidConfig(f"cannot parse scenario file {path}: {e}") from e
    if not isinstance(values, dict):
        raise InvalidConfig(f"scenario file {path} must hold a mapping")

    if "signal_index" in values:
        values["signal_index"] = [int(j) - 1 for j in values["signal_index"]]
    base = values.pop("base", None)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if base is not None:
        return preset(base, values.pop("scale", "desk"), **values)
    values.setdefault("name", Path(path).stem)
    # custom designs take their bootstrap sizes from the configuration
    baseline = bootstrap_defaults()
    values.setdefault("B_bootstrap", baseline["B"])
    values.setdefault("criteria", tuple(baseline["criteria"]))
    known = set(ScenarioConfig.__dataclass_fields__)
    unknown = set(values) - known
    if unknown:
        raise InvalidConfig(f"unknown scenario keys: {', '.join(sorted(unknown))}")
    return ScenarioConfig(**values)
