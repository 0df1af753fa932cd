import copy
import os
from pathlib import Path
from typing import Any, Dict, Optional, Union

from loguru import logger
import yaml

from reprosamples.utils.constants import CONFIG_FILE, ENV_THREADS, LOG_FILE
from reprosamples.utils.errors import InvalidConfig

DEFAULTS: Dict[str, Any] = {
    "search": {
        "d": 1000,
        "n_lambda": 100,
        "lambda_min_ratio": 1e-3,
        "max_iter": 10000,
        "tol": 1e-10,
        "mode": "penalized",
        "k_max": None,
    },
    "model_cs": {
        "J": 200,
        "alpha": 0.95,
    },
    "coef": {
        "samples_per_region": 10000,
    },
    "bootstrap": {
        "B": 1000,
        "criteria": ["aic", "bic"],
    },
    "runtime": {
        "seed": 2024,
        "threads": 1,
    },
    "logging": {
        "level": "INFO",
        "file": LOG_FILE,
    },
}


def _merge(base: Dict[str, Any], override: Dict[str, Any]) -> Dict[str, Any]:
    merged = copy.deepcopy(base)
    for key, value in (override or {}).items():
        if isinstance(value, dict) and isinstance(merged.get(key), dict):
            merged[key] = _merge(merged[key], value)
        else:
            merged[key] = value
    return merged


def load_config(config_path: Union[str, Path]) -> Dict[str, Any]:
    try:
        with open(config_path, "r") as config_file:
            loaded = yaml.safe_load(config_file) or {}
    except FileNotFoundError:
        logger.debug(f"Config file not found at {config_path}. Using default configuration.")
        loaded = {}
    except yaml.YAMLError as e:
        logger.error(f"Error parsing config file: {e}")
        raise InvalidConfig(f"cannot parse {config_path}: {e}") from e

    if not isinstance(loaded, dict):
        raise InvalidConfig(f"{config_path} must hold a mapping at the top level")
    return _merge(DEFAULTS, loaded)


config = load_config(CONFIG_FILE)


def use_config(config_path: Union[str, Path]) -> Dict[str, Any]:
    """Replace the active configuration with the one stored at ``config_path``"""
    global config
    path = Path(config_path)
    if not path.exists():
        raise InvalidConfig(f"config file {path} does not exist")
    config = load_config(path)
    return config


def search_defaults() -> Dict[str, Any]:
    return dict(config["search"])


def model_cs_defaults() -> Dict[str, Any]:
    return dict(config["model_cs"])


def coef_defaults() -> Dict[str, Any]:
    return dict(config["coef"])


def bootstrap_defaults() -> Dict[str, Any]:
    return dict(config["bootstrap"])


def default_seed() -> int:
    return int(config["runtime"]["seed"])


def runtime_threads(flag: Optional[int] = None) -> int:
    """
    Resolve the worker count

    Args:
        flag: value of ``--threads`` if given

    Returns:
        flag, else the REPRO_THREADS environment variable, else the config value
    """
    if flag is not None:
        threads = flag
    elif os.environ.get(ENV_THREADS):
        try:
            threads = int(os.environ[ENV_THREADS])
        except ValueError as e:
            raise InvalidConfig(f"{ENV_THREADS} must be an integer, got {os.environ[ENV_THREADS]!r}") from e
    else:
        threads = int(config["runtime"].get("threads") or 1)

    if threads < 1:
        raise InvalidConfig(f"thread count must be >= 1, got {threads}")
    return threads
