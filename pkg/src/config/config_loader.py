import copy
import json
import logging
import os
from typing import Any, Dict, Optional

from src.errors import ConfigError
from src.evaluation.synthetic import SyntheticSpec
from src.resolver.resolver import ResolverConfig

logger = logging.getLogger(__name__)

DEFAULT_CONFIG_PATH = 'config/config.json'
SEED_ENV = 'SUBCYCLE_SEED'

DEFAULTS: Dict[str, Dict[str, Any]] = {
    "ingest": {
        "max_line_length": 1 << 20,
        "predicate": "http://www.w3.org/2000/01/rdf-schema#subClassOf",
        "equiv_from_input": True,
    },
    "resolver": {
        "bound": 60,
        "min_cycles": 3,
        "cycle_cap": 1_000_000,
        "timeout_seconds": 7200,
        "seed": 0,
        "solver": "bnb",
        "record_timing": False,
    },
    "sweep": {
        "bounds": [20, 30, 40, 50, 60],
        "runs": 5,
        "workers": 1,
        "synthetic": SyntheticSpec().as_dict(),
    },
    "database": {"url": None},
}


def load_config(config_path=None):
    """
    Load configuration from a JSON file, section by section over the built-in
    defaults. Without an explicit path a missing default file is not an error.
    """
    path = config_path or DEFAULT_CONFIG_PATH
    config = copy.deepcopy(DEFAULTS)
    if config_path is None and not os.path.exists(path):
        logger.info(f"load_config: {path} not found, using built-in defaults")
        return config
    logger.info(f"load_config: Loading from {path}")
    try:
        with open(path, 'r') as config_file:
            loaded = json.load(config_file)
    except Exception as e:
        logger.error(f"load_config: Failed: {e}")
        raise
    if not isinstance(loaded, dict):
        raise ConfigError(f"{path}: top level must be a JSON object")
    for section, values in loaded.items():
        if isinstance(values, dict) and isinstance(config.get(section), dict):
            config[section].update(values)
        else:
            config[section] = values
    return config


def resolve_seed(cli_seed: Optional[int], config) -> int:
    """CLI flag first, then the SUBCYCLE_SEED environment variable, then the config file"""
    if cli_seed is not None:
        return cli_seed
    env_seed = os.getenv(SEED_ENV)
    if env_seed:
        try:
            return int(env_seed)
        except ValueError:
            logger.error(f"Environment variable '{SEED_ENV}' is not an integer: {env_seed!r}")
            raise ConfigError(f"{SEED_ENV} must be an integer, got {env_seed!r}")
    return int(config["resolver"]["seed"])


def build_resolver_config(config, overrides: Optional[Dict[str, Any]] = None) -> ResolverConfig:
    """ResolverConfig from the resolver section; overrides that are None leave the file value in place"""
    overrides = {k: v for k, v in (overrides or {}).items() if v is not None}
    values = dict(config["resolver"])
    values["predicate"] = config["ingest"]["predicate"]
    values["seed"] = resolve_seed(overrides.pop("seed", None), config)
    values.update(overrides)
    known = set(ResolverConfig.__dataclass_fields__)
    unknown = sorted(set(values) - known)
    if unknown:
        raise ConfigError(f"unknown resolver settings: {unknown}")
    try:
        return ResolverConfig(**values)
    except TypeError as e:
        raise ConfigError(f"invalid resolver settings: {e}")


def build_synthetic_spec(config, overrides: Optional[Dict[str, Any]] = None) -> SyntheticSpec:
    values = dict(config["sweep"]["synthetic"])
    values.update({k: v for k, v in (overrides or {}).items() if v is not None})
    if "cycle_length" in values:
        values["cycle_length"] = tuple(values["cycle_length"])
    try:
        return SyntheticSpec(**values)
    except TypeError as e:
        raise ConfigError(f"invalid synthetic settings: {e}")
