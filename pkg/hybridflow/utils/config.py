"""Run configuration files (YAML or JSON)"""

import json
from pathlib import Path
from typing import Any, Dict, Union

import yaml

from hybridflow.utils.io import write_text_atomic

PathLike = Union[str, Path]

YAML_SUFFIXES = (".yaml", ".yml")


def _suffix(path: Path) -> str:
    suffix = path.suffix.lower()
    if suffix != ".json" and suffix not in YAML_SUFFIXES:
        raise ValueError(f"Unsupported config file format: {path.suffix or '(none)'}")
    return suffix


def load_config(config_path: PathLike) -> Dict[str, Any]:
    """Parse a configuration file into a plain dict"""
    path = Path(config_path)
    if not path.exists():
        raise FileNotFoundError(f"Config file not found: {config_path}")
    text = path.read_text()
    data = json.loads(text) if _suffix(path) == ".json" else yaml.safe_load(text)
    if not isinstance(data, dict):
        raise ValueError(f"Config root must be a mapping, got {type(data).__name__}")
    return data


def save_config(config: Dict[str, Any], config_path: PathLike) -> Path:
    """Write a configuration atomically; keys are sorted so reruns give identical files"""
    path = Path(config_path)
    if _suffix(path) == ".json":
        text = json.dumps(config, indent=2, sort_keys=True) + "\n"
    else:
        text = yaml.safe_dump(config, default_flow_style=False, sort_keys=True)
    return write_text_atomic(path, text)


def get_block(config: Dict[str, Any], name: str) -> Dict[str, Any]:
    """Return a config block, treating a missing or empty block as {}"""
    block = config.get(name)
    return dict(block) if isinstance(block, dict) else {}
