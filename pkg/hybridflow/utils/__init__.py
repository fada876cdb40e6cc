"""Utilities module"""

from hybridflow.utils.config import get_block, load_config, save_config
from hybridflow.utils.logger import get_logger

__all__ = ["get_block", "get_logger", "load_config", "save_config"]
