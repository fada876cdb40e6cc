"""Output formatting and atomic file writes"""

import json
import os
import tempfile
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

FLOAT_FORMAT = "%.17g"


def format_float(value: float) -> str:
    """Format a float with 17 significant digits"""
    return FLOAT_FORMAT % value


def to_jsonable(value: Any) -> Any:
    """Convert numpy scalars/arrays and tuples into plain JSON types"""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return to_jsonable(value.tolist())
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, np.floating):
        return float(value)
    if isinstance(value, complex):
        return [value.real, value.imag]
    return value


def dumps(data: Any) -> str:
    """Deterministic JSON text (sorted keys, round-trip float repr)"""
    return json.dumps(to_jsonable(data), indent=2, sort_keys=True, allow_nan=True) + "\n"


def write_text_atomic(path: Path, text: str) -> Path:
    """Write text through a temporary file in the same directory, then rename"""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", dir=str(path.parent))
    try:
        with os.fdopen(fd, "w", newline="") as f:
            f.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        if os.path.exists(tmp_name):
            os.remove(tmp_name)
        raise
    return path


def write_json(path: Path, data: Any) -> Path:
    """Atomically write a JSON document"""
    return write_text_atomic(path, dumps(data))


def write_csv(path: Path, frame: pd.DataFrame) -> Path:
    """Atomically write a DataFrame as CSV with 17-digit floats"""
    text = frame.to_csv(index=False, float_format=FLOAT_FORMAT, lineterminator="\n")
    return write_text_atomic(path, text)
