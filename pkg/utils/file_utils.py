"""
Utility functions for file operations.
"""

import csv
import dataclasses
import io
import json
import math
import os
import tempfile
from enum import Enum
from pathlib import Path
from typing import Any, Iterable, Optional, Sequence, Union

import numpy as np

PathLike = Union[str, Path]


def ensure_directory_exists(path: PathLike) -> bool:
    """Ensure directory exists, create if necessary."""
    try:
        Path(path).mkdir(parents=True, exist_ok=True)
        return True
    except (OSError, PermissionError):
        return False


def dumps_json(payload: Any) -> str:
    """Canonical JSON text: sorted keys, fixed indentation, trailing newline."""
    return json.dumps(payload, indent=2, sort_keys=True, ensure_ascii=False) + "\n"


def write_text_atomic(path: PathLike, text: str) -> Path:
    """Write text through a temporary file in the target directory, then rename."""
    path = Path(path)
    if path.parent and not ensure_directory_exists(path.parent):
        raise OSError(f"Cannot create directory {path.parent}")
    fd, tmp_name = tempfile.mkstemp(prefix=f".{path.name}.", suffix=".tmp", dir=path.parent or None)
    try:
        with os.fdopen(fd, 'w', encoding='utf-8', newline='') as handle:
            handle.write(text)
        os.replace(tmp_name, path)
    except BaseException:
        Path(tmp_name).unlink(missing_ok=True)
        raise
    return path


def write_json_atomic(path: PathLike, payload: Any) -> Path:
    return write_text_atomic(path, dumps_json(payload))


def read_json(path: PathLike) -> Any:
    with open(path, 'r', encoding='utf-8') as handle:
        return json.load(handle)


def write_csv(path: PathLike, rows: Iterable[Sequence[Any]],
              header: Optional[Sequence[str]] = None) -> Path:
    """Write rows as CSV atomically."""
    buffer = io.StringIO()
    writer = csv.writer(buffer)
    if header:
        writer.writerow(header)
    writer.writerows(rows)
    return write_text_atomic(path, buffer.getvalue())


def to_jsonable(value: Any) -> Any:
    """Convert reports and models into plain JSON data.

    Sets become sorted lists, Enums their values, numpy data native Python.
    Dataclass fields declared with repr=False are skipped.
    """
    if hasattr(value, 'to_dict') and callable(value.to_dict):
        return value.to_dict()
    if dataclasses.is_dataclass(value) and not isinstance(value, type):
        return {f.name: to_jsonable(getattr(value, f.name))
                for f in dataclasses.fields(value) if f.repr}
    if isinstance(value, Enum):
        return value.value
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, (set, frozenset)):
        return sorted(to_jsonable(v) for v in value)
    if isinstance(value, (list, tuple)):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return value.tolist()
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, float) and not math.isfinite(value):
        return str(value)
    return value
