"""
Deterministic artifact writers.
Floats are written with 17 significant digits, keys are sorted and complex
values become [re, im] pairs, so identical inputs give byte-identical files.
"""

import csv
import io
import json
import logging
import math
from pathlib import Path
from typing import Any, Dict, Iterable, List, Optional, Sequence, Union

import numpy as np

from config import CLI_CONFIG

logger = logging.getLogger(__name__)

FLOAT_DIGITS = CLI_CONFIG["float_digits"]


def format_float(value: float, digits: int = FLOAT_DIGITS) -> str:
    """Format a float with a fixed number of significant digits ('.' decimal)."""
    value = float(value)
    if math.isnan(value):
        return "nan"
    if math.isinf(value):
        return "inf" if value > 0 else "-inf"
    return f"{value:.{digits}g}"


def to_plain(value: Any) -> Any:
    """Convert numpy scalars/arrays, complex numbers and pydantic models to plain JSON types."""
    if hasattr(value, "model_dump"):
        return to_plain(value.model_dump())
    if isinstance(value, dict):
        return {str(k): to_plain(v) for k, v in value.items()}
    if isinstance(value, np.ndarray):
        return [to_plain(v) for v in value.tolist()]
    if isinstance(value, (list, tuple)):
        return [to_plain(v) for v in value]
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        return float(value)
    if isinstance(value, (complex, np.complexfloating)):
        return [float(value.real), float(value.imag)]
    return value


def _encode(value: Any, digits: int) -> str:
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, int):
        return str(value)
    if isinstance(value, float):
        text = format_float(value, digits)
        # JSON has no literal for non-finite numbers
        return json.dumps(text) if text in ("nan", "inf", "-inf") else text
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        items = sorted(value.items())
        return "{" + ", ".join(f"{json.dumps(k)}: {_encode(v, digits)}" for k, v in items) + "}"
    if isinstance(value, list):
        return "[" + ", ".join(_encode(v, digits) for v in value) + "]"
    raise TypeError(f"Cannot serialize value of type {type(value).__name__}")


def dumps_json(payload: Any, digits: int = FLOAT_DIGITS) -> str:
    """Serialize to JSON text with sorted keys and fixed float formatting."""
    return _encode(to_plain(payload), digits) + "\n"


def rows_to_csv(rows: Sequence[Dict[str, Any]], columns: Optional[List[str]] = None, digits: int = FLOAT_DIGITS) -> str:
    """
    Render table rows as CSV text with a header row.

    Args:
        rows: Row dictionaries
        columns: Column order (default: sorted union of row keys)
        digits: Significant digits for floats

    Returns:
        CSV text using '\\n' line endings
    """
    if columns is None:
        keys = set()
        for row in rows:
            keys.update(row.keys())
        columns = sorted(keys)

    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(columns)
    for row in rows:
        writer.writerow([_csv_cell(to_plain(row.get(col)), digits) for col in columns])
    return buffer.getvalue()


def _csv_cell(value: Any, digits: int) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, float):
        return format_float(value, digits)
    if isinstance(value, list):
        return " ".join(_csv_cell(v, digits) for v in value)
    return str(value)


def write_artifact(text: str, output_path: Optional[Union[str, Path]] = None, stream=None) -> None:
    """Write artifact text to a file, or to the given stream when no path is set."""
    if output_path:
        path = Path(output_path)
        path.parent.mkdir(parents=True, exist_ok=True)
        with open(path, "w", encoding="utf-8", newline="") as f:
            f.write(text)
        logger.info(f"Artifact written to {path}")
    elif stream is not None:
        stream.write(text)


def complex_pairs(values: Iterable[complex]) -> List[List[float]]:
    """[[re, im], ...] from complex values."""
    return [[float(np.real(v)), float(np.imag(v))] for v in values]


def pairs_to_complex(pairs: Iterable[Sequence[float]]) -> np.ndarray:
    """Inverse of complex_pairs; also accepts plain real numbers."""
    out = []
    for item in pairs:
        if isinstance(item, (int, float)):
            out.append(complex(item, 0.0))
        else:
            re, im = item
            out.append(complex(float(re), float(im)))
    return np.asarray(out, dtype=np.complex128)
