"""
Serialization helpers for command output.

Tables are written through pandas so CSV and JSON share one float policy:
12 significant digits, NaN as ``nan`` in CSV and ``null`` in JSON.
"""

import cmath
import json
import math
import sys
from pathlib import Path
from typing import Any, TextIO

import numpy as np
import pandas as pd

from beatlaser.config.settings import FLOAT_FORMAT

JSON_DIGITS = 12


def safe_float(value: Any) -> float | None:
    """
    Convert a real value for JSON, mapping NaN and infinities to None.

    Args:
        value: Number-like value

    Returns:
        Float value or None if the value is not finite or not numeric
    """
    try:
        number = float(value)
    except (TypeError, ValueError):
        return None
    return number if math.isfinite(number) else None


def complex_to_json(value: complex) -> float | dict[str, float | None] | None:
    """Plain number when the imaginary part is zero, else {"re": x, "im": y}."""
    if cmath.isnan(value):
        return None
    if value.imag == 0.0:
        return safe_float(value.real)
    return {"re": safe_float(value.real), "im": safe_float(value.imag)}


def to_json_ready(obj: Any) -> Any:
    """
    Recursively convert model dumps and numpy scalars to JSON-native values.

    Args:
        obj: Nested dict/list structure, possibly holding complex or numpy values

    Returns:
        Structure containing only dict, list, str, bool, int, float and None
    """
    if isinstance(obj, dict):
        return {str(key): to_json_ready(value) for key, value in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_json_ready(value) for value in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, (complex, np.complexfloating)):
        return complex_to_json(complex(obj))
    if isinstance(obj, (float, np.floating)):
        return safe_float(obj)
    return obj


def render_table(table: pd.DataFrame, fmt: str) -> str:
    """Render a table as CSV (header always present) or JSON records."""
    if fmt == "json":
        return (
            table.to_json(orient="records", double_precision=JSON_DIGITS, indent=2)
            + "\n"
        )
    return table.to_csv(index=False, float_format=FLOAT_FORMAT, na_rep="nan")


def render_document(document: dict[str, Any], fmt: str) -> str:
    """Render a structured result; CSV flattens it to name,re,im rows."""
    ready = to_json_ready(document)
    if fmt == "json":
        return json.dumps(ready, indent=2, allow_nan=False) + "\n"
    rows = []
    for name, value in document.items():
        numeric = isinstance(value, (int, float, complex)) and not isinstance(
            value, bool
        )
        number = complex(value) if numeric else None
        rows.append(
            {
                "name": name,
                "re": np.nan if number is None else number.real,
                "im": np.nan if number is None else number.imag,
                "text": None if number is not None else str(value),
            }
        )
    return render_table(pd.DataFrame(rows, columns=["name", "re", "im", "text"]), fmt)


def write_text(text: str, path: str | None, stream: TextIO | None = None) -> None:
    """Write to ``path`` or, when it is None or "-", to stdout."""
    if path is None or path == "-":
        (stream or sys.stdout).write(text)
        return
    target = Path(path)
    target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text, encoding="utf-8")
