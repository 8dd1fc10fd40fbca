"""Emission of sweep tables as CSV or JSON."""

from __future__ import annotations

import json
import math
from typing import Any, Dict, TextIO

import pandas as pd

FORMATS = ("csv", "json")


def sort_table(table: pd.DataFrame, column: str) -> pd.DataFrame:
    return table.sort_values(column, kind="stable").reset_index(drop=True)


def render_table(table: pd.DataFrame, fmt: str) -> str:
    if fmt == "csv":
        # repr-precision floats; "." decimals and LF line ends are pandas defaults made explicit
        return table.to_csv(index=False, lineterminator="\n", decimal=".")
    if fmt == "json":
        return table.to_json(orient="records", double_precision=15) + "\n"
    raise ValueError(f"Unknown table format: {fmt}")


def write_table(table: pd.DataFrame, fmt: str, stream: TextIO) -> None:
    stream.write(render_table(table, fmt))


def _clean(value: Any) -> Any:
    if isinstance(value, float) and not math.isfinite(value):
        return None
    if isinstance(value, dict):
        return {key: _clean(item) for key, item in value.items()}
    if isinstance(value, (list, tuple)):
        return [_clean(item) for item in value]
    return value


def render_json(payload: Dict[str, Any]) -> str:
    return json.dumps(_clean(payload), indent=2, ensure_ascii=False) + "\n"
