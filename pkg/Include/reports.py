"""
reports.py

Stable JSON emission for every report model.
Rationals become {"num": n, "den": d}, floats are rounded to 12 significant digits,
infinities are written as "inf", and fields keep their declaration order.
"""

import json
import math
from fractions import Fraction
from typing import Any, Dict, Mapping, Optional, Union

import numpy as np
from pydantic import BaseModel

SCHEMA_VERSION = "tessellab-report/1"


def encode_value(value: Any) -> Any:
    if isinstance(value, BaseModel):
        return {name: encode_value(getattr(value, name)) for name in type(value).model_fields}
    if isinstance(value, Fraction):
        return {"num": value.numerator, "den": value.denominator}
    if isinstance(value, (bool, np.bool_)):
        return bool(value)
    if isinstance(value, (int, np.integer)):
        return int(value)
    if isinstance(value, (float, np.floating)):
        value = float(value)
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        return float(f"{value:.12g}")
    if isinstance(value, Mapping):
        return {str(key): encode_value(item) for key, item in value.items()}
    if isinstance(value, (list, tuple, set, frozenset, np.ndarray)):
        items = sorted(value) if isinstance(value, (set, frozenset)) else value
        return [encode_value(item) for item in items]
    return value


def emit_report(results: Union[BaseModel, Mapping[str, Any]], name: Optional[str] = None) -> Dict[str, Any]:
    """
    Wrap a report in the versioned envelope.

    Args:
        results: A report model, or a mapping of named sections.
        name: Report name for mappings; models use their class name.
    """
    if isinstance(results, BaseModel):
        name = name or type(results).__name__
    document = {"schema": SCHEMA_VERSION, "report": name or "Report"}
    document.update(encode_value(results))
    return document


def render(document: Mapping[str, Any]) -> str:
    return json.dumps(document, ensure_ascii=False, indent=2)
