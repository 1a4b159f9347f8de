"""Shared numeric output formatting for CSV/JSON writers."""

from __future__ import annotations

import math


def fmt17(x) -> str:
    """Float with 17 significant digits (round-trip exact); empty for None."""
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return f"{x:.17g}"
