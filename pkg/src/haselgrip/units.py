"""Quantity strings with explicit unit suffixes, e.g. ``"10 mm"`` or ``"8 kV"``."""

from __future__ import annotations

import math
import re

from .errors import ValidationError

_SCALE = {
    "length": {"m": 1.0, "cm": 1e-2, "mm": 1e-3, "um": 1e-6, "µm": 1e-6},
    "voltage": {"V": 1.0, "kV": 1e3},
    "angle": {"rad": 1.0, "deg": math.pi / 180.0},
    "force": {"N": 1.0, "mN": 1e-3},
    "torque": {"N*m": 1.0, "N*mm": 1e-3, "mN*m": 1e-3},
    "mass": {"kg": 1.0, "g": 1e-3},
    "time": {"s": 1.0, "ms": 1e-3},
    "speed": {"m/s": 1.0},
}

_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([^\s\d].*?)?\s*$")


def parse_quantity(text, kind: str) -> float:
    """SI value of ``text``; the unit suffix is mandatory and must match ``kind``."""
    if kind not in _SCALE:
        raise KeyError(kind)
    if not isinstance(text, str):
        raise ValidationError(f"expected a {kind} with unit suffix, got {text!r}", code="units")
    m = _QUANTITY.match(text)
    if not m or not m.group(2):
        raise ValidationError(f"expected a {kind} with unit suffix, got {text!r}", code="units")
    number, unit = float(m.group(1)), m.group(2).replace("·", "*")
    try:
        return number * _SCALE[kind][unit]
    except KeyError:
        known = ", ".join(_SCALE[kind])
        raise ValidationError(f"unit {unit!r} is not a {kind} unit ({known})", code="units") from None
