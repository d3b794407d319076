"""Parsing and formatting of quantities written as ``<number> <unit>``.

Every supported suffix scales by a power of ten, so values are converted
with exact decimal arithmetic and ``parse_quantity(format_quantity(x, u))``
returns ``x`` bit for bit.  Canonical units: Hz (frequencies and rates),
s, K, m, V, eV, W.
"""

from __future__ import annotations

import decimal
import math
import re
from decimal import Decimal

#: suffix -> (dimension, power of ten relative to the canonical unit)
UNITS: dict[str, tuple[str, int]] = {
    "Hz": ("frequency", 0),
    "kHz": ("frequency", 3),
    "MHz": ("frequency", 6),
    "GHz": ("frequency", 9),
    "s": ("time", 0),
    "ms": ("time", -3),
    "us": ("time", -6),
    "ns": ("time", -9),
    "K": ("temperature", 0),
    "mK": ("temperature", -3),
    "m": ("length", 0),
    "mm": ("length", -3),
    "um": ("length", -6),
    "nm": ("length", -9),
    "V": ("voltage", 0),
    "eV": ("energy", 0),
    "meV": ("energy", -3),
    "W": ("power", 0),
    "mW": ("power", -3),
}

_CTX = decimal.Context(prec=400)
_QUANTITY = re.compile(r"^\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*([A-Za-z]*)\s*$")


class UnitError(ValueError):
    pass


def parse_quantity(text: str, dimension: str | None = None) -> float:
    """Convert ``"33 kHz"`` to 33000.0 (canonical unit).

    A bare number is accepted and taken to be in the canonical unit.  When
    `dimension` is given, a suffix of another dimension is rejected.
    """
    m = _QUANTITY.match(text)
    if m is None:
        raise UnitError(f"cannot parse quantity {text!r}")
    number, suffix = m.groups()
    if not suffix:
        return float(number)
    if suffix not in UNITS:
        raise UnitError(f"unknown unit suffix {suffix!r} in {text!r}")
    dim, power = UNITS[suffix]
    if dimension is not None and dim != dimension:
        raise UnitError(f"expected a {dimension}, got {suffix!r} ({dim})")
    return float(_CTX.multiply(Decimal(number), Decimal(1).scaleb(power)))


def format_quantity(value: float, unit: str) -> str:
    """Inverse of :func:`parse_quantity`, exact for every finite float."""
    if unit not in UNITS:
        raise UnitError(f"unknown unit suffix {unit!r}")
    if not math.isfinite(value):
        raise UnitError("cannot format a non-finite quantity")
    scaled = Decimal(value).scaleb(-UNITS[unit][1], _CTX)
    text = format(scaled.normalize(_CTX), "f") if scaled else "0"
    return f"{text} {unit}"
