"""Exact rational time values and the saturating infinity sentinel."""

import math
from fractions import Fraction

INF = math.inf


def rational(value) -> Fraction:
    """Parse a rational from an int, Fraction, or string ("3/2", "1.5", "7")."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("booleans are not temporal values")
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value)
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError("not a rational: %r" % (value,)) from exc
    raise ValueError("not a rational: %r" % (value,))


def fmt(value) -> str:
    """Render a rational (or infinity) for JSON and reports."""
    if value == INF:
        return "inf"
    if value == -INF:
        return "-inf"
    return str(value)
