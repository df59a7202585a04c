"""Exact rational scalars.

Every number in this library is a `fractions.Fraction`: arbitrary
precision, always in lowest terms with positive denominator, no rounding
path anywhere.  JSON input/output uses the string form "p/q" (or just
"p" when the denominator is 1).
"""

from __future__ import annotations

from fractions import Fraction

Scalar = Fraction

ZERO = Fraction(0)
ONE = Fraction(1)
HALF = Fraction(1, 2)


def parse_scalar(text: str | int) -> Fraction:
    """Parse "p/q" (or "p", or an int) into an exact rational."""
    if isinstance(text, bool):
        raise ValueError(f"not a rational literal: {text!r}")
    if isinstance(text, int):
        return Fraction(text)
    if isinstance(text, Fraction):
        return text
    if not isinstance(text, str):
        raise ValueError(f"not a rational literal: {text!r}")
    try:
        return Fraction(text.strip())
    except (ValueError, ZeroDivisionError) as exc:
        raise ValueError(f"not a rational literal: {text!r}") from exc


def format_scalar(value: Fraction) -> str:
    """Render a rational as "p/q", or "p" when the denominator is 1."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"
