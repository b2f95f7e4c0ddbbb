"""Exact rational scalars and their canonical string form ("p/q" or "n")."""

from __future__ import annotations

import re
from fractions import Fraction

from .errors import SchemaError

_RATIONAL_RE = re.compile(r"^-?\d+(/[1-9]\d*)?$")


def parse_rational(text: str) -> Fraction:
    """Parse a rational literal: "p/q" with q > 0, or an integer "n"."""
    if not isinstance(text, str):
        raise SchemaError(f"rational literals are strings, got {type(text).__name__}")
    stripped = text.strip()
    if not _RATIONAL_RE.match(stripped):
        raise SchemaError(f"not a rational literal: {text!r}")
    return Fraction(stripped)


def format_rational(value: Fraction) -> str:
    """Canonical gcd-reduced form, "p/q" or "n"."""
    return str(Fraction(value))


def ensure_fraction(value) -> Fraction:
    """Coerce int, Fraction or literal string; floats are rejected to keep arithmetic exact."""
    if isinstance(value, bool) or isinstance(value, float):
        raise SchemaError(f"exact rational expected, got {value!r}")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        return parse_rational(value)
    raise SchemaError(f"exact rational expected, got {type(value).__name__}")
