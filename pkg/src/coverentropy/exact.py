"""Exact rational helpers and their JSON encoding (``"num/den"`` strings)."""

from __future__ import annotations

import math
from fractions import Fraction
from numbers import Rational


def to_fraction(x) -> Fraction:
    """Exact rational from int, Fraction, ``"a/b"``/decimal string, or float.

    Floats go through their shortest repr, so ``0.1`` becomes ``1/10``.
    """
    if isinstance(x, bool):
        raise TypeError("bool is not a number here")
    if isinstance(x, Rational):
        return Fraction(x)
    if isinstance(x, float):
        if not math.isfinite(x):
            raise ValueError(f"non-finite value {x}")
        return Fraction(repr(x))
    if isinstance(x, str):
        return Fraction(x.strip())
    raise TypeError(f"cannot read {x!r} as a rational")


def frac_str(x: Fraction) -> str:
    x = Fraction(x)
    return f"{x.numerator}/{x.denominator}"


def log2(x) -> float:
    """``log2`` of a positive int or Fraction without float overflow."""
    x = Fraction(x)
    if x <= 0:
        raise ValueError("log2 of a non-positive number")
    return math.log2(x.numerator) - math.log2(x.denominator)
