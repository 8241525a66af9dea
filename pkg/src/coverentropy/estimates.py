"""Finite-n entropy proxies shared by the finite-action and subshift modules."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence


@dataclass(frozen=True)
class EstimateReport:
    """Slopes ``log2(value_n) / n`` for n = 1..n_max.

    ``tail_slope`` is the slope at ``n_max``; ``tail_max`` is the largest slope
    over the last ``ceil(n_max / 2)`` radii, the limsup proxy.  Neither is a
    limit.
    """

    values: tuple[int, ...]
    slopes: tuple[float, ...]
    tail_slope: float
    tail_max: float
    tail_window: tuple[int, int]
    non_decreasing: bool
    stabilized_at: int | None

    @property
    def n_max(self) -> int:
        return len(self.values)


def estimate_from_values(values: Sequence[int]) -> EstimateReport:
    values = tuple(int(v) for v in values)
    n_max = len(values)
    if n_max < 1:
        raise ValueError("need at least one value")
    slopes = tuple(math.log2(v) / n for n, v in enumerate(values, start=1))
    start = n_max - math.ceil(n_max / 2) + 1
    tail = slopes[start - 1:]
    stabilized = None
    for n in range(n_max, 0, -1):
        if values[n - 1] != values[-1]:
            break
        stabilized = n
    # a plateau touching n_max is only "stabilized" if it lasts at least two radii
    if stabilized == n_max and n_max > 1:
        stabilized = None
    return EstimateReport(
        values=values,
        slopes=slopes,
        tail_slope=slopes[-1],
        tail_max=max(tail),
        tail_window=(start, n_max),
        non_decreasing=all(a <= b for a, b in zip(values, values[1:])),
        stabilized_at=stabilized,
    )


@dataclass(frozen=True)
class ComparisonReport:
    """Finite-level check of ``(S^k:U) <= (T^(k*n):U)`` and its mirror.

    ``m`` is the least k with ``T`` inside ``S^k``; ``n`` the least k with ``S``
    inside ``T^k``.
    """

    m: int
    n: int
    s_values: tuple[int, ...]
    t_values_scaled: tuple[int, ...]
    t_values: tuple[int, ...]
    s_values_scaled: tuple[int, ...]
    forward_holds: bool
    backward_holds: bool
    slope_s: float
    slope_t: float

    @property
    def holds(self) -> bool:
        return self.forward_holds and self.backward_holds

    @property
    def slope_ratio(self) -> float:
        """``slope(S) / slope(T)``; asymptotically within ``[1/m, n]``."""
        return self.slope_s / self.slope_t if self.slope_t else math.nan
