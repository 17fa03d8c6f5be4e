"""
Extrapolation to t = 0 on a geometric grid.

Neville's scheme evaluates at t = 0 the interpolating polynomials through
successively more samples (t_i, D_i). Each new column removes one more power
of t from the error of the finite-difference quotients.
"""

import logging
from dataclasses import dataclass

import numpy as np

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class RichardsonResult:
    """The extrapolated value, an error estimate and the full tableau."""

    value: complex
    error: float
    tableau: list


def richardson_limit(ts, values):
    """
    Polynomial extrapolation of t ↦ D(t) to t = 0.

    The error estimate is the larger distance from the final value to the two
    entries of the previous column, i.e. the change caused by dropping the
    smallest or the largest t.

    Args:
        ts: Distinct positive sample points, sorted ascending
        values: D(t) at those points

    Returns:
        RichardsonResult
    """
    ts = [float(t) for t in ts]
    if len(ts) < 2:
        raise ValueError("Extrapolation needs at least two sample points")
    if len(ts) != len(values):
        raise ValueError(f"Got {len(ts)} sample points but {len(values)} values")
    if len(set(ts)) != len(ts) or min(ts) <= 0:
        raise ValueError(f"Sample points must be distinct and positive, got {ts}")

    tableau = [[complex(v) for v in values]]
    for width in range(1, len(ts)):
        previous = tableau[-1]
        column = []
        for i in range(len(ts) - width):
            j = i + width
            column.append((ts[i] * previous[i + 1] - ts[j] * previous[i]) / (ts[i] - ts[j]))
        tableau.append(column)

    value = tableau[-1][0]
    error = max(abs(value - entry) for entry in tableau[-2])
    logger.debug(f"Richardson tableau diagonal: {[column[0] for column in tableau]}")
    return RichardsonResult(value=value, error=float(error), tableau=tableau)


def geometric_grid(start, stop, ratio=2.0):
    """start, start·ratio, ... up to and including stop (within rounding)."""
    if not (start > 0 and stop >= start and ratio > 1):
        raise ValueError(f"Invalid geometric grid {start}:{stop}:x{ratio}")
    count = int(np.floor(np.log(stop / start) / np.log(ratio) + 1e-9)) + 1
    return [start * ratio**i for i in range(count)]
