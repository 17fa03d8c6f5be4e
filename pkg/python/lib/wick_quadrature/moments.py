"""
Moments of the fiber Gaussian e^{−|p|²/2tħ}.
"""

import math
from collections import Counter


def double_factorial(m):
    """m!! for m >= -1 (with (-1)!! = 0!! = 1)."""
    return math.prod(range(m, 0, -2)) if m > 0 else 1


def gaussian_moment(multi_index, t, hbar, n):
    """
    t^{−n/2} ∫_{ℝⁿ} p_{i₁} ⋯ p_{i_l} e^{−|p|²/2tħ} dⁿp in closed form.

    By Wick pairing the moment is the number of ways to pair equal indices
    times (tħ) per pair, so it factorizes over axes: an axis appearing m
    times contributes (m − 1)!! (tħ)^{m/2} if m is even and 0 if m is odd.
    The remaining Gaussian normalization t^{−n/2}(2πtħ)^{n/2} is (2πħ)^{n/2}.

    Args:
        multi_index: Sequence of 0-based axis indices (repetitions allowed)
        t: Wick time > 0
        hbar: ħ > 0
        n: Fiber dimension

    Returns:
        Float moment
    """
    if not (t > 0 and hbar > 0):
        raise ValueError(f"t and hbar must be positive, got t={t}, hbar={hbar}")
    counts = Counter(int(i) for i in multi_index)
    for axis in counts:
        if not 0 <= axis < n:
            raise ValueError(f"Axis index {axis} is outside 0..{n - 1}")
    value = (2.0 * math.pi * hbar) ** (n / 2.0)
    for m in counts.values():
        if m % 2:
            return 0.0
        value *= double_factorial(m - 1) * (t * hbar) ** (m // 2)
    return value
