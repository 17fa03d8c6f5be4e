"""
Unit tests for extrapolation to t = 0.
"""

import math

import pytest

from python.lib.quantizer import geometric_grid, richardson_limit

GRID = [1e-3, 2e-3, 4e-3, 8e-3]


class TestRichardsonLimit:
    """Neville extrapolation removes one power of t per column."""

    def test_recovers_polynomial_intercept(self):
        ts = GRID[:3]
        result = richardson_limit(ts, [3.0 + 2.0 * t + 5.0 * t**2 for t in ts])
        assert result.value == pytest.approx(3.0, abs=1e-10)
        # the linear column misses 5 t_i t_j; the worst pair is (2e-3, 4e-3)
        assert result.error == pytest.approx(5.0 * 2e-3 * 4e-3, rel=1e-6)

    def test_complex_values(self):
        result = richardson_limit(GRID, [(1.0 + 2.0j) * (1.0 + t + t**2 + t**3) for t in GRID])
        assert result.value == pytest.approx(1.0 + 2.0j, abs=1e-10)

    def test_tableau_shape(self):
        result = richardson_limit(GRID, [math.exp(t) for t in GRID])
        assert [len(column) for column in result.tableau] == [4, 3, 2, 1]
        assert result.value == result.tableau[-1][0]

    def test_dropping_smallest_t_stays_within_error(self):
        values = [math.exp(50.0 * t) / (1.0 + t) for t in GRID]
        full = richardson_limit(GRID, values)
        reduced = richardson_limit(GRID[1:], values[1:])
        assert abs(full.value - reduced.value) <= full.error

    def test_error_shrinks_with_smaller_grid(self):
        coarse = richardson_limit(GRID, [math.exp(t * 100.0) for t in GRID])
        fine = richardson_limit([t / 4.0 for t in GRID], [math.exp(t * 25.0) for t in GRID])
        assert fine.error < coarse.error

    @pytest.mark.parametrize(
        "ts,values",
        [
            ([1e-3], [1.0]),
            ([1e-3, 2e-3], [1.0]),
            ([1e-3, 1e-3], [1.0, 2.0]),
            ([0.0, 1e-3], [1.0, 2.0]),
        ],
    )
    def test_rejected(self, ts, values):
        with pytest.raises(ValueError):
            richardson_limit(ts, values)


class TestGeometricGrid:
    def test_doubling(self):
        assert geometric_grid(1e-3, 8e-3) == pytest.approx(GRID)

    def test_single_point(self):
        assert geometric_grid(0.5, 0.5) == [0.5]

    def test_ratio(self):
        assert geometric_grid(1.0, 100.0, 10.0) == pytest.approx([1.0, 10.0, 100.0])

    @pytest.mark.parametrize("start,stop,ratio", [(0.0, 1.0, 2.0), (1.0, 0.5, 2.0), (1.0, 2.0, 1.0)])
    def test_rejected(self, start, stop, ratio):
        with pytest.raises(ValueError):
            geometric_grid(start, stop, ratio)
