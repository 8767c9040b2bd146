"""Internal cumulative-integration helpers."""

from __future__ import annotations

import numpy as np


def cumulative_simpson(y: np.ndarray, h: float) -> np.ndarray:
    """Cumulative integral of uniformly sampled y with O(h^4) accuracy.

    Composite Simpson at even nodes; odd nodes add the integral of the
    local quadratic through the surrounding three samples.
    """
    n = y.size
    out = np.zeros(n)
    if n < 3:
        if n == 2:
            out[1] = 0.5 * h * (y[0] + y[1])
        return out
    even_end = n - 1 if n % 2 == 1 else n - 2
    panels = (h / 3.0) * (
        y[0:even_end - 1:2] + 4.0 * y[1:even_end:2] + y[2:even_end + 1:2]
    )
    out[2:even_end + 1:2] = np.cumsum(panels)
    odd = np.arange(1, n, 2)
    odd = odd[odd <= even_end + 1]
    base = odd - 1
    valid = base + 2 <= n - 1
    # left half-panel weights of the interpolating quadratic: (5, 8, -1)/12
    out[odd[valid]] = out[base[valid]] + h * (
        5.0 * y[base[valid]] + 8.0 * y[base[valid] + 1] - y[base[valid] + 2]
    ) / 12.0
    if not valid.all():
        j = odd[~valid]
        out[j] = out[j - 1] + 0.5 * h * (y[j - 1] + y[j])
    return out


def cumulative_trapezoid(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Cumulative trapezoid on an arbitrary strictly increasing grid."""
    return np.concatenate([[0.0], np.cumsum(0.5 * (y[1:] + y[:-1]) * np.diff(t))])


def cumulative_auto(y: np.ndarray, t: np.ndarray) -> np.ndarray:
    """Simpson on uniform grids, trapezoid otherwise."""
    dt = np.diff(t)
    if dt.size >= 2 and np.allclose(dt, dt[0], rtol=1e-12, atol=0.0):
        return cumulative_simpson(y, float(dt[0]))
    return cumulative_trapezoid(y, t)
