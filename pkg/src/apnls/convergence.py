"""Order-of-convergence helpers shared by the harness and the test suite."""

from __future__ import annotations

import numpy as np

__all__ = ["loglog_slope", "measured_order"]


def loglog_slope(xs, ys) -> float:
    """Least-squares slope of log(y) against log(x).

    Nonpositive pairs are dropped; returns nan when fewer than two usable
    points remain.
    """
    xs = np.asarray(xs, dtype=float)
    ys = np.asarray(ys, dtype=float)
    keep = (xs > 0) & (ys > 0)
    if keep.sum() < 2:
        return float("nan")
    slope, _ = np.polyfit(np.log(xs[keep]), np.log(ys[keep]), 1)
    return float(slope)


def measured_order(hs, errs) -> float:
    """Convergence order of errors against mesh parameters (positive is better)."""
    return loglog_slope(hs, errs)
