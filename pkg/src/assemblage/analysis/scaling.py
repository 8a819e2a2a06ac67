"""Power-law fits of a score against bond count."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import NonPositiveValue, TooFewPoints


@dataclass(frozen=True)
class ScalingFit:
    """``score = amplitude * N_B ** exponent`` fitted in log-log space.

    Attributes:
        exponent: Slope of ln(score) on ln(N_B).
        amplitude: ``exp(intercept)``.
        r_squared: Coefficient of determination of the log-log model.
        n: Number of points.
    """

    exponent: float
    amplitude: float
    r_squared: float
    n: int


def fit_scaling(pairs) -> ScalingFit:
    """Ordinary least squares on ``(ln N_B, ln score)``.

    Raises:
        TooFewPoints: with fewer than three points.
        NonPositiveValue: for a bond count below 1 or a non-positive score.
    """
    arr = np.asarray(list(pairs), dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] < 3:
        raise TooFewPoints(f"need at least 3 (N_B, score) pairs, got {len(arr)}")
    x, y = arr[:, 0], arr[:, 1]
    if (x < 1).any() or (y <= 0).any():
        raise NonPositiveValue("bond counts must be >= 1 and scores > 0")
    lx, ly = np.log(x), np.log(y)
    if np.ptp(lx) == 0:
        raise TooFewPoints("all points share one bond count")
    design = np.column_stack([np.ones_like(lx), lx])
    (intercept, slope), *_ = np.linalg.lstsq(design, ly, rcond=None)
    resid = ly - (intercept + slope * lx)
    ss_tot = float(np.sum((ly - ly.mean()) ** 2))
    ss_res = float(np.sum(resid**2))
    r2 = 1.0 if ss_tot == 0 else max(0.0, 1.0 - ss_res / ss_tot)
    return ScalingFit(float(slope), float(np.exp(intercept)), r2, len(x))
