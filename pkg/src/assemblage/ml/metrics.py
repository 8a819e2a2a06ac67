"""Relative squared error, its derivatives, and per-bin error profiles."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import LengthMismatch, ZeroTarget


def _check(y, y_hat) -> tuple[np.ndarray, np.ndarray]:
    y = np.asarray(y, dtype=np.float64)
    y_hat = np.asarray(y_hat, dtype=np.float64)
    if y.shape != y_hat.shape:
        raise LengthMismatch(f"{y.shape} targets vs {y_hat.shape} predictions")
    return y, y_hat


def relative_mse(y, y_hat) -> float:
    """Mean of ``((y_hat - y) / y) ** 2``; targets must be at least 1."""
    y, y_hat = _check(y, y_hat)
    if len(y) == 0:
        raise LengthMismatch("no targets")
    if (y < 1).any():
        raise ZeroTarget("relative error needs targets >= 1")
    return float(np.mean(((y_hat - y) / y) ** 2))


def relative_mse_grad_hess(y, y_hat) -> tuple[np.ndarray, np.ndarray]:
    """Per-row derivatives of ``((y_hat - y) / y) ** 2`` with respect to ``y_hat``."""
    y, y_hat = _check(y, y_hat)
    return 2.0 * (y_hat - y) / y**2, 2.0 / y**2


@dataclass(frozen=True)
class ProfileBin:
    """Errors of the rows whose target falls in one bin.

    ``mean_signed`` uses ``(y - y_hat) / y``, so overprediction is negative.
    """

    count: int
    mean_abs: float
    mean_signed: float


def error_profile(y, y_hat, bin_width: int = 1) -> dict[int, ProfileBin]:
    """Absolute and signed relative error per target bin, empty bins omitted.

    Bins are keyed by their lower edge ``floor(y / bin_width) * bin_width``.
    """
    y, y_hat = _check(y, y_hat)
    if bin_width < 1:
        raise ValueError("bin width must be >= 1")
    if (y == 0).any():
        raise ZeroTarget("relative error needs nonzero targets")
    keys = (np.floor(y / bin_width) * bin_width).astype(np.int64)
    signed = (y - y_hat) / y
    out = {}
    for k in np.unique(keys):
        sel = keys == k
        out[int(k)] = ProfileBin(int(sel.sum()), float(np.abs(signed[sel]).mean()),
                                 float(signed[sel].mean()))
    return out
