"""One-feature least-squares baselines: linear, logarithmic, power and polynomial."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateDesign, InvalidHyperparameter, NonPositiveFeature
from .dataset import Dataset

KINDS = ("linear", "logarithmic", "power", "polynomial")


@dataclass(frozen=True)
class BaselineModel:
    """A fitted single-feature curve.

    Attributes:
        kind: One of ``KINDS``.
        feature: Column name the curve was fitted on.
        coefficients: ``(intercept, slope)`` for linear and logarithmic,
            ``(amplitude, exponent)`` for power, ascending powers for polynomial.
        degree: Polynomial degree (1 for the other kinds).
    """

    kind: str
    feature: str
    coefficients: tuple[float, ...]
    degree: int = 1

    def predict_values(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=np.float64)
        c = self.coefficients
        if self.kind == "linear":
            return c[0] + c[1] * x
        if self.kind == "logarithmic":
            return c[0] + c[1] * np.log(x)
        if self.kind == "power":
            return c[0] * x ** c[1]
        return np.polynomial.polynomial.polyval(x, c)

    def predict(self, d: Dataset) -> np.ndarray:
        return self.predict_values(d.column(self.feature))


def _lstsq(design: np.ndarray, y: np.ndarray) -> np.ndarray:
    if np.linalg.matrix_rank(design) < design.shape[1]:
        raise DegenerateDesign("design matrix is rank deficient (constant feature?)")
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    return coef


def fit_curve(kind: str, x, y, degree: int = 2, feature: str = "x") -> BaselineModel:
    """Least-squares fit of ``y`` on one feature ``x``."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if kind not in KINDS:
        raise InvalidHyperparameter(f"unknown baseline kind {kind!r}")
    if len(x) < 2 or np.ptp(x) == 0:
        raise DegenerateDesign(f"feature {feature!r} is constant")
    ones = np.ones_like(x)
    if kind == "linear":
        c = _lstsq(np.column_stack([ones, x]), y)
        return BaselineModel(kind, feature, (float(c[0]), float(c[1])))
    if kind in ("logarithmic", "power") and (x <= 0).any():
        raise NonPositiveFeature(f"{kind} fit needs feature {feature!r} > 0")
    if kind == "logarithmic":
        c = _lstsq(np.column_stack([ones, np.log(x)]), y)
        return BaselineModel(kind, feature, (float(c[0]), float(c[1])))
    if kind == "power":
        if (y <= 0).any():
            raise NonPositiveFeature("power fit needs positive targets")
        c = _lstsq(np.column_stack([ones, np.log(x)]), np.log(y))
        return BaselineModel(kind, feature, (float(np.exp(c[0])), float(c[1])))
    if degree < 1:
        raise InvalidHyperparameter(f"polynomial degree must be >= 1, got {degree}")
    # scale x so the Vandermonde matrix stays well conditioned, then map back
    scale = float(np.abs(x).max())
    c = _lstsq(np.vander(x / scale, degree + 1, increasing=True), y)
    c = c / scale ** np.arange(degree + 1)
    return BaselineModel(kind, feature, tuple(float(v) for v in c), degree)


def fit_baseline(kind: str, feature: str, d: Dataset, degree: int = 2) -> BaselineModel:
    """Fit a baseline on one named column of a scalar-feature dataset."""
    return fit_curve(kind, d.column(feature), d.y, degree, feature)
