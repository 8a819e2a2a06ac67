"""Comparative analyses: scaling fits, threshold translation, size distributions, substitution series."""

from .distribution import SideStats, SizeRow, distribution_by_size, distribution_csv
from .scaling import ScalingFit, fit_scaling
from .symmetry import (
    SeriesConfig,
    SeriesRow,
    default_series,
    parse_series_config,
    series_csv,
    symmetry_series,
)
from .threshold import ThresholdReport, threshold_translate

__all__ = [
    "ScalingFit", "SeriesConfig", "SeriesRow", "SideStats", "SizeRow", "ThresholdReport",
    "default_series", "distribution_by_size", "distribution_csv", "fit_scaling",
    "parse_series_config", "series_csv", "symmetry_series", "threshold_translate",
]
