"""Stratified train/test splits and folds keyed on the integer target."""

from __future__ import annotations

import math
import warnings

import numpy as np

from ..errors import EmptyDataset, InvalidHyperparameter
from .dataset import Dataset


def _strata(y: np.ndarray) -> list[np.ndarray]:
    return [np.flatnonzero(y == v) for v in np.unique(y)]


def stratified_indices(y, train_frac: float, seed: int) -> tuple[np.ndarray, np.ndarray]:
    """Row indices of a stratified split; each stratum trains ``round(frac * n)`` rows.

    Strata with a single row go wholly to the training side with a warning.
    """
    if not 0 < train_frac < 1:
        raise InvalidHyperparameter(f"train fraction must lie in (0, 1), got {train_frac}")
    y = np.asarray(y)
    if not len(y):
        raise EmptyDataset("cannot split an empty dataset")
    rng = np.random.default_rng(seed)
    train, test = [], []
    for rows in _strata(y):
        rows = rng.permutation(rows)
        if len(rows) < 2:
            warnings.warn(f"stratum y={y[rows[0]]} has one row; kept in training", stacklevel=2)
            train.extend(rows)
            continue
        k = math.floor(train_frac * len(rows) + 0.5)
        train.extend(rows[:k])
        test.extend(rows[k:])
    return np.sort(np.array(train, dtype=np.int64)), np.sort(np.array(test, dtype=np.int64))


def stratified_split(d: Dataset, train_frac: float = 0.7, seed: int = 0) -> tuple[Dataset, Dataset]:
    """Split a dataset so each target value keeps the train fraction."""
    d.require_rows()
    tr, te = stratified_indices(d.y, train_frac, seed)
    return d.subset(tr), d.subset(te)


def stratified_folds(y, k: int, seed: int) -> list[np.ndarray]:
    """Assign rows to ``k`` folds, dealing each shuffled stratum round-robin.

    The dealing offset carries over between strata so fold sizes stay within one row.
    """
    if k < 2:
        raise InvalidHyperparameter(f"need at least 2 folds, got {k}")
    y = np.asarray(y)
    rng = np.random.default_rng(seed)
    folds: list[list[int]] = [[] for _ in range(k)]
    offset = 0
    for rows in _strata(y):
        for i, r in enumerate(rng.permutation(rows)):
            folds[(offset + i) % k].append(int(r))
        offset = (offset + len(rows)) % k
    return [np.sort(np.array(f, dtype=np.int64)) for f in folds]
