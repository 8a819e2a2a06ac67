"""Feature matrix plus integer assembly targets."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DimensionMismatch, EmptyDataset, LengthMismatch, ZeroTarget


@dataclass(frozen=True)
class Dataset:
    """Rows of features with assembly-index targets ``>= 1``.

    Attributes:
        X: ``(n_rows, n_features)`` float matrix.
        y: Integer targets, all at least 1.
        ids: Molecule identifier per row.
        feature_kind: ``"spectrum"`` for binned intensity vectors or
            ``"scalar"`` for named summary features.
        feature_names: Column names; bin indices for spectra.
    """

    X: np.ndarray
    y: np.ndarray
    ids: tuple[str, ...]
    feature_kind: str = "spectrum"
    feature_names: tuple[str, ...] = ()

    def __post_init__(self) -> None:
        X = np.asarray(self.X, dtype=np.float64)
        y = np.asarray(self.y)
        if X.ndim != 2:
            raise DimensionMismatch(f"feature matrix must be 2-D, got shape {X.shape}")
        if len(y) != X.shape[0] or len(self.ids) != X.shape[0]:
            raise LengthMismatch(
                f"{X.shape[0]} feature rows, {len(y)} targets, {len(self.ids)} ids"
            )
        if len(y) and (y < 1).any():
            raise ZeroTarget("targets must be >= 1; drop assembly index 0 rows first")
        names = tuple(self.feature_names) or tuple(str(i) for i in range(X.shape[1]))
        if len(names) != X.shape[1]:
            raise DimensionMismatch(f"{len(names)} names for {X.shape[1]} features")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "y", y.astype(np.int64))
        object.__setattr__(self, "ids", tuple(self.ids))
        object.__setattr__(self, "feature_names", names)

    @classmethod
    def from_rows(cls, features, targets, ids, feature_kind: str = "spectrum",
                  feature_names=()) -> tuple[Dataset, int]:
        """Build a dataset, dropping rows whose target is 0.

        Returns:
            The dataset and the number of dropped rows.
        """
        X = np.asarray(features, dtype=np.float64)
        y = np.asarray(targets)
        keep = y >= 1
        if X.ndim == 1:
            X = X.reshape(len(y), -1)
        ds = cls(X[keep], y[keep], tuple(i for i, k in zip(ids, keep) if k),
                 feature_kind, feature_names)
        return ds, int((~keep).sum())

    def __len__(self) -> int:
        return len(self.y)

    @property
    def n_features(self) -> int:
        return self.X.shape[1]

    def subset(self, rows) -> Dataset:
        rows = np.asarray(rows, dtype=np.int64)
        return Dataset(self.X[rows], self.y[rows], tuple(self.ids[i] for i in rows),
                       self.feature_kind, self.feature_names)

    def column(self, name: str) -> np.ndarray:
        return self.X[:, self.feature_names.index(name)]

    def require_rows(self) -> None:
        if not len(self):
            raise EmptyDataset("dataset has no rows")
