"""Hyperparameter grid search with stratified k-fold cross-validation."""

from __future__ import annotations

import csv
import io
import itertools
from dataclasses import asdict, dataclass, replace

import numpy as np

from ..errors import GridEmpty
from .dataset import Dataset
from .gbdt import Hyperparameters, fit_gbdt, predict_staged
from .metrics import relative_mse
from .split import stratified_folds

DEFAULT_GRID: dict[str, list] = {
    "max_depth": [3, 5, 7],
    "rounds": [100, 300],
    "learning_rate": [0.05, 0.1],
    "reg_lambda": [1.0],
    "subsample": [0.8, 1.0],
}


def expand_grid(grid) -> list[Hyperparameters]:
    """Cartesian product of a ``{name: values}`` mapping, or a list passed through."""
    if isinstance(grid, dict):
        names = sorted(grid)
        combos = itertools.product(*(grid[n] for n in names))
        out = [Hyperparameters(**dict(zip(names, c))) for c in combos]
    else:
        out = [g if isinstance(g, Hyperparameters) else Hyperparameters(**g) for g in grid]
    if not out:
        raise GridEmpty("hyperparameter grid is empty")
    return out


@dataclass(frozen=True)
class CvRow:
    hp: Hyperparameters
    fold_losses: tuple[float, ...]

    @property
    def mean(self) -> float:
        return float(np.mean(self.fold_losses))


def grid_search(train: Dataset, grid=None, k_folds: int = 5,
                seed: int = 0) -> tuple[Hyperparameters, list[CvRow]]:
    """Pick the setting with the lowest mean validation relative MSE.

    Settings that differ only in ``rounds`` share one boosting run per fold
    and are scored at each stage, which equals training them separately.
    Exact ties go to fewer rounds, then shallower trees.

    Returns:
        The winning settings and one table row per setting, in grid order.
    """
    hps = expand_grid(DEFAULT_GRID if grid is None else grid)
    folds = stratified_folds(train.y, k_folds, seed)
    groups: dict[Hyperparameters, list[int]] = {}
    for hp in hps:
        groups.setdefault(replace(hp, rounds=0), []).append(hp.rounds)
    losses: dict[Hyperparameters, list[float]] = {hp: [] for hp in hps}
    all_rows = np.arange(len(train))
    for k, val_rows in enumerate(folds):
        fit_rows = np.setdiff1d(all_rows, val_rows)
        fit_ds, val_ds = train.subset(fit_rows), train.subset(val_rows)
        for key, rounds in groups.items():
            model = fit_gbdt(fit_ds, replace(key, rounds=max(rounds)), seed)
            staged = predict_staged(model, val_ds.X, rounds)
            for r in sorted(set(rounds)):
                losses[replace(key, rounds=r)].append(relative_mse(val_ds.y, staged[r]))
    table = [CvRow(hp, tuple(losses[hp])) for hp in hps]
    best = min(table, key=lambda row: (row.mean, row.hp.rounds, row.hp.max_depth))
    return best.hp, table


def cv_table_csv(table: list[CvRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    names = list(asdict(table[0].hp)) if table else []
    n_folds = len(table[0].fold_losses) if table else 0
    w.writerow(names + [f"fold{i}" for i in range(n_folds)] + ["mean"])
    for row in table:
        d = asdict(row.hp)
        w.writerow([d[n] for n in names] + [repr(x) for x in row.fold_losses] + [repr(row.mean)])
    return buf.getvalue()
