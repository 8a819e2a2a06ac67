"""Assembly-index regression from spectrum vectors."""

from .baselines import BaselineModel, fit_baseline, fit_curve
from .dataset import Dataset
from .gbdt import GbdtModel, Hyperparameters, fit_gbdt, predict, predict_many
from .metrics import ProfileBin, error_profile, relative_mse, relative_mse_grad_hess
from .search import DEFAULT_GRID, CvRow, cv_table_csv, expand_grid, grid_search
from .split import stratified_folds, stratified_indices, stratified_split

__all__ = [
    "DEFAULT_GRID", "BaselineModel", "CvRow", "Dataset", "GbdtModel", "Hyperparameters",
    "ProfileBin", "cv_table_csv", "error_profile", "expand_grid", "fit_baseline",
    "fit_curve", "fit_gbdt", "grid_search", "predict", "predict_many", "relative_mse",
    "relative_mse_grad_hess", "stratified_folds", "stratified_indices", "stratified_split",
]
