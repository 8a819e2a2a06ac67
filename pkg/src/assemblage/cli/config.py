"""Run configuration shared by the command-line workflows."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

from ..errors import ConfigError
from ..ml.gbdt import Hyperparameters
from ..ml.search import DEFAULT_GRID


@dataclass(frozen=True)
class RunConfig:
    """Everything a workflow needs to reproduce its numeric outputs.

    Attributes:
        seed: Master seed for corpus, spectra, splits and boosting.
        budget_s: Assembly-index budget per molecule, in seconds.
        max_mz: Highest m/z bin of spectrum vectors.
        energies: Simulation energies in eV.
        train_frac: Training share of the stratified split.
        k_folds: Cross-validation folds for grid search.
        grid: ``{hyperparameter: values}`` searched by the pipeline.
        hyperparameters: Fixed settings used where no search runs.
        input: SMILES file; empty selects the synthetic corpus.
        n_molecules: Synthetic corpus size.
        output: Output directory or file.
    """

    seed: int = 0
    budget_s: float = 60.0
    max_mz: int = 1000
    energies: tuple[float, ...] = (20.0,)
    train_frac: float = 0.7
    k_folds: int = 5
    grid: dict = field(default_factory=lambda: dict(DEFAULT_GRID))
    hyperparameters: dict = field(default_factory=lambda: asdict(
        Hyperparameters(rounds=300, max_depth=5, learning_rate=0.1)))
    input: str = ""
    n_molecules: int = 2000
    output: str = "out"

    def __post_init__(self) -> None:
        object.__setattr__(self, "energies", tuple(float(e) for e in self.energies))
        if not self.energies or any(e <= 0 for e in self.energies):
            raise ConfigError(f"energies must be positive, got {self.energies}")
        if not 0 < self.train_frac < 1:
            raise ConfigError(f"train_frac must lie strictly between 0 and 1, got {self.train_frac}")
        if self.max_mz < 1:
            raise ConfigError(f"max_mz must be >= 1, got {self.max_mz}")
        if self.budget_s <= 0:
            raise ConfigError(f"budget must be positive, got {self.budget_s}")
        if self.k_folds < 2:
            raise ConfigError(f"k_folds must be >= 2, got {self.k_folds}")
        if self.n_molecules < 1:
            raise ConfigError(f"n_molecules must be >= 1, got {self.n_molecules}")
        try:
            self.hp()
        except ValueError as exc:
            raise ConfigError(str(exc)) from None

    def hp(self) -> Hyperparameters:
        return Hyperparameters.from_dict(self.hyperparameters)

    def to_json(self) -> str:
        d = asdict(self)
        d["energies"] = list(self.energies)
        return json.dumps(d, indent=2, sort_keys=True) + "\n"

    @classmethod
    def from_dict(cls, d: dict) -> RunConfig:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise ConfigError(f"unknown config keys {sorted(unknown)}")
        return cls(**d)

    @classmethod
    def from_json(cls, text: str) -> RunConfig:
        try:
            d = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ConfigError(f"config is not valid JSON: {exc}") from None
        if not isinstance(d, dict):
            raise ConfigError("config must be a JSON object")
        return cls.from_dict(d)
