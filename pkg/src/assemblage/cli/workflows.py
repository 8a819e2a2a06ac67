"""End-to-end workflows behind the command-line subcommands.

Every function here is deterministic given its config: seeds for spectra
are derived from the master seed, the molecule index and the energy, and
reports are written with ``repr`` floats in a fixed row order.
"""

from __future__ import annotations

import csv
import io
import json
import os
import tempfile
from dataclasses import asdict, dataclass
from pathlib import Path

import numpy as np

from ..complexity.assembly import assembly_index
from ..errors import ConfigError, DegenerateDesign, NonPositiveFeature
from ..ml.baselines import fit_curve
from ..ml.dataset import Dataset
from ..ml.gbdt import GbdtModel, fit_gbdt, predict_many
from ..ml.metrics import error_profile, relative_mse
from ..ml.search import cv_table_csv, grid_search
from ..ml.split import stratified_indices
from ..molgraph.canon import canonical_key
from ..molgraph.graph import MolecularGraph, molecular_weight
from ..molgraph.io import read_smiles_lines
from ..spectra.simulate import simulate_spectrum
from ..spectra.spectrum import Spectrum, vectorize
from ..synthetic import generate_corpus
from .config import RunConfig

BASELINE_FEATURES = ("MW", "N_B", "max_peak_mz", "peak_count")
BASELINE_KINDS = ("linear", "logarithmic", "power", "polynomial")

# assembly indices are pure functions of the graph, so they are shared
# between workflows that run in one process
_MA_CACHE: dict[tuple[str, float], tuple[int, bool]] = {}


def atomic_write(path: str | os.PathLike, text: str) -> None:
    """Write through a temporary file in the same directory, then rename."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", newline="") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def spectrum_seed(seed: int, index: int, energy: float) -> int:
    state = np.random.SeedSequence([seed, index, int(round(energy * 1000))]).generate_state(1)
    return int(state[0])


def target_ma(g: MolecularGraph, budget_s: float) -> tuple[int, bool]:
    key = (canonical_key(g), budget_s)
    hit = _MA_CACHE.get(key)
    if hit is None:
        r = assembly_index(g, budget_s=budget_s)
        hit = (r.upper, r.exact)
        _MA_CACHE[key] = hit
    return hit


def load_molecules(cfg: RunConfig) -> list[MolecularGraph]:
    """Molecules from the configured SMILES file, or the synthetic corpus."""
    if not cfg.input:
        return generate_corpus(cfg.n_molecules, cfg.seed)
    text = Path(cfg.input).read_text()
    return [r.graph for r in read_smiles_lines(text) if r.graph is not None]


@dataclass
class Corpus:
    """Molecules with exact assembly targets and simulated spectra.

    ``spectra[e][i]`` is molecule ``i`` at ``energies[e]``.
    """

    molecules: list[MolecularGraph]
    targets: np.ndarray
    energies: tuple[float, ...]
    spectra: list[list[Spectrum]]
    dropped_inexact: int
    dropped_zero: int

    def vectors(self, e: int, max_mz: int) -> np.ndarray:
        return np.array([vectorize(s, max_mz).values for s in self.spectra[e]])

    def ids(self) -> tuple[str, ...]:
        return tuple(g.name or f"mol{i}" for i, g in enumerate(self.molecules))


def build_corpus(cfg: RunConfig) -> Corpus:
    """Compute targets, drop inexact or zero ones, simulate every energy."""
    kept, targets = [], []
    inexact = zero = 0
    for g in load_molecules(cfg):
        if g.n_bonds == 0 or not g.is_connected():
            continue
        ma, exact = target_ma(g, cfg.budget_s)
        if not exact:
            inexact += 1
        elif ma == 0:
            zero += 1
        else:
            kept.append(g)
            targets.append(ma)
    spectra = [
        [simulate_spectrum(g, e, spectrum_seed(cfg.seed, i, e)) for i, g in enumerate(kept)]
        for e in cfg.energies
    ]
    return Corpus(kept, np.array(targets, dtype=np.int64), cfg.energies, spectra, inexact, zero)


def scalar_features(c: Corpus, e: int = 0) -> np.ndarray:
    """MW, N_B, base-peak m/z and peak count per molecule."""
    rows = []
    for g, s in zip(c.molecules, c.spectra[e]):
        inten = s.intensity
        rows.append([molecular_weight(g), g.n_bonds, s.mz[int(np.argmax(inten))], len(s.peaks)])
    return np.array(rows, dtype=np.float64)


def _csv(rows: list[list], header: list[str]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


@dataclass
class PipelineResult:
    model: GbdtModel
    test_rel_mse: float
    baselines: dict[tuple[str, str], float]
    profile_csv: str
    metrics_csv: str
    cv_csv: str
    predictions_csv: str
    y_test: np.ndarray
    y_pred: np.ndarray
    n_rows: int
    dropped_inexact: int
    dropped_zero: int

    @property
    def best_baseline(self) -> float:
        return min(self.baselines.values())


def _integrated(c: Corpus, max_mz: int) -> np.ndarray:
    return np.hstack([c.vectors(e, max_mz) for e in range(len(c.energies))])


def run_pipeline(cfg: RunConfig, corpus: Corpus | None = None) -> PipelineResult:
    """Targets, spectra, split, grid search, final fit, baselines and profiles.

    With one energy the features are that energy's vectors; with several
    they are the per-energy vectors concatenated.
    """
    c = corpus or build_corpus(cfg)
    if len(c.targets) < 20:
        raise ConfigError(f"only {len(c.targets)} molecules have exact nonzero targets")
    X = c.vectors(0, cfg.max_mz) if len(c.energies) == 1 else _integrated(c, cfg.max_mz)
    ids = c.ids()
    data = Dataset(X, c.targets, ids)
    scal = Dataset(scalar_features(c), c.targets, ids, "scalar", BASELINE_FEATURES)
    tr, te = stratified_indices(c.targets, cfg.train_frac, cfg.seed)
    train, test = data.subset(tr), data.subset(te)
    best_hp, table = grid_search(train, cfg.grid, cfg.k_folds, cfg.seed)
    model = fit_gbdt(train, best_hp, cfg.seed)
    y_pred = predict_many(model, test.X)
    score = relative_mse(test.y, y_pred)

    baselines: dict[tuple[str, str], float] = {}
    s_train, s_test = scal.subset(tr), scal.subset(te)
    metric_rows = [["gbdt", "spectrum", "", repr(score)]]
    for feat in BASELINE_FEATURES:
        for kind in BASELINE_KINDS:
            try:
                bm = fit_curve(kind, s_train.column(feat), s_train.y, 2, feat)
            except (DegenerateDesign, NonPositiveFeature):
                continue
            loss = relative_mse(s_test.y, bm.predict(s_test))
            baselines[(feat, kind)] = loss
            metric_rows.append(["baseline", feat, kind, repr(loss)])
    metrics_csv = _csv(metric_rows, ["model", "feature", "kind", "test_rel_mse"])
    prof = error_profile(test.y, y_pred)
    profile_csv = _csv(
        [[k, b.count, repr(b.mean_abs), repr(b.mean_signed)] for k, b in prof.items()],
        ["ma_bin", "count", "mean_abs_rel_error", "mean_signed_rel_error"],
    )
    pred_csv = _csv(
        [[i, int(y), repr(float(p))] for i, y, p in zip(test.ids, test.y, y_pred)],
        ["id", "ma", "predicted"],
    )
    return PipelineResult(model, score, baselines, profile_csv, metrics_csv,
                          cv_table_csv(table), pred_csv, test.y, y_pred, len(c.targets),
                          c.dropped_inexact, c.dropped_zero)


def write_pipeline(cfg: RunConfig, res: PipelineResult, elapsed: float) -> None:
    out = Path(cfg.output)
    atomic_write(out / "model.json", res.model.to_json())
    atomic_write(out / "metrics.csv", res.metrics_csv)
    atomic_write(out / "error_profile.csv", res.profile_csv)
    atomic_write(out / "cv_table.csv", res.cv_csv)
    atomic_write(out / "predictions.csv", res.predictions_csv)
    atomic_write(out / "config.json", cfg.to_json())
    summary = {
        "rows": res.n_rows,
        "dropped_inexact": res.dropped_inexact,
        "dropped_zero": res.dropped_zero,
        "test_rel_mse": res.test_rel_mse,
        "best_baseline_rel_mse": res.best_baseline,
        "hyperparameters": asdict(res.model.hyperparameters),
        "elapsed_s": round(elapsed, 3),
    }
    atomic_write(out / "summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")


@dataclass
class MismatchResult:
    """Test relative MSE for every (training data, test data) pairing.

    Labels are energies formatted as ``"10eV"`` plus ``"split"`` (each row
    from one energy, dealt round-robin) and ``"integrated"`` (all energies
    concatenated).  Entries that cannot be formed are ``nan``.
    """

    labels: tuple[str, ...]
    matrix: np.ndarray

    def to_csv(self) -> str:
        rows = [[lab] + [repr(float(x)) if np.isfinite(x) else "" for x in row]
                for lab, row in zip(self.labels, self.matrix)]
        return _csv(rows, ["train\\test", *self.labels])

    def cell(self, train: str, test: str) -> float:
        return float(self.matrix[self.labels.index(train), self.labels.index(test)])


def run_mismatch(cfg: RunConfig, corpus: Corpus | None = None, seed: int | None = None) -> MismatchResult:
    """Cross-energy evaluation with fixed hyperparameters.

    Single-energy and split models are tested on every single-energy and the
    split test set.  The integrated model sees single-energy test rows with
    their own block filled and the other blocks zero.
    """
    if len(cfg.energies) < 2:
        raise ConfigError("mismatch needs at least two energies")
    seed = cfg.seed if seed is None else seed
    c = corpus or build_corpus(cfg)
    k = len(c.energies)
    width = cfg.max_mz + 1
    V = [c.vectors(e, cfg.max_mz) for e in range(k)]
    n = len(c.targets)
    deal = np.arange(n) % k
    split_X = np.array([V[deal[i]][i] for i in range(n)])
    integ_X = np.hstack(V)

    def padded(e: int) -> np.ndarray:
        out = np.zeros((n, k * width))
        out[:, e * width:(e + 1) * width] = V[e]
        return out

    labels = tuple(f"{e:g}eV" for e in c.energies) + ("split", "integrated")
    single_views = {labels[e]: V[e] for e in range(k)} | {"split": split_X}
    integ_views = {labels[e]: padded(e) for e in range(k)} | {"split": None,
                                                              "integrated": integ_X}
    tr, te = stratified_indices(c.targets, cfg.train_frac, seed)
    hp = cfg.hp()
    y_tr, y_te = c.targets[tr], c.targets[te]
    ids = c.ids()
    matrix = np.full((len(labels), len(labels)), np.nan)
    for i, train_label in enumerate(labels):
        if train_label == "integrated":
            Xtrain, views = integ_X, integ_views
        else:
            Xtrain, views = single_views[train_label], single_views
        model = fit_gbdt(Dataset(Xtrain[tr], y_tr, tuple(ids[j] for j in tr)), hp, seed)
        for j, test_label in enumerate(labels):
            Xtest = views.get(test_label)
            if Xtest is None:
                continue
            matrix[i, j] = relative_mse(y_te, predict_many(model, Xtest[te]))
    return MismatchResult(labels, matrix)
