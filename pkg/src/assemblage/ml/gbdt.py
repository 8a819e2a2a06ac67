"""Gradient-boosted regression trees trained on relative squared error.

Trees grow level by level with exact greedy splits: every distinct value of
every non-constant feature is a candidate.  One compiled pass per feature
scans the presorted entries and evaluates all nodes of the current level at
once.  Features are scanned in parallel, but each writes its own slot and
the slots are reduced in feature order, so the chosen split (lowest feature
index, then lowest threshold on exact gain ties) does not depend on the
number of threads.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields

import numba
import numpy as np

from ..errors import DimensionMismatch, InvalidHyperparameter, TooFewRows
from .dataset import Dataset
from .metrics import relative_mse, relative_mse_grad_hess

MODEL_FORMAT = "assemblage-gbdt"
MODEL_VERSION = 1
MIN_ROWS = 20


@dataclass(frozen=True)
class Hyperparameters:
    """Boosting settings.

    Attributes:
        rounds: Number of trees.
        max_depth: Maximum depth of each tree (a stump has depth 1).
        learning_rate: Shrinkage applied to every leaf value.
        reg_lambda: L2 penalty on leaf values.
        min_child_weight: Least hessian sum allowed in a child.
        subsample: Fraction of rows drawn without replacement per tree.
    """

    rounds: int = 100
    max_depth: int = 3
    learning_rate: float = 0.1
    reg_lambda: float = 1.0
    min_child_weight: float = 0.0
    subsample: float = 1.0

    def __post_init__(self) -> None:
        if self.rounds < 0:
            raise InvalidHyperparameter(f"rounds must be >= 0, got {self.rounds}")
        if self.max_depth < 1:
            raise InvalidHyperparameter(f"max_depth must be >= 1, got {self.max_depth}")
        if not self.learning_rate > 0:
            raise InvalidHyperparameter(f"learning_rate must be > 0, got {self.learning_rate}")
        if self.reg_lambda < 0:
            raise InvalidHyperparameter(f"reg_lambda must be >= 0, got {self.reg_lambda}")
        if self.min_child_weight < 0:
            raise InvalidHyperparameter(f"min_child_weight must be >= 0, got {self.min_child_weight}")
        if not 0 < self.subsample <= 1:
            raise InvalidHyperparameter(f"subsample must lie in (0, 1], got {self.subsample}")

    @classmethod
    def from_dict(cls, d: dict) -> Hyperparameters:
        names = {f.name for f in fields(cls)}
        unknown = set(d) - names
        if unknown:
            raise InvalidHyperparameter(f"unknown hyperparameters {sorted(unknown)}")
        return cls(**d)


@dataclass(frozen=True)
class Tree:
    """Array-encoded binary tree; node 0 is the root.

    Internal nodes route ``x[feature] < threshold`` to ``left``; leaves have
    ``feature == -1`` and carry ``value``.
    """

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray

    @property
    def n_nodes(self) -> int:
        return len(self.feature)

    def leaf_values(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(X.shape[0], dtype=np.int64)
        rows = np.arange(X.shape[0])
        while True:
            f = self.feature[node]
            inner = f >= 0
            if not inner.any():
                return self.value[node]
            go_left = X[rows, np.where(inner, f, 0)] < self.threshold[node]
            node = np.where(inner, np.where(go_left, self.left[node], self.right[node]), node)

    def to_record(self) -> dict:
        return {
            "feature": self.feature.tolist(),
            "threshold": self.threshold.tolist(),
            "left": self.left.tolist(),
            "right": self.right.tolist(),
            "value": self.value.tolist(),
        }

    @classmethod
    def from_record(cls, rec: dict) -> Tree:
        return cls(
            np.array(rec["feature"], dtype=np.int64),
            np.array(rec["threshold"], dtype=np.float64),
            np.array(rec["left"], dtype=np.int64),
            np.array(rec["right"], dtype=np.int64),
            np.array(rec["value"], dtype=np.float64),
        )

    def is_well_formed(self) -> bool:
        n = self.n_nodes
        for i in range(n):
            if self.feature[i] < 0:
                continue
            if not (i < self.left[i] < n and i < self.right[i] < n):
                return False
        return True


@dataclass(frozen=True)
class GbdtModel:
    """A trained ensemble: ``base_score + learning_rate * sum of leaf values``.

    Attributes:
        trees: Trees in boosting order.
        learning_rate: Shrinkage.
        base_score: Starting prediction (mean training target).
        n_features: Input dimension the model expects.
        hyperparameters: Settings used for training.
        history: Training relative MSE after each round, the base first.
    """

    trees: tuple[Tree, ...]
    learning_rate: float
    base_score: float
    n_features: int
    hyperparameters: Hyperparameters
    history: tuple[float, ...] = field(default=())

    def to_json(self) -> str:
        doc = {
            "format": MODEL_FORMAT,
            "version": MODEL_VERSION,
            "base_score": self.base_score,
            "learning_rate": self.learning_rate,
            "n_features": self.n_features,
            "hyperparameters": asdict(self.hyperparameters),
            "history": list(self.history),
            "trees": [t.to_record() for t in self.trees],
        }
        return json.dumps(doc, sort_keys=True)

    @classmethod
    def from_json(cls, text: str) -> GbdtModel:
        doc = json.loads(text)
        if doc.get("format") != MODEL_FORMAT or doc.get("version") != MODEL_VERSION:
            raise InvalidHyperparameter(
                f"unsupported model document {doc.get('format')!r} v{doc.get('version')!r}"
            )
        return cls(
            tuple(Tree.from_record(t) for t in doc["trees"]),
            float(doc["learning_rate"]),
            float(doc["base_score"]),
            int(doc["n_features"]),
            Hyperparameters.from_dict(doc["hyperparameters"]),
            tuple(doc.get("history", ())),
        )


@numba.njit(parallel=True, cache=True)
def _best_splits(ptr, rows, vals, floor, slot, g, h, node_g, node_h, node_n,
                 reg_lambda, min_child_weight):
    """Best split per level node, one candidate slot per feature.

    Each feature lists only its entries above the column minimum, sorted
    descending; the block of rows at the minimum is handled from the node
    totals.  Scanning downwards with ``>=`` keeps the lowest threshold among
    equal gains.
    """
    n_feat = len(ptr) - 1
    n_nodes = len(node_g)
    gains = np.zeros((n_feat, n_nodes))
    thresholds = np.zeros((n_feat, n_nodes))
    for fi in numba.prange(n_feat):
        gr = np.zeros(n_nodes)
        hr = np.zeros(n_nodes)
        cr = np.zeros(n_nodes, dtype=np.int64)
        last = np.zeros(n_nodes)
        for k in range(ptr[fi], ptr[fi + 1]):
            s = slot[rows[k]]
            if s < 0:
                continue
            v = vals[k]
            if cr[s] > 0 and v < last[s]:
                _consider(gains, thresholds, fi, s, v, last[s], gr[s], hr[s], node_g[s],
                          node_h[s], reg_lambda, min_child_weight)
            gr[s] += g[rows[k]]
            hr[s] += h[rows[k]]
            cr[s] += 1
            last[s] = v
        for s in range(n_nodes):
            if 0 < cr[s] < node_n[s]:
                _consider(gains, thresholds, fi, s, floor[fi], last[s], gr[s], hr[s],
                          node_g[s], node_h[s], reg_lambda, min_child_weight)
    return gains, thresholds


@numba.njit(inline="always")
def _consider(gains, thresholds, fi, s, lo, hi, gr, hr, g_tot, h_tot, reg_lambda, mcw):
    hl = h_tot - hr
    if hl < mcw or hr < mcw:
        return
    gl = g_tot - gr
    gain = 0.5 * (gl * gl / (hl + reg_lambda) + gr * gr / (hr + reg_lambda)
                  - g_tot * g_tot / (h_tot + reg_lambda))
    if gain > 0 and gain >= gains[fi, s]:
        gains[fi, s] = gain
        mid = 0.5 * (lo + hi)
        thresholds[fi, s] = mid if mid > lo else hi


@dataclass(frozen=True)
class _Columns:
    """Per-feature entries above the column minimum, sorted descending."""

    features: np.ndarray
    ptr: np.ndarray
    rows: np.ndarray
    vals: np.ndarray
    floor: np.ndarray

    @classmethod
    def build(cls, X: np.ndarray) -> _Columns:
        features = np.flatnonzero(np.ptp(X, axis=0) > 0).astype(np.int64)
        ptr, rows, vals, floor = [0], [], [], []
        for f in features:
            col = X[:, f]
            lo = col.min()
            idx = np.flatnonzero(col > lo)
            idx = idx[np.argsort(-col[idx], kind="stable")]
            rows.append(idx)
            vals.append(col[idx])
            floor.append(lo)
            ptr.append(ptr[-1] + len(idx))
        cat = (lambda parts, dt: np.concatenate(parts).astype(dt) if parts else np.zeros(0, dt))
        return cls(features, np.array(ptr, dtype=np.int64), cat(rows, np.int64),
                   cat(vals, np.float64), np.array(floor, dtype=np.float64))


def _grow_tree(X, cols: _Columns, rows, g, h, hp: Hyperparameters) -> Tree:
    n = X.shape[0]
    slot = np.full(n, -1, dtype=np.int64)
    slot[rows] = 0
    feature, threshold, left, right, value = [-1], [0.0], [-1], [-1], [0.0]
    level = [0]  # tree node id per level slot
    for depth in range(hp.max_depth + 1):
        active = slot >= 0
        node_g = np.bincount(slot[active], weights=g[active], minlength=len(level))
        node_h = np.bincount(slot[active], weights=h[active], minlength=len(level))
        node_n = np.bincount(slot[active], minlength=len(level))
        for s, node in enumerate(level):
            value[node] = -node_g[s] / (node_h[s] + hp.reg_lambda)
        if depth == hp.max_depth or not len(cols.features):
            break
        gains, thr = _best_splits(cols.ptr, cols.rows, cols.vals, cols.floor, slot, g, h,
                                  node_g, node_h, node_n, hp.reg_lambda, hp.min_child_weight)
        next_level = []
        new_slot = np.full(n, -1, dtype=np.int64)
        for s, node in enumerate(level):
            col = gains[:, s]
            fi = int(np.argmax(col))  # first maximum: lowest feature index
            if not col[fi] > 0:
                continue
            f = int(cols.features[fi])
            t = float(thr[fi, s])
            li, ri = len(feature), len(feature) + 1
            feature[node], threshold[node], left[node], right[node] = f, t, li, ri
            for _ in range(2):
                feature.append(-1)
                threshold.append(0.0)
                left.append(-1)
                right.append(-1)
                value.append(0.0)
            members = np.flatnonzero(slot == s)
            goes_left = X[members, f] < t
            new_slot[members[goes_left]] = len(next_level)
            new_slot[members[~goes_left]] = len(next_level) + 1
            next_level += [li, ri]
        if not next_level:
            break
        slot, level = new_slot, next_level
    for i in range(len(feature)):
        if feature[i] >= 0:
            value[i] = 0.0
    return Tree(
        np.array(feature, dtype=np.int64),
        np.array(threshold, dtype=np.float64),
        np.array(left, dtype=np.int64),
        np.array(right, dtype=np.int64),
        np.array(value, dtype=np.float64),
    )


def fit_gbdt(train: Dataset, hp: Hyperparameters | None = None, seed: int = 0) -> GbdtModel:
    """Second-order boosting with gradient ``2(p - y)/y^2`` and hessian ``2/y^2``.

    Raises:
        TooFewRows: with fewer than 20 training rows.
    """
    hp = hp or Hyperparameters()
    if len(train) < MIN_ROWS:
        raise TooFewRows(f"need at least {MIN_ROWS} rows, got {len(train)}")
    X = np.ascontiguousarray(train.X)
    y = train.y.astype(np.float64)
    n = len(y)
    cols = _Columns.build(X)
    base = float(np.mean(y))
    pred = np.full(n, base)
    history = [relative_mse(y, pred)]
    rng = np.random.default_rng(seed)
    n_sample = max(1, int(round(hp.subsample * n)))
    trees = []
    for _ in range(hp.rounds):
        g, h = relative_mse_grad_hess(y, pred)
        if hp.subsample < 1.0:
            rows = np.sort(rng.permutation(n)[:n_sample])
        else:
            rows = np.arange(n)
        tree = _grow_tree(X, cols, rows, g, h, hp)
        trees.append(tree)
        pred = pred + hp.learning_rate * tree.leaf_values(X)
        history.append(relative_mse(y, pred))
    return GbdtModel(tuple(trees), hp.learning_rate, base, X.shape[1], hp, tuple(history))


def predict_many(m: GbdtModel, X, rounds: int | None = None) -> np.ndarray:
    """Predictions for a feature matrix, optionally using only the first ``rounds`` trees."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise DimensionMismatch(f"model expects {m.n_features} features, got shape {X.shape}")
    pred = np.full(X.shape[0], m.base_score)
    for tree in m.trees[:rounds]:
        pred = pred + m.learning_rate * tree.leaf_values(X)
    return pred


def predict_staged(m: GbdtModel, X, stages: list[int]) -> dict[int, np.ndarray]:
    """Predictions after each requested number of rounds, in one pass."""
    X = np.asarray(X, dtype=np.float64)
    if X.ndim != 2 or X.shape[1] != m.n_features:
        raise DimensionMismatch(f"model expects {m.n_features} features, got shape {X.shape}")
    want = set(stages)
    out = {}
    pred = np.full(X.shape[0], m.base_score)
    if 0 in want:
        out[0] = pred.copy()
    for i, tree in enumerate(m.trees, start=1):
        pred = pred + m.learning_rate * tree.leaf_values(X)
        if i in want:
            out[i] = pred.copy()
    return out


def predict(m: GbdtModel, v) -> float:
    """Prediction for one feature vector (array or ``SpectrumVector``)."""
    values = getattr(v, "values", v)
    x = np.asarray(values, dtype=np.float64)
    if x.ndim != 1:
        raise DimensionMismatch(f"expected a single vector, got shape {x.shape}")
    return float(predict_many(m, x[None, :])[0])
