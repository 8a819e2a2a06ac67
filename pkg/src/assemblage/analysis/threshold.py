"""Translate an assembly-index threshold into a surrogate-score threshold."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ..errors import DegenerateSplit, LengthMismatch

MIN_PER_SIDE = 10


@dataclass(frozen=True)
class ThresholdReport:
    """Surrogate cut that best reproduces the split at an assembly threshold.

    Molecules with assembly index ``>= ma_threshold`` are the positives; a
    molecule is called positive when its surrogate score is
    ``>= surrogate_threshold``.

    Attributes:
        ma_threshold: Assembly-index threshold.
        surrogate_score: Name of the surrogate score.
        surrogate_threshold: Chosen surrogate cut.
        fpr: Called positive among the negatives.
        tpr: Called positive among the positives.
        curve: ``(threshold, fpr, tpr)`` for every candidate cut, ascending.
    """

    ma_threshold: int
    surrogate_score: str
    surrogate_threshold: float
    fpr: float
    tpr: float
    curve: tuple[tuple[float, float, float], ...]


def threshold_translate(ma, surrogate, ma_threshold: int,
                        surrogate_score: str = "bertz") -> ThresholdReport:
    """Choose the surrogate cut with the highest balanced accuracy.

    Candidate cuts are the sorted unique surrogate values; the lowest cut
    wins a tie.

    Raises:
        DegenerateSplit: with fewer than 10 molecules on either side.
    """
    ma = np.asarray(ma, dtype=np.float64)
    s = np.asarray(surrogate, dtype=np.float64)
    if ma.shape != s.shape:
        raise LengthMismatch(f"{ma.shape} vs {s.shape}")
    pos = ma >= ma_threshold
    n_pos, n_neg = int(pos.sum()), int((~pos).sum())
    if n_pos < MIN_PER_SIDE or n_neg < MIN_PER_SIDE:
        raise DegenerateSplit(f"{n_neg} below and {n_pos} at/above threshold; need {MIN_PER_SIDE} each")
    order = np.argsort(s, kind="stable")
    s_sorted, pos_sorted = s[order], pos[order]
    cuts, first = np.unique(s_sorted, return_index=True)
    # rows at index >= first[i] have surrogate >= cuts[i]
    pos_below = np.concatenate([[0], np.cumsum(pos_sorted)])[first]
    neg_below = first - pos_below
    tpr = (n_pos - pos_below) / n_pos
    fpr = (n_neg - neg_below) / n_neg
    balanced = 0.5 * (tpr + (1.0 - fpr))
    i = int(np.argmax(balanced))
    curve = tuple((float(c), float(f), float(t)) for c, f, t in zip(cuts, fpr, tpr))
    return ThresholdReport(int(ma_threshold), surrogate_score, float(cuts[i]),
                           float(fpr[i]), float(tpr[i]), curve)
