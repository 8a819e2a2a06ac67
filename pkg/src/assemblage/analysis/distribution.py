"""Per-bond-count statistics of a score in two corpora."""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass

from ..errors import EmptyDataset


@dataclass(frozen=True)
class SideStats:
    count: int
    mean: float
    sd: float


@dataclass(frozen=True)
class SizeRow:
    """Statistics at one bond count; a side is ``None`` when it has no molecules there."""

    n_bonds: int
    a: SideStats | None
    b: SideStats | None


def _stats(values: list[float]) -> SideStats:
    n = len(values)
    mean = math.fsum(values) / n
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1) if n > 1 else 0.0
    return SideStats(n, mean, math.sqrt(var))


def _group(corpus) -> dict[int, list[float]]:
    out: dict[int, list[float]] = {}
    for n_bonds, score in corpus:
        out.setdefault(int(n_bonds), []).append(float(score))
    return out


def distribution_by_size(corpus_a, corpus_b) -> list[SizeRow]:
    """Mean, sample standard deviation and count per bond count for two corpora.

    Args:
        corpus_a: ``(N_B, score)`` pairs.
        corpus_b: ``(N_B, score)`` pairs.

    Sums use exact floating summation, so row order in either corpus never
    changes the output.
    """
    ga, gb = _group(corpus_a), _group(corpus_b)
    if not ga or not gb:
        raise EmptyDataset("both corpora must be non-empty")
    rows = []
    for nb in sorted(set(ga) | set(gb)):
        rows.append(SizeRow(nb, _stats(ga[nb]) if nb in ga else None,
                            _stats(gb[nb]) if nb in gb else None))
    return rows


def distribution_csv(rows: list[SizeRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n_bonds", "mean_a", "sd_a", "count_a", "mean_b", "sd_b", "count_b"])
    for r in rows:
        cells = [r.n_bonds]
        for side in (r.a, r.b):
            cells += ["", "", 0] if side is None else [repr(side.mean), repr(side.sd), side.count]
        w.writerow(cells)
    return buf.getvalue()
