"""Assembly of an ensemble of objects with copy numbers."""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..errors import AssemblageError


@dataclass(frozen=True)
class EnsembleObservation:
    """Observed objects as ``(assembly_index, copy_number)`` pairs.

    Attributes:
        objects: One ``(a_i, n_i)`` entry per unique object; ``n_i >= 1``.
    """

    objects: tuple[tuple[int, int], ...]

    def __post_init__(self) -> None:
        object.__setattr__(self, "objects", tuple((int(a), int(n)) for a, n in self.objects))
        for a, n in self.objects:
            if n < 1:
                raise AssemblageError(f"copy number must be >= 1, got {n}")
            if a < 0:
                raise AssemblageError(f"assembly index must be >= 0, got {a}")

    @property
    def n_unique(self) -> int:
        return len(self.objects)

    @property
    def n_total(self) -> int:
        return sum(n for _, n in self.objects)


def ensemble_assembly(obs: EnsembleObservation) -> float:
    """Sum of ``exp(a_i) * n_i / N_T`` over objects seen more than once."""
    total = obs.n_total
    if total == 0:
        return 0.0
    return math.fsum(math.exp(a) * n / total for a, n in obs.objects if n > 1)
