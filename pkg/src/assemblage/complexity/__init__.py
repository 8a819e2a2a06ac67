"""Assembly index, Bertz and Böttcher scores, ensemble assembly."""

from .addition_chains import shortest_addition_chain, shortest_addition_sequence
from .assembly import (
    AssemblyResult,
    JoinStep,
    assembly_bounds,
    assembly_index,
    replay_witness,
)
from .bertz import bertz
from .bottcher import bottcher, bottcher_terms
from .ensemble import EnsembleObservation, ensemble_assembly

__all__ = [
    "AssemblyResult", "EnsembleObservation", "JoinStep", "assembly_bounds",
    "assembly_index", "bertz", "bottcher", "bottcher_terms", "ensemble_assembly",
    "replay_witness", "shortest_addition_chain", "shortest_addition_sequence",
]
