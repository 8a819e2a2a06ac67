"""Molecular complexity toolkit: assembly index, Bertz and Böttcher scores,
spectrum-based assembly prediction and the analyses around them."""

from .complexity import assembly_index, bertz, bottcher, ensemble_assembly
from .molgraph import MolecularGraph, parse_smiles

__version__ = "0.1.0"

__all__ = [
    "MolecularGraph", "assembly_index", "bertz", "bottcher", "ensemble_assembly",
    "parse_smiles",
]
