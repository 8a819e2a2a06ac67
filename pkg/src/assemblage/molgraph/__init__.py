"""Molecule ingestion, canonical keys and symmetry classes."""

from .canon import canonical_form, canonical_key
from .equivalence import EquivalenceClasses, equivalence_classes
from .graph import Atom, Bond, MolecularGraph, molecular_weight
from .io import SmilesRecord, parse_report_csv, read_smiles_lines
from .kekulize import kekulize
from .smiles import parse_smiles, split_smiles, to_smiles

__all__ = [
    "Atom", "Bond", "EquivalenceClasses", "MolecularGraph", "SmilesRecord",
    "canonical_form", "canonical_key", "equivalence_classes", "kekulize",
    "molecular_weight", "parse_report_csv", "parse_smiles", "read_smiles_lines",
    "split_smiles", "to_smiles",
]
