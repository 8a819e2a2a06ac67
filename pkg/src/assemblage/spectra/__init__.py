"""Spectra ingestion, vectorization, simulation and tree-based assembly estimates."""

from .recursive import (
    FragmentNode,
    first_order_bound,
    recursive_ma,
    tree_from_json,
    tree_to_json,
)
from .simulate import cleavage_probability, simulate_spectrum
from .spectrum import (
    Peak,
    Spectrum,
    SpectrumVector,
    parse_msp,
    serialize_msp,
    vectorize,
)

__all__ = [
    "FragmentNode", "Peak", "Spectrum", "SpectrumVector", "cleavage_probability",
    "first_order_bound", "parse_msp", "recursive_ma", "serialize_msp",
    "simulate_spectrum", "tree_from_json", "tree_to_json", "vectorize",
]
