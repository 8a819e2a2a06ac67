"""Böttcher complexity from per-atom microenvironments.

Each heavy atom contributes ``d * e * s * log2(V * b)`` where ``d`` counts
symmetry-distinct heavy neighbours, ``e`` the distinct heavy elements in the
atom's bonded neighbourhood (the atom included), ``s`` a stereo factor (always
1 here), ``V`` the element's valence electrons and ``b`` the sum of Kekulé
bond orders to heavy atoms.  Atoms belonging to a symmetry class with more
than one member contribute only half.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..molgraph.elements import VALENCE_ELECTRONS
from ..molgraph.equivalence import equivalence_classes
from ..molgraph.graph import MolecularGraph


@dataclass(frozen=True)
class AtomTerm:
    d: int
    e: int
    s: int
    valence_electrons: int
    bond_sum: int
    contribution: float
    halved: bool


def bottcher_terms(g: MolecularGraph) -> list[AtomTerm]:
    """Per-atom terms of the score, in atom order."""
    g.require_bonds()
    classes = equivalence_classes(g).atom_class
    class_size: dict[int, int] = {}
    for c in classes:
        class_size[c] = class_size.get(c, 0) + 1
    terms = []
    for i, atom in enumerate(g.atoms):
        nbrs = g.neighbors[i]
        d = len({classes[j] for j in nbrs})
        e = len({atom.element} | {g.atoms[j].element for j in nbrs})
        s = 1
        v = VALENCE_ELECTRONS[atom.element]
        b = g.bond_order_sum(i)
        c = d * e * s * math.log2(v * b) if b > 0 else 0.0
        terms.append(AtomTerm(d, e, s, v, b, c, class_size[classes[i]] > 1))
    return terms


def bottcher(g: MolecularGraph) -> float:
    """Böttcher score; symmetric atoms are counted at half weight.

    Raises:
        EmptyGraph: for a molecule without bonds.
    """
    total = 0.0
    for t in bottcher_terms(g):
        total += 0.5 * t.contribution if t.halved else t.contribution
    return total
