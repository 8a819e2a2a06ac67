"""Bertz complexity: information content of two-bond connections plus atom types.

Symmetry classes come from bond-order-weighted topological distances: an
atom's class is its sorted row of shortest-path lengths (bond length
``1/order``, aromatic ``1/1.5``) rounded to four decimals.  A connection is a
pair of bonds sharing a hinge atom, counted ``order_i * order_j`` times and
keyed by (neighbour class, hinge class, neighbour class); a multiple bond adds
``o(o-1)/2`` self-connections keyed by its two end classes.  With ``n_k``
connections per key and ``N`` in total the connection term is
``2 N log2 N - sum n_k log2 n_k``; the atom-type term is the number of heavy
atoms times the Shannon entropy of their element distribution.
"""

from __future__ import annotations

import math

import numpy as np

from ..molgraph.graph import MolecularGraph

DISTANCE_CUTOFF = 100


def _bond_weight(g: MolecularGraph, k: int) -> float:
    bond = g.bonds[k]
    return 1.5 if bond.aromatic else float(bond.order)


def weighted_distances(g: MolecularGraph) -> np.ndarray:
    """All-pairs shortest paths with bond length ``1 / order``."""
    n = g.n_atoms
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for k, bond in enumerate(g.bonds):
        w = 1.0 / _bond_weight(g, k)
        dist[bond.begin, bond.end] = dist[bond.end, bond.begin] = w
    for via in range(n):
        np.minimum(dist, dist[:, via, None] + dist[None, via, :], out=dist)
    return dist


def distance_classes(g: MolecularGraph) -> list[int]:
    """Symmetry class per atom from its sorted, rounded distance row."""
    dist = weighted_distances(g)
    keys: dict[tuple[str, ...], int] = {}
    out = []
    for row in dist:
        key = tuple(f"{x:.4f}" for x in sorted(row.tolist())[:DISTANCE_CUTOFF])
        out.append(keys.setdefault(key, len(keys)))
    return out


def _entropy_bits(counts: list[float]) -> float:
    total = sum(counts)
    return -sum(c / total * math.log2(c / total) for c in counts if c > 0)


def bertz(g: MolecularGraph) -> float:
    """Bertz complexity score.

    Raises:
        EmptyGraph: for a molecule without bonds.
    """
    g.require_bonds()
    classes = distance_classes(g)
    connections: dict[tuple, float] = {}
    for hinge in range(g.n_atoms):
        inc = sorted(g.incident[hinge], key=lambda k: g.other(k, hinge))
        for i, ki in enumerate(inc):
            ni = g.other(ki, hinge)
            wi = _bond_weight(g, ki)
            if wi > 1 and ni > hinge:
                key = (min(classes[hinge], classes[ni]), max(classes[hinge], classes[ni]))
                connections[key] = connections.get(key, 0.0) + wi * (wi - 1) / 2
            for kj in inc[i + 1 :]:
                nj = g.other(kj, hinge)
                key = (min(classes[ni], classes[nj]), classes[hinge], max(classes[ni], classes[nj]))
                connections[key] = connections.get(key, 0.0) + wi * _bond_weight(g, kj)
    if not connections:
        connections = {"none": 1.0}
    counts = list(connections.values())
    total = sum(counts)
    connection_term = total * (_entropy_bits(counts) + math.log2(total))
    elements: dict[str, int] = {}
    for atom in g.atoms:
        elements[atom.element] = elements.get(atom.element, 0) + 1
    atom_term = g.n_atoms * _entropy_bits(list(elements.values()))
    return atom_term + connection_term
