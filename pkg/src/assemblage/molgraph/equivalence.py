"""Atom and bond symmetry classes by iterative neighbourhood refinement."""

from __future__ import annotations

from dataclasses import dataclass

from .graph import MolecularGraph


@dataclass(frozen=True)
class EquivalenceClasses:
    """Symmetry classes of a molecule.

    Class ids are dense ranks of the refined invariants, so they depend only
    on the graph's structure and never on the input atom order.

    Attributes:
        atom_class: Class id per atom.
        bond_class: Class id per bond.
        rounds: Refinement rounds until the partition stopped changing.
    """

    atom_class: tuple[int, ...]
    bond_class: tuple[int, ...]
    rounds: int

    @property
    def n_atom_classes(self) -> int:
        return len(set(self.atom_class))

    @property
    def n_bond_classes(self) -> int:
        return len(set(self.bond_class))


def _invariant(g: MolecularGraph, i: int) -> tuple:
    a = g.atoms[i]
    return (a.element, a.charge, a.hydrogens, g.degree(i), g.bond_order_sum(i))


def equivalence_classes(g: MolecularGraph) -> EquivalenceClasses:
    """Refine (element, charge, H count, degree, valence) by neighbour classes.

    Each round appends to an atom's class the sorted multiset of
    ``(bond label, neighbour class)`` pairs (aromatic bonds share one label); iteration stops at the fixed
    point, where the number of classes no longer grows.
    """
    invariants = [_invariant(g, i) for i in range(g.n_atoms)]
    ranks = {v: r for r, v in enumerate(sorted(set(invariants)))}
    colors = [ranks[v] for v in invariants]
    nbrs = [[(_bond_label(g, k), g.other(k, i)) for k in g.incident[i]] for i in range(g.n_atoms)]
    rounds = 0
    while True:
        new = _one_round(colors, nbrs)
        rounds += 1
        if len(set(new)) == len(set(colors)):
            colors = new
            break
        colors = new
    bond_keys = [
        (min(colors[b.begin], colors[b.end]), max(colors[b.begin], colors[b.end]), _bond_label(g, k))
        for k, b in enumerate(g.bonds)
    ]
    bond_ranks = {v: r for r, v in enumerate(sorted(set(bond_keys)))}
    return EquivalenceClasses(
        tuple(colors), tuple(bond_ranks[k] for k in bond_keys), rounds
    )


def _bond_label(g: MolecularGraph, k: int) -> int:
    # aromatic bonds are alike regardless of the Kekulé order they were given
    bond = g.bonds[k]
    return 4 if bond.aromatic else bond.order


def _one_round(colors: list[int], nbrs) -> list[int]:
    sigs = [
        (colors[i], tuple(sorted((o, colors[j]) for o, j in nbrs[i])))
        for i in range(len(colors))
    ]
    ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
    return [ranks[s] for s in sigs]
