"""Heavy-atom molecular graph.

Hydrogens are never vertices; each atom carries its implicit hydrogen count.
Bond orders are integral (aromatic systems are stored in a Kekulé form), but
bonds remember whether they came from aromatic input, which the Bertz score
needs in order to weight them as 1.5.
"""

from __future__ import annotations

from collections.abc import Sequence
from dataclasses import dataclass, field, replace
from functools import cached_property

from ..errors import AssemblageError, EmptyGraph, InvalidSubstitution
from .elements import ATOMIC_MASS, check_element, neutral_valence


@dataclass(frozen=True)
class Atom:
    element: str
    charge: int = 0
    hydrogens: int = 0
    aromatic: bool = False


@dataclass(frozen=True)
class Bond:
    begin: int
    end: int
    order: int = 1
    aromatic: bool = False

    @property
    def pair(self) -> tuple[int, int]:
        return (self.begin, self.end) if self.begin < self.end else (self.end, self.begin)


@dataclass(frozen=True)
class MolecularGraph:
    """Immutable heavy-atom graph with typed bonds.

    Attributes:
        atoms: Heavy atoms in input order.
        bonds: Bonds between atom indices; at most one per atom pair.
        name: Optional label carried through reports.
    """

    atoms: tuple[Atom, ...]
    bonds: tuple[Bond, ...]
    name: str | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        object.__setattr__(self, "atoms", tuple(self.atoms))
        object.__setattr__(self, "bonds", tuple(self.bonds))
        n = len(self.atoms)
        seen = set()
        for atom in self.atoms:
            check_element(atom.element)
        for bond in self.bonds:
            if not (0 <= bond.begin < n and 0 <= bond.end < n):
                raise AssemblageError(f"bond {bond} references a missing atom")
            if bond.begin == bond.end:
                raise AssemblageError(f"self-loop on atom {bond.begin}")
            if bond.order not in (1, 2, 3):
                raise AssemblageError(f"non-integral bond order {bond.order!r}")
            if bond.pair in seen:
                raise AssemblageError(f"duplicate bond between atoms {bond.pair}")
            seen.add(bond.pair)

    @property
    def n_atoms(self) -> int:
        return len(self.atoms)

    @property
    def n_bonds(self) -> int:
        return len(self.bonds)

    @cached_property
    def incident(self) -> tuple[tuple[int, ...], ...]:
        """Bond indices touching each atom."""
        inc: list[list[int]] = [[] for _ in self.atoms]
        for k, bond in enumerate(self.bonds):
            inc[bond.begin].append(k)
            inc[bond.end].append(k)
        return tuple(tuple(x) for x in inc)

    @cached_property
    def neighbors(self) -> tuple[tuple[int, ...], ...]:
        return tuple(
            tuple(self.other(k, i) for k in ks) for i, ks in enumerate(self.incident)
        )

    def other(self, bond_index: int, atom: int) -> int:
        bond = self.bonds[bond_index]
        return bond.end if bond.begin == atom else bond.begin

    def degree(self, atom: int) -> int:
        return len(self.incident[atom])

    def bond_order_sum(self, atom: int) -> int:
        return sum(self.bonds[k].order for k in self.incident[atom])

    def components(self) -> list[list[int]]:
        """Connected components as sorted atom index lists."""
        seen = [False] * self.n_atoms
        comps = []
        for start in range(self.n_atoms):
            if seen[start]:
                continue
            seen[start] = True
            stack, comp = [start], []
            while stack:
                a = stack.pop()
                comp.append(a)
                for b in self.neighbors[a]:
                    if not seen[b]:
                        seen[b] = True
                        stack.append(b)
            comps.append(sorted(comp))
        return comps

    def is_connected(self) -> bool:
        return self.n_atoms > 0 and len(self.components()) == 1

    def subgraph(self, atom_indices: Sequence[int], name: str | None = None) -> MolecularGraph:
        index = {a: i for i, a in enumerate(atom_indices)}
        bonds = [
            replace(b, begin=index[b.begin], end=index[b.end])
            for b in self.bonds
            if b.begin in index and b.end in index
        ]
        return MolecularGraph(tuple(self.atoms[a] for a in atom_indices), tuple(bonds), name)

    def split(self) -> list[MolecularGraph]:
        """Separate a multi-fragment graph into connected molecules."""
        return [self.subgraph(c, self.name) for c in self.components()]

    def permuted(self, order: Sequence[int]) -> MolecularGraph:
        """Graph whose atom ``i`` is this graph's atom ``order[i]``."""
        where = {old: new for new, old in enumerate(order)}
        bonds = tuple(replace(b, begin=where[b.begin], end=where[b.end]) for b in self.bonds)
        return MolecularGraph(tuple(self.atoms[a] for a in order), bonds, self.name)

    def substituted(self, atom: int, element: str) -> MolecularGraph:
        """Swap the element of one atom, keeping bonds and refitting hydrogens.

        Raises:
            InvalidSubstitution: if the new element cannot carry the atom's bonds.
        """
        if not 0 <= atom < self.n_atoms:
            raise InvalidSubstitution(f"atom index {atom} out of range")
        old = self.atoms[atom]
        valence = neutral_valence(element, old.charge)
        used = self.bond_order_sum(atom)
        if used > valence:
            raise InvalidSubstitution(
                f"{element} at atom {atom} cannot carry bond order sum {used}"
            )
        atoms = list(self.atoms)
        atoms[atom] = replace(old, element=element, hydrogens=valence - used)
        return MolecularGraph(tuple(atoms), self.bonds, self.name)

    def require_bonds(self) -> None:
        if self.n_bonds == 0:
            raise EmptyGraph("molecule has no bonds between heavy atoms")


def molecular_weight(g: MolecularGraph) -> float:
    """Average molecular mass in u, including implicit hydrogens."""
    if g.n_atoms == 0:
        raise EmptyGraph("empty molecule has no weight")
    total = 0.0
    for atom in g.atoms:
        total += ATOMIC_MASS[atom.element] + atom.hydrogens * ATOMIC_MASS["H"]
    return total
