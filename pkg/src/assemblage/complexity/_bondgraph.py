"""Bitmask view of a molecule's bond graph used by the assembly search.

Subgraphs are sets of bonds encoded as Python ints (bit ``k`` = bond ``k``).
Two bonds are adjacent when they share an atom.  Atoms carry only their
element and bonds only their order, so isomorphism between subgraphs respects
bond types (sorted element pair, order) and nothing else.
"""

from __future__ import annotations

from ..molgraph.canon import canonical_labeling
from ..molgraph.graph import MolecularGraph


def iter_bits(mask: int):
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class BondGraph:
    """Bond-adjacency bitmasks plus cached canonical certificates of bond sets."""

    def __init__(self, g: MolecularGraph):
        self.graph = g
        self.m = g.n_bonds
        self.full = (1 << self.m) - 1
        self.ends = [(b.begin, b.end) for b in g.bonds]
        self.order = [b.order for b in g.bonds]
        elements = sorted({a.element for a in g.atoms})
        self.element_id = [elements.index(a.element) for a in g.atoms]
        adj = [0] * self.m
        for k in range(self.m):
            a, b = self.ends[k]
            for j in g.incident[a] + g.incident[b]:
                if j != k:
                    adj[k] |= 1 << j
        self.adj = adj
        types: dict[tuple, int] = {}
        self.bond_type = []
        for k, (a, b) in enumerate(self.ends):
            ea, eb = sorted((self.element_id[a], self.element_id[b]))
            key = (ea, eb, self.order[k])
            self.bond_type.append(types.setdefault(key, len(types)))
        self.type_masks = [0] * len(types)
        for k, t in enumerate(self.bond_type):
            self.type_masks[t] |= 1 << k
        self._certs: dict[int, int] = {}
        self._cert_ids: dict[tuple, int] = {}

    def neighborhood(self, mask: int) -> int:
        out = 0
        for k in iter_bits(mask):
            out |= self.adj[k]
        return out & ~mask

    def components(self, mask: int) -> list[int]:
        """Split a bond set into connected bond sets."""
        adj = self.adj
        comps = []
        while mask:
            comp = frontier = mask & -mask
            while frontier:
                grow = 0
                f = frontier
                while f:
                    low = f & -f
                    grow |= adj[low.bit_length() - 1]
                    f ^= low
                frontier = grow & mask & ~comp
                comp |= frontier
            comps.append(comp)
            mask &= ~comp
        return comps

    def type_signature(self, mask: int) -> tuple[int, ...]:
        return tuple((mask & t).bit_count() for t in self.type_masks)

    def labeling(self, mask: int):
        """Canonical labelling of a bond set; vertices are its atoms."""
        index: dict[int, int] = {}
        edges = []
        for k in iter_bits(mask):
            a, b = self.ends[k]
            ia = index.setdefault(a, len(index))
            ib = index.setdefault(b, len(index))
            edges.append((ia, ib, self.order[k]))
        labels = [0] * len(index)
        for atom, i in index.items():
            labels[i] = self.element_id[atom]
        return canonical_labeling(labels, edges), index

    def class_id(self, mask: int) -> int:
        """Small integer equal for two bond sets exactly when they are isomorphic."""
        cid = self._certs.get(mask)
        if cid is None:
            cert = self.labeling(mask)[0].certificate
            cid = self._cert_ids.setdefault(cert, len(self._cert_ids))
            self._certs[mask] = cid
        return cid

    def assign_class(self, mask: int, cid: int) -> None:
        self._certs[mask] = cid

    def bond_automorphisms(self, limit: int = 2048) -> list[tuple[int, ...]]:
        """Bond permutations induced by automorphisms of the whole bond graph.

        Returns the group closure of the generators found by canonical
        labelling, truncated at ``limit`` elements (a subset is still sound
        for orbit-based deduplication).
        """
        if self.m == 0:
            return []
        canon, index = self.labeling(self.full)
        atom_of = {i: a for a, i in index.items()}
        bond_at = {}
        for k, (a, b) in enumerate(self.ends):
            bond_at[frozenset((a, b))] = k
        gens = []
        for perm in canon.automorphisms:
            mapping = []
            for a, b in self.ends:
                pa, pb = atom_of[perm[index[a]]], atom_of[perm[index[b]]]
                mapping.append(bond_at[frozenset((pa, pb))])
            gens.append(tuple(mapping))
        identity = tuple(range(self.m))
        group = {identity}
        frontier = [identity]
        while frontier and len(group) < limit:
            nxt = []
            for p in frontier:
                for gperm in gens:
                    q = tuple(gperm[p[k]] for k in range(self.m))
                    if q not in group:
                        group.add(q)
                        nxt.append(q)
                        if len(group) >= limit:
                            break
            frontier = nxt
        group.discard(identity)
        return sorted(group)


def permute_mask(mask: int, perm: tuple[int, ...]) -> int:
    out = 0
    for k in iter_bits(mask):
        out |= 1 << perm[k]
    return out
