"""Canonical labelling by colour refinement and individualisation.

The labelling explores the individualisation tree, keeps the leaf with the
lexicographically smallest certificate and prunes siblings that lie in one
orbit of the automorphisms discovered so far.  Leaves that tie with the best
certificate yield automorphisms, which callers may reuse (the assembly
search uses them to collapse symmetric subgraph occurrences).
"""

from __future__ import annotations

from collections.abc import Hashable, Sequence
from dataclasses import dataclass

from .graph import MolecularGraph

Certificate = tuple


@dataclass(frozen=True)
class Canonical:
    """Result of canonical labelling.

    Attributes:
        certificate: Hashable, comparable form equal for isomorphic inputs only.
        labeling: Canonical position of each input vertex.
        automorphisms: Vertex permutations (as tuples) generating a subgroup of
            the automorphism group; every generator found during the search.
    """

    certificate: Certificate
    labeling: tuple[int, ...]
    automorphisms: tuple[tuple[int, ...], ...]


def refine(colors: list[int], nbrs: Sequence[Sequence[tuple[int, int]]]) -> list[int]:
    """Equitable refinement; colours are dense ranks so the result is canonical.

    Args:
        colors: Initial colour per vertex (dense ranks).
        nbrs: Per vertex, ``(edge_label, neighbour)`` pairs.
    """
    n_colors = len(set(colors))
    n = len(colors)
    while True:
        sigs = [
            (colors[i], tuple(sorted([(lab, colors[j]) for lab, j in nbrs[i]])))
            for i in range(n)
        ]
        ranks = {s: r for r, s in enumerate(sorted(set(sigs)))}
        colors = [ranks[s] for s in sigs]
        if len(ranks) == n_colors:
            return colors
        n_colors = len(ranks)


def _dense(values: Sequence[Hashable]) -> list[int]:
    ranks = {v: r for r, v in enumerate(sorted(set(values)))}
    return [ranks[v] for v in values]


def canonical_labeling(
    vertex_labels: Sequence[Hashable],
    edges: Sequence[tuple[int, int, int]],
) -> Canonical:
    """Canonical form of a vertex- and edge-labelled simple graph.

    Args:
        vertex_labels: Mutually comparable label per vertex.
        edges: ``(u, v, label)`` triples with integer labels.
    """
    n = len(vertex_labels)
    nbrs: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    for u, v, lab in edges:
        nbrs[u].append((lab, v))
        nbrs[v].append((lab, u))
    label_seq = tuple(sorted(vertex_labels))
    root = refine(_dense(vertex_labels), nbrs)

    best: list = [None, None]  # certificate, labeling
    autos: list[tuple[int, ...]] = []

    def leaf(colors: list[int]) -> None:
        cert = tuple(sorted(
            (min(colors[u], colors[v]), max(colors[u], colors[v]), lab) for u, v, lab in edges
        ))
        if best[0] is None or cert < best[0]:
            best[0], best[1] = cert, tuple(colors)
        elif cert == best[0]:
            inverse = [0] * n
            for v, c in enumerate(colors):
                inverse[c] = v
            perm = tuple(inverse[c] for c in best[1])
            if any(perm[i] != i for i in range(n)):
                autos.append(perm)

    def search(colors: list[int], fixed: tuple[int, ...]) -> None:
        cells: dict[int, list[int]] = {}
        for v, c in enumerate(colors):
            cells.setdefault(c, []).append(v)
        target = None
        for c in sorted(cells):
            if len(cells[c]) > 1:
                target = c
                break
        if target is None:
            leaf(colors)
            return
        explored: list[int] = []
        for v in cells[target]:
            if explored and _same_orbit(v, explored, fixed, autos, n):
                continue
            explored.append(v)
            split = [2 * c + 1 for c in colors]
            split[v] = 2 * target
            search(refine(_dense(split), nbrs), fixed + (v,))

    search(root, ())
    return Canonical((label_seq, best[0]), best[1], tuple(autos))


def _same_orbit(v: int, explored: list[int], fixed: tuple[int, ...], autos, n: int) -> bool:
    """Is ``v`` mapped onto an explored vertex by automorphisms fixing ``fixed``?"""
    usable = [a for a in autos if all(a[p] == p for p in fixed)]
    if not usable:
        return False
    parent = list(range(n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a in usable:
        for i in range(n):
            ri, rj = find(i), find(a[i])
            if ri != rj:
                parent[ri] = rj
    root = find(v)
    return any(find(u) == root for u in explored)


def _atom_label(g: MolecularGraph, i: int) -> tuple:
    a = g.atoms[i]
    return (a.element, a.charge, a.hydrogens, a.aromatic)


def canonical_form(g: MolecularGraph) -> Canonical:
    """Canonical labelling of a molecule (atoms labelled by element, charge, H, aromaticity)."""
    labels = [_atom_label(g, i) for i in range(g.n_atoms)]
    edges = [(b.begin, b.end, b.order + (8 if b.aromatic else 0)) for b in g.bonds]
    return canonical_labeling(labels, edges)


def canonical_key(g: MolecularGraph) -> str:
    """Compact string equal for two molecules exactly when they are isomorphic."""
    cert = canonical_form(g).certificate
    atoms = ".".join(
        f"{el}{chg:+d}h{h}{'a' if ar else ''}" for el, chg, h, ar in cert[0]
    )
    bonds = ",".join(f"{u}-{v}:{lab}" for u, v, lab in cert[1])
    return f"{atoms}|{bonds}"
