"""Assign integral bond orders to aromatic systems.

An aromatic atom takes part in exactly one double bond inside its aromatic
system when its valence leaves room for one; the set of such atoms must then
be covered by a perfect matching over aromatic bonds.  The matching is found
by a deterministic backtracking search that always branches on the atom with
the fewest remaining partners (lowest index first), so the same input always
yields the same Kekulé structure.
"""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import replace

from ..errors import KekulizationFailure
from .elements import neutral_valence
from .graph import MolecularGraph


def ring_bonds(n_atoms: int, pairs: Sequence[tuple[int, int]]) -> list[bool]:
    """Flag the bonds that lie on a cycle (i.e. are not bridges)."""
    adj: list[list[tuple[int, int]]] = [[] for _ in range(n_atoms)]
    for k, (a, b) in enumerate(pairs):
        adj[a].append((b, k))
        adj[b].append((a, k))
    disc = [-1] * n_atoms
    low = [0] * n_atoms
    in_ring = [True] * len(pairs)
    timer = 0
    for root in range(n_atoms):
        if disc[root] >= 0:
            continue
        disc[root] = low[root] = timer
        timer += 1
        stack = [(root, -1, iter(adj[root]))]
        while stack:
            v, via, it = stack[-1]
            advanced = False
            for w, k in it:
                if k == via:
                    continue
                if disc[w] < 0:
                    disc[w] = low[w] = timer
                    timer += 1
                    stack.append((w, k, iter(adj[w])))
                    advanced = True
                    break
                low[v] = min(low[v], disc[w])
            if advanced:
                continue
            stack.pop()
            if stack:
                parent = stack[-1][0]
                low[parent] = min(low[parent], low[v])
                if low[v] > disc[parent]:
                    in_ring[via] = False
    return in_ring


def _perfect_matching(
    nodes: Sequence[int], options: dict[int, list[tuple[int, int]]]
) -> dict[int, int] | None:
    """Backtracking perfect matching; returns atom -> bond index or None."""
    mate: dict[int, int] = {}

    def solve() -> bool:
        best, best_opts = -1, None
        for v in nodes:
            if v in mate:
                continue
            opts = [(u, k) for u, k in options[v] if u not in mate]
            if not opts:
                return False
            if best_opts is None or len(opts) < len(best_opts):
                best, best_opts = v, opts
                if len(opts) == 1:
                    break
        if best_opts is None:
            return True
        for u, k in best_opts:
            mate[best] = mate[u] = k
            if solve():
                return True
            del mate[best], mate[u]
        return False

    return mate if solve() else None


def kekulize(g: MolecularGraph, pinned: Iterable[int] = ()) -> MolecularGraph:
    """Replace the orders of aromatic bonds with a Kekulé assignment.

    Atom ``hydrogens`` fields are taken as fixed explicit counts (zero for
    atoms whose hydrogens are still to be inferred).  Aromatic bonds listed in
    ``pinned`` keep their current order; all other aromatic bonds are reset.

    Args:
        g: Graph whose aromatic bonds carry ``aromatic=True``.
        pinned: Indices of aromatic bonds whose order is already decided.

    Returns:
        A graph with the same atoms and aromatic flags and integral orders.

    Raises:
        KekulizationFailure: if the aromatic atoms admit no perfect matching,
            or an aromatic atom has no aromatic bond.
    """
    pinned = set(pinned)
    aromatic_bonds = [k for k, b in enumerate(g.bonds) if b.aromatic]
    aromatic_atoms = [i for i, a in enumerate(g.atoms) if a.aromatic]
    if not aromatic_atoms and not aromatic_bonds:
        return g

    arom_count = [0] * g.n_atoms
    fixed_sum = [0] * g.n_atoms
    pinned_double = [False] * g.n_atoms
    for k, bond in enumerate(g.bonds):
        for atom in (bond.begin, bond.end):
            if bond.aromatic and k not in pinned:
                arom_count[atom] += 1
            else:
                fixed_sum[atom] += bond.order
                if bond.aromatic and bond.order == 2:
                    pinned_double[atom] = True

    for i in aromatic_atoms:
        if arom_count[i] == 0 and not any(g.bonds[k].aromatic for k in g.incident[i]):
            raise KekulizationFailure(f"aromatic atom {i} is not in an aromatic ring")

    needs_double = []
    for i in aromatic_atoms:
        atom = g.atoms[i]
        if pinned_double[i] or arom_count[i] == 0:
            continue
        room = neutral_valence(atom.element, atom.charge) - atom.hydrogens - fixed_sum[i] - arom_count[i]
        if room >= 1:
            needs_double.append(i)

    wanted = set(needs_double)
    options: dict[int, list[tuple[int, int]]] = {i: [] for i in needs_double}
    for k in aromatic_bonds:
        if k in pinned:
            continue
        a, b = g.bonds[k].begin, g.bonds[k].end
        if a in wanted and b in wanted:
            options[a].append((b, k))
            options[b].append((a, k))

    mate = _perfect_matching(needs_double, options)
    if mate is None:
        raise KekulizationFailure("no Kekulé structure satisfies the aromatic valences")
    doubles = set(mate.values())
    bonds = []
    for k, bond in enumerate(g.bonds):
        if bond.aromatic and k not in pinned:
            bond = replace(bond, order=2 if k in doubles else 1)
        bonds.append(bond)
    return MolecularGraph(g.atoms, tuple(bonds), g.name)
