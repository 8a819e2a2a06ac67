"""Seeded generator of small organic molecules for desk-scale benchmarks.

Two families are mixed so that molecules of equal size differ in how much
internal repetition they have:

* random molecules grown atom by atom from a carbon start or a benzene core,
  with heteroatoms, multiple bonds and occasional ring closures;
* oligomers that repeat one short motif a few times between end groups.
"""

from __future__ import annotations

import numpy as np

from .errors import AssemblageError
from .molgraph.elements import DEFAULT_VALENCES
from .molgraph.graph import Atom, Bond, MolecularGraph
from .molgraph.smiles import parse_smiles

ELEMENTS = ("C", "N", "O", "S", "Cl")
ELEMENT_WEIGHTS = (0.64, 0.13, 0.15, 0.04, 0.04)

MOTIFS = (
    "CC", "CO", "CN", "C(=O)N", "C(=O)O", "C(C)C", "OCC", "C(Cl)C", "C=C",
    "C(N)C", "CS", "C(=O)C", "c1ccc(cc1)", "C1CCC(CC1)", "NC(=O)C",
)
END_GROUPS = ("", "C", "O", "N", "Cl", "C(=O)O", "CC")

MIN_BONDS = 2
MAX_BONDS = 18


def _valence(element: str) -> int:
    return DEFAULT_VALENCES[element][0]


def _random_molecule(rng: np.random.Generator, n_atoms: int) -> MolecularGraph:
    elements: list[str] = []
    aromatic: list[bool] = []
    bonds: dict[tuple[int, int], tuple[int, bool]] = {}
    used: list[int] = []
    if rng.random() < 0.25:
        for i in range(6):
            elements.append("C")
            aromatic.append(True)
            used.append(3)
            bonds[(i, (i + 1) % 6) if i < 5 else (0, 5)] = (2 if i % 2 == 0 else 1, True)
    else:
        elements.append("C")
        aromatic.append(False)
        used.append(0)
    while len(elements) < n_atoms:
        el = str(rng.choice(ELEMENTS, p=ELEMENT_WEIGHTS))
        free = [i for i in range(len(elements)) if used[i] < _valence(elements[i])]
        if not free:
            break
        host = int(rng.choice(free))
        room = min(_valence(el), _valence(elements[host]) - used[host])
        order = 1
        roll = rng.random()
        if room >= 3 and roll < 0.03:
            order = 3
        elif room >= 2 and roll < 0.18:
            order = 2
        new = len(elements)
        elements.append(el)
        aromatic.append(False)
        used.append(order)
        used[host] += order
        bonds[(host, new)] = (order, False)
    if rng.random() < 0.3:
        _close_ring(rng, elements, used, bonds)
    atoms = tuple(
        Atom(el, 0, _valence(el) - u, ar) for el, u, ar in zip(elements, used, aromatic)
    )
    return MolecularGraph(atoms, tuple(Bond(a, b, o, ar) for (a, b), (o, ar) in bonds.items()))


def _close_ring(rng, elements, used, bonds) -> None:
    """Join two atoms four or five bonds apart by a single bond, if any pair has room."""
    n = len(elements)
    adj: list[list[int]] = [[] for _ in range(n)]
    for a, b in bonds:
        adj[a].append(b)
        adj[b].append(a)
    candidates = []
    for s in range(n):
        if used[s] >= _valence(elements[s]):
            continue
        dist = {s: 0}
        frontier = [s]
        while frontier:
            nxt = []
            for u in frontier:
                for v in adj[u]:
                    if v not in dist:
                        dist[v] = dist[u] + 1
                        nxt.append(v)
            frontier = nxt
        for t, d in dist.items():
            if t > s and d in (4, 5) and used[t] < _valence(elements[t]):
                candidates.append((s, t))
    if candidates:
        s, t = candidates[int(rng.integers(len(candidates)))]
        bonds[(s, t)] = (1, False)
        used[s] += 1
        used[t] += 1


def _oligomer(rng: np.random.Generator) -> MolecularGraph:
    motif = MOTIFS[int(rng.integers(len(MOTIFS)))]
    repeats = int(rng.integers(2, 7))
    head = END_GROUPS[int(rng.integers(len(END_GROUPS)))]
    tail = END_GROUPS[int(rng.integers(len(END_GROUPS)))]
    return parse_smiles(head + motif * repeats + tail)


def generate_corpus(n: int, seed: int, oligomer_fraction: float = 0.35) -> list[MolecularGraph]:
    """``n`` distinct connected molecules with 2 to 18 bonds, named ``syn00000`` onwards.

    Draws that fall outside the size range, fail validation or repeat an
    earlier molecule are discarded and redrawn.
    """
    from .molgraph.canon import canonical_key

    rng = np.random.default_rng(seed)
    out: list[MolecularGraph] = []
    seen: set[str] = set()
    attempts = 0
    while len(out) < n:
        attempts += 1
        if attempts > 50 * n + 1000:
            raise AssemblageError(f"could not draw {n} distinct molecules")
        try:
            if rng.random() < oligomer_fraction:
                g = _oligomer(rng)
            else:
                g = _random_molecule(rng, int(rng.integers(3, 16)))
        except AssemblageError:
            continue
        if not MIN_BONDS <= g.n_bonds <= MAX_BONDS or not g.is_connected():
            continue
        key = canonical_key(g)
        if key in seen:
            continue
        seen.add(key)
        out.append(MolecularGraph(g.atoms, g.bonds, f"syn{len(out):05d}"))
    return out
