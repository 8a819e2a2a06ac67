"""Monte-Carlo bond-cleavage stand-in for an energy-resolved spectrum predictor.

Each trial breaks every acyclic bond independently; ring bonds never break.
Every connected piece left over is one observed fragment, and a peak's
intensity is the fraction of trials that produced a fragment of that mass.

The cleavage probability is a logistic in energy anchored at zero,
``(L(E) - L(0)) / (1 - L(0))`` with ``L(E) = sigmoid(alpha * (E - beta * order))``,
so that stronger bonds need more energy and nothing breaks as the energy
vanishes.
"""

from __future__ import annotations

import math

import numpy as np

from ..errors import AssemblageError
from ..molgraph.elements import ATOMIC_MASS
from ..molgraph.graph import MolecularGraph
from ..molgraph.kekulize import ring_bonds
from .spectrum import Spectrum

DEFAULT_ALPHA = 0.08
DEFAULT_BETA = 12.0
DEFAULT_TRIALS = 500
MASS_DECIMALS = 4


def _sigmoid(x: float) -> float:
    return 1.0 / (1.0 + math.exp(-x))


def cleavage_probability(energy_ev: float, order: int, alpha: float = DEFAULT_ALPHA,
                         beta: float = DEFAULT_BETA) -> float:
    """Chance that one bond of the given order breaks in a single trial."""
    floor = _sigmoid(-alpha * beta * order)
    return (_sigmoid(alpha * (energy_ev - beta * order)) - floor) / (1.0 - floor)


def _atom_masses(g: MolecularGraph) -> np.ndarray:
    return np.array([ATOMIC_MASS[a.element] + a.hydrogens * ATOMIC_MASS["H"] for a in g.atoms])


def _fragment_labels(n_atoms: int, edges: list[tuple[int, int]], kept: np.ndarray) -> np.ndarray:
    """Component label per atom for every break pattern.

    ``kept[p, k]`` says whether edge ``k`` survives in pattern ``p``.  Labels
    are propagated as the minimum atom index until nothing changes.
    """
    labels = np.tile(np.arange(n_atoms), (kept.shape[0], 1))
    changed = True
    while changed:
        changed = False
        for k, (a, b) in enumerate(edges):
            rows = kept[:, k]
            low = np.minimum(labels[rows, a], labels[rows, b])
            if (low != labels[rows, a]).any() or (low != labels[rows, b]).any():
                labels[rows, a] = low
                labels[rows, b] = low
                changed = True
    return labels


def simulate_spectrum(
    g: MolecularGraph,
    energy_ev: float,
    seed: int,
    alpha: float = DEFAULT_ALPHA,
    beta: float = DEFAULT_BETA,
    trials: int = DEFAULT_TRIALS,
) -> Spectrum:
    """Simulated single-stage spectrum of a molecule at one energy.

    Args:
        g: Molecule; multi-fragment graphs are allowed.
        energy_ev: Energy in eV, strictly positive.
        seed: Seed for the trial generator; equal seeds give equal spectra.
        alpha: Logistic slope per eV.
        beta: eV of activation per unit of bond order.
        trials: Number of independent cleavage trials.
    """
    if not energy_ev > 0:
        raise AssemblageError(f"energy must be positive, got {energy_ev}")
    masses = _atom_masses(g)
    in_ring = ring_bonds(g.n_atoms, [b.pair for b in g.bonds])
    fixed = [b.pair for b, r in zip(g.bonds, in_ring) if r]
    breakable = [b for b, r in zip(g.bonds, in_ring) if not r]
    probs = np.array([cleavage_probability(energy_ev, b.order, alpha, beta) for b in breakable])
    rng = np.random.default_rng(seed)
    broken = rng.random((trials, len(breakable))) < probs
    patterns, counts = np.unique(broken, axis=0, return_counts=True)
    edges = fixed + [b.pair for b in breakable]
    kept = np.hstack([np.ones((len(patterns), len(fixed)), dtype=bool), ~patterns])
    labels = _fragment_labels(g.n_atoms, edges, kept)
    totals = np.zeros((len(patterns), g.n_atoms))
    rows = np.arange(len(patterns))
    for a in range(g.n_atoms):  # atom order keeps the float sums reproducible
        totals[rows, labels[:, a]] += masses[a]
    present = np.zeros_like(totals, dtype=bool)
    present[rows[:, None], labels] = True
    frag = np.round(totals[present], MASS_DECIMALS)
    weight = np.broadcast_to(counts[:, None], totals.shape)[present]
    mz, inverse = np.unique(frag, return_inverse=True)
    tally = dict(zip(mz.tolist(), np.bincount(inverse, weights=weight).astype(np.int64).tolist()))
    pairs = [(m, c / trials) for m, c in sorted(tally.items())]
    return Spectrum.from_pairs(
        pairs, ionization="EI", energy_ev=float(energy_ev), stage=1,
        source_name=g.name or "",
    )
