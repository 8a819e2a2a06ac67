"""Enumeration of duplicated connected substructures.

A class of isomorphic connected bond sets is *duplicated* when two of its
occurrences are bond-disjoint; only such classes can ever save a join.  Any
connected subset of a duplicated set is itself duplicated, so the classes
are mined level by level, extending only occurrences of duplicated classes.
"""

from __future__ import annotations

import time
from collections import defaultdict
from dataclasses import dataclass

from ._bondgraph import BondGraph, iter_bits, permute_mask


class BudgetExceeded(Exception):
    pass


@dataclass(frozen=True)
class DuplicateClass:
    """Isomorphism class of bond sets with at least two disjoint occurrences.

    Attributes:
        size: Number of bonds in each occurrence.
        cid: Class identifier from the bond graph's certificate table.
        occurrences: All occurrences (bond masks) in ascending order.
    """

    size: int
    cid: int
    occurrences: tuple[int, ...]


def _has_disjoint_pair(masks: list[int]) -> bool:
    for i, x in enumerate(masks):
        for y in masks[i + 1 :]:
            if not x & y:
                return True
    return False


def mine_duplicates(
    bg: BondGraph,
    automorphisms: list[tuple[int, ...]] = (),
    deadline: float | None = None,
) -> list[DuplicateClass]:
    """All duplicated classes with at least two bonds, largest first.

    Args:
        bg: Bond graph of the molecule.
        automorphisms: Bond permutations of the molecule; occurrences in one
            orbit share a class, so only one representative is canonicalised.
        deadline: ``time.monotonic()`` value after which mining aborts.

    Raises:
        BudgetExceeded: when the deadline passes.
    """
    by_type: dict[int, list[int]] = defaultdict(list)
    for k, t in enumerate(bg.bond_type):
        by_type[t].append(1 << k)
    level = [occ for occ in by_type.values() if len(occ) >= 2]
    found: list[DuplicateClass] = []
    size = 1
    while level and 2 * (size + 1) <= bg.m:
        if deadline is not None and time.monotonic() > deadline:
            raise BudgetExceeded
        candidates: set[int] = set()
        for occs in level:
            for x in occs:
                for k in iter_bits(bg.neighborhood(x)):
                    candidates.add(x | (1 << k))
        size += 1
        by_signature: dict[tuple, list[int]] = defaultdict(list)
        for x in candidates:
            by_signature[bg.type_signature(x)].append(x)
        by_class: dict[int, list[int]] = defaultdict(list)
        for group in by_signature.values():
            if len(group) < 2 or not _has_disjoint_pair(group):
                continue
            for x in group:
                cid = bg._certs.get(x)
                if cid is None:
                    cid = bg.class_id(x)
                    for perm in automorphisms:
                        bg.assign_class(permute_mask(x, perm), cid)
                by_class[cid].append(x)
        level = []
        for cid, occs in by_class.items():
            occs.sort()
            if _has_disjoint_pair(occs):
                level.append(occs)
                found.append(DuplicateClass(size, cid, tuple(occs)))
    found.sort(key=lambda c: (-c.size, c.cid))
    return found
