"""Shortest addition chains and addition sequences.

An addition sequence for a set of targets is a chain ``1 = c0 < c1 < ... < cr``
in which every element is the sum of two (not necessarily distinct) earlier
elements and every target appears.  Its minimal length ``r`` lower-bounds the
number of joins needed to build objects of those sizes from single bonds.
"""

from __future__ import annotations

from functools import lru_cache


def _search(chain: list[int], targets: frozenset[int], top: int, limit: int) -> bool:
    depth = len(chain) - 1
    last = chain[-1]
    missing = sum(1 for t in targets if t > last)
    remaining = limit - depth
    if missing == 0:
        return True
    if missing > remaining or last << remaining < top:
        return False
    # the next target that must still be produced bounds the useful sums
    sums = set()
    for i in range(len(chain)):
        ci = chain[i]
        for j in range(i, len(chain)):
            s = ci + chain[j]
            if last < s <= top:
                sums.add(s)
    pending = [t for t in targets if last < t]
    nxt = min(pending)
    for s in sorted(sums, reverse=True):
        if s > nxt and nxt not in chain:
            # skipping a target is never allowed: values only grow
            continue
        chain.append(s)
        if _search(chain, targets, top, limit):
            chain.pop()
            return True
        chain.pop()
    return False


@lru_cache(maxsize=65536)
def shortest_addition_sequence(targets: tuple[int, ...]) -> int:
    """Length of the shortest addition sequence containing every target.

    Args:
        targets: Positive integers (any order, duplicates ignored).

    Returns:
        Number of additions; 0 when the only target is 1 or the input is empty.
    """
    wanted = frozenset(t for t in targets if t > 1)
    if not wanted:
        return 0
    top = max(wanted)
    limit = max((top - 1).bit_length(), len(wanted))
    while not _search([1], wanted, top, limit):
        limit += 1
    return limit


def shortest_addition_chain(n: int) -> int:
    """l(n): minimal number of additions to reach ``n`` from 1."""
    if n < 1:
        raise ValueError("addition chains are defined for n >= 1")
    return shortest_addition_sequence((n,))
