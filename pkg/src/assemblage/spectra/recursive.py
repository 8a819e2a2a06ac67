"""Assembly estimate from a fragmentation tree with a shared reuse pool.

A node's estimate starts from the mass bound ``ceil(log2(mass / block))``
and is lowered by splitting the node into two fragments whose masses add up
to it: two observed children, or one child plus the inferred missing
complement.  Building a fragment whose mass is already in the pool is free;
otherwise it costs its own estimate and its mass joins the pool.

Sub-results are kept as every non-dominated ``(pool, cost)`` outcome rather
than a single greedy choice, so the root value is the exact minimum over all
combinations of decompositions.  That makes the estimate monotone: adding a
fragment only adds options.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from functools import cache

from ..errors import AssemblageError, NonPositiveMass

DEFAULT_TOLERANCE = 0.01


@dataclass(frozen=True)
class FragmentNode:
    """One ion of a fragmentation tree.

    Attributes:
        mass: Fragment mass in u, strictly positive.
        intensity: Observed intensity, informational only.
        children: Fragments observed from this ion at the next stage.
    """

    mass: float
    intensity: float = 1.0
    children: tuple[FragmentNode, ...] = field(default=())

    def __post_init__(self) -> None:
        if not self.mass > 0:
            raise NonPositiveMass(f"fragment mass must be positive, got {self.mass}")
        object.__setattr__(self, "children", tuple(self.children))
        for c in self.children:
            if not c.mass < self.mass:
                raise AssemblageError(
                    f"child mass {c.mass} is not below its parent's {self.mass}"
                )

    def with_child(self, path: tuple[int, ...], child: FragmentNode) -> FragmentNode:
        """Copy of the tree with ``child`` appended under the node at ``path``."""
        if not path:
            return FragmentNode(self.mass, self.intensity, self.children + (child,))
        i, rest = path[0], path[1:]
        kids = list(self.children)
        kids[i] = kids[i].with_child(rest, child)
        return FragmentNode(self.mass, self.intensity, tuple(kids))

    def iter_paths(self, prefix: tuple[int, ...] = ()):
        """Yield the index path of every node, root first."""
        yield prefix
        for i, c in enumerate(self.children):
            yield from c.iter_paths(prefix + (i,))

    def to_record(self) -> dict:
        return {
            "mass": self.mass,
            "intensity": self.intensity,
            "children": [c.to_record() for c in self.children],
        }

    @classmethod
    def from_record(cls, rec: dict) -> FragmentNode:
        return cls(
            float(rec["mass"]),
            float(rec.get("intensity", 1.0)),
            tuple(cls.from_record(c) for c in rec.get("children", ())),
        )


def tree_to_json(root: FragmentNode) -> str:
    return json.dumps(root.to_record(), sort_keys=True)


def tree_from_json(text: str) -> FragmentNode:
    return FragmentNode.from_record(json.loads(text))


def first_order_bound(mass: float, block_mass: float) -> int:
    """``ceil(log2(mass / block_mass))``, and 0 at or below one block."""
    if not mass > 0:
        raise NonPositiveMass(f"fragment mass must be positive, got {mass}")
    ratio = mass / block_mass
    return max(0, math.ceil(math.log2(ratio) - 1e-12)) if ratio > 1 else 0


Outcomes = dict[frozenset, int]


def _add(out: Outcomes, pool: frozenset, cost: int) -> None:
    old = out.get(pool)
    if old is None or cost < old:
        out[pool] = cost


def _prune(out: Outcomes) -> Outcomes:
    """Drop outcomes whose pool is a subset of a no-costlier outcome's pool."""
    items = sorted(out.items(), key=lambda kv: (kv[1], -len(kv[0])))
    kept: list[tuple[frozenset, int]] = []
    for pool, cost in items:
        if not any(c <= cost and pool <= p for p, c in kept):
            kept.append((pool, cost))
    return dict(kept)


def recursive_ma(root: FragmentNode, block_mass: float, tau: float = DEFAULT_TOLERANCE) -> int:
    """Estimated assembly index of the root ion.

    Args:
        root: Fragmentation tree rooted at the parent ion.
        block_mass: Mass of one basic building block, in u.
        tau: Mass tolerance in u for sums and pool matches.

    Raises:
        NonPositiveMass: for a non-positive ``block_mass``.
    """
    if not block_mass > 0:
        raise NonPositiveMass(f"block mass must be positive, got {block_mass}")
    if tau < 0:
        raise AssemblageError(f"tolerance must be >= 0, got {tau}")
    leaf_limit = block_mass * (1.0 + tau / block_mass)

    def in_pool(mass: float, pool: frozenset) -> bool:
        return any(abs(q - mass) <= tau for q in pool)

    @cache
    def estimate(node: FragmentNode, pool: frozenset) -> tuple[tuple[frozenset, int], ...]:
        if node.mass <= leaf_limit:
            return ((pool, 0),)
        out: Outcomes = {pool: first_order_bound(node.mass, block_mass)}
        for first, second in _decompositions(node, tau):
            for a, b in ((first, second), (second, first)):
                for p1, c1 in reuse(a, pool):
                    for p2, c2 in reuse(b, p1):
                        _add(out, p2, c1 + c2 + 1)
        return tuple(_prune(out).items())

    def reuse(node: FragmentNode, pool: frozenset):
        if in_pool(node.mass, pool):
            return ((pool, 0),)
        return tuple((p | {node.mass}, c) for p, c in estimate(node, pool))

    return min(c for _, c in estimate(root, frozenset()))


def _decompositions(node: FragmentNode, tau: float) -> list[tuple[FragmentNode, FragmentNode]]:
    """Observed child pairs summing to the node, then child plus one inferred complement."""
    kids = node.children
    pairs = []
    for i in range(len(kids)):
        for j in range(i + 1, len(kids)):
            if abs(kids[i].mass + kids[j].mass - node.mass) <= tau:
                pairs.append((kids[i], kids[j]))
    for c in kids:
        rest = node.mass - c.mass
        if rest > 0:
            pairs.append((c, FragmentNode(rest, 0.0)))
    return pairs
