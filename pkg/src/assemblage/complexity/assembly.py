"""Assembly index by branch and bound over duplicate-factoring pathways.

A search state is a set of disjoint connected bond sets ("fragments") that
still have to be built, together with the number of joins already committed.
Factoring a duplicate pair (two disjoint isomorphic occurrences, each inside
a fragment) removes both occurrences, keeps one of them as a new fragment and
splits the remainders into their connected pieces; it saves ``size - 1``
joins compared with building the second copy bond by bond.

Two factorings of different classes commute, so the search only applies
classes in a fixed order (larger first) and carries a class cursor.  States
are memoised on their exact fragment sets.  The lower bound at a state is the
number of joins already fixed plus the shortest addition sequence over the
fragment sizes, plus one extra join for every further non-isomorphic fragment
of an already counted size.
"""

from __future__ import annotations

import math
import time
from dataclasses import dataclass

from ..errors import EmptyGraph
from ..molgraph.graph import MolecularGraph
from ._bondgraph import BondGraph, iter_bits
from ._mining import BudgetExceeded, DuplicateClass, mine_duplicates
from .addition_chains import shortest_addition_chain, shortest_addition_sequence

ISO_MEMO = False
DEFAULT_BUDGET_S = 60.0
DEFAULT_MAX_NODES = 10_000_000


@dataclass(frozen=True)
class JoinStep:
    """One join of a witness pathway.

    Operands are ``("bond", k)`` for a single bond of the target or
    ``("step", i)`` for the object produced by an earlier step ``i``.  The
    operands are placed at ``left_mask`` and ``right_mask`` inside the target;
    ``result_mask`` is their union.
    """

    left: tuple[str, int]
    right: tuple[str, int]
    left_mask: int
    right_mask: int

    @property
    def result_mask(self) -> int:
        return self.left_mask | self.right_mask


@dataclass(frozen=True)
class AssemblyResult:
    """Outcome of an assembly-index query.

    Attributes:
        lower: Certified lower bound on the assembly index.
        upper: Length of the best pathway found.
        exact: True when ``lower == upper``.
        witness: Join steps of a pathway of length ``upper``, if requested.
        elapsed: Wall-clock seconds spent.
        nodes_explored: Search states visited.
    """

    lower: int
    upper: int
    exact: bool
    witness: tuple[JoinStep, ...] | None = None
    elapsed: float = 0.0
    nodes_explored: int = 0


def assembly_bounds(g: MolecularGraph) -> tuple[int, int]:
    """Closed-form bounds ``(ceil(log2 N_B), N_B - 1)`` without any search.

    Raises:
        EmptyGraph: for a molecule without bonds.
    """
    g.require_bonds()
    m = g.n_bonds
    return (math.ceil(math.log2(m)) if m > 1 else 0, m - 1)


def _max_saving(bonds: int, largest: int) -> int:
    """Most joins that disjoint removed copies of size <= ``largest`` can save."""
    if largest < 2:
        return 0
    full, rest = divmod(bonds, largest)
    return full * (largest - 1) + max(0, rest - 1)


def _has_disjoint_pair(masks: list[int]) -> bool:
    for i, x in enumerate(masks):
        for y in masks[i + 1 :]:
            if not x & y:
                return True
    return False


class _Search:
    """Depth-first branch and bound over factoring sequences.

    Occurrences of all duplicated classes are numbered class by class, so a
    set of occurrences is a Python int and the occurrences contained in a
    fragment are found with a few big-integer operations.
    """

    def __init__(self, bg: BondGraph, classes: list[DuplicateClass], deadline: float,
                 max_nodes: int, floor: int, iso_memo: bool | None = None):
        self.bg = bg
        self.deadline = deadline
        self.max_nodes = max_nodes
        self.floor = floor
        self.iso_memo = ISO_MEMO if iso_memo is None else iso_memo
        self.best = bg.m - 1
        self.best_path: list[tuple[int, int]] = []
        self.path: list[tuple[int, int]] = []
        self.nodes = 0
        self.out_of_budget = False
        self.sizes = [c.size for c in classes]
        self.occ: list[int] = []
        self.class_bits: list[int] = []
        for cls in classes:
            first = len(self.occ)
            self.occ.extend(cls.occurrences)
            self.class_bits.append(((1 << len(cls.occurrences)) - 1) << first)
        self.containing = [0] * bg.m
        for i, o in enumerate(self.occ):
            for k in iter_bits(o):
                self.containing[k] |= 1 << i
        self.live: dict[int, int] = {bg.full: (1 << len(self.occ)) - 1}
        self.memo: dict[tuple[int, ...], list[tuple[int, int]]] = {}

    def live_in(self, frag: int, parent: int) -> int:
        """Occurrences contained in ``frag``, a subset of fragment ``parent``."""
        live = self.live.get(frag)
        if live is None:
            drop = 0
            for k in iter_bits(parent & ~frag):
                drop |= self.containing[k]
            live = self.live[parent] & ~drop
            self.live[frag] = live
        return live

    def bound(self, frags: tuple[int, ...], cost: int, usable: int, largest: int) -> int:
        """Lower bound on the final pathway length below this state.

        ``usable`` holds the bonds covered by occurrences that can still be
        factored; fragments outside it can only be built bond by bond.
        """
        active_cost = 0
        sizes = []
        signatures: dict[int, set] = {}
        for f in frags:
            if not f & usable:
                continue
            n = f.bit_count()
            active_cost += n - 1
            sigs = signatures.get(n)
            if sigs is None:
                signatures[n] = {self.bg.type_signature(f)}
                sizes.append(n)
            else:
                sigs.add(self.bg.type_signature(f))
        extra = sum(len(s) - 1 for s in signatures.values())
        chain = cost - active_cost + shortest_addition_sequence(tuple(sorted(sizes))) + extra
        cap = cost - _max_saving(usable.bit_count(), largest)
        return max(chain, cap)

    def run(self) -> None:
        self.visit((self.bg.full,), self.bg.m - 1, list(range(len(self.sizes))))

    def visit(self, frags: tuple[int, ...], cost: int, candidates: list[int]) -> None:
        if self.best <= self.floor or self.out_of_budget:
            return
        self.nodes += 1
        if self.nodes >= self.max_nodes or (
            not self.nodes & 1023 and time.monotonic() > self.deadline
        ):
            self.out_of_budget = True
            return
        if cost < self.best:
            self.best = cost
            self.best_path = list(self.path)
        cursor = candidates[0] if candidates else len(self.sizes)
        key = tuple(sorted(self.bg.class_id(f) for f in frags)) if self.iso_memo else frags
        seen = self.memo.get(key)
        if seen is None:
            self.memo[key] = [(cursor, cost)]
        else:
            for old_cursor, old_cost in seen:
                if old_cursor <= cursor and old_cost <= cost:
                    return
            seen.append((cursor, cost))

        live = 0
        for f in frags:
            live |= self.live[f]
        matchable = []
        usable = 0
        for c in candidates:
            seg = live & self.class_bits[c]
            if not seg & (seg - 1):
                continue
            masks = [self.occ[i] for i in iter_bits(seg)]
            if not _has_disjoint_pair(masks):
                continue
            matchable.append((c, masks))
            for x in masks:
                usable |= x
        if not matchable:
            return
        if self.bound(frags, cost, usable, self.sizes[matchable[0][0]]) >= self.best:
            return

        order = [c for c, _ in matchable]
        bg = self.bg
        for pos, (c, masks) in enumerate(matchable):
            saving = self.sizes[c] - 1
            child_candidates = order[pos:]
            owner = {}
            for x in masks:
                for f in frags:
                    if not x & ~f:
                        owner[x] = f
                        break
            for i in range(len(masks)):
                a = masks[i]
                fa = owner[a]
                for j in range(i + 1, len(masks)):
                    b = masks[j]
                    if a & b:
                        continue
                    fb = owner[b]
                    rest = [x for x in frags if x != fa and x != fb]
                    if fa == fb:
                        pieces = [(p, fa) for p in bg.components(fa & ~a & ~b)]
                    else:
                        pieces = [(p, fa) for p in bg.components(fa & ~a)]
                        pieces += [(p, fb) for p in bg.components(fb & ~b)]
                    pieces.append((a, fa))
                    for piece, parent in pieces:
                        if piece & (piece - 1):
                            self.live_in(piece, parent)
                            rest.append(piece)
                    rest.sort()
                    self.path.append((a, b))
                    self.visit(tuple(rest), cost - saving, child_candidates)
                    self.path.pop()
                    if self.best <= self.floor or self.out_of_budget:
                        return


def _piece_order(bg: BondGraph, pieces: list[int]) -> list[int]:
    """Order pieces so each one touches the union of those before it."""
    pending = sorted(pieces)
    ordered = [pending.pop(0)]
    union = ordered[0]
    reach = bg.neighborhood(union) | union
    while pending:
        for i, p in enumerate(pending):
            if p & reach:
                ordered.append(pending.pop(i))
                union |= p
                reach = bg.neighborhood(union) | union
                break
        else:
            raise AssertionError("pieces do not form a connected whole")
    return ordered


def build_witness(bg: BondGraph, matches: list[tuple[int, int]]) -> list[JoinStep]:
    """Turn an ordered list of factorings into explicit join steps.

    Each fragment is either split by the first factoring that touches it or
    built bond by bond.  A removed copy reuses the object built for its
    kept twin, so that object is always produced first.
    """
    # decomposition tree: fragment -> (pieces, {removed copy: kept copy})
    split: dict[int, tuple[list[int], dict[int, int]]] = {}
    frags = {bg.full}
    for a, b in matches:
        fa = next(f for f in frags if not a & ~f)
        fb = next(f for f in frags if not b & ~f)
        frags -= {fa, fb}
        if fa == fb:
            rem = bg.components(fa & ~a & ~b)
            split[fa] = ([a, b] + rem, {b: a})
            new = rem
        else:
            ra, rb = bg.components(fa & ~a), bg.components(fb & ~b)
            if a != fa:
                split[fa] = ([a] + ra, {})
            split[fb] = ([b] + rb, {b: a})
            new = ra + rb
        frags |= set(new) | {a}

    steps: list[JoinStep] = []
    built: dict[int, tuple[str, int]] = {}

    def build(mask: int) -> tuple[str, int]:
        if mask in built:
            return built[mask]
        if not mask & (mask - 1):
            ref = ("bond", mask.bit_length() - 1)
            built[mask] = ref
            return ref
        if mask in split:
            pieces, copies = split[mask]
        else:
            pieces, copies = [1 << k for k in iter_bits(mask)], {}
        ordered = _piece_order(bg, pieces)
        refs = {}
        for p in ordered:
            refs[p] = build(copies[p]) if p in copies else build(p)
        acc_mask, acc_ref = ordered[0], refs[ordered[0]]
        for p in ordered[1:]:
            steps.append(JoinStep(acc_ref, refs[p], acc_mask, p))
            acc_mask |= p
            acc_ref = ("step", len(steps) - 1)
        built[mask] = acc_ref
        return acc_ref

    build(bg.full)
    return steps


def assembly_index(
    g: MolecularGraph,
    budget_s: float = DEFAULT_BUDGET_S,
    max_nodes: int = DEFAULT_MAX_NODES,
    witness: bool = False,
) -> AssemblyResult:
    """Exact assembly index with an anytime fallback to certified bounds.

    Args:
        g: Connected molecule with at least one bond.
        budget_s: Wall-clock budget in seconds for mining plus search.
        max_nodes: Cap on visited search states.
        witness: Also return an explicit shortest pathway.

    Raises:
        EmptyGraph: for a molecule without bonds.
    """
    start = time.monotonic()
    g.require_bonds()
    if not g.is_connected():
        raise EmptyGraph("assembly index needs a connected molecule; split fragments first")
    bg = BondGraph(g)
    m = bg.m
    floor = shortest_addition_chain(m)
    deadline = start + budget_s
    try:
        classes = mine_duplicates(bg, bg.bond_automorphisms(), deadline)
    except BudgetExceeded:
        classes = None
    if classes is None:
        result = AssemblyResult(floor, m - 1, floor == m - 1, None, time.monotonic() - start, 0)
        return result
    search = _Search(bg, classes, deadline, max_nodes, floor)
    search.run()
    exhausted = not search.out_of_budget or search.best <= floor
    lower = search.best if exhausted else floor
    steps = None
    if witness:
        steps = tuple(build_witness(bg, search.best_path))
    return AssemblyResult(
        lower,
        search.best,
        lower == search.best,
        steps,
        time.monotonic() - start,
        search.nodes,
    )


def replay_witness(g: MolecularGraph, steps: tuple[JoinStep, ...]) -> int:
    """Check a witness pathway and return the number of joins it uses.

    Every step must join two disjoint, touching placements whose operands are
    single bonds or earlier products isomorphic to the placement; the last
    product must be the whole bond graph.

    Raises:
        AssertionError: describing the first invalid step.
    """
    bg = BondGraph(g)
    if not steps:
        if bg.m != 1:
            raise AssertionError("empty pathway for a multi-bond molecule")
        return 0
    produced: list[int] = []

    def check(ref: tuple[str, int], mask: int, i: int) -> None:
        kind, idx = ref
        if kind == "bond":
            if mask != 1 << idx:
                raise AssertionError(f"step {i}: bond operand {idx} placed at {mask:#x}")
        elif kind == "step":
            if not 0 <= idx < i:
                raise AssertionError(f"step {i}: operand refers to future step {idx}")
            if bg.class_id(produced[idx]) != bg.class_id(mask):
                raise AssertionError(f"step {i}: placement is not isomorphic to step {idx}")
        else:
            raise AssertionError(f"step {i}: unknown operand kind {kind!r}")

    for i, step in enumerate(steps):
        check(step.left, step.left_mask, i)
        check(step.right, step.right_mask, i)
        if step.left_mask & step.right_mask:
            raise AssertionError(f"step {i}: operands overlap")
        if not bg.neighborhood(step.left_mask) & step.right_mask:
            raise AssertionError(f"step {i}: operands do not touch")
        produced.append(step.result_mask)
    if produced[-1] != bg.full:
        raise AssertionError("last step does not produce the target")
    return len(steps)
