"""SMILES reading and writing for the organic subset.

Supported: organic-subset atoms (B C N O P S F Cl Br I) and their aromatic
lowercase forms, bracket atoms with explicit H and charge, ring closures 0-99
(``%nn``), branches and the bond symbols ``- = # :``.  Stereo marks (``@``,
``/``, ``\\``) are accepted and dropped.  Isotopes, wildcards, quadruple bonds
and atom classes raise :class:`UnsupportedFeature`.

An explicit ``-`` or ``=`` between two ring atoms that are both aromatic pins
that bond's Kekulé order while keeping it aromatic; the writer uses this so a
graph survives a write/read round trip with its exact Kekulé assignment.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from ..errors import UnparsableSmiles, UnsupportedFeature
from .elements import AROMATIC_SUBSET, ORGANIC_SUBSET, implicit_hydrogens
from .graph import Atom, Bond, MolecularGraph
from .kekulize import kekulize, ring_bonds

_BRACKET = re.compile(
    r"^(?P<isotope>\d+)?"
    r"(?P<symbol>se|as|[bcnops]|[A-Z][a-z]?|\*)"
    r"(?P<chiral>@@?|@TH[12]|@AL[12]|@SP[123]|@TB\d\d?|@OH\d\d?)?"
    r"(?P<hcount>H\d?)?"
    r"(?P<charge>\+\+?|--?|[+-]\d+)?"
    r"(?P<klass>:\d+)?$"
)
_BOND_SYMBOLS = {"-": 1, "=": 2, "#": 3, ":": None, "/": 1, "\\": 1}


@dataclass
class _ProtoAtom:
    element: str
    aromatic: bool
    charge: int = 0
    hydrogens: int | None = None  # None -> implicit, filled from valence


@dataclass
class _ProtoBond:
    begin: int
    end: int
    symbol: str | None


def _parse_bracket(body: str) -> _ProtoAtom:
    m = _BRACKET.match(body)
    if not m:
        raise UnparsableSmiles(f"bad bracket atom [{body}]")
    if m["isotope"]:
        raise UnsupportedFeature(f"isotopes are not supported: [{body}]")
    if m["klass"]:
        raise UnsupportedFeature(f"atom classes are not supported: [{body}]")
    symbol = m["symbol"]
    if symbol == "*":
        raise UnsupportedFeature("wildcard atoms are not supported")
    aromatic = symbol.islower()
    element = symbol.capitalize() if aromatic else symbol
    hcount = m["hcount"]
    hydrogens = 0 if not hcount else (1 if len(hcount) == 1 else int(hcount[1:]))
    charge_text = m["charge"] or ""
    if charge_text in ("+", "-"):
        charge = 1 if charge_text == "+" else -1
    elif charge_text in ("++", "--"):
        charge = 2 if charge_text == "++" else -2
    elif charge_text:
        charge = int(charge_text)
    else:
        charge = 0
    return _ProtoAtom(element, aromatic, charge, hydrogens)


def _tokenize(text: str):
    i, n = 0, len(text)
    while i < n:
        ch = text[i]
        if ch == "[":
            j = text.find("]", i)
            if j < 0:
                raise UnparsableSmiles(f"unclosed bracket at position {i}")
            yield "atom", _parse_bracket(text[i + 1 : j])
            i = j + 1
        elif text.startswith(("Cl", "Br"), i):
            yield "atom", _ProtoAtom(text[i : i + 2], False)
            i += 2
        elif ch in ORGANIC_SUBSET:
            yield "atom", _ProtoAtom(ch, False)
            i += 1
        elif ch in AROMATIC_SUBSET:
            yield "atom", _ProtoAtom(AROMATIC_SUBSET[ch], True)
            i += 1
        elif ch in _BOND_SYMBOLS:
            yield "bond", ch
            i += 1
        elif ch.isdigit():
            yield "ring", int(ch)
            i += 1
        elif ch == "%":
            if i + 2 >= n or not text[i + 1 : i + 3].isdigit():
                raise UnparsableSmiles(f"bad %nn ring closure at position {i}")
            yield "ring", int(text[i + 1 : i + 3])
            i += 3
        elif ch in "().":
            yield ch, None
            i += 1
        elif ch == "*":
            raise UnsupportedFeature("wildcard atoms are not supported")
        elif ch == "$":
            raise UnsupportedFeature("quadruple bonds are not supported")
        else:
            raise UnparsableSmiles(f"unexpected character {ch!r} at position {i}")


def _read(text: str) -> tuple[list[_ProtoAtom], list[_ProtoBond]]:
    atoms: list[_ProtoAtom] = []
    bonds: list[_ProtoBond] = []
    pairs: set[tuple[int, int]] = set()
    prev: int | None = None
    pending: str | None = None
    branches: list[int | None] = []
    rings: dict[int, tuple[int, str | None]] = {}

    def connect(a: int, b: int, symbol: str | None) -> None:
        key = (min(a, b), max(a, b))
        if a == b or key in pairs:
            raise UnparsableSmiles(f"duplicate or self bond between atoms {a} and {b}")
        pairs.add(key)
        bonds.append(_ProtoBond(a, b, symbol))

    for kind, value in _tokenize(text):
        if kind == "atom":
            atoms.append(value)
            idx = len(atoms) - 1
            if prev is not None:
                connect(prev, idx, pending)
            elif pending is not None:
                raise UnparsableSmiles("bond symbol without a preceding atom")
            prev, pending = idx, None
        elif kind == "bond":
            if pending is not None or prev is None:
                raise UnparsableSmiles(f"misplaced bond symbol {value!r}")
            pending = value
        elif kind == "ring":
            if prev is None:
                raise UnparsableSmiles("ring closure before any atom")
            if value in rings:
                other, symbol = rings.pop(value)
                if symbol and pending and symbol != pending:
                    raise UnparsableSmiles(f"conflicting bond symbols on ring closure {value}")
                connect(other, prev, symbol or pending)
            else:
                rings[value] = (prev, pending)
            pending = None
        elif kind == "(":
            if prev is None:
                raise UnparsableSmiles("branch before any atom")
            branches.append(prev)
        elif kind == ")":
            if not branches or pending is not None:
                raise UnparsableSmiles("unbalanced or empty branch")
            prev = branches.pop()
        elif kind == ".":
            if branches or pending is not None:
                raise UnparsableSmiles("dot inside a branch or after a bond")
            prev = None
    if branches:
        raise UnparsableSmiles("unclosed branch")
    if rings:
        raise UnparsableSmiles(f"unclosed ring closure(s) {sorted(rings)}")
    if pending is not None:
        raise UnparsableSmiles("dangling bond symbol")
    if not atoms:
        raise UnparsableSmiles("no atoms")
    return atoms, bonds


def _build(atoms: list[_ProtoAtom], bonds: list[_ProtoBond], name: str | None) -> MolecularGraph:
    n = len(atoms)
    pairs = [(b.begin, b.end) for b in bonds]
    in_ring = ring_bonds(n, pairs)
    graph_bonds = []
    for k, b in enumerate(bonds):
        both_aromatic = atoms[b.begin].aromatic and atoms[b.end].aromatic
        if b.symbol is None or b.symbol == ":":
            aromatic = both_aromatic and in_ring[k]
            if b.symbol == ":" and not aromatic:
                raise UnparsableSmiles(f"aromatic bond symbol outside an aromatic ring (bond {k})")
            # order 0 marks an aromatic bond that still needs a Kekulé order
            graph_bonds.append(Bond(b.begin, b.end, 1, aromatic))
        else:
            order = _BOND_SYMBOLS[b.symbol]
            aromatic = both_aromatic and in_ring[k] and b.symbol in "-="
            graph_bonds.append(Bond(b.begin, b.end, order, aromatic))
    pinned = {
        k
        for k, b in enumerate(bonds)
        if graph_bonds[k].aromatic and b.symbol in ("-", "=")
    }
    proto = MolecularGraph(
        tuple(Atom(a.element, a.charge, a.hydrogens or 0, a.aromatic) for a in atoms),
        tuple(graph_bonds),
        name,
    )
    kek = kekulize(proto, pinned=pinned)
    final_atoms = []
    for i, a in enumerate(atoms):
        if a.hydrogens is None:
            h = implicit_hydrogens(a.element, kek.bond_order_sum(i))
        else:
            h = a.hydrogens
        final_atoms.append(Atom(a.element, a.charge, h, a.aromatic))
    return MolecularGraph(tuple(final_atoms), kek.bonds, name)


def parse_smiles(text: str, name: str | None = None, allow_fragments: bool = False) -> MolecularGraph:
    """Parse a SMILES string into a kekulized heavy-atom graph.

    Args:
        text: SMILES in the supported subset.
        name: Optional label stored on the graph.
        allow_fragments: Accept dot-separated multi-component input.

    Raises:
        UnparsableSmiles: on syntax errors or empty input.
        UnsupportedFeature: for isotopes, wildcards and dot-disconnected input
            (unless ``allow_fragments``).
        KekulizationFailure: when aromatic atoms admit no Kekulé structure.
    """
    if not isinstance(text, str) or not text.strip():
        raise UnparsableSmiles("empty SMILES")
    text = text.strip()
    if not text.isascii():
        raise UnparsableSmiles("SMILES must be ASCII")
    if "." in text and not allow_fragments:
        raise UnsupportedFeature("multi-fragment SMILES; use split_smiles()")
    atoms, bonds = _read(text)
    return _build(atoms, bonds, name)


def split_smiles(text: str, name: str | None = None) -> list[MolecularGraph]:
    """Parse dot-separated input and return one graph per connected component."""
    return parse_smiles(text, name, allow_fragments=True).split()


def _atom_token(g: MolecularGraph, i: int) -> str:
    atom = g.atoms[i]
    symbol = atom.element.lower() if atom.aromatic else atom.element
    plain = (
        atom.charge == 0
        and atom.element in ORGANIC_SUBSET
        and (not atom.aromatic or atom.element.lower() in AROMATIC_SUBSET)
        and not (atom.aromatic and atom.element != "C" and atom.hydrogens)
        and implicit_hydrogens(atom.element, g.bond_order_sum(i)) == atom.hydrogens
    )
    if plain:
        return symbol
    text = "[" + symbol
    if atom.hydrogens:
        text += "H" if atom.hydrogens == 1 else f"H{atom.hydrogens}"
    if atom.charge:
        sign = "+" if atom.charge > 0 else "-"
        text += sign if abs(atom.charge) == 1 else f"{sign}{abs(atom.charge)}"
    return text + "]"


def _bond_token(g: MolecularGraph, k: int) -> str:
    bond = g.bonds[k]
    if bond.order == 2:
        return "="
    if bond.order == 3:
        return "#"
    both_aromatic = g.atoms[bond.begin].aromatic and g.atoms[bond.end].aromatic
    return "-" if both_aromatic else ""


def to_smiles(g: MolecularGraph) -> str:
    """Write a SMILES string that reparses to an identical Kekulé graph."""
    n = g.n_atoms
    visited = [False] * n
    tree_children: list[list[tuple[int, int]]] = [[] for _ in range(n)]
    closures: dict[int, list[tuple[int, int]]] = {i: [] for i in range(n)}
    order: list[int] = []
    roots: list[int] = []

    for root in range(n):
        if visited[root]:
            continue
        roots.append(root)
        # iterative DFS recording tree edges and back edges in discovery order
        visited[root] = True
        order.append(root)
        stack = [(root, -1, iter(g.incident[root]))]
        used_bonds: set[int] = set()
        while stack:
            atom, via, it = stack[-1]
            for k in it:
                if k == via or k in used_bonds:
                    continue
                other = g.other(k, atom)
                used_bonds.add(k)
                if visited[other]:
                    closures[atom].append((k, other))
                    closures[other].append((k, atom))
                else:
                    visited[other] = True
                    order.append(other)
                    tree_children[atom].append((k, other))
                    stack.append((other, k, iter(g.incident[other])))
                    break
            else:
                stack.pop()

    rank = {a: r for r, a in enumerate(order)}
    free_digits = list(range(1, 100))
    open_rings: dict[int, int] = {}
    out: list[str] = []

    def emit(atom: int) -> None:
        out.append(_atom_token(g, atom))
        for k, other in sorted(closures[atom], key=lambda x: rank[x[1]]):
            if k in open_rings:
                digit = open_rings.pop(k)
                out.append(f"%{digit:02d}" if digit > 9 else str(digit))
                free_digits.append(digit)
                free_digits.sort()
            else:
                digit = free_digits.pop(0)
                open_rings[k] = digit
                out.append(_bond_token(g, k) + (f"%{digit:02d}" if digit > 9 else str(digit)))
        kids = tree_children[atom]
        for idx, (k, child) in enumerate(kids):
            last = idx == len(kids) - 1
            if not last:
                out.append("(")
            out.append(_bond_token(g, k))
            emit(child)
            if not last:
                out.append(")")

    for idx, root in enumerate(roots):
        if idx:
            out.append(".")
        emit(root)
    return "".join(out)
