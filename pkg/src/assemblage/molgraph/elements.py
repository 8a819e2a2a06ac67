"""Element data: standard atomic weights, valence electrons, default valences."""

from __future__ import annotations

from ..errors import UnknownElement

# IUPAC conventional atomic weights (abridged to what the SMILES subset can produce)
ATOMIC_MASS: dict[str, float] = {
    "H": 1.008,
    "B": 10.81,
    "C": 12.011,
    "N": 14.007,
    "O": 15.999,
    "F": 18.998,
    "Si": 28.085,
    "P": 30.974,
    "S": 32.06,
    "Cl": 35.45,
    "Se": 78.971,
    "Br": 79.904,
    "I": 126.904,
}

VALENCE_ELECTRONS: dict[str, int] = {
    "H": 1,
    "B": 3,
    "C": 4,
    "N": 5,
    "O": 6,
    "F": 7,
    "Si": 4,
    "P": 5,
    "S": 6,
    "Cl": 7,
    "Se": 6,
    "Br": 7,
    "I": 7,
}

ATOMIC_NUMBER: dict[str, int] = {
    "H": 1, "B": 5, "C": 6, "N": 7, "O": 8, "F": 9, "Si": 14, "P": 15,
    "S": 16, "Cl": 17, "Se": 34, "Br": 35, "I": 53,
}

# allowed valences for organic-subset atoms written without brackets
DEFAULT_VALENCES: dict[str, tuple[int, ...]] = {
    "B": (3,),
    "C": (4,),
    "N": (3, 5),
    "O": (2,),
    "P": (3, 5),
    "S": (2, 4, 6),
    "F": (1,),
    "Cl": (1,),
    "Br": (1,),
    "I": (1,),
}

ORGANIC_SUBSET = frozenset(DEFAULT_VALENCES)
AROMATIC_SUBSET = {"b": "B", "c": "C", "n": "N", "o": "O", "p": "P", "s": "S"}


def check_element(symbol: str) -> str:
    if symbol not in ATOMIC_MASS:
        raise UnknownElement(f"unknown element {symbol!r}")
    return symbol


def implicit_hydrogens(element: str, bond_order_sum: int) -> int:
    """Hydrogens needed to reach the smallest default valence >= ``bond_order_sum``."""
    for valence in DEFAULT_VALENCES.get(element, ()):
        if valence >= bond_order_sum:
            return valence - bond_order_sum
    return 0


def neutral_valence(element: str, charge: int = 0) -> int:
    """Octet-rule valence of an atom, using isoelectronic shifts for charges.

    N+ behaves like C (4), O+ like N (3), C- like N (3) and so on.
    """
    electrons = VALENCE_ELECTRONS[check_element(element)] - charge
    if electrons <= 4:
        return max(electrons, 0)
    return 8 - electrons
