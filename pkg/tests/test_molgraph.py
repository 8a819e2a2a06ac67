import random

import pytest
from conftest import CORONENE, CUBANE, DODECANE
from hypothesis import given, settings
from hypothesis import strategies as st
from oracles import automorphism_orbits

from assemblage.errors import (
    AssemblageError,
    KekulizationFailure,
    UnparsableSmiles,
    UnsupportedFeature,
)
from assemblage.molgraph import parse_smiles, split_smiles, to_smiles
from assemblage.molgraph.canon import canonical_key
from assemblage.molgraph.elements import neutral_valence
from assemblage.molgraph.equivalence import equivalence_classes
from assemblage.molgraph.graph import Atom, Bond, MolecularGraph, molecular_weight
from assemblage.molgraph.io import parse_report_csv, read_smiles_lines
from assemblage.molgraph.kekulize import kekulize
from assemblage.synthetic import generate_corpus


def test_ethane():
    g = parse_smiles("CC")
    assert g.n_atoms == 2 and g.n_bonds == 1
    assert [a.hydrogens for a in g.atoms] == [3, 3]
    assert g.bonds[0].order == 1


def test_dodecane_counts():
    g = parse_smiles(DODECANE)
    assert g.n_atoms == 12 and g.n_bonds == 11
    assert sum(a.hydrogens for a in g.atoms) == 26


def test_benzene_kekule():
    g = parse_smiles("c1ccccc1")
    orders = sorted(b.order for b in g.bonds)
    assert orders == [1, 1, 1, 2, 2, 2]
    # alternating: every atom has exactly one double bond
    for i in range(6):
        assert sum(g.bonds[k].order == 2 for k in g.incident[i]) == 1
    assert all(a.hydrogens == 1 for a in g.atoms)


def test_pyridine_valence():
    g = parse_smiles("c1ccncc1")
    assert sum(b.order == 2 for b in g.bonds) == 3
    n = next(i for i, a in enumerate(g.atoms) if a.element == "N")
    assert g.bond_order_sum(n) + g.atoms[n].hydrogens == 3


def test_pyrrole_bracket_h():
    g = parse_smiles("c1cc[nH]c1")
    assert sum(b.order == 2 for b in g.bonds) == 2


def test_odd_ring_fails():
    with pytest.raises(KekulizationFailure):
        parse_smiles("c1cccc1")


def test_kekulize_direct_odd_cycle():
    atoms = tuple(Atom("C", 0, 1, True) for _ in range(5))
    bonds = tuple(Bond(i, (i + 1) % 5, 1, True) for i in range(5))
    with pytest.raises(KekulizationFailure):
        kekulize(MolecularGraph(atoms, bonds))


@pytest.mark.parametrize("text", ["", "C(", "C1CC", "CC)", "C==C", "[C"])
def test_syntax_errors(text):
    with pytest.raises(UnparsableSmiles):
        parse_smiles(text)


@pytest.mark.parametrize("text", ["[13CH4]", "C*", "[*]C"])
def test_unsupported(text):
    with pytest.raises(UnsupportedFeature):
        parse_smiles(text)


@pytest.mark.parametrize("text,plain", [("F/C=C/F", "FC=CF"), ("N[C@@H](C)C(=O)O", "NC(C)C(=O)O")])
def test_stereo_marks_dropped(text, plain):
    assert canonical_key(parse_smiles(text)) == canonical_key(parse_smiles(plain))


def test_brackets_and_charges():
    g = parse_smiles("C[N+](C)(C)C")
    n = g.atoms[1]
    assert n.element == "N" and n.charge == 1 and n.hydrogens == 0
    g = parse_smiles("[NH4+]")
    assert g.atoms[0].hydrogens == 4


def test_sulfur_valences():
    assert parse_smiles("CS(=O)(=O)C").atoms[1].hydrogens == 0
    assert parse_smiles("CS").atoms[1].hydrogens == 1


def test_ring_closure_two_digits():
    g = parse_smiles("C%12CCCC%12")
    assert g.n_bonds == 5 and g.is_connected()


def test_fragments_rejected_and_split():
    with pytest.raises(AssemblageError):
        parse_smiles("CC.O")
    parts = split_smiles("CC.O")
    assert [p.n_atoms for p in parts] == [2, 1]


def test_molecular_weight():
    assert molecular_weight(parse_smiles("C")) == pytest.approx(16.04, abs=0.01)
    assert molecular_weight(parse_smiles(DODECANE)) == pytest.approx(170.33, abs=0.01)


def test_equivalence_examples():
    assert equivalence_classes(parse_smiles(DODECANE)).n_atom_classes == 6
    cub = equivalence_classes(parse_smiles(CUBANE))
    assert cub.n_atom_classes == 1 and cub.n_bond_classes == 1
    aza = parse_smiles(DODECANE).substituted(0, "N")
    assert equivalence_classes(aza).n_atom_classes == 12


@pytest.mark.parametrize("smiles", [DODECANE, CUBANE, CORONENE, "CC(C)C(=O)O", "c1ccc2ccccc2c1"])
def test_equivalence_matches_automorphism_orbits(smiles):
    g = parse_smiles(smiles)
    ec = equivalence_classes(g)
    orbits = automorphism_orbits(g)
    assert _partition(ec.atom_class) == _partition(orbits)


def _partition(labels):
    groups = {}
    for i, c in enumerate(labels):
        groups.setdefault(c, []).append(i)
    return sorted(sorted(v) for v in groups.values())


@pytest.mark.parametrize("smiles", [DODECANE, CUBANE, CORONENE, "OCC(N)C(=O)Cl"])
def test_equivalence_permutation_invariant(smiles):
    g = parse_smiles(smiles)
    base = equivalence_classes(g)
    rng = random.Random(7)
    for _ in range(100):
        order = list(range(g.n_atoms))
        rng.shuffle(order)
        h = g.permuted(order)
        got = equivalence_classes(h)
        # atom order[i] of g is atom i of h
        assert [got.atom_class[i] for i in range(h.n_atoms)] == [base.atom_class[order[i]] for i in range(h.n_atoms)]


@pytest.mark.parametrize("smiles", [DODECANE, CUBANE, CORONENE, "c1ccncc1", "CC#N", "C[N+](C)(C)C"])
def test_round_trip(smiles):
    g = parse_smiles(smiles)
    assert canonical_key(parse_smiles(to_smiles(g))) == canonical_key(g)


def test_round_trip_corpus():
    for g in generate_corpus(200, seed=3):
        assert canonical_key(parse_smiles(to_smiles(g))) == canonical_key(g)


def test_canonical_key_permutation_invariant():
    g = parse_smiles("CC(=O)Nc1ccc(O)cc1")
    rng = random.Random(1)
    for _ in range(50):
        order = list(range(g.n_atoms))
        rng.shuffle(order)
        assert canonical_key(g.permuted(order)) == canonical_key(g)
    assert canonical_key(parse_smiles("CCO")) != canonical_key(parse_smiles("COC"))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 10_000))
def test_kekule_valence_exact(seed):
    for g in generate_corpus(3, seed=seed):
        for i, a in enumerate(g.atoms):
            if a.aromatic:
                assert g.bond_order_sum(i) + a.hydrogens == neutral_valence(a.element, a.charge)


def test_substitution_checks_valence():
    g = parse_smiles("CC(C)(C)C")
    with pytest.raises(AssemblageError):
        g.substituted(1, "O")


def test_read_lines_and_report():
    recs = read_smiles_lines("CC\tethane\n\n# note\nC(\nc1ccccc1\n")
    assert [r.name for r in recs] == ["ethane", "mol4", "mol5"]
    assert recs[1].graph is None and recs[1].error.startswith("UnparsableSmiles")
    lines = parse_report_csv(recs).splitlines()
    assert lines[0] == "name,smiles,ok,n_atoms,n_bonds,canonical_key,error"
    assert lines[2].split(",")[2] == "0"
    assert len(lines) == 4
