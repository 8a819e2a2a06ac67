import math
import random
import warnings

import numpy as np
import pytest
from conftest import DODECANE
from hypothesis import given, settings
from hypothesis import strategies as st

from assemblage.errors import (
    AllPeaksOutOfRange,
    AssemblageError,
    EmptyPeakList,
    MalformedRecord,
    NonPositiveMass,
)
from assemblage.molgraph import parse_smiles
from assemblage.molgraph.graph import molecular_weight
from assemblage.spectra import (
    FragmentNode,
    Spectrum,
    first_order_bound,
    parse_msp,
    recursive_ma,
    serialize_msp,
    simulate_spectrum,
    tree_from_json,
    tree_to_json,
    vectorize,
)
from assemblage.synthetic import generate_corpus

MSP_TWO = "Name: benzoyl\nIonization: EI\nNum Peaks: 2\n77 300; 105 999\n"


def test_parse_two_peaks():
    [(name, s)] = parse_msp(MSP_TWO)
    assert name == "benzoyl"
    assert list(s.mz) == [77.0, 105.0] and list(s.intensity) == [300.0, 999.0]
    assert s.ionization == "EI"


def test_count_mismatch():
    with pytest.raises(MalformedRecord):
        parse_msp("Name: x\nNum Peaks: 3\n77 300; 105 999\n")


def test_empty_peak_list():
    with pytest.raises(EmptyPeakList):
        parse_msp("Name: x\nNum Peaks: 0\n")


@pytest.mark.parametrize("text", [
    "77 300\n",
    "Name: x\nNum Peaks: 2\n77 300 105\n",
    "Name: x\nNum Peaks: 1\n77 abc\n",
])
def test_malformed(text):
    with pytest.raises(MalformedRecord):
        parse_msp(text)


def test_multi_record_order_and_metadata():
    recs = [(f"r{i}", Spectrum.from_pairs([(10.0 + i, 1.0), (20.5, 2.0 + i)])) for i in range(5)]
    text = serialize_msp(recs).replace("Name: r2\n", "Name: r2\nComment: kept as text\n")
    out = parse_msp(text)
    assert [n for n, _ in out] == [f"r{i}" for i in range(5)]
    assert ("Comment", "kept as text") in out[2][1].extra


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0.01, 5000), st.floats(0, 1e6)), min_size=1, max_size=30,
                unique_by=lambda p: f"{p[0]:.6g}"))
def test_msp_round_trip(pairs):
    pairs = [(float(f"{m:.6g}"), float(f"{i:.6g}")) for m, i in pairs]
    [(_, s)] = parse_msp(serialize_msp([("x", Spectrum.from_pairs(pairs))]))
    assert list(zip(s.mz, s.intensity)) == sorted(pairs)
    first = serialize_msp([("x", Spectrum.from_pairs(pairs))])
    [(_, s)] = parse_msp(first)
    second = serialize_msp([("x", s)])
    assert second == first


def test_vectorize_example():
    v = vectorize(Spectrum.from_pairs([(77, 300), (105, 999)]), 1000).values
    assert len(v) == 1001
    assert v[77] == 300 / 999 and v[105] == 1.0
    assert np.count_nonzero(v) == 2


def test_vectorize_single_and_rounding():
    v = vectorize(Spectrum.from_pairs([(42.2, 5.0)])).values
    assert np.count_nonzero(v) == 1 and v[42] == 1.0
    v = vectorize(Spectrum.from_pairs([(50.4, 10), (50.6, 20)])).values
    assert v[50] == 0.5 and v[51] == 1.0


def test_vectorize_collision_takes_max():
    v = vectorize(Spectrum.from_pairs([(30.1, 3), (29.9, 4), (10, 8)])).values
    assert v[30] == 0.5


def test_vectorize_out_of_range():
    with pytest.raises(AllPeaksOutOfRange):
        vectorize(Spectrum.from_pairs([(1200, 1.0)]), 1000)
    with pytest.warns(UserWarning):
        sv = vectorize(Spectrum.from_pairs([(1200, 1.0), (12, 1.0)]), 1000)
    assert sv.dropped == 1


@settings(max_examples=100, deadline=None)
@given(st.lists(st.tuples(st.floats(0.5, 999.4), st.floats(1e-6, 1e6)), min_size=1, max_size=40,
                unique_by=lambda p: p[0]))
def test_vector_range(pairs):
    v = vectorize(Spectrum.from_pairs(pairs)).values
    assert v.min() >= 0 and v.max() == 1.0


def test_simulator_deterministic():
    g = parse_smiles(DODECANE)
    assert simulate_spectrum(g, 20, seed=4) == simulate_spectrum(g, 20, seed=4)


def test_simulator_low_energy_single_parent_peak():
    g = parse_smiles(DODECANE)
    s = simulate_spectrum(g, 1e-9, seed=0)
    assert len(s.peaks) == 1
    assert s.peaks[0].mz == pytest.approx(molecular_weight(g), abs=1e-3)


def test_simulator_rejects_nonpositive_energy():
    with pytest.raises(AssemblageError):
        simulate_spectrum(parse_smiles("CC"), 0.0, seed=0)


def test_simulator_more_peaks_at_high_energy():
    g = parse_smiles(DODECANE)
    low = np.mean([len(simulate_spectrum(g, 10, s).peaks) for s in range(20)])
    high = np.mean([len(simulate_spectrum(g, 40, s).peaks) for s in range(20)])
    assert high > low


def test_simulator_lower_mean_mass_at_high_energy():
    g = parse_smiles(DODECANE)

    def mean_mass(e):
        s = simulate_spectrum(g, e, 0)
        return float(np.sum(s.mz * s.intensity) / np.sum(s.intensity))

    assert mean_mass(40) < mean_mass(10)


def test_simulator_rings_stay_whole():
    g = parse_smiles("c1ccccc1")
    s = simulate_spectrum(g, 200, seed=1)
    assert len(s.peaks) == 1


def test_simulator_masses_bounded():
    for i, g in enumerate(generate_corpus(50, seed=8)):
        s = simulate_spectrum(g, 30, seed=i)
        assert s.mz.max() <= molecular_weight(g) + 1e-6


def test_recursive_examples():
    assert recursive_ma(FragmentNode(1.0), 1.0) == 0
    tree = FragmentNode(4.0, 1, (FragmentNode(2.0), FragmentNode(2.0)))
    assert recursive_ma(tree, 1.0) == 2
    assert recursive_ma(FragmentNode(16.0), 1.0) == 4


def test_recursive_reuse_beats_bound():
    # 6u = 3u + 3u, and 3u = 2u + 1u: 2 + 0 + 1 joins against a bound of 3
    three = FragmentNode(3.0, 1, (FragmentNode(2.0),))
    tree = FragmentNode(6.0, 1, (three, FragmentNode(3.0)))
    assert first_order_bound(6.0, 1.0) == 3
    assert recursive_ma(tree, 1.0) == 3


def test_recursive_errors():
    with pytest.raises(NonPositiveMass):
        recursive_ma(FragmentNode(2.0), 0.0)
    with pytest.raises(NonPositiveMass):
        FragmentNode(0.0)
    with pytest.raises(AssemblageError):
        FragmentNode(2.0, 1, (FragmentNode(3.0),))


@pytest.mark.parametrize("k", range(8))
def test_doubling_trees_hit_log_bound(k):
    block = 13.0

    def doubling(level):
        mass = block * 2 ** level
        if level == 0:
            return FragmentNode(mass)
        half = doubling(level - 1)
        return FragmentNode(mass, 1.0, (half, half))

    assert recursive_ma(doubling(k), block) == math.ceil(math.log2(2 ** k))


def random_augmentations(rng: random.Random, block: float, steps: int):
    """Yield trees from a childless root, adding one child at a random node each time."""
    root = FragmentNode(block * rng.randint(4, 40))
    yield root
    for _ in range(steps):
        paths = list(root.iter_paths())
        path = paths[rng.randrange(len(paths))]
        node = root
        for i in path:
            node = node.children[i]
        units = int(round(node.mass / block))
        if units < 2:
            continue
        root = root.with_child(path, FragmentNode(block * rng.randint(1, units - 1)))
        yield root


def test_recursive_monotone_under_augmentation():
    rng = random.Random(12)
    block = 1.0
    for _ in range(100):
        prev = None
        for tree in random_augmentations(rng, block, 8):
            est = recursive_ma(tree, block)
            assert est <= first_order_bound(tree.mass, block)
            if prev is not None:
                assert est <= prev
            prev = est


def test_tree_json_round_trip():
    tree = FragmentNode(4.0, 0.5, (FragmentNode(2.0, 0.25), FragmentNode(1.5)))
    assert tree_from_json(tree_to_json(tree)) == tree


def test_spectrum_validation():
    with pytest.raises(AssemblageError):
        Spectrum.from_pairs([(-1.0, 1.0)])
    with pytest.raises(AssemblageError):
        Spectrum.from_pairs([])
    s = Spectrum.from_pairs([(20.0, 1.0), (10.0, 3.0), (20.0, 2.0)])
    assert list(s.mz) == [10.0, 20.0] and list(s.intensity) == [3.0, 2.0]


def test_no_warning_when_in_range():
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        vectorize(Spectrum.from_pairs([(12, 1.0)]))
