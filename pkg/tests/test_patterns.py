import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from vorg.generate import enumerate_shapes, scan_shape
from vorg.grid import GridWord, parse_word
from vorg.patterns import CRAT, PATTERNS, RAT, TR, accepts_product, accepts_tiling

RING_CW = parse_word("47\n2e")
RING_CCW = parse_word("7e\n42")


def test_single_six_is_a_tree():
    word = GridWord({(0, 0): "6"})
    assert accepts_tiling(word, TR.automaton)
    assert accepts_product(word, TR)


def test_stacked_fours_rejected():
    word = GridWord({(0, 0): "4", (1, 0): "4"})
    assert not accepts_tiling(word, TR.automaton)
    assert not accepts_product(word, TR)


def test_ring_accepted_by_rat():
    for ring in (RING_CW, RING_CCW):
        assert accepts_tiling(ring, RAT.automaton)
        assert accepts_product(ring, RAT)
        # ring words are also valid in the connected-rings pattern
        assert accepts_tiling(ring, CRAT.automaton)
        assert accepts_product(ring, CRAT)


def test_product_examples():
    assert accepts_product(parse_word("46"), TR)
    assert not accepts_product(parse_word("22"), TR)
    assert not accepts_tiling(parse_word("22"), TR.automaton)


def test_run_language_strings():
    assert str(TR.row_lang) == "4*(2+6)"
    assert str(RAT.col_lang) == "7*(4+e)2*"


@settings(max_examples=60, deadline=None)
@given(st.integers(-50, 50), st.integers(-50, 50))
def test_translation_invariance(dr, dc):
    for word in (RING_CW, parse_word("446\n**2")):
        moved = word.translate(dr, dc)
        for spec in (TR, RAT, CRAT):
            assert accepts_tiling(word, spec.automaton) == \
                accepts_tiling(moved, spec.automaton)
            assert accepts_product(word, spec) == accepts_product(moved, spec)


@pytest.mark.parametrize("spec", [TR, RAT, CRAT], ids=lambda s: s.name)
def test_recognizers_agree_small(spec):
    """Spot equivalence up to 4 cells; the acceptance suite is exhaustive
    to 6."""
    shapes = enumerate_shapes(4)
    alphabet = sorted(spec.automaton.tiles)
    for size in range(1, 5):
        for shape in shapes[size]:
            flags, _ = scan_shape(shape, spec)
            assert not ((flags == 1) | (flags == 2)).any()
            for idx in (flags == 3).nonzero()[0][:5]:
                word = _decode(shape, alphabet, int(idx))
                assert accepts_tiling(word, spec.automaton)
                assert accepts_product(word, spec)


def _decode(shape, alphabet, idx):
    n = len(alphabet)
    k = len(shape)
    return GridWord({coord: alphabet[(idx // (n ** (k - 1 - i))) % n]
                     for i, coord in enumerate(shape)})
