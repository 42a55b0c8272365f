import pytest

from vorg.cells import ACCEPT_BORDERS, tile_borders
from vorg.errors import InvalidSymbolError, WordParseError, WordStructureError
from vorg.grid import GridWord, format_word, parse_word


def test_border_bits():
    assert tile_borders("6") == (0, 1, 1, 0)
    assert tile_borders("2") == (0, 0, 1, 0)
    assert tile_borders("e") == (1, 1, 1, 0)
    assert tile_borders("4") == (0, 1, 0, 0)
    assert tile_borders("5") == (0, 1, 0, 1)
    assert tile_borders("7") == (0, 1, 1, 1)


def test_accept_borders_match_restriction():
    assert ACCEPT_BORDERS == (0, 1, 1, 0)


def test_unknown_tag():
    with pytest.raises(InvalidSymbolError):
        tile_borders("9")


def test_word_requires_cells():
    with pytest.raises(WordStructureError):
        GridWord({})


def test_word_requires_connectivity():
    with pytest.raises(WordStructureError):
        GridWord({(0, 0): "6", (2, 2): "2"})
    with pytest.raises(WordStructureError):
        GridWord({(0, 0): "6", (1, 1): "2"})  # diagonal contact only


def test_parse_format_round_trip():
    text = "446\n*2*\n*2*"
    word = parse_word(text)
    assert format_word(word) == text
    assert len(word) == 5


def test_parse_error_position():
    with pytest.raises(WordParseError) as err:
        parse_word("44\n4x")
    assert err.value.line == 2 and err.value.column == 2


def test_anchoring_and_translation():
    word = parse_word("46").translate(3, 5)
    assert word.bounds() == (3, 5, 3, 6)
    anchored = word.anchored()
    assert anchored == parse_word("46")
    assert anchored.anchored() is anchored


def test_tag_multiset():
    word = parse_word("446\n**2")
    assert word.tag_multiset() == {"4": 2, "6": 1, "2": 1}
