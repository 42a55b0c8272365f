import numpy as np
import pytest

from vorg.contour import (BorderAddress, BorderInterval, NfContour,
                          classify_border_point, contour_of, format_contour,
                          near_k, near_k_edge, parse_contour, rasterize,
                          trace_cycles)
from vorg.errors import AddressError
from vorg.generate import enumerate_shapes, random_member
from vorg.grid import GridWord, parse_word
from vorg.patterns import TR

UNIT = GridWord({(0, 0): "6"})
L_SHAPE = GridWord({(0, 0): "6", (1, 0): "2", (1, 1): "2"})
RING8 = GridWord({(r, c): "2" for r in range(3) for c in range(3)
                  if (r, c) != (1, 1)})


def test_unit_cell_contour():
    nf = contour_of(UNIT)
    assert nf.external == "rdlu"
    assert nf.holes == ()


def test_l_shape_contour():
    assert contour_of(L_SHAPE).external == "rdrdlluu"


def test_ring_contour_and_hole():
    nf = contour_of(RING8)
    assert format_contour(nf) == "(r^3d^3l^3u^3; (drul,1,1))"


def test_corner_classification_unit():
    nf = contour_of(UNIT)
    assert classify_border_point(nf, BorderAddress(0, 0)) == ("nw", "land")
    assert classify_border_point(nf, BorderAddress(0, 1)) == ("ne", "land")
    assert classify_border_point(nf, BorderAddress(0, 2)) == ("se", "land")
    assert classify_border_point(nf, BorderAddress(0, 3)) == ("sw", "land")
    assert classify_border_point(nf, BorderAddress(0, -1)) == ("sw", "land")


def test_hole_corner_classification():
    nf = contour_of(RING8)
    # the hole's top-left point sits between the closing l and opening d
    assert classify_border_point(nf, BorderAddress(1, 0)) == ("se", "golf")
    assert classify_border_point(nf, BorderAddress(1, 1)) == ("ne", "golf")
    assert classify_border_point(nf, BorderAddress(1, 2)) == ("nw", "golf")
    assert classify_border_point(nf, BorderAddress(1, 3)) == ("sw", "golf")


def test_classification_against_quadrant_oracle():
    rng = np.random.default_rng(5)
    words = [UNIT, L_SHAPE, RING8] + [random_member(TR, 10, rng)
                                      for _ in range(20)]
    for word in words:
        cells = word.coords()
        for letters, pts in trace_cycles(word):
            n = len(pts)
            for i in range(n):
                got = _pair_class(letters[i - 1], letters[i])
                want = _quadrant_class(pts[i], letters[i - 1], letters[i],
                                       cells)
                assert got == want, (word, pts[i])


def _pair_class(prev, nxt):
    from vorg.contour import CORNER_TABLE
    return CORNER_TABLE.get((prev, nxt))


def _quadrant_class(point, prev, nxt, cells):
    """Independent geometric classification from the four cells around
    the point; diagonal pinch points classify by the passage's cells."""
    r, c = point
    quad = {"nw": (r - 1, c - 1) in cells, "ne": (r - 1, c) in cells,
            "sw": (r, c - 1) in cells, "se": (r, c) in cells}
    count = sum(quad.values())
    if count == 1:
        where = next(k for k, v in quad.items() if v)
        return ({"se": "nw", "sw": "ne", "ne": "sw", "nw": "se"}[where],
                "land")
    if count == 3:
        empty = next(k for k, v in quad.items() if not v)
        return (empty, "golf")
    if count == 2 and (quad["nw"] == quad["se"]):
        # Diagonal pinch: the passage wraps the empty quadrant both its
        # edges flank, a degenerate golf corner.
        touched = _edge_cells(point, prev, nxt) - cells
        (cell,) = touched
        dr, dc = cell[0] - r, cell[1] - c
        return ({(-1, -1): "nw", (-1, 0): "ne", (0, -1): "sw",
                 (0, 0): "se"}[(dr, dc)], "golf")
    return None


def _edge_cells(point, prev, nxt):
    """The cell both passage edges flank (incoming `prev` ends at the
    point, outgoing `nxt` starts there)."""
    from vorg.contour import STEP

    def flanks(a, b):
        (r1, c1), (r2, c2) = a, b
        if r1 == r2:
            cmin = min(c1, c2)
            return {(r1 - 1, cmin), (r1, cmin)}
        rmin = min(r1, r2)
        return {(rmin, c1 - 1), (rmin, c1)}

    r, c = point
    pr, pc = STEP[prev]
    nr, nc = STEP[nxt]
    return flanks((r - pr, c - pc), point) & flanks(point, (r + nr, c + nc))


def test_near_k_examples():
    nf = contour_of(UNIT)
    assert near_k(nf, BorderAddress(0, 0), "nw", 0)
    assert near_k(nf, BorderAddress(0, 1), "nw", 1)
    assert not near_k(nf, BorderAddress(0, 2), "nw", 0)
    assert near_k(nf, BorderAddress(0, 2), "se", 0)
    assert near_k(nf, BorderAddress(0, 2), "se-land", 0)
    assert not near_k(nf, BorderAddress(0, 2), "se-golf", 0)


def test_near_k_edge_endpoint_rule():
    nf = contour_of(UNIT)
    assert near_k_edge(nf, BorderInterval(0, 0, 1), "nw", 0)
    assert near_k_edge(nf, BorderInterval(0, 1, 2), "nw", 1)


def test_bad_component():
    nf = contour_of(UNIT)
    with pytest.raises(AddressError):
        classify_border_point(nf, BorderAddress(2, 0))


def test_round_trip_small_exhaustive():
    shapes = enumerate_shapes(6)
    for size in range(1, 7):
        for shape in shapes[size]:
            word = GridWord({coord: "2" for coord in shape})
            assert _round_trip_ok(word)


def test_round_trip_random_large():
    rng = np.random.default_rng(11)
    for _ in range(100):
        word = random_member(TR, int(rng.integers(10, 30)), rng)
        assert _round_trip_ok(word)


def _round_trip_ok(word):
    cells = rasterize(contour_of(word))
    coords = word.coords()
    r0 = min(r for r, _ in coords)
    c_top = min(c for r, c in coords if r == r0)
    return cells == frozenset((r - r0, c - c_top) for r, c in coords)


def test_contour_text_round_trip():
    for word in (UNIT, L_SHAPE, RING8):
        nf = contour_of(word)
        assert parse_contour(format_contour(nf)) == nf
    assert parse_contour("(r^5dl^5u)") == NfContour("r" * 5 + "d" + "l" * 5 + "u")


def test_contour_translation_invariant():
    rng = np.random.default_rng(2)
    for _ in range(20):
        word = random_member(TR, 12, rng)
        assert contour_of(word) == contour_of(word.translate(7, -4))
