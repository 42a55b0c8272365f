"""Ring membranes and full ring-with-trees words, built compositionally.

Membranes are minimal ring words: bars of 2/4/7/e joined into corner
chains, then closed with a final bar.  The closure conditions pin both
bar ends, which needs every segment to stick out past its neighbours,
so the two 4-cell rings (where all segments have length 1 and no such
end exists) enter as explicit base cases.  Full words then grow by
recursively attaching bars to the borders: 2-bars north-into-south,
4-bars east-into-west, 7-bars south-into-north, e-bars west-into-east.
"""

from __future__ import annotations

from .compose import And, Atom, CompositionConstraint, Selector, compose
from .errors import NoMemberError
from .grid import GridWord
from .patterns import RAT, accepts_product, accepts_tiling


def bar(tag: str, length: int) -> GridWord:
    """A straight bar; 2s and 7s run vertically, 4s and es horizontally."""
    if length < 1:
        raise ValueError("bar length must be positive")
    if tag in ("2", "7"):
        return GridWord({(i, 0): tag for i in range(length)})
    if tag in ("4", "e"):
        return GridWord({(0, i): tag for i in range(length)})
    raise ValueError(f"no bar for tag {tag!r}")


def _sel(operand: int, side: str, *near: tuple[int, str]) -> Selector:
    return Selector(operand, side=side, near=tuple(near))


def _corner(col_tag: str, col_len: int, col_side: str, row_tag: str,
            row_len: int, row_near: str) -> list[GridWord]:
    constraint = CompositionConstraint(
        Atom(_sel(1, col_side), "=", _sel(2, "n" if col_side == "s" else "s",
                                          (0, row_near))))
    return compose(bar(col_tag, col_len), constraint, bar(row_tag, row_len))


def corner_pieces(kind: str, col_len: int, row_len: int) -> list[GridWord]:
    """The four corner families: a vertical bar joined to one end of a
    horizontal bar."""
    if kind == "24":
        return _corner("2", col_len, "n", "4", row_len, "sw")
    if kind == "2e":
        return _corner("2", col_len, "n", "e", row_len, "se")
    if kind == "74":
        return _corner("7", col_len, "s", "4", row_len, "nw")
    if kind == "7e":
        return _corner("7", col_len, "s", "e", row_len, "ne")
    raise ValueError(f"unknown corner kind {kind!r}")


# Chain extension conditions: the chain's free horizontal end edge is
# identified with the matching end edge of a new corner piece.
_EXTEND = (
    (("24", "2e"), Atom(_sel(1, "e", (0, "ne-land"), (0, "se-land")), "=",
                        _sel(2, "w", (0, "sw-land")))),
    (("74", "7e"), Atom(_sel(1, "e", (0, "ne-land"), (0, "se-land")), "=",
                        _sel(2, "w", (0, "nw-land")))),
    (("24", "2e"), Atom(_sel(1, "w", (0, "nw-land"), (0, "sw-land")), "=",
                        _sel(2, "e", (0, "ne-land")))),
    (("74", "7e"), Atom(_sel(1, "w", (0, "nw-land"), (0, "sw-land")), "=",
                        _sel(2, "e", (0, "ne-land")))),
)

# Ring closures: one last bar bridges the chain's open horizontal end and
# the far end of its first vertical segment.
_CLOSE_E = CompositionConstraint(And((
    Atom(_sel(1, "w", (0, "nw-land"), (0, "sw-land")), "=", _sel(2, "e")),
    Atom(_sel(1, "e", (0, "se-land"), (1, "sw-land")), "=", _sel(2, "w")),
)), strict=True)

_CLOSE_4 = CompositionConstraint(And((
    Atom(_sel(1, "e", (0, "ne-land"), (0, "se-land")), "=", _sel(2, "w")),
    Atom(_sel(1, "w", (0, "sw-land"), (1, "se-land")), "=", _sel(2, "e")),
)), strict=True)

BASE_RINGS = (
    GridWord({(0, 0): "4", (0, 1): "7", (1, 0): "2", (1, 1): "e"}),
    GridWord({(0, 0): "7", (0, 1): "e", (1, 0): "4", (1, 1): "2"}),
)


def _is_simple_cycle(word: GridWord) -> bool:
    coords = word.coords()
    if len(coords) < 4:
        return False
    for r, c in coords:
        deg = sum((r + dr, c + dc) in coords
                  for dr, dc in ((-1, 0), (1, 0), (0, -1), (0, 1)))
        if deg != 2:
            return False
    return True


def _valid_ring(word: GridWord) -> bool:
    return (_is_simple_cycle(word) and accepts_tiling(word, RAT.automaton)
            and accepts_product(word, RAT))


def generate_rat_membranes(max_cells: int) -> set[GridWord]:
    """Minimal ring words with at most max_cells cells."""
    if max_cells < 4:
        raise NoMemberError("ring membranes need at least 4 cells")
    corners: dict[str, list[GridWord]] = {}
    for kind in ("24", "2e", "74", "7e"):
        pieces = []
        for col_len in range(1, max_cells):
            for row_len in range(1, max_cells + 1 - col_len):
                pieces.extend(corner_pieces(kind, col_len, row_len))
        corners[kind] = pieces
    chains: dict[GridWord, GridWord] = {}
    frontier = [p.anchored() for kind in corners for p in corners[kind]]
    for piece in frontier:
        chains.setdefault(piece, piece)
    while frontier:
        nxt = []
        for chain in frontier:
            room = max_cells - len(chain)
            for kinds, atom in _EXTEND:
                constraint = CompositionConstraint(atom, strict=True)
                for kind in kinds:
                    for piece in corners[kind]:
                        if len(piece) > room:
                            continue
                        for grown in compose(chain, constraint, piece):
                            grown = grown.anchored()
                            if grown not in chains:
                                chains[grown] = grown
                                nxt.append(grown)
        frontier = nxt
    rings: set[GridWord] = {r for r in BASE_RINGS if len(r) <= max_cells}
    for chain in chains.values():
        room = max_cells - len(chain)
        for length in range(1, room + 1):
            for closed in compose(chain, _CLOSE_E, bar("e", length)):
                if _valid_ring(closed):
                    rings.add(closed.anchored())
            for closed in compose(chain, _CLOSE_4, bar("4", length)):
                if _valid_ring(closed):
                    rings.add(closed.anchored())
    return rings


_ATTACH_BARS = (
    ("2", CompositionConstraint(Atom(_sel(1, "n"), "<", _sel(2, "s")),
                                strict=True)),
    ("4", CompositionConstraint(Atom(_sel(1, "e"), "<", _sel(2, "w")),
                                strict=True)),
    ("7", CompositionConstraint(Atom(_sel(1, "s"), "<", _sel(2, "n")),
                                strict=True)),
    ("e", CompositionConstraint(Atom(_sel(1, "w"), "<", _sel(2, "e")),
                                strict=True)),
)


def generate_rat_words(max_cells: int) -> set[GridWord]:
    """Ring membranes with bars recursively attached, within max_cells."""
    words: set[GridWord] = set(generate_rat_membranes(max_cells))
    frontier = list(words)
    while frontier:
        nxt = []
        for word in frontier:
            room = max_cells - len(word)
            for tag, constraint in _ATTACH_BARS:
                for length in range(1, room + 1):
                    for grown in compose(bar(tag, length), constraint, word):
                        grown = grown.anchored()
                        if grown not in words and accepts_tiling(grown,
                                                                 RAT.automaton):
                            words.add(grown)
                            nxt.append(grown)
        frontier = nxt
    return words
