"""Sparse 2D words: finite maps from (row, col) to cell tags.

Row grows downward, col grows rightward.  A word must be non-empty and
4-connected.  Words compare equal on exact cell content; `anchored()`
gives the canonical translation with the bounding box corner at (0,0).
"""

from __future__ import annotations

from collections import deque
from typing import Iterable, Iterator, Mapping

from .cells import TAG_VALUES
from .errors import InvalidSymbolError, WordParseError, WordStructureError

Coord = tuple[int, int]

N4 = ((-1, 0), (1, 0), (0, -1), (0, 1))


class GridWord:
    """Immutable labeled connected cell set."""

    __slots__ = ("_cells", "_hash")

    def __init__(self, cells: Mapping[Coord, str] | Iterable[tuple[Coord, str]]):
        cells = dict(cells)
        if not cells:
            raise WordStructureError("word is empty")
        for coord, tag in cells.items():
            if tag not in TAG_VALUES:
                raise InvalidSymbolError(f"unknown cell tag {tag!r} at {coord}")
        if not _connected(cells.keys()):
            raise WordStructureError("word is not 4-connected")
        self._cells = cells
        self._hash = None

    @property
    def cells(self) -> dict[Coord, str]:
        return dict(self._cells)

    def tag_at(self, coord: Coord) -> str | None:
        return self._cells.get(coord)

    def coords(self) -> frozenset[Coord]:
        return frozenset(self._cells)

    def __len__(self) -> int:
        return len(self._cells)

    def __iter__(self) -> Iterator[tuple[Coord, str]]:
        return iter(sorted(self._cells.items()))

    def __contains__(self, coord: Coord) -> bool:
        return coord in self._cells

    def __eq__(self, other) -> bool:
        return isinstance(other, GridWord) and self._cells == other._cells

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash(frozenset(self._cells.items()))
        return self._hash

    def __repr__(self) -> str:
        return f"GridWord({format_word(self)!r})"

    def bounds(self) -> tuple[int, int, int, int]:
        """(min_row, min_col, max_row, max_col)."""
        rows = [r for r, _ in self._cells]
        cols = [c for _, c in self._cells]
        return min(rows), min(cols), max(rows), max(cols)

    def translate(self, dr: int, dc: int) -> GridWord:
        return GridWord({(r + dr, c + dc): t for (r, c), t in self._cells.items()})

    def anchored(self) -> GridWord:
        r0, c0, _, _ = self.bounds()
        if r0 == 0 and c0 == 0:
            return self
        return self.translate(-r0, -c0)

    def tag_multiset(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for tag in self._cells.values():
            counts[tag] = counts.get(tag, 0) + 1
        return counts


def _connected(coords) -> bool:
    coords = set(coords)
    seen = {next(iter(coords))}
    queue = deque(seen)
    while queue:
        r, c = queue.popleft()
        for dr, dc in N4:
            nxt = (r + dr, c + dc)
            if nxt in coords and nxt not in seen:
                seen.add(nxt)
                queue.append(nxt)
    return len(seen) == len(coords)


def parse_word(text: str) -> GridWord:
    """Parse the line-per-row text form; `*` and space mark empty cells."""
    cells: dict[Coord, str] = {}
    lines = text.splitlines()
    for r, line in enumerate(lines):
        for c, ch in enumerate(line):
            if ch in ("*", " "):
                continue
            if ch not in TAG_VALUES:
                raise WordParseError(f"unexpected character {ch!r}", r + 1, c + 1)
            cells[(r, c)] = ch
    if not cells:
        raise WordParseError("no cells in input", 1, 1)
    try:
        return GridWord(cells)
    except WordStructureError as exc:
        raise WordParseError(str(exc), 1, 1) from exc


def format_word(word: GridWord) -> str:
    r0, c0, r1, c1 = word.bounds()
    rows = []
    for r in range(r0, r1 + 1):
        rows.append("".join(word.tag_at((r, c)) or "*" for c in range(c0, c1 + 1)))
    return "\n".join(rows)
