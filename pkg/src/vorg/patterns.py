"""Pattern membership by tiling and by row/column language product.

A pattern is given two ways: a tiling automaton (tile set plus required
external border labels) and a pair of run languages, one for maximal
horizontal runs and one for maximal vertical runs.  For the three
built-in patterns the two recognizers agree on every connected word, a
fact the test suite checks exhaustively at small sizes.
"""

from __future__ import annotations

from dataclasses import dataclass

from .cells import ACCEPT_BORDERS, BORDERS
from .errors import WordStructureError
from .grid import GridWord

# Border tuple indices.
W, N, E, S = 0, 1, 2, 3


@dataclass(frozen=True)
class TilingAutomaton:
    tiles: frozenset[str]
    accept: tuple[int, int, int, int] = ACCEPT_BORDERS


@dataclass(frozen=True)
class RunLanguage:
    """Words of shape prefix* middle suffix* with exactly one middle symbol."""

    prefix: frozenset[str]
    middle: frozenset[str]
    suffix: frozenset[str]

    def accepts(self, run: str) -> bool:
        state = 0  # 0: reading prefix, 1: middle seen, 2: dead
        for tag in run:
            if state == 0:
                if tag in self.middle:
                    state = 1
                elif tag not in self.prefix:
                    return False
            elif state == 1:
                if tag not in self.suffix:
                    return False
        return state == 1

    def __str__(self) -> str:
        part = lambda s: "(" + "+".join(sorted(s)) + ")" if len(s) > 1 else "".join(s)
        out = ""
        if self.prefix:
            out += part(self.prefix) + "*"
        out += part(self.middle)
        if self.suffix:
            out += part(self.suffix) + "*"
        return out


@dataclass(frozen=True)
class PatternSpec:
    name: str
    automaton: TilingAutomaton
    row_lang: RunLanguage
    col_lang: RunLanguage


def _lang(prefix: str, middle: str, suffix: str) -> RunLanguage:
    return RunLanguage(frozenset(prefix), frozenset(middle), frozenset(suffix))


TR = PatternSpec(
    "Tr",
    TilingAutomaton(frozenset("246")),
    row_lang=_lang("4", "26", ""),
    col_lang=_lang("", "46", "2"),
)

RAT = PatternSpec(
    "RAT",
    TilingAutomaton(frozenset("247e")),
    row_lang=_lang("4", "27", "e"),
    col_lang=_lang("7", "4e", "2"),
)

CRAT = PatternSpec(
    "CRAT",
    TilingAutomaton(frozenset("2457e")),
    row_lang=_lang("45", "27", "e"),
    col_lang=_lang("75", "4e", "2"),
)

PATTERNS = {"tr": TR, "rat": RAT, "crat": CRAT}


def accepts_tiling(word: GridWord, automaton: TilingAutomaton) -> bool:
    """Tile-set membership, border agreement, and external border labels."""
    if len(word) == 0:
        raise WordStructureError("word is empty")
    cells = word.cells
    accept = automaton.accept
    for (r, c), tag in cells.items():
        if tag not in automaton.tiles:
            return False
        b = BORDERS[tag]
        north = cells.get((r - 1, c))
        if north is None:
            if b[N] != accept[N]:
                return False
        elif BORDERS[north][S] != b[N]:
            return False
        south = cells.get((r + 1, c))
        if south is None and b[S] != accept[S]:
            return False
        west = cells.get((r, c - 1))
        if west is None:
            if b[W] != accept[W]:
                return False
        elif BORDERS[west][E] != b[W]:
            return False
        east = cells.get((r, c + 1))
        if east is None and b[E] != accept[E]:
            return False
    return True


def accepts_product(word: GridWord, spec: PatternSpec) -> bool:
    """Every maximal horizontal run in the row language, vertical in the column language."""
    cells = word.cells
    for (r, c), _ in cells.items():
        if (r, c - 1) not in cells:  # start of a horizontal run
            run = []
            cc = c
            while (r, cc) in cells:
                run.append(cells[(r, cc)])
                cc += 1
            if not spec.row_lang.accepts("".join(run)):
                return False
        if (r - 1, c) not in cells:  # start of a vertical run
            run = []
            rr = r
            while (rr, c) in cells:
                run.append(cells[(rr, c)])
                rr += 1
            if not spec.col_lang.accepts("".join(run)):
                return False
    return True


def accepts(word: GridWord, spec: PatternSpec) -> bool:
    """Membership via the tiling recognizer (equivalent to the product one)."""
    return accepts_tiling(word, spec.automaton)
