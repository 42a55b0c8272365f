"""Enumeration and seeded random generation of pattern members.

Enumeration walks all connected cell shapes up to a size bound and, per
shape, scans every labeling over the pattern alphabet with both
recognizers (see accel.scan_labelings).  Random generation grows a word
one cell at a time: a 2-cell hung below a south border or a 4-cell
attached west of a west border (trees), plus 7-cells above north
borders and e-cells east of east borders for the ring patterns, each
attachment validated by the tiling recognizer.
"""

from __future__ import annotations

from functools import lru_cache

import numpy as np

from .accel import scan_labelings
from .cells import ACCEPT_BORDERS, BORDERS
from .errors import NoMemberError, PatternViolationError
from .grid import N4, Coord, GridWord
from .patterns import PatternSpec, RunLanguage, accepts_tiling

Shape = tuple[Coord, ...]


def _normalize(cells: set[Coord]) -> Shape:
    r0 = min(r for r, _ in cells)
    c0 = min(c for _, c in cells)
    return tuple(sorted((r - r0, c - c0) for r, c in cells))


@lru_cache(maxsize=None)
def enumerate_shapes(max_cells: int) -> dict[int, list[Shape]]:
    """All connected cell shapes up to max_cells, anchored, by size."""
    by_size: dict[int, list[Shape]] = {1: [((0, 0),)]}
    for k in range(2, max_cells + 1):
        seen: set[Shape] = set()
        for shape in by_size[k - 1]:
            cellset = set(shape)
            for r, c in shape:
                for dr, dc in N4:
                    cand = (r + dr, c + dc)
                    if cand in cellset:
                        continue
                    seen.add(_normalize(cellset | {cand}))
        by_size[k] = sorted(seen)
    return by_size


def _run_dfa(lang: RunLanguage, alphabet: list[str]) -> np.ndarray:
    # States: 0 prefix, 1 middle seen, 2 dead.
    table = np.full((3, len(alphabet)), 2, np.int8)
    for i, tag in enumerate(alphabet):
        if tag in lang.middle:
            table[0, i] = 1
        elif tag in lang.prefix:
            table[0, i] = 0
        if tag in lang.suffix:
            table[1, i] = 1
    return table


def _shape_arrays(shape: Shape, spec: PatternSpec):
    alphabet = sorted(spec.automaton.tiles)
    k = len(shape)
    index = {coord: i for i, coord in enumerate(shape)}
    cellset = set(shape)
    hpairs, vpairs = [], []
    expw = np.zeros(k, np.uint8)
    expn = np.zeros(k, np.uint8)
    expe = np.zeros(k, np.uint8)
    exps = np.zeros(k, np.uint8)
    for i, (r, c) in enumerate(shape):
        if (r, c + 1) in cellset:
            hpairs.append((i, index[(r, c + 1)]))
        else:
            expe[i] = 1
        if (r + 1, c) in cellset:
            vpairs.append((i, index[(r + 1, c)]))
        else:
            exps[i] = 1
        if (r, c - 1) not in cellset:
            expw[i] = 1
        if (r - 1, c) not in cellset:
            expn[i] = 1
    runs: list[tuple[int, list[int]]] = []
    for r, c in shape:
        if (r, c - 1) not in cellset:
            run, cc = [], c
            while (r, cc) in cellset:
                run.append(index[(r, cc)])
                cc += 1
            runs.append((0, run))
        if (r - 1, c) not in cellset:
            run, rr = [], r
            while (rr, c) in cellset:
                run.append(index[(rr, c)])
                rr += 1
            runs.append((1, run))
    run_starts = np.zeros(len(runs) + 1, np.int64)
    run_cells = []
    run_kind = np.zeros(len(runs), np.uint8)
    for n, (kind, run) in enumerate(runs):
        run_kind[n] = kind
        run_cells.extend(run)
        run_starts[n + 1] = len(run_cells)
    borders = np.array([BORDERS[t] for t in alphabet], np.int8)
    trans = np.stack([_run_dfa(spec.row_lang, alphabet),
                      _run_dfa(spec.col_lang, alphabet)])
    empty = np.zeros((0, 2), np.int64)
    return dict(
        k=k,
        nsym=len(alphabet),
        alphabet=alphabet,
        wbit=borders[:, 0].copy(),
        nbit=borders[:, 1].copy(),
        ebit=borders[:, 2].copy(),
        sbit=borders[:, 3].copy(),
        hpairs=np.array(hpairs, np.int64) if hpairs else empty,
        vpairs=np.array(vpairs, np.int64) if vpairs else empty,
        expw=expw, expn=expn, expe=expe, exps=exps,
        accept=np.array(ACCEPT_BORDERS, np.int8),
        run_starts=run_starts,
        run_cells=np.array(run_cells, np.int64),
        run_kind=run_kind,
        trans=trans,
    )


def scan_shape(shape: Shape, spec: PatternSpec) -> tuple[np.ndarray, list[str]]:
    """Verdict byte per labeling (bit0 tiling, bit1 product) plus alphabet."""
    a = _shape_arrays(shape, spec)
    flags = scan_labelings(a["k"], a["nsym"], a["wbit"], a["nbit"], a["ebit"],
                           a["sbit"], a["hpairs"], a["vpairs"], a["expw"],
                           a["expn"], a["expe"], a["exps"], a["accept"],
                           a["run_starts"], a["run_cells"], a["run_kind"],
                           a["trans"])
    return flags, a["alphabet"]


def _decode(shape: Shape, alphabet: list[str], idx: int) -> GridWord:
    k = len(shape)
    nsym = len(alphabet)
    cells = {}
    for i, coord in enumerate(shape):
        cells[coord] = alphabet[(idx // (nsym ** (k - 1 - i))) % nsym]
    return GridWord(cells)


def enumerate_members(spec: PatternSpec, max_cells: int) -> list[GridWord]:
    """All pattern members with at most max_cells cells, anchored."""
    out = []
    shapes = enumerate_shapes(max_cells)
    for k in range(1, max_cells + 1):
        for shape in shapes[k]:
            flags, alphabet = scan_shape(shape, spec)
            for idx in np.nonzero(flags == 3)[0]:
                out.append(_decode(shape, alphabet, int(idx)))
    return out


# Single-cell attachments per tag: where the new cell goes relative to a
# host cell, keyed by the new cell's tag.
_ATTACH = {
    "2": (1, 0),    # below a south border
    "4": (0, -1),   # west of a west border
    "7": (-1, 0),   # above a north border
    "e": (0, 1),    # east of an east border
}

_GROW_TAGS = {"Tr": ("2", "4"), "RAT": ("2", "4", "7", "e"),
              "CRAT": ("2", "4", "7", "e")}

_RING_SEEDS = (
    GridWord({(0, 0): "4", (0, 1): "7", (1, 0): "2", (1, 1): "e"}),
    GridWord({(0, 0): "7", (0, 1): "e", (1, 0): "4", (1, 1): "2"}),
)


def random_member(spec: PatternSpec, cells: int, rng: np.random.Generator,
                  bounds: tuple[int, int] | None = None) -> GridWord:
    """One seeded random member with exactly `cells` cells.

    With bounds=(height, width) the word stays inside that box anchored
    at (0, 0).  Growth restarts when it corners itself against the
    bounds.
    """
    if spec.name == "Tr":
        if cells < 1:
            raise NoMemberError("trees need at least one cell")
    elif cells < 4:
        raise NoMemberError(f"{spec.name} needs at least 4 cells")
    if bounds is not None and cells > bounds[0] * bounds[1]:
        raise NoMemberError("cell budget exceeds the bounding box")
    for _ in range(64):
        word = _grow_once(spec, cells, rng, bounds)
        if word is not None:
            return word.anchored()
    raise NoMemberError(
        f"no {spec.name} member of {cells} cells under the given bounds")


def _grow_once(spec, cells, rng, bounds):
    if spec.name == "Tr":
        word = GridWord({(0, 0): "6"})
    else:
        word = _RING_SEEDS[int(rng.integers(len(_RING_SEEDS)))]
    tags = _GROW_TAGS[spec.name]
    while len(word) < cells:
        options = []
        grid = word.cells
        for (r, c), _ in sorted(grid.items()):
            for tag in tags:
                dr, dc = _ATTACH[tag]
                pos = (r + dr, c + dc)
                if pos not in grid:
                    options.append((pos, tag))
        rng.shuffle(options)
        placed = False
        for pos, tag in options:
            cand_cells = dict(grid)
            cand_cells[pos] = tag
            cand = GridWord(cand_cells)
            if not accepts_tiling(cand, spec.automaton):
                continue
            if bounds is not None:
                r0, c0, r1, c1 = cand.bounds()
                if r1 - r0 >= bounds[0] or c1 - c0 >= bounds[1]:
                    continue
            word = cand
            placed = True
            break
        if not placed:
            return None
    return word


def generate_words(spec: PatternSpec, max_cells: int, seed: int = 0,
                   mode: str = "enumerate") -> list[GridWord]:
    """Pattern members: all of them up to max_cells, or one random word
    of exactly max_cells cells."""
    if max_cells < 1:
        raise NoMemberError("max_cells must be at least 1")
    if mode == "enumerate":
        words = enumerate_members(spec, max_cells)
        if not words:
            raise NoMemberError(
                f"{spec.name} has no members with at most {max_cells} cells")
        return words
    if mode == "random":
        rng = np.random.default_rng(seed)
        return [random_member(spec, max_cells, rng)]
    raise ValueError(f"unknown mode {mode!r}")


def pattern_of(word: GridWord, spec: PatternSpec) -> None:
    if not accepts_tiling(word, spec.automaton):
        raise PatternViolationError(f"word is not in {spec.name}")
