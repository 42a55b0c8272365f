"""Conservative and elastic reconfiguration of tree words.

Conservative moves cut a subtree and paste it under another node,
preserving the cell multiset; the best move maximizes evaluated flow
over a brute-force scan (accelerated kernel).  Elastic steps rent or
release cells to maximize flow benefit minus rental costs.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .accel import _scan_moves_kernel, flow_eval
from .errors import MoveRejectedError, PatternViolationError
from .grid import Coord, GridWord
from .organism import (SourceSet, TreeTopology, derive_topology,
                       source_arrays, to_arrays)
from .patterns import TR, accepts_tiling

Bounds = tuple[int, int]  # (height, width), cells at rows 0..h-1, cols 0..w-1


@dataclass(frozen=True)
class Move:
    subtree_root: Coord
    anchor: Coord
    side: str  # "west" or "south"


_SIDE_FOR_TAG = {"4": "west", "2": "south"}


def subtree_coords(topology: TreeTopology, root: Coord) -> set[Coord]:
    out = set()
    stack = [root]
    while stack:
        node = stack.pop()
        out.add(node)
        stack.extend(topology.children[node])
    return out


def _target_cell(anchor: Coord, side: str) -> Coord:
    r, c = anchor
    return (r, c - 1) if side == "west" else (r + 1, c)


def _in_bounds(cells, bounds: Bounds | None) -> bool:
    if bounds is None:
        return True
    h, w = bounds
    return all(0 <= r < h and 0 <= c < w for r, c in cells)


def _moved_cells(word: GridWord, topology: TreeTopology,
                 move: Move) -> dict[Coord, str] | None:
    """Cells of the word after the move, or None when invalid."""
    cells = word.cells
    tag = cells.get(move.subtree_root)
    if tag is None or _SIDE_FOR_TAG.get(tag) != move.side:
        return None
    if move.anchor not in cells:
        return None
    sub = subtree_coords(topology, move.subtree_root)
    if move.anchor in sub:
        return None
    tr, tc = _target_cell(move.anchor, move.side)
    dr = tr - move.subtree_root[0]
    dc = tc - move.subtree_root[1]
    if dr == 0 and dc == 0:
        return None
    rest = {coord: t for coord, t in cells.items() if coord not in sub}
    new = dict(rest)
    for r, c in sub:
        pos = (r + dr, c + dc)
        if pos in rest:
            return None
        new[pos] = cells[(r, c)]
    return new


def enumerate_moves(word: GridWord, bounds: Bounds | None = None) -> list[Move]:
    """All valid moves, lexicographic by (subtree root, anchor)."""
    topology = derive_topology(word)
    cells = word.cells
    moves = []
    for sub in sorted(cells):
        tag = cells[sub]
        if tag == "6":
            continue
        side = _SIDE_FOR_TAG[tag]
        for anchor in sorted(cells):
            move = Move(sub, anchor, side)
            new = _moved_cells(word, topology, move)
            if new is None or not _in_bounds(new, bounds):
                continue
            cand = GridWord(new)
            if accepts_tiling(cand, TR.automaton):
                moves.append(move)
    return moves


def apply_move(word: GridWord, move: Move) -> GridWord:
    word2, _ = apply_move_mapped(word, move)
    return word2


def apply_move_mapped(word: GridWord, move: Move) -> tuple[GridWord, dict[Coord, Coord]]:
    """Apply a move returning the coordinate remap of the shifted cells."""
    topology = derive_topology(word)
    new = _moved_cells(word, topology, move)
    if new is None:
        raise MoveRejectedError(f"invalid move {move}")
    cand = GridWord(new)
    if not accepts_tiling(cand, TR.automaton):
        raise MoveRejectedError(f"move {move} leaves the tree pattern")
    sub = subtree_coords(topology, move.subtree_root)
    tr, tc = _target_cell(move.anchor, move.side)
    dr = tr - move.subtree_root[0]
    dc = tc - move.subtree_root[1]
    remap = {(r, c): (r + dr, c + dc) for r, c in sub}
    return cand, remap


def random_move(word: GridWord, rng: np.random.Generator,
                bounds: Bounds | None = None) -> Move | None:
    """One uniformly chosen valid move (rejection sampling with an
    exhaustive fallback); None when the word admits no move."""
    topology = derive_topology(word)
    cells = sorted(word.cells.items())
    movable = [(coord, tag) for coord, tag in cells if tag != "6"]
    if not movable:
        return None
    for _ in range(64):
        sub, tag = movable[int(rng.integers(len(movable)))]
        anchor = cells[int(rng.integers(len(cells)))][0]
        move = Move(sub, anchor, _SIDE_FOR_TAG[tag])
        new = _moved_cells(word, topology, move)
        if new is None or not _in_bounds(new, bounds):
            continue
        if accepts_tiling(GridWord(new), TR.automaton):
            return move
    moves = enumerate_moves(word, bounds)
    if not moves:
        return None
    return moves[int(rng.integers(len(moves)))]


def _desc_matrix(topology: TreeTopology, index: dict[Coord, int]) -> np.ndarray:
    n = len(index)
    desc = np.zeros((n, n), np.uint8)
    for coord in topology.coords():
        i = index[coord]
        for node in subtree_coords(topology, coord):
            desc[i, index[node]] = 1
    return desc


def _grid_frame(word: GridWord, bounds: Bounds | None):
    r0, c0, r1, c1 = word.bounds()
    if bounds is not None:
        h, w = bounds
        if r0 < 0 or c0 < 0 or r1 >= h or c1 >= w:
            raise ValueError("word exceeds the given bounds")
        return 0, 0, h, w
    margin = len(word)
    return r0 - margin, c0 - margin, (r1 - r0 + 1) + 2 * margin, \
        (c1 - c0 + 1) + 2 * margin


def predicted_flow(word: GridWord, sources: SourceSet, fmax: float) -> float:
    """Root flow with no blocking, via the flow kernel."""
    arrays = to_arrays(derive_topology(word))
    src_r, src_c, src_p = source_arrays(sources)
    _, _, root_flow = flow_eval(arrays.rows, arrays.cols, arrays.leaf_idx,
                                src_r, src_c, src_p, arrays.order,
                                arrays.parent,
                                np.zeros(len(arrays.rows), np.uint8),
                                float(fmax))
    return root_flow


def best_move(word: GridWord, sources: SourceSet, fmax: float,
              bounds: Bounds | None = None) -> tuple[Move, float] | None:
    """Strictly improving move with maximal predicted flow, or None."""
    topology = derive_topology(word)
    arrays = to_arrays(topology)
    desc = _desc_matrix(topology, arrays.index)
    gr0, gc0, h, w = _grid_frame(word, bounds)
    grid = np.zeros((h, w), np.int64)
    ids = np.full((h, w), -1, np.int64)
    for coord, i in arrays.index.items():
        grid[coord[0] - gr0, coord[1] - gc0] = arrays.tags[i]
        ids[coord[0] - gr0, coord[1] - gc0] = i
    src_r, src_c, src_p = source_arrays(sources)
    si, ai, flow, _ = _scan_moves_kernel(arrays.rows, arrays.cols, arrays.tags,
                                         arrays.parent, desc, grid, ids,
                                         gr0, gc0, src_r, src_c, src_p,
                                         float(fmax))
    if si < 0:
        return None
    coords = topology.coords()
    sub = coords[si]
    tag = word.tag_at(sub)
    return Move(sub, coords[ai], _SIDE_FOR_TAG[tag]), float(flow)


def reconfigure_until_stable(word: GridWord, sources: SourceSet, fmax: float,
                             max_steps: int, bounds: Bounds | None = None
                             ) -> tuple[GridWord, int]:
    steps = 0
    while steps < max_steps:
        found = best_move(word, sources, fmax, bounds)
        if found is None:
            break
        word = apply_move(word, found[0])
        steps += 1
    return word, steps


# ---------------------------------------------------------------------------
# Elastic reconfiguration
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class ElasticConfig:
    benefit_per_unit_flow: float
    node_cost: float | tuple[tuple[str, float], ...] = 1.0
    rent_limit: int | tuple[tuple[str, int], ...] = 0

    def cost_of(self, tag: str) -> float:
        if isinstance(self.node_cost, (int, float)):
            return float(self.node_cost)
        return dict(self.node_cost).get(tag, 0.0)

    def limit_allows(self, rented: "RentedSet", tag: str) -> bool:
        if isinstance(self.rent_limit, int):
            return rented.count() + 1 <= self.rent_limit
        return rented.count(tag) + 1 <= dict(self.rent_limit).get(tag, 0)


@dataclass(frozen=True)
class RentedSet:
    cells: frozenset[tuple[Coord, str]] = frozenset()

    def coords(self) -> frozenset[Coord]:
        return frozenset(coord for coord, _ in self.cells)

    def count(self, tag: str | None = None) -> int:
        if tag is None:
            return len(self.cells)
        return sum(1 for _, t in self.cells if t == tag)

    def total_cost(self, cfg: ElasticConfig) -> float:
        return sum(cfg.cost_of(t) for _, t in sorted(self.cells))

    def add(self, coord: Coord, tag: str) -> "RentedSet":
        return RentedSet(self.cells | {(coord, tag)})

    def remove(self, coord: Coord) -> "RentedSet":
        return RentedSet(frozenset((c, t) for c, t in self.cells if c != coord))

    def remap(self, mapping: dict[Coord, Coord]) -> "RentedSet":
        return RentedSet(frozenset((mapping.get(c, c), t)
                                   for c, t in self.cells))


def elastic_benefit(avg_flow: float, rented: RentedSet,
                    cfg: ElasticConfig) -> float:
    return avg_flow * cfg.benefit_per_unit_flow - rented.total_cost(cfg)


def elastic_step(word: GridWord, rented: RentedSet, sources: SourceSet,
                 fmax: float, cfg: ElasticConfig,
                 bounds: Bounds | None = None) -> tuple[GridWord, RentedSet]:
    word2, rented2, _, _ = elastic_step_full(word, rented, sources, fmax,
                                             cfg, bounds)
    return word2, rented2


def elastic_step_full(word: GridWord, rented: RentedSet, sources: SourceSet,
                      fmax: float, cfg: ElasticConfig,
                      bounds: Bounds | None = None):
    """Greedy single change: rent a cell next to a leaf, rent with a
    subtree shift, or release a rented leaf.  Returns (word, rented,
    coordinate remap, event description)."""
    if not accepts_tiling(word, TR.automaton):
        raise PatternViolationError("word is not a tree word")
    topology = derive_topology(word)
    cells = word.cells
    base = elastic_benefit(predicted_flow(word, sources, fmax), rented, cfg)
    best = None  # (benefit, order_key, word, rented, remap, event)
    order = 0

    def consider(benefit, new_word, new_rented, remap, event):
        nonlocal best, order
        key = (benefit, -order)
        if best is None or key > (best[0], -best[1]):
            best = (benefit, order, new_word, new_rented, remap, event)
        order += 1

    def try_insert(pos: Coord, tag: str, remap: dict[Coord, Coord],
                   moved: dict[Coord, str], event: str):
        if not cfg.limit_allows(rented, tag):
            return
        new_cells = dict(moved)
        new_cells[pos] = tag
        if not _in_bounds(new_cells, bounds):
            return
        cand = GridWord(new_cells)
        if not accepts_tiling(cand, TR.automaton):
            return
        new_rented = rented.remap(remap).add(pos, tag)
        benefit = elastic_benefit(predicted_flow(cand, sources, fmax),
                                  new_rented, cfg)
        if benefit > base:
            consider(benefit, cand, new_rented, remap, event)

    for leaf in sorted(topology.leaves):
        r, c = leaf
        if (r, c - 1) not in cells:
            try_insert((r, c - 1), "4", {}, cells, f"rent:4@{r}:{c - 1}")
        if (r + 1, c) not in cells:
            try_insert((r + 1, c), "2", {}, cells, f"rent:2@{r + 1}:{c}")

    for node in sorted(cells):
        tag = cells[node]
        if tag == "6":
            continue
        dr, dc = (0, -1) if tag == "4" else (1, 0)
        sub = subtree_coords(topology, node)
        rest = {coord: t for coord, t in cells.items() if coord not in sub}
        moved = dict(rest)
        ok = True
        for sr, sc in sub:
            pos = (sr + dr, sc + dc)
            if pos in rest:
                ok = False
                break
            moved[pos] = cells[(sr, sc)]
        if not ok:
            continue
        remap = {(sr, sc): (sr + dr, sc + dc) for sr, sc in sub}
        try_insert(node, tag, remap, moved,
                   f"rent-shift:{tag}@{node[0]}:{node[1]}")

    for coord, tag in sorted(rented.cells):
        if coord not in cells or topology.children.get(coord):
            continue
        new_cells = dict(cells)
        del new_cells[coord]
        if not new_cells:
            continue
        cand = GridWord(new_cells)
        if not accepts_tiling(cand, TR.automaton):
            continue
        new_rented = rented.remove(coord)
        benefit = elastic_benefit(predicted_flow(cand, sources, fmax),
                                  new_rented, cfg)
        if benefit > base:
            consider(benefit, cand, new_rented, {},
                     f"release:{tag}@{coord[0]}:{coord[1]}")

    if best is None:
        return word, rented, {}, None
    _, _, new_word, new_rented, remap, event = best
    return new_word, new_rented, remap, event
