"""Tree collector semantics on tree words.

Cells forward flow toward the root: a 2-cell to its north neighbour, a
4-cell to its east neighbour, the 6-cell is the root.  Leaves capture
from sources, attenuated by squared Manhattan distance plus one; a
source serves competing leaves proportionally, never beyond its power.
Per-node throughput is capped at fmax, and a blocked node forwards
nothing during a reconfiguration penalty window.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import PatternViolationError
from .grid import Coord, GridWord
from .patterns import TR, accepts_tiling

INF = math.inf


@dataclass(frozen=True)
class Source:
    pos: Coord
    power: float

    def __post_init__(self):
        if self.power < 0:
            raise ValueError("source power must be non-negative")


@dataclass(frozen=True)
class SourceSet:
    sources: tuple[Source, ...] = ()
    ids: tuple[int, ...] = ()

    def __post_init__(self):
        if not self.ids and self.sources:
            object.__setattr__(self, "ids", tuple(range(len(self.sources))))
        if len(set(self.ids)) != len(self.ids):
            raise ValueError("source ids must be unique")

    def __iter__(self):
        return iter(self.sources)

    def __len__(self):
        return len(self.sources)

    def total_power(self) -> float:
        return sum(s.power for s in self.sources)

    def add(self, source: Source) -> "SourceSet":
        next_id = max(self.ids, default=-1) + 1
        return SourceSet(self.sources + (source,), self.ids + (next_id,))

    def remove(self, source_id: int) -> "SourceSet":
        keep = [(s, i) for s, i in zip(self.sources, self.ids) if i != source_id]
        if len(keep) == len(self.sources):
            raise KeyError(source_id)
        return SourceSet(tuple(s for s, _ in keep), tuple(i for _, i in keep))

    def modify(self, source_id: int, power: float) -> "SourceSet":
        if source_id not in self.ids:
            raise KeyError(source_id)
        return SourceSet(
            tuple(Source(s.pos, power) if i == source_id else s
                  for s, i in zip(self.sources, self.ids)), self.ids)


@dataclass(frozen=True)
class TreeTopology:
    """Parent/children relation of a tree word, nodes sorted by coordinate."""

    nodes: tuple[tuple[Coord, str], ...]
    parent: dict[Coord, Coord | None] = field(hash=False)
    children: dict[Coord, tuple[Coord, ...]] = field(hash=False)
    root: Coord = (0, 0)
    leaves: frozenset[Coord] = frozenset()

    def coords(self) -> list[Coord]:
        return [coord for coord, _ in self.nodes]


def derive_topology(word: GridWord) -> TreeTopology:
    """Topology per the forwarding directions; requires a tree word."""
    if not accepts_tiling(word, TR.automaton):
        raise PatternViolationError("word is not a tree word")
    cells = word.cells
    parent: dict[Coord, Coord | None] = {}
    children: dict[Coord, list[Coord]] = {coord: [] for coord in cells}
    root = None
    for (r, c), tag in cells.items():
        if tag == "2":
            parent[(r, c)] = (r - 1, c)
        elif tag == "4":
            parent[(r, c)] = (r, c + 1)
        else:
            parent[(r, c)] = None
            root = (r, c)
    for coord, par in parent.items():
        if par is not None:
            children[par].append(coord)
    ordered = {}
    for coord in cells:
        r, c = coord
        kids = []
        if (r, c - 1) in cells and parent[(r, c - 1)] == coord:
            kids.append((r, c - 1))  # west child, a 4-cell
        if (r + 1, c) in cells and parent[(r + 1, c)] == coord:
            kids.append((r + 1, c))  # south child, a 2-cell
        ordered[coord] = tuple(kids)
    leaves = frozenset(coord for coord, kids in ordered.items() if not kids)
    nodes = tuple(sorted(cells.items()))
    return TreeTopology(nodes, parent, ordered, root, leaves)


def manhattan(a: Coord, b: Coord) -> int:
    return abs(a[0] - b[0]) + abs(a[1] - b[1])


def capture_demand(leaf: Coord, sources: SourceSet) -> float:
    """Flow a leaf could capture: sum of power over (distance + 1)^2."""
    total = 0.0
    for src in sources:
        d = manhattan(leaf, src.pos)
        total += src.power / ((d + 1.0) * (d + 1.0))
    return total


def allocate_capacity(leaves, sources: SourceSet) -> dict[Coord, float]:
    """Served flow per leaf.  Each source serves demands proportionally,
    scaled down when the combined demand exceeds its power."""
    order = sorted(leaves)
    served = {leaf: 0.0 for leaf in order}
    for src in sources:
        demands = []
        total = 0.0
        for leaf in order:
            d = manhattan(leaf, src.pos)
            dem = src.power / ((d + 1.0) * (d + 1.0))
            demands.append(dem)
            total += dem
        scale = src.power / total if total > src.power else 1.0
        for leaf, dem in zip(order, demands):
            served[leaf] += dem * scale
    return served


@dataclass(frozen=True)
class FlowReport:
    per_leaf_served: dict[Coord, float] = field(hash=False)
    per_node_throughput: dict[Coord, float] = field(hash=False)
    root_flow: float = 0.0


def _depth_order(topology: TreeTopology) -> list[Coord]:
    depth = {}
    for coord in topology.coords():
        d = 0
        node = coord
        while topology.parent[node] is not None:
            node = topology.parent[node]
            d += 1
        depth[coord] = d
    return sorted(topology.coords(), key=lambda c: (-depth[c], c))


def evaluate_flow(topology: TreeTopology, sources: SourceSet, fmax: float,
                  blocked=frozenset()) -> FlowReport:
    """Steady-state bottom-up fold with the per-node cap."""
    if not fmax > 0:
        raise ValueError("fmax must be positive")
    blocked = frozenset(blocked)
    served = allocate_capacity(topology.leaves, sources)
    acc = {coord: 0.0 for coord in topology.coords()}
    throughput = {}
    for coord in _depth_order(topology):
        t = acc[coord] + served.get(coord, 0.0)
        if t > fmax:
            t = fmax
        if coord in blocked:
            t = 0.0
        throughput[coord] = t
        par = topology.parent[coord]
        if par is not None:
            acc[par] += t
    return FlowReport(served, throughput, throughput[topology.root])


@dataclass(frozen=True)
class TreeTerm:
    """Structure-detection term: node id with west and south subterms."""

    node: Coord
    west: "TreeTerm | None" = None
    south: "TreeTerm | None" = None

    def to_tuple(self):
        return (self.node,
                self.west.to_tuple() if self.west else None,
                self.south.to_tuple() if self.south else None)

    def __str__(self):
        w = str(self.west) if self.west else "nil"
        s = str(self.south) if self.south else "nil"
        return f"Tree({self.node[0]},{self.node[1]};{w},{s})"


def detect_structure(topology: TreeTopology) -> TreeTerm:
    """Bottom-up fold mirroring the detection message pass."""

    def build(coord: Coord) -> TreeTerm:
        r, c = coord
        west = south = None
        for kid in topology.children[coord]:
            if kid == (r, c - 1):
                west = build(kid)
            else:
                south = build(kid)
        return TreeTerm(coord, west, south)

    return build(topology.root)


def term_to_word(term: TreeTerm) -> GridWord:
    """Rebuild the word from a structure term (round trip helper)."""
    cells = {}

    def visit(t: TreeTerm, tag: str):
        cells[t.node] = tag
        if t.west:
            visit(t.west, "4")
        if t.south:
            visit(t.south, "2")

    visit(term, "6")
    return GridWord(cells)


# ---------------------------------------------------------------------------
# Flat array form consumed by the accel kernels.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class TopologyArrays:
    rows: np.ndarray
    cols: np.ndarray
    tags: np.ndarray
    parent: np.ndarray
    order: np.ndarray       # deepest first, coordinate order within a depth
    leaf_idx: np.ndarray
    index: dict[Coord, int] = field(hash=False)


_TAG_NUM = {"2": 2, "4": 4, "5": 5, "6": 6, "7": 7, "e": 14}


def to_arrays(topology: TreeTopology) -> TopologyArrays:
    coords = topology.coords()
    index = {coord: i for i, coord in enumerate(coords)}
    n = len(coords)
    rows = np.array([r for r, _ in coords], np.int64)
    cols = np.array([c for _, c in coords], np.int64)
    tags = np.array([_TAG_NUM[tag] for _, tag in topology.nodes], np.int64)
    parent = np.full(n, -1, np.int64)
    for coord, par in topology.parent.items():
        if par is not None:
            parent[index[coord]] = index[par]
    order = np.array([index[c] for c in _depth_order(topology)], np.int64)
    leaf_idx = np.array(sorted(index[c] for c in topology.leaves), np.int64)
    return TopologyArrays(rows, cols, tags, parent, order, leaf_idx, index)


def source_arrays(sources: SourceSet):
    rows = np.array([s.pos[0] for s in sources], np.int64)
    cols = np.array([s.pos[1] for s in sources], np.int64)
    power = np.array([s.power for s in sources], np.float64)
    return rows, cols, power
