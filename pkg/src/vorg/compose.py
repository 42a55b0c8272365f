"""General two-word composition under border constraints.

`compose(v1, constraint, v2)` enumerates every offset of v2 against v1
whose bounding boxes touch, keeps the non-overlapping placements whose
union is connected, and filters by a boolean formula over border atoms
(selector, relation, selector).  Relations: `=` identifies equal border
element sets, `<` requires inclusion, `#` non-empty intersection.  With
`strict` set, the two words may share no border elements beyond those
the satisfied atoms pin down.
"""

from __future__ import annotations

from dataclasses import dataclass

from .contour import (BorderAddress, BorderInterval, CORNER_TABLE,
                      trace_cycles)
from .grid import GridWord

Point = tuple[int, int]
Edge = tuple[Point, Point]  # endpoints sorted


def _edge(a: Point, b: Point) -> Edge:
    return (a, b) if a <= b else (b, a)


def side_edges(word: GridWord, side: str) -> set[Edge]:
    """Exposed border edges facing one compass side."""
    cells = word.coords()
    out = set()
    for r, c in cells:
        if side == "n" and (r - 1, c) not in cells:
            out.add(_edge((r, c), (r, c + 1)))
        elif side == "s" and (r + 1, c) not in cells:
            out.add(_edge((r + 1, c), (r + 1, c + 1)))
        elif side == "w" and (r, c - 1) not in cells:
            out.add(_edge((r, c), (r + 1, c)))
        elif side == "e" and (r, c + 1) not in cells:
            out.add(_edge((r, c + 1), (r + 1, c + 1)))
    return out


class Boundary:
    """Contour-indexed view of a word's border, in absolute coordinates."""

    def __init__(self, word: GridWord):
        self.word = word
        self.cycles = trace_cycles(word)
        self.points: set[Point] = set()
        self.edges: set[Edge] = set()
        self._edge_addr: dict[Edge, tuple[int, int]] = {}
        self._corners: list[list[tuple[int, str, str]]] = []
        for comp, (letters, pts) in enumerate(self.cycles):
            n = len(pts)
            corners = []
            for i in range(n):
                self.points.add(pts[i])
                self._edge_addr[_edge(pts[i], pts[(i + 1) % n])] = (comp, i)
                cls = CORNER_TABLE.get((letters[i - 1], letters[i]))
                if cls:
                    corners.append((i, cls[0], cls[1]))
            self._corners.append(corners)
        self.edges = set(self._edge_addr)
        self._side_cache: dict[str, set[Edge]] = {}

    def side(self, name: str) -> set[Edge]:
        if name not in self._side_cache:
            self._side_cache[name] = side_edges(self.word, name)
        return self._side_cache[name]

    def point_near(self, comp: int, idx: int, k: int, compass: str,
                   kind: str | None) -> bool:
        n = len(self.cycles[comp][1])
        idx %= n
        for j, cmp_, knd in self._corners[comp]:
            if cmp_ != compass or (kind is not None and knd != kind):
                continue
            d = abs(idx - j)
            if min(d, n - d) == k:
                return True
        return False

    def edge_near(self, edge: Edge, k: int, compass: str,
                  kind: str | None) -> bool:
        comp, i = self._edge_addr[edge]
        return (self.point_near(comp, i, k, compass, kind)
                or self.point_near(comp, i + 1, k, compass, kind))

    def interval_edges(self, interval: BorderInterval) -> set[Edge]:
        letters, pts = self.cycles[interval.component]
        n = len(pts)
        start = interval.start % n
        end = interval.end % n
        out = set()
        i = start
        while i != end:
            out.add(_edge(pts[i], pts[(i + 1) % n]))
            i = (i + 1) % n
        return out

    def address_point(self, address: BorderAddress) -> Point:
        pts = self.cycles[address.component][1]
        return pts[address.index % len(pts)]

    def corner_points(self, compass: str, kind: str | None) -> set[Point]:
        out = set()
        for comp, corners in enumerate(self._corners):
            pts = self.cycles[comp][1]
            for i, cmp_, knd in corners:
                if cmp_ == compass and (kind is None or knd == kind):
                    out.add(pts[i])
        return out


@dataclass(frozen=True)
class Selector:
    """Border elements of one operand (1 or 2)."""

    operand: int
    side: str | None = None
    interval: BorderInterval | None = None
    point: BorderAddress | None = None
    corner: str | None = None
    near: tuple[tuple[int, str], ...] = ()

    def eval(self, boundary: Boundary) -> tuple[set[Point], set[Edge]]:
        points: set[Point] = set()
        edges: set[Edge] = set()
        if self.side is not None:
            edges = set(boundary.side(self.side))
        elif self.interval is not None:
            edges = boundary.interval_edges(self.interval)
        elif self.point is not None:
            points = {boundary.address_point(self.point)}
        elif self.corner is not None:
            compass, _, kind = self.corner.partition("-")
            points = boundary.corner_points(compass, kind or None)
        else:
            edges = set(boundary.edges)
        for k, cls in self.near:
            compass, _, kind = cls.partition("-")
            kind = kind or None
            edges = {e for e in edges
                     if boundary.edge_near(e, k, compass, kind)}
            points = {p for p in points
                      if any(boundary.point_near(comp, i, k, compass, kind)
                             for comp, i in _point_addresses(boundary, p))}
        return points, edges


def _point_addresses(boundary: Boundary, point: Point):
    for comp, (_, pts) in enumerate(boundary.cycles):
        for i, p in enumerate(pts):
            if p == point:
                yield comp, i


@dataclass(frozen=True)
class Atom:
    left: Selector
    rel: str  # '=', '<', '#'
    right: Selector


@dataclass(frozen=True)
class Not:
    inner: "Formula"


@dataclass(frozen=True)
class And:
    parts: tuple["Formula", ...]


@dataclass(frozen=True)
class Or:
    parts: tuple["Formula", ...]


Formula = Atom | Not | And | Or


@dataclass(frozen=True)
class CompositionConstraint:
    formula: Formula
    strict: bool = False


def _shift_points(points: set[Point], dr: int, dc: int) -> set[Point]:
    return {(r + dr, c + dc) for r, c in points}


def _shift_edges(edges: set[Edge], dr: int, dc: int) -> set[Edge]:
    return {((a[0] + dr, a[1] + dc), (b[0] + dr, b[1] + dc))
            for a, b in edges}


def _eval_formula(formula: Formula, b1: Boundary, b2: Boundary,
                  dr: int, dc: int):
    """Returns (holds, used points, used edges) in v1's frame."""
    if isinstance(formula, Atom):
        lp, le = _selector_abs(formula.left, b1, b2, dr, dc)
        rp, re_ = _selector_abs(formula.right, b1, b2, dr, dc)
        if formula.rel == "=":
            # Identification: some selected element of one side coincides
            # with one of the other.  Selectors may offer several
            # candidates; each placement realizes one of them.
            shared_p = lp & rp
            shared_e = le & re_
            return bool(shared_p or shared_e), shared_p, shared_e
        if formula.rel == "<":
            ok = (lp or le) and lp <= rp and le <= re_
            return bool(ok), set(lp), set(le)
        if formula.rel == "#":
            shared_p = lp & rp
            shared_e = le & re_
            return bool(shared_p or shared_e), shared_p, shared_e
        raise ValueError(f"unknown relation {formula.rel!r}")
    if isinstance(formula, Not):
        ok, _, _ = _eval_formula(formula.inner, b1, b2, dr, dc)
        return (not ok), set(), set()
    if isinstance(formula, And):
        points: set[Point] = set()
        edges: set[Edge] = set()
        for part in formula.parts:
            ok, p, e = _eval_formula(part, b1, b2, dr, dc)
            if not ok:
                return False, set(), set()
            points |= p
            edges |= e
        return True, points, edges
    if isinstance(formula, Or):
        points, edges = set(), set()
        any_ok = False
        for part in formula.parts:
            ok, p, e = _eval_formula(part, b1, b2, dr, dc)
            if ok:
                any_ok = True
                points |= p
                edges |= e
        return any_ok, points, edges
    raise TypeError(f"not a formula: {formula!r}")


def _selector_abs(sel: Selector, b1: Boundary, b2: Boundary, dr: int, dc: int):
    if sel.operand == 1:
        return sel.eval(b1)
    points, edges = sel.eval(b2)
    return _shift_points(points, dr, dc), _shift_edges(edges, dr, dc)


_BOUNDARY_CACHE: dict[GridWord, Boundary] = {}


def _boundary(word: GridWord) -> Boundary:
    b = _BOUNDARY_CACHE.get(word)
    if b is None:
        if len(_BOUNDARY_CACHE) > 4096:
            _BOUNDARY_CACHE.clear()
        b = _BOUNDARY_CACHE[word] = Boundary(word)
    return b


def _first_positive_atom(formula: Formula):
    if isinstance(formula, Atom):
        return formula
    if isinstance(formula, And):
        for part in formula.parts:
            found = _first_positive_atom(part)
            if found is not None:
                return found
    return None


def _pinned_offsets(atom: Atom, b1: Boundary, b2: Boundary):
    """Candidate offsets aligning elements of a positive atom; a superset
    of the satisfiable ones, or None when no pinning is possible."""
    if atom.left.operand == atom.right.operand:
        return None
    lp, le = atom.left.eval(b1 if atom.left.operand == 1 else b2)
    rp, re_ = atom.right.eval(b1 if atom.right.operand == 1 else b2)
    if atom.left.operand == 2:
        (lp, le), (rp, re_) = (rp, re_), (lp, le)
    # lp/le now belong to v1 (fixed), rp/re_ to v2 (moving).
    if not (lp or le) or not (rp or re_):
        return []
    offsets = set()
    for a1, _ in le:
        for a2, _ in re_:
            offsets.add((a1[0] - a2[0], a1[1] - a2[1]))
    for p1 in lp:
        for p2 in rp:
            offsets.add((p1[0] - p2[0], p1[1] - p2[1]))
    return sorted(offsets)


def compose(v1: GridWord, constraint: CompositionConstraint,
            v2: GridWord) -> list[GridWord]:
    """All valid placements, as words in v1's coordinate frame."""
    b1 = _boundary(v1)
    b2 = _boundary(v2)
    r1a, c1a, r1b, c1b = v1.bounds()
    r2a, c2a, r2b, c2b = v2.bounds()
    cells1 = v1.cells
    coords1 = v1.coords()
    out: list[GridWord] = []
    seen: set[frozenset] = set()
    atom = _first_positive_atom(constraint.formula)
    offsets = _pinned_offsets(atom, b1, b2) if atom is not None else None
    if offsets is None:
        offsets = [(dr, dc)
                   for dr in range(r1a - r2b - 1, r1b - r2a + 2)
                   for dc in range(c1a - c2b - 1, c1b - c2a + 2)]
    for dr, dc in offsets:
        placed = {(r + dr, c + dc): t for (r, c), t in v2.cells.items()}
        if any(p in coords1 for p in placed):
            continue
        shared_edges = {e for e in _shift_edges(b2.edges, dr, dc)
                        if e in b1.edges}
        if not shared_edges:
            continue  # union would be disconnected
        ok, used_p, used_e = _eval_formula(constraint.formula, b1, b2, dr, dc)
        if not ok:
            continue
        if constraint.strict:
            shared_points = b1.points & _shift_points(b2.points, dr, dc)
            allowed_p = set(used_p)
            for a, b in used_e:
                allowed_p.add(a)
                allowed_p.add(b)
            if not (shared_edges <= used_e and shared_points <= allowed_p):
                continue
        union = dict(cells1)
        union.update(placed)
        key = frozenset(union.items())
        if key not in seen:
            seen.add(key)
            out.append(GridWord(union))
    return out
