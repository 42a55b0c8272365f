"""Boundary contours of grid words, with holes.

The external contour is traced clockwise from P0, the left-most corner
of the word's top row; hole contours run counterclockwise from the
left-most corner of the hole's top row.  Both keep the word on the
right-hand side of the direction of travel, so one letter-pair table
classifies corners on every component.  Holes are bounded 4-connected
components of the empty cells; at diagonal pinch points the trace takes
the left turn, which keeps each empty region's boundary in one cycle.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import AddressError, WordParseError
from .grid import Coord, GridWord

Point = tuple[int, int]

# Movement of each contour letter in (row, col).
STEP = {"r": (0, 1), "d": (1, 0), "l": (0, -1), "u": (-1, 0)}
LEFT_TURN = {"r": "u", "d": "r", "l": "d", "u": "l"}

# prev letter, next letter -> corner class; traversal keeps the word on
# the right, so the same table serves external and hole components.
CORNER_TABLE = {
    ("u", "r"): ("nw", "land"),
    ("r", "d"): ("ne", "land"),
    ("d", "l"): ("se", "land"),
    ("l", "u"): ("sw", "land"),
    ("r", "u"): ("nw", "golf"),
    ("d", "r"): ("ne", "golf"),
    ("l", "d"): ("se", "golf"),
    ("u", "l"): ("sw", "golf"),
}


@dataclass(frozen=True)
class BorderAddress:
    component: int  # 0 external, i >= 1 the i-th hole
    index: int      # point position, modulo the component length


@dataclass(frozen=True)
class BorderInterval:
    component: int
    start: int
    end: int


@dataclass(frozen=True)
class NfContour:
    external: str
    holes: tuple[tuple[str, int, int], ...] = ()  # (letters, offset_x, offset_y)

    def component(self, comp: int) -> str:
        if comp == 0:
            return self.external
        if 1 <= comp <= len(self.holes):
            return self.holes[comp - 1][0]
        raise AddressError(f"no contour component {comp}")

    def __str__(self) -> str:
        return format_contour(self)


def _boundary_edges(cells: frozenset[Coord]) -> dict[Point, list[str]]:
    """Outgoing boundary edges per start point, directed word-on-right."""
    out: dict[Point, list[str]] = {}
    for r, c in cells:
        if (r - 1, c) not in cells:
            out.setdefault((r, c), []).append("r")
        if (r, c + 1) not in cells:
            out.setdefault((r, c + 1), []).append("d")
        if (r + 1, c) not in cells:
            out.setdefault((r + 1, c + 1), []).append("l")
        if (r, c - 1) not in cells:
            out.setdefault((r + 1, c), []).append("u")
    return out


def trace_cycles(word: GridWord) -> list[tuple[str, list[Point]]]:
    """All boundary cycles in absolute coordinates, external first, then
    holes sorted by their start point; each cycle rotated to start at its
    lexicographically smallest point."""
    edges = _boundary_edges(word.coords())
    unused: set[tuple[Point, str]] = {(p, d) for p, ds in edges.items() for d in ds}
    cycles = []
    while unused:
        start = min(unused)
        pts = []
        letters = []
        point, letter = start
        while True:
            pts.append(point)
            letters.append(letter)
            unused.discard((point, letter))
            dr, dc = STEP[letter]
            point = (point[0] + dr, point[1] + dc)
            nxt = edges[point]
            # At a diagonal pinch two continuations exist; the left turn
            # keeps each empty region's boundary in its own cycle.
            letter = nxt[0] if len(nxt) == 1 else LEFT_TURN[letter]
            if (point, letter) == start:
                break
        k = pts.index(min(pts))
        cycles.append(("".join(letters[k:] + letters[:k]), pts[k:] + pts[:k]))
    top_left = min(cy[1][0] for cy in cycles)
    cycles.sort(key=lambda cy: (cy[1][0] != top_left, cy[1][0]))
    return cycles


def contour_of(word: GridWord) -> NfContour:
    cycles = trace_cycles(word)
    ext_letters, ext_pts = cycles[0]
    p0 = ext_pts[0]
    holes = []
    for letters, pts in cycles[1:]:
        holes.append((letters, pts[0][1] - p0[1], pts[0][0] - p0[0]))
    holes.sort(key=lambda h: (h[1], h[2]))
    return NfContour(ext_letters, tuple(holes))


def component_points(contour: NfContour, comp: int) -> list[Point]:
    """Points of one component, P0 of the word at (0, 0)."""
    letters = contour.component(comp)
    if comp == 0:
        point = (0, 0)
    else:
        _, x, y = contour.holes[comp - 1]
        point = (y, x)
    pts = [point]
    for letter in letters[:-1]:
        dr, dc = STEP[letter]
        point = (point[0] + dr, point[1] + dc)
        pts.append(point)
    return pts


def rasterize(contour: NfContour) -> frozenset[Coord]:
    """Cells enclosed by the external contour minus the holes, relative
    to P0 at point (0, 0)."""
    vertical: dict[int, list[int]] = {}  # cell row -> column lines crossed
    for comp in range(len(contour.holes) + 1):
        pts = component_points(contour, comp)
        letters = contour.component(comp)
        for pt, letter in zip(pts, letters):
            if letter == "d":
                vertical.setdefault(pt[0], []).append(pt[1])
            elif letter == "u":
                vertical.setdefault(pt[0] - 1, []).append(pt[1])
    cells = set()
    for row, xs in vertical.items():
        xs.sort()
        for i in range(0, len(xs), 2):
            for col in range(xs[i], xs[i + 1]):
                cells.add((row, col))
    return frozenset(cells)


def classify_border_point(contour: NfContour, address: BorderAddress):
    """Corner class of a border point: (compass, kind) or None when the
    point lies inside a straight border run."""
    letters = contour.component(address.component)
    i = address.index % len(letters)
    return CORNER_TABLE.get((letters[i - 1], letters[i]))


def corner_indices(contour: NfContour, comp: int, compass: str,
                   kind: str | None = None) -> list[int]:
    letters = contour.component(comp)
    out = []
    for i in range(len(letters)):
        cls = CORNER_TABLE.get((letters[i - 1], letters[i]))
        if cls and cls[0] == compass and (kind is None or cls[1] == kind):
            out.append(i)
    return out


def near_k(contour: NfContour, address: BorderAddress, corner_class,
           k: int) -> bool:
    """True when the point sits at contour distance exactly k from some
    corner of the class.  corner_class is 'nw'..'sw', optionally suffixed
    '-land' or '-golf'."""
    if k < 0:
        raise ValueError("k must be non-negative")
    if isinstance(corner_class, (tuple, list)):
        corner_class = "-".join(corner_class)
    compass, _, kind = str(corner_class).partition("-")
    letters = contour.component(address.component)
    n = len(letters)
    i = address.index % n
    for j in corner_indices(contour, address.component, compass, kind or None):
        d = abs(i - j)
        if min(d, n - d) == k:
            return True
    return False


def near_k_edge(contour: NfContour, interval: BorderInterval, corner_class,
                k: int) -> bool:
    """Edge variant: one of the edge's end points satisfies near_k."""
    return (near_k(contour, BorderAddress(interval.component, interval.start),
                   corner_class, k)
            or near_k(contour, BorderAddress(interval.component, interval.end),
                      corner_class, k))


def format_contour(contour: NfContour) -> str:
    parts = [_rle(contour.external)]
    for letters, x, y in contour.holes:
        parts.append(f"({_rle(letters)},{x},{y})")
    return "(" + "; ".join([parts[0]] + ([", ".join(parts[1:])] if contour.holes else [])) + ")"


def _rle(letters: str) -> str:
    out = []
    i = 0
    while i < len(letters):
        j = i
        while j < len(letters) and letters[j] == letters[i]:
            j += 1
        out.append(letters[i] if j - i == 1 else f"{letters[i]}^{j - i}")
        i = j
    return "".join(out)


def parse_contour(text: str) -> NfContour:
    """Parse the printed form, run-length exponents allowed."""
    s = text.strip()
    if not (s.startswith("(") and s.endswith(")")):
        raise WordParseError("contour must be parenthesized")
    body = s[1:-1]
    head, _, rest = body.partition(";")
    external = _parse_letters(head.strip())
    holes = []
    rest = rest.strip()
    while rest:
        if not rest.startswith("("):
            raise WordParseError(f"expected '(' in {rest!r}")
        close = rest.index(")")
        inner = rest[1:close]
        letters_txt, x_txt, y_txt = (part.strip() for part in inner.split(","))
        holes.append((_parse_letters(letters_txt), int(x_txt), int(y_txt)))
        rest = rest[close + 1:].lstrip().lstrip(",").lstrip()
    return NfContour(external, tuple(holes))


def _parse_letters(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch not in STEP:
            raise WordParseError(f"bad contour letter {ch!r}", 1, i + 1)
        i += 1
        count = 1
        if i < len(text) and text[i] == "^":
            i += 1
            j = i
            while j < len(text) and text[j].isdigit():
                j += 1
            if j == i:
                raise WordParseError("missing exponent digits", 1, i + 1)
            count = int(text[i:j])
            i = j
        out.append(ch * count)
    return "".join(out)
