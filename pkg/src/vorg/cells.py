"""Cell alphabet and border labels.

Each cell tag is a hex digit whose 4-bit binary value, read w,n,e,s,
gives the labels of its four borders.  Accepted words expose 0 on west
and south external borders, 1 on north and east.
"""

from .errors import InvalidSymbolError

TAG_VALUES = {"2": 2, "4": 4, "5": 5, "6": 6, "7": 7, "e": 14}
TAGS = tuple(sorted(TAG_VALUES))

# External border labels required on accepted words: (w, n, e, s).
ACCEPT_BORDERS = (0, 1, 1, 0)

# Direction order used for border tuples throughout the package.
SIDES = ("w", "n", "e", "s")


def tile_borders(tag: str) -> tuple[int, int, int, int]:
    """Border bits (w, n, e, s) of a cell tag."""
    try:
        value = TAG_VALUES[tag]
    except KeyError:
        raise InvalidSymbolError(f"unknown cell tag {tag!r}") from None
    return ((value >> 3) & 1, (value >> 2) & 1, (value >> 1) & 1, value & 1)


BORDERS = {tag: tile_borders(tag) for tag in TAGS}
