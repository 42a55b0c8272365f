"""Adaptive grid organisms: pattern recognizers, flow collection,
online reconfiguration, and a deterministic simulation engine."""

__version__ = "0.1.0"

from .grid import GridWord, format_word, parse_word
from .patterns import CRAT, PATTERNS, RAT, TR, accepts_product, accepts_tiling
from .cells import tile_borders

__all__ = [
    "GridWord", "parse_word", "format_word",
    "TR", "RAT", "CRAT", "PATTERNS",
    "accepts_tiling", "accepts_product", "tile_borders",
]
