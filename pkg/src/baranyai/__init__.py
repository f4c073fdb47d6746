"""Explicit Baranyai partitions BP(n, 4) by doubling and quadrupling."""

from .builder import bp4, plan
from .core import Design, DesignError, Kind
from .enumcode import column, entry
from .formats import dumps, loads
from .verify import verify_bp

__version__ = "0.1.0"

__all__ = ["Design", "DesignError", "Kind", "bp4", "column", "dumps", "entry", "loads", "plan", "verify_bp", "__version__"]
