"""Recursive construction of BP(n, 4) for every size the constructions reach.

Seeds cover n = 4, 8, 12.  Otherwise n = 2t is doubled from BP(t, 4) when
t = 4, 8 (mod 12) and a resolvable SQS(t) is available, and n = 4t is
quadrupled when t = 0, 3, 6, 9 (mod 12).
"""

from __future__ import annotations

from functools import lru_cache

from . import seeds
from .core import Design, DesignError, Kind
from .doubling import double_design, valid_doubling_size
from .quadrupling import QuadInput, case_of, delta1, delta2, quadruple_bp

SEED_SIZES = (4, 8, 12)


def plan(n: int) -> str:
    """The construction trace for BP(n, 4), e.g. ``quad(6,seed(8))``.

    Raises DesignError when no route exists.  Seed availability for BP(m, 3)
    is only checked against the known search table.
    """
    if n <= 0 or n % 4:
        raise DesignError(f"BP(n,4) needs 4 | n, got n={n}")
    if n in SEED_SIZES:
        return f"seed({n})"
    t = n // 2
    if valid_doubling_size(t) and _has_rsqs(t):
        return f"double({plan(t)})"
    t = n // 4
    if t % 12 in (0, 3, 6, 9):
        case_of(t)
        if t % 12 == 3 and t < 15 or t % 12 == 9 and t < 21:
            raise DesignError(f"quadrupling needs t >= 15 (t = 3 mod 12) or t >= 21 (t = 9 mod 12), got t={t}")
        m3 = t + delta2(t)
        if m3 not in (3, 6) and (Kind.BP, m3, 3) not in seeds.SEARCHES:
            raise DesignError(f"BP({4 * t},4) needs a BP({m3},3) seed, which has no provider")
        return f"quad({t},{plan(t + delta1(t))})"
    raise DesignError(f"no construction reaches BP({n},4)")


def _has_rsqs(v: int) -> bool:
    return v in (4, 8, 16) or (v >= 32 and not v & (v - 1))


def supported(n: int) -> bool:
    try:
        plan(n)
    except DesignError:
        return False
    return True


@lru_cache(maxsize=8)
def bp4(n: int) -> Design:
    """BP(n, 4) built along the route that ``plan`` reports."""
    plan(n)
    if n in SEED_SIZES:
        return seeds.bp4_seed(n)
    t = n // 2
    if valid_doubling_size(t) and _has_rsqs(t):
        return double_design(bp4(t), seeds.rsqs_provider(t))
    t = n // 4
    return quadruple_bp(QuadInput(t, bp4(t + delta1(t)), seeds.bp3_provider(t + delta2(t))))
