"""Small designs the recursions start from, and the search that finds them.

Trivial and complement designs are written down directly.  Larger seeds are
found by exact cover: either directly (candidate parallel classes covering a
block set) or 1-rotationally, with Z_m acting on Z_m plus a few fixed points
so that only one base class per orbit has to be found.  Searched designs are
shipped as data files and re-verified whenever they are loaded.
"""

from __future__ import annotations

import hashlib
import logging
import os
from functools import lru_cache
from itertools import combinations
from pathlib import Path
from typing import Callable, Iterable, Sequence

from filelock import FileLock

from . import formats
from .affine import affine_rsqs
from .core import Block, Design, DesignError, Kind, design_from_classes, rank_block
from .exactcover import SearchTimeout, solve_exact_cover
from .factor import Factorization, one_factorization
from .verify import verify_design

log = logging.getLogger(__name__)

DEFAULT_TIMEOUT = 600.0
DATA_DIR = Path(__file__).with_name("data")


class SeedUnavailable(DesignError):
    """No construction or cached design exists for the requested seed."""


# ---------------------------------------------------------------------------
# explicit designs


def bp_small_complement(n: int, k: int) -> Design:
    """BP(k, k) as one class, or BP(2k, k) as pairs {X, complement of X}.

    Complement pairs are listed by the colex rank of the block holding 0.
    """
    if n == k:
        return design_from_classes(Kind.BP, n, k, [[tuple(range(n))]], provenance=f"trivial(n={n})")
    if n != 2 * k:
        raise DesignError(f"no complement design for (n={n}, k={k})")
    rest = range(1, n)
    blocks = sorted(((0, *c) for c in combinations(rest, k - 1)), key=lambda b: rank_block(b, n))
    classes = [[b, tuple(p for p in range(n) if p not in b)] for b in blocks]
    return design_from_classes(Kind.BP, n, k, classes, provenance=f"complement(n={n})")


def bp_8_4() -> Design:
    return bp_small_complement(8, 4)


def xor_sqs_blocks(v: int = 8) -> list[Block]:
    """Blocks {a, b, c, d} with a ^ b ^ c ^ d = 0; an SQS(v) for v a power of two."""
    return [b for b in combinations(range(v), 4) if b[0] ^ b[1] ^ b[2] ^ b[3] == 0]


def doubled_sqs_blocks(base: Sequence[Sequence[int]], of: Factorization) -> list[Block]:
    """SQS(2v) from SQS(v): each block in both halves, plus {a, b, c + v, d + v}
    for pairs {a, b} and {c, d} of the same one-factor."""
    v = of.m
    out = [tuple(b) for b in base] + [tuple(p + v for p in b) for b in base]
    for fac in of.factors:
        for a, b in fac:
            for c, d in fac:
                out.append((a, b, c + v, d + v))
    return sorted(tuple(sorted(b)) for b in out)


# ---------------------------------------------------------------------------
# exact-cover resolution


def parallel_classes_of(blocks: Sequence[Sequence[int]], n: int) -> list[tuple[int, ...]]:
    """Every parallel class (as sorted block indices) that can be made from ``blocks``."""
    by_min: dict[int, list[int]] = {}
    for i, b in enumerate(blocks):
        by_min.setdefault(min(b), []).append(i)
    out: list[tuple[int, ...]] = []
    sets = [frozenset(b) for b in blocks]

    def extend(used: int, chosen: list[int]) -> None:
        if used == (1 << n) - 1:
            out.append(tuple(chosen))
            return
        p = (~used & (used + 1)).bit_length() - 1  # smallest free point
        for i in by_min.get(p, ()):
            mask = sum(1 << q for q in sets[i])
            if not used & mask:
                chosen.append(i)
                extend(used | mask, chosen)
                chosen.pop()

    extend(0, [])
    return out


def exact_cover_resolve(
    n: int,
    k: int,
    blocks: Sequence[Sequence[int]] | None = None,
    timeout: float | None = DEFAULT_TIMEOUT,
    kind: Kind = Kind.BP,
    provenance: str = "",
) -> Design:
    """Partition ``blocks`` (default: all k-subsets) into parallel classes.

    Items are the blocks; candidate rows are the parallel classes they admit.
    """
    if n % k:
        raise DesignError(f"k={k} does not divide n={n}")
    blocks = [tuple(sorted(b)) for b in (blocks if blocks is not None else combinations(range(n), k))]
    candidates = parallel_classes_of(blocks, n)
    sol = solve_exact_cover(len(blocks), candidates, timeout)
    if sol is None:
        raise DesignError(f"the {len(blocks)} blocks admit no resolution into parallel classes")
    classes = [[blocks[i] for i in candidates[r]] for r in sorted(sol)]
    return design_from_classes(kind, n, k, classes, provenance=provenance or f"search:direct(n={n})")


def _shift(b: Sequence[int], g: int, m: int) -> Block:
    return tuple(sorted((x + g) % m if x < m else x for x in b))


def _orbit_rep(b: Sequence[int], m: int) -> Block:
    return min(_shift(b, g, m) for g in range(m))


def cyclic_resolve(n: int, k: int, m: int, timeout: float | None = DEFAULT_TIMEOUT) -> Design:
    """BP(n, k) invariant under Z_m acting on Z_m plus n - m fixed points.

    Every class orbit has m members and exactly one block through the fixed
    point m, so base class b is pinned to the b-th orbit through m and the
    search only places the remaining blocks of each base class.
    """
    h = n - m
    if not 0 < h < k or n % k:
        raise DesignError(f"Z_{m} with {h} fixed points does not fit BP({n},{k})")
    if any(m % d == 0 for d in range(2, int(m**0.5) + 1)):
        raise DesignError(f"cyclic search needs m prime, got {m}")
    inf0 = m
    reps = sorted({_orbit_rep(b, m) for b in combinations(range(n), k)})
    pinned = [r for r in reps if inf0 in r]
    free = [r for r in reps if inf0 not in r]
    n_base = len(pinned)
    if n_base * m != len(reps) * m * k // n:
        raise DesignError("orbit counts do not balance")
    orbit_id = {r: i for i, r in enumerate(free)}

    slot: dict[tuple[int, int], int] = {}
    for b, rep in enumerate(pinned):
        for p in range(n):
            if p not in rep:
                slot[(b, p)] = len(free) + len(slot)
    rows: list[list[int]] = []
    meta: list[tuple[int, Block]] = []
    others = [p for p in range(n) if p != inf0]
    for b, rep in enumerate(pinned):
        pool = [p for p in others if p not in rep]
        for blk in combinations(pool, k):
            rows.append([orbit_id[_orbit_rep(blk, m)]] + [slot[(b, p)] for p in blk])
            meta.append((b, blk))
    sol = solve_exact_cover(len(free) + len(slot), rows, timeout)
    if sol is None:
        raise DesignError(f"no Z_{m}-invariant BP({n},{k}) exists")
    base = [[rep] for rep in pinned]
    for r in sorted(sol):
        b, blk = meta[r]
        base[b].append(blk)
    classes = [[_shift(blk, g, m) for blk in cls] for cls in base for g in range(m)]
    inf = "+".join(["inf"] * h)
    return design_from_classes(Kind.BP, n, k, classes, provenance=f"search:cyclic(Z{m}+{inf})")


# ---------------------------------------------------------------------------
# resolvable SQS


def resolvable_sqs(v: int, timeout: float | None = DEFAULT_TIMEOUT) -> Design:
    """Searched resolution of SQS(8) (xor cube) or SQS(16) (doubled SQS(8))."""
    if v == 8:
        return exact_cover_resolve(8, 4, xor_sqs_blocks(8), timeout, Kind.RSQS, "search:xor(v=8)")
    if v == 16:
        base = xor_sqs_blocks(8)
        try:
            blocks = doubled_sqs_blocks(base, one_factorization(8))
            return exact_cover_resolve(16, 4, blocks, timeout, Kind.RSQS, "search:doubled(v=16,of=cyclic)")
        except DesignError:
            log.info("doubled SQS(16) with the cyclic one-factorization is not resolvable; using xor factors")
        fac = tuple(tuple(sorted({(min(x, x ^ i), max(x, x ^ i)) for x in range(8)})) for i in range(1, 8))
        blocks = doubled_sqs_blocks(base, Factorization(8, fac, near=False))
        return exact_cover_resolve(16, 4, blocks, timeout, Kind.RSQS, "search:doubled(v=16,of=xor)")
    raise SeedUnavailable(f"no searched resolvable SQS({v})")


# ---------------------------------------------------------------------------
# cache


def default_cache_dir() -> Path:
    env = os.environ.get("BARANYAI_CACHE")
    if env:
        return Path(env)
    base = os.environ.get("XDG_CACHE_HOME") or Path.home() / ".cache"
    return Path(base) / "baranyai"


def digest(text: str) -> str:
    return hashlib.sha256(text.encode("ascii")).hexdigest()


class SeedCache:
    """Directory of ``<kind>_<n>_<k>.design`` files with ``.sha`` sidecars."""

    def __init__(self, directory: str | Path | None = None):
        self.directory = Path(directory) if directory is not None else default_cache_dir()

    def path(self, kind: Kind, n: int, k: int) -> Path:
        return self.directory / f"{kind.value.lower()}_{n}_{k}.design"

    def load(self, kind: Kind, n: int, k: int) -> Design | None:
        path = self.path(kind, n, k)
        if not path.exists():
            return None
        text = path.read_text(encoding="ascii")
        sha = path.with_suffix(".sha")
        if not sha.exists() or sha.read_text().split()[0] != digest(text):
            raise DesignError(f"digest mismatch for cached seed {path}")
        d = formats.loads(text)
        if (d.kind, d.n, d.k) != (kind, n, k):
            raise DesignError(f"{path} holds {d.kind.value}({d.n},{d.k})")
        report = verify_design(d)
        if not report.ok:
            raise DesignError(f"cached seed {path} fails verification:\n{report.to_text()}")
        return d

    def store(self, d: Design) -> Path:
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.path(d.kind, d.n, d.k)
        text = formats.dumps(d)
        with FileLock(str(path) + ".lock"):
            tmp = path.with_suffix(".tmp")
            tmp.write_text(text, encoding="ascii", newline="\n")
            os.replace(tmp, path)
            path.with_suffix(".sha").write_text(f"{digest(text)}  {path.name}\n")
        return path


# (kind, n, k) -> search routine for seeds that are not written down directly
SEARCHES: dict[tuple[Kind, int, int], Callable[[float | None], Design]] = {
    (Kind.BP, 12, 4): lambda to: cyclic_resolve(12, 4, 11, to),
    (Kind.BP, 12, 3): lambda to: cyclic_resolve(12, 3, 11, to),
    (Kind.BP, 15, 3): lambda to: cyclic_resolve(15, 3, 13, to),
    (Kind.BP, 21, 3): lambda to: cyclic_resolve(21, 3, 19, to),
    (Kind.RSQS, 8, 4): lambda to: resolvable_sqs(8, to),
    (Kind.RSQS, 16, 4): lambda to: resolvable_sqs(16, to),
}


def searched_seed(
    kind: Kind,
    n: int,
    k: int,
    search: bool = True,
    timeout: float | None = DEFAULT_TIMEOUT,
    cache: SeedCache | None = None,
) -> Design:
    """Load a searched seed from the shipped data or the cache, else search it."""
    key = (kind, n, k)
    if key not in SEARCHES:
        raise SeedUnavailable(f"no seed search for {kind.value}({n},{k})")
    for c in (SeedCache(DATA_DIR), cache or SeedCache()):
        d = c.load(kind, n, k)
        if d is not None:
            return d
    if not search:
        raise SeedUnavailable(f"{kind.value}({n},{k}) is not cached and searching is disabled")
    d = SEARCHES[key](timeout)
    report = verify_design(d)
    if not report.ok:
        raise DesignError(f"searched {kind.value}({n},{k}) fails verification:\n{report.to_text()}")
    try:
        (cache or SeedCache()).store(d)
    except OSError as exc:  # read-only cache is not fatal
        log.warning("could not cache %s(%d,%d): %s", kind.value, n, k, exc)
    return d


@lru_cache(maxsize=None)
def _memo(kind: Kind, n: int, k: int) -> Design:
    return searched_seed(kind, n, k)


def rsqs_provider(v: int) -> Design:
    """Resolvable SQS(v) for v = 4, 8, 16 and every larger power of two."""
    if v == 4:
        return design_from_classes(Kind.RSQS, 4, 4, [[(0, 1, 2, 3)]], provenance="trivial(v=4)")
    if v in (8, 16):
        return _memo(Kind.RSQS, v, 4)
    if v >= 32 and not v & (v - 1):
        return _affine(v)
    raise SeedUnavailable(f"no resolvable SQS({v}) provider")


@lru_cache(maxsize=None)
def _affine(v: int) -> Design:
    return affine_rsqs(v)


def bp3_provider(m: int) -> Design:
    if m % 3:
        raise DesignError(f"BP({m},3) needs 3 | m")
    if m in (3, 6):
        return _small(m, 3)
    return _memo(Kind.BP, m, 3)


def bp4_seed(n: int) -> Design:
    if n in (4, 8):
        return _small(n, 4)
    if n == 12:
        return _memo(Kind.BP, 12, 4)
    raise SeedUnavailable(f"BP({n},4) is not a seed")


@lru_cache(maxsize=None)
def _small(n: int, k: int) -> Design:
    return bp_small_complement(n, k)


def seed_names() -> Iterable[tuple[Kind, int, int]]:
    return SEARCHES.keys()


__all__ = [
    "SearchTimeout",
    "SeedCache",
    "SeedUnavailable",
    "bp3_provider",
    "bp4_seed",
    "bp_8_4",
    "bp_small_complement",
    "cyclic_resolve",
    "exact_cover_resolve",
    "resolvable_sqs",
    "rsqs_provider",
    "searched_seed",
]
