"""Points, blocks, parallel classes and designs.

Points of a layered universe Z_t x Z_L are stored flat: ``(x, layer)`` is the
integer ``layer * t + x``.  Blocks are ascending tuples of points, and a
parallel class is a tuple of blocks ordered by their minimum point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from itertools import product
from math import comb
from typing import Iterable, NamedTuple, Sequence

import numpy as np

Block = tuple[int, ...]
ParallelClass = tuple[Block, ...]


class DesignError(ValueError):
    """Raised when an input violates a construction precondition."""


class LabeledPoint(NamedTuple):
    x: int
    layer: int

    def flat(self, t: int) -> int:
        return self.layer * t + self.x

    @classmethod
    def from_flat(cls, p: int, t: int) -> "LabeledPoint":
        return cls(p % t, p // t)


def block(points: Iterable[int]) -> Block:
    b = tuple(sorted(points))
    if len(set(b)) != len(b):
        raise DesignError(f"block has repeated points: {b}")
    return b


def labeled_block(pairs: Iterable[tuple[int, int]], t: int) -> Block:
    """Flatten ``(x, layer)`` pairs into a sorted block; x is reduced mod t."""
    return block(layer * t + x % t for x, layer in pairs)


def unlabel(b: Block, t: int) -> list[tuple[int, int]]:
    return [(p % t, p // t) for p in b]


def normalize_class(blocks: Iterable[Iterable[int]]) -> ParallelClass:
    return tuple(sorted((block(b) for b in blocks), key=lambda b: b[0]))


# ---------------------------------------------------------------------------
# colex ranking


def rank_block(b: Sequence[int], n: int) -> int:
    """Colexicographic rank of a k-subset of [0, n)."""
    prev = -1
    r = 0
    for i, p in enumerate(b):
        if not 0 <= p < n:
            raise DesignError(f"point {p} outside [0, {n})")
        if p <= prev:
            raise DesignError(f"block {tuple(b)} is not strictly increasing")
        r += comb(p, i + 1)
        prev = p
    return r


def unrank_block(r: int, n: int, k: int) -> Block:
    if not 0 <= r < comb(n, k):
        raise DesignError(f"rank {r} outside [0, C({n},{k}))")
    out = []
    x = n - 1
    for i in range(k, 0, -1):
        while comb(x, i) > r:
            x -= 1
        out.append(x)
        r -= comb(x, i)
        x -= 1
    return tuple(reversed(out))


def colex_table(n: int, k: int) -> np.ndarray:
    """``tab[i, p] = C(p, i + 1)`` for vectorised ranking."""
    tab = np.zeros((k, n), dtype=np.int64)
    for i in range(k):
        for p in range(n):
            tab[i, p] = comb(p, i + 1)
    return tab


def rank_blocks(blocks: np.ndarray, n: int) -> np.ndarray:
    """Vectorised colex rank of an (m, k) array of ascending blocks."""
    k = blocks.shape[1]
    tab = colex_table(n, k)
    return tab[np.arange(k), blocks].sum(axis=1)


# ---------------------------------------------------------------------------
# configurations and groups of quadruples over Z_t x Z_4


class Configuration(NamedTuple):
    j0: int
    j1: int
    j2: int
    j3: int


def all_configurations() -> list[Configuration]:
    return [Configuration(*c) for c in product(range(5), repeat=4) if sum(c) == 4]


def classify_configuration(q: Sequence[int], t: int) -> Configuration:
    if len(q) != 4:
        raise DesignError(f"expected a quadruple, got {len(q)} points")
    counts = [0, 0, 0, 0]
    for p in q:
        if not 0 <= p < 4 * t:
            raise DesignError(f"point {p} outside [0, {4 * t})")
        counts[p // t] += 1
    return Configuration(*counts)


def group_of(c: Sequence[int]) -> int:
    shape = sorted(c, reverse=True)
    return {
        (4, 0, 0, 0): 1,
        (3, 1, 0, 0): 2,
        (2, 2, 0, 0): 3,
        (2, 1, 1, 0): 4,
        (1, 1, 1, 1): 5,
    }[tuple(shape)]


def group_of_block(q: Sequence[int], t: int) -> int:
    return group_of(classify_configuration(q, t))


def groups_of_blocks(blocks: np.ndarray, t: int) -> np.ndarray:
    """Vectorised group id (1-5) for an (m, 4) array of quadruples."""
    layers = blocks // t
    counts = np.stack([(layers == i).sum(axis=1) for i in range(4)], axis=1)
    mx = counts.max(axis=1)
    nonzero = (counts > 0).sum(axis=1)
    out = np.empty(len(blocks), dtype=np.int8)
    out[mx == 4] = 1
    out[mx == 3] = 2
    out[(mx == 2) & (nonzero == 2)] = 3
    out[(mx == 2) & (nonzero == 3)] = 4
    out[mx == 1] = 5
    return out


# ---------------------------------------------------------------------------
# (1,1,1,1)-quadruple algebra


def quad_coords(q: Sequence[int], t: int) -> tuple[int, int, int, int]:
    """First coordinates of a one-point-per-layer quadruple, by layer."""
    if len(q) != 4 or any(q[i] // t != i for i in range(4)):
        raise DesignError(f"{tuple(q)} is not a (1,1,1,1) quadruple for t={t}")
    return (q[0], q[1] - t, q[2] - 2 * t, q[3] - 3 * t)


def quad_from_coords(x: Sequence[int], t: int) -> Block:
    return (x[0] % t, t + x[1] % t, 2 * t + x[2] % t, 3 * t + x[3] % t)


def quad_sum(a: Sequence[int], b: Sequence[int], t: int) -> Block:
    xa = quad_coords(a, t)
    xb = quad_coords(b, t)
    return quad_from_coords([u + v for u, v in zip(xa, xb)], t)


def set_sum(s1: Iterable[Sequence[int]], s2: Iterable[Sequence[int]], t: int) -> frozenset[Block]:
    c1 = [quad_coords(q, t) for q in s1]
    c2 = [quad_coords(q, t) for q in s2]
    return frozenset(
        (
            (a0 + b0) % t,
            t + (a1 + b1) % t,
            2 * t + (a2 + b2) % t,
            3 * t + (a3 + b3) % t,
        )
        for a0, a1, a2, a3 in c1
        for b0, b1, b2, b3 in c2
    )


def zero_quad(t: int) -> Block:
    return quad_from_coords((0, 0, 0, 0), t)


# ---------------------------------------------------------------------------
# designs


class Kind(str, Enum):
    BP = "BP"
    RSQS = "RSQS"
    OF = "OF"
    NOF = "NOF"


@dataclass(frozen=True)
class Design:
    """A family of parallel classes over [0, n).

    ``classes`` is an int array of shape (classes, n // k, k) with ascending
    blocks ordered by minimum point.  ``segments`` records the construction
    type of consecutive runs of classes, e.g. ``(("S", 280), ("T", 168))``.
    """

    kind: Kind
    n: int
    k: int
    classes: np.ndarray
    provenance: str = ""
    segments: tuple[tuple[str, int], ...] = field(default=())

    def __post_init__(self):
        arr = np.asarray(self.classes, dtype=np.int32)
        if arr.ndim != 3 or (arr.size and arr.shape[2] != self.k):
            raise DesignError(f"classes must have shape (C, n/k, k); got {arr.shape}")
        arr.setflags(write=False)
        object.__setattr__(self, "classes", arr)
        if self.segments and sum(c for _, c in self.segments) != len(arr):
            raise DesignError("segment counts do not add up to the class count")

    def __len__(self) -> int:
        return len(self.classes)

    def parallel_class(self, i: int) -> ParallelClass:
        """0-based access to one class as tuples."""
        return tuple(tuple(int(p) for p in b) for b in self.classes[i])

    def iter_classes(self):
        for i in range(len(self.classes)):
            yield self.parallel_class(i)

    def class_types(self) -> list[str]:
        out: list[str] = []
        for label, count in self.segments:
            out.extend([label] * count)
        return out

    def same_as(self, other: "Design") -> bool:
        return (
            self.n == other.n
            and self.k == other.k
            and self.classes.shape == other.classes.shape
            and bool(np.array_equal(self.classes, other.classes))
        )


def expected_class_count(kind: Kind, n: int, k: int) -> int:
    if kind is Kind.BP:
        return comb(n - 1, k - 1)
    if kind is Kind.RSQS:
        return (n - 1) * (n - 2) // 6
    raise DesignError(f"no class-count formula for {kind}")


def normalize_array(arr: np.ndarray) -> np.ndarray:
    """Sort points inside blocks and blocks by minimum point, row by row."""
    arr = np.sort(np.asarray(arr, dtype=np.int32), axis=2)
    order = np.argsort(arr[:, :, 0], axis=1, kind="stable")
    return np.take_along_axis(arr, order[:, :, None], axis=1)


def design_from_classes(
    kind: Kind,
    n: int,
    k: int,
    classes,
    provenance: str = "",
    segments: tuple[tuple[str, int], ...] = (),
) -> Design:
    """Build a design from nested sequences or a (C, n/k, k) array."""
    if isinstance(classes, np.ndarray):
        arr = classes
    else:
        rows = [list(c) for c in classes]
        if any(len(c) != n // k for c in rows):
            raise DesignError(f"every class of a design on {n} points needs {n // k} blocks")
        arr = np.array(rows, dtype=np.int32).reshape(len(rows), n // k, k)
    return Design(kind, n, k, normalize_array(arr) if len(arr) else arr, provenance, segments)
