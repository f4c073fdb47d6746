"""Exhaustive certification of designs.

Coverage is checked by ranking every block and counting hits per rank, so a
BP(n, k) is accepted exactly when each k-subset of [0, n) is hit once.
"""

from __future__ import annotations

from collections import Counter
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from math import comb
from typing import Sequence

import numpy as np

from .core import Design, DesignError, Kind, all_configurations, colex_table, group_of, groups_of_blocks, unrank_block

LIST_LIMIT = 20


@dataclass(frozen=True)
class ClassCheck:
    ok: bool
    count: int
    expected_count: int
    duplicated: tuple[int, ...] = ()
    missing: tuple[int, ...] = ()
    out_of_range: tuple[int, ...] = ()
    bad_blocks: tuple[tuple[int, ...], ...] = ()

    def describe(self) -> str:
        parts = []
        if self.count != self.expected_count:
            parts.append(f"count {self.count} != {self.expected_count}")
        if self.duplicated:
            parts.append("duplicated " + ",".join(map(str, self.duplicated)))
        if self.missing:
            parts.append("missing " + ",".join(map(str, self.missing)))
        if self.out_of_range:
            parts.append("out of range " + ",".join(map(str, self.out_of_range)))
        if self.bad_blocks:
            parts.append("wrong block size " + ",".join(str(b) for b in self.bad_blocks))
        return "; ".join(parts) or "ok"


def verify_class(c: Sequence[Sequence[int]], n: int, k: int) -> ClassCheck:
    """Check that ``c`` is n/k disjoint k-blocks covering [0, n)."""
    pts = Counter(int(p) for b in c for p in b)
    bad = tuple(tuple(int(p) for p in b) for b in c if len(b) != k)
    dup = tuple(sorted(p for p, m in pts.items() if m > 1))
    oor = tuple(sorted(p for p in pts if not 0 <= p < n))
    missing = tuple(p for p in range(n) if p not in pts)
    ok = len(c) == n // k and not (bad or dup or oor or missing) and n % k == 0
    return ClassCheck(ok, len(c), n // k, dup, missing, oor, bad)


@dataclass
class CoverageReport:
    kind: str
    n: int
    k: int
    classes: int
    expected_classes: int
    subsets: int
    covered: int = 0
    missing: list[tuple[int, ...]] = field(default_factory=list)
    duplicated: list[tuple[tuple[int, ...], int]] = field(default_factory=list)
    missing_count: int = 0
    duplicated_count: int = 0
    class_errors: list[tuple[int, str]] = field(default_factory=list)
    census: dict[str, object] = field(default_factory=dict)
    census_errors: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return (
            self.classes == self.expected_classes
            and self.missing_count == 0
            and self.duplicated_count == 0
            and not self.class_errors
            and not self.census_errors
        )

    def to_text(self) -> str:
        lines = [
            f"OK={int(self.ok)}",
            f"KIND={self.kind}",
            f"N={self.n}",
            f"K={self.k}",
            f"CLASSES={self.classes}",
            f"EXPECTED_CLASSES={self.expected_classes}",
            f"SUBSETS={self.subsets}",
            f"COVERED_ONCE={self.covered}",
            f"MISSING_COUNT={self.missing_count}",
            f"DUPLICATED_COUNT={self.duplicated_count}",
            f"CLASS_ERRORS={len(self.class_errors)}",
        ]
        for b in self.missing[:LIST_LIMIT]:
            lines.append("MISSING=" + " ".join(map(str, b)))
        for b, m in self.duplicated[:LIST_LIMIT]:
            lines.append(f"DUPLICATED={' '.join(map(str, b))}x{m}")
        for i, msg in self.class_errors[:LIST_LIMIT]:
            lines.append(f"CLASS_ERROR={i + 1}:{msg}")
        for key, value in self.census.items():
            lines.append(f"CENSUS_{key}={value}")
        for msg in self.census_errors:
            lines.append(f"CENSUS_ERROR={msg}")
        return "\n".join(lines)


def _bad_rows(arr: np.ndarray, n: int) -> np.ndarray:
    flat = np.sort(arr.reshape(len(arr), -1), axis=1)
    return np.nonzero((flat != np.arange(n)).any(axis=1))[0]


def _chunk_counts(arr: np.ndarray, tab: np.ndarray, size: int) -> np.ndarray:
    blocks = np.sort(arr.reshape(-1, arr.shape[-1]), axis=1).astype(np.int64)
    ranks = tab[np.arange(blocks.shape[1]), blocks].sum(axis=1)
    return np.bincount(ranks, minlength=size)


def _counts(arr: np.ndarray, n: int, size: int, workers: int, chunk: int) -> np.ndarray:
    k = arr.shape[-1]
    tab = colex_table(n, k)
    parts = [arr[i : i + chunk] for i in range(0, len(arr), chunk)] or [arr]
    if workers > 1 and len(parts) > 1:
        with ThreadPoolExecutor(workers) as pool:
            results = list(pool.map(lambda a: _chunk_counts(a, tab, size), parts))
    else:
        results = [_chunk_counts(a, tab, size) for a in parts]
    total = np.zeros(size, dtype=np.int64)
    for r in results:
        total += r
    return total


def _check_points(arr: np.ndarray, n: int) -> None:
    if arr.size and (arr.min() < 0 or arr.max() >= n):
        raise DesignError(f"design has a point outside [0, {n})")


def _fill(report: CoverageReport, counts: np.ndarray, n: int, k: int) -> None:
    report.covered = int((counts == 1).sum())
    miss = np.nonzero(counts == 0)[0]
    dup = np.nonzero(counts > 1)[0]
    report.missing_count = len(miss)
    report.duplicated_count = len(dup)
    report.missing = [unrank_block(int(r), n, k) for r in miss[: LIST_LIMIT * 5]]
    report.duplicated = [(unrank_block(int(r), n, k), int(counts[r])) for r in dup[: LIST_LIMIT * 5]]


def _class_errors(d: Design) -> list[tuple[int, str]]:
    arr = d.classes
    errors = []
    for i in _bad_rows(arr, d.n):
        errors.append((int(i), verify_class(arr[i].tolist(), d.n, d.k).describe()))
    return errors


def verify_bp(d: Design, n: int | None = None, k: int | None = None, workers: int = 1, chunk: int = 4096) -> CoverageReport:
    """Exactly-once coverage of all k-subsets plus per-class partition checks."""
    n = d.n if n is None else n
    k = d.k if k is None else k
    if k <= 0 or n % k:
        raise DesignError(f"k={k} does not divide n={n}")
    if (d.n, d.k) != (n, k):
        raise DesignError(f"design is on ({d.n},{d.k}), expected ({n},{k})")
    _check_points(d.classes, n)
    size = comb(n, k)
    report = CoverageReport(d.kind.value, n, k, len(d), comb(n - 1, k - 1), size)
    report.class_errors = _class_errors(d)
    counts = _counts(d.classes, n, size, workers, chunk) if len(d) else np.zeros(size, dtype=np.int64)
    _fill(report, counts, n, k)
    return report


def verify_rsqs(d: Design, workers: int = 1) -> CoverageReport:
    """Resolution into parallel classes plus the Steiner property on triples."""
    v = d.n
    if d.k != 4 or v % 4:
        raise DesignError("a resolvable SQS needs k=4 and 4 | v")
    _check_points(d.classes, v)
    size = comb(v, 3)
    report = CoverageReport(d.kind.value, v, 4, len(d), (v - 1) * (v - 2) // 6, size)
    report.class_errors = _class_errors(d)
    if len(d):
        blocks = np.sort(d.classes.reshape(-1, 4), axis=1)
        triples = np.concatenate([np.delete(blocks, i, axis=1) for i in range(4)])
        counts = _counts(triples[None, :, :], v, size, workers, chunk=len(triples) + 1)
    else:
        counts = np.zeros(size, dtype=np.int64)
    _fill(report, counts, v, 3)
    return report


def verify_design(d: Design, workers: int = 1) -> CoverageReport:
    if d.kind is Kind.RSQS:
        return verify_rsqs(d, workers)
    return verify_bp(d, workers=workers)


# ---------------------------------------------------------------------------
# census

_ORDER = ("1", "2", "3", "4", "5")


def class_signature(blocks: np.ndarray, t: int) -> tuple[int, ...]:
    """Group counts (groups 1..5) of the blocks of one class over Z_t x Z_4."""
    g = groups_of_blocks(np.asarray(blocks), t)
    return tuple(int((g == i).sum()) for i in range(1, 6))


def signature_type(sig: Sequence[int]) -> str:
    g1, g2, g3, g4, g5 = sig
    if g1:
        return "1"
    if g4:
        return "4"
    if g3:
        return "3"
    if g2:
        return "2"
    return "5"


def _compatible(label: str, sig: Sequence[int], t: int) -> bool:
    g1, g2, g3, g4, g5 = sig
    if label == "1":
        allowed = {0: (1,), 3: (1, 2), 2: (1, 2, 3), 1: (1, 2, 3, 5)}[t % 4]
        return all(sig[g - 1] == 0 for g in range(1, 6) if g not in allowed)
    if label == "2":
        return g2 == t and g1 == g3 == g4 == g5 == 0
    if label == "3":
        return g1 == g2 == g4 == 0 and g5 == t % 2 and g3 == t - g5
    if label == "4":
        return g1 == g2 == g3 == 0 and g5 == t % 2 and g4 == t - g5
    if label == "5":
        return g5 == t
    return False


def type_census(d: Design, t: int | None = None, expected: Sequence[int] | None = None) -> tuple[dict[str, object], list[str]]:
    """Per-type class tallies from block groups, checked against labels.

    Quadrupling designs (labels 1..5) are classified by the group multiset of
    each class; doubling designs (labels S, T, F) by the number of distinct
    first coordinates per block.  Returns the census and a list of errors.
    """
    labels = d.class_types()
    census: dict[str, object] = {}
    errors: list[str] = []
    if labels and set(labels) <= {"S", "T", "F"}:
        half = d.n // 2
        xs = np.sort(d.classes % half, axis=2)
        distinct = 1 + (np.diff(xs, axis=2) != 0).sum(axis=2)
        per_class_min = distinct.min(axis=1)
        per_class_max = distinct.max(axis=1)
        name = {4: "S", 3: "T", 2: "F"}
        tally = Counter()
        for i, (lo, hi) in enumerate(zip(per_class_min.tolist(), per_class_max.tolist())):
            kind = name.get(lo, "?") if lo == hi else "?"
            tally[kind] += 1
            if kind != labels[i] and len(errors) < LIST_LIMIT:
                errors.append(f"class {i + 1} labeled {labels[i]} looks like {kind}")
        for key in ("S", "T", "F"):
            census[key] = tally.get(key, 0)
        if expected is not None and tuple(census[k] for k in ("S", "T", "F")) != tuple(expected):
            errors.append(f"type counts {tuple(census.values())} != expected {tuple(expected)}")
        return census, errors

    if t is None:
        if d.n % 4:
            raise DesignError("type census needs n = 4t")
        t = d.n // 4
    m = d.classes.shape[1] if len(d) else 0
    g = groups_of_blocks(d.classes.reshape(-1, 4), t).reshape(len(d), m)
    sigs = np.stack([(g == j).sum(axis=1) for j in range(1, 6)], axis=1).tolist()
    tally = Counter()
    for i, sig in enumerate(sigs):
        sig = tuple(sig)
        kind = signature_type(sig)
        if labels:
            label = labels[i]
            if label != kind and _compatible(label, sig, t):
                kind = label
            elif not _compatible(label, sig, t) and len(errors) < LIST_LIMIT:
                errors.append(f"class {i + 1} labeled {label} has group counts {sig}")
        tally[kind] += 1
    for key in _ORDER:
        census[f"TYPE{key}"] = tally.get(key, 0)
    if expected is not None:
        got = tuple(tally.get(key, 0) for key in _ORDER)
        if got != tuple(expected):
            errors.append(f"type counts {got} != expected {tuple(expected)}")
    return census, errors


def group_size(t: int, group: int) -> int:
    """Number of quadruples of Z_t x Z_4 whose configuration lies in ``group``."""
    total = 0
    for c in all_configurations():
        if group_of(c) == group:
            p = 1
            for j in c:
                p *= comb(t, j)
            total += p
    return total


def group_coverage(blocks, t: int, group: int) -> tuple[int, int, int]:
    """(group size, missing, duplicated) for the ``group`` blocks among ``blocks``."""
    arr = np.sort(np.asarray(blocks, dtype=np.int64).reshape(-1, 4), axis=1)
    arr = arr[groups_of_blocks(arr, t) == group]
    size = group_size(t, group)
    if not len(arr):
        return size, size, 0
    tab = colex_table(4 * t, 4)
    ranks = tab[np.arange(4), arr].sum(axis=1)
    _, counts = np.unique(ranks, return_counts=True)
    return size, size - len(counts), int((counts > 1).sum())
