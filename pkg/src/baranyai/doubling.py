"""BP(2t, 4) from BP(t, 4), a resolvable SQS(t) and a one-factorization of K_t.

Points of the doubled design are ``(x, layer)`` with layer in {0, 1}, stored
flat as ``layer * t + x``.  Classes are emitted as all Type S classes, then
Type T, then Type F; the enumerative coder relies on that order.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import comb
from typing import Iterable, Sequence

import numpy as np

from .core import Design, DesignError, Kind, ParallelClass, normalize_array, normalize_class
from .factor import Factorization, one_factorization

# (a, b) templates for Type T: each entry lists the two blocks as
# ((element index, layer rule), ...), where a layer rule is 0, 1, "j", "k",
# "j+1" or "k+1".
_T_TEMPLATES = (
    (((0, 0), (0, 1), (1, "j"), (2, "k")), ((1, "j+1"), (2, "k+1"), (3, 0), (3, 1))),
    (((0, 0), (0, 1), (1, "j"), (3, "k")), ((1, "j+1"), (2, 0), (2, 1), (3, "k+1"))),
    (((0, 0), (0, 1), (2, "j"), (3, "k")), ((1, 0), (1, 1), (2, "j+1"), (3, "k+1"))),
    (((0, "j"), (1, 0), (1, 1), (2, "k")), ((0, "j+1"), (2, "k+1"), (3, 0), (3, 1))),
    (((0, "j"), (1, 0), (1, 1), (3, "k")), ((0, "j+1"), (2, 0), (2, 1), (3, "k+1"))),
    (((0, "j"), (1, "k"), (2, 0), (2, 1)), ((0, "j+1"), (1, "k+1"), (3, 0), (3, 1))),
)


def valid_doubling_size(t: int) -> bool:
    return t % 12 in (4, 8)


def type_counts(t: int) -> tuple[int, int, int]:
    return 8 * comb(t - 1, 3), 4 * (t - 1) * (t - 2), t - 1


def _check_class(blocks: Sequence[Sequence[int]], t: int) -> None:
    pts = sorted(p for b in blocks for p in b)
    if pts != list(range(t)) or any(len(b) != 4 for b in blocks):
        raise DesignError(f"not a parallel class of 4-subsets of Z_{t}")


def type_s_class(blocks: Sequence[Sequence[int]], t: int, i: int) -> ParallelClass:
    j2, j3, j4 = (i >> 2) & 1, (i >> 1) & 1, i & 1
    out = []
    for b in blocks:
        x1, x2, x3, x4 = sorted(b)
        out.append((x1, x2 + j2 * t, x3 + j3 * t, x4 + j4 * t))
        out.append((x1 + t, x2 + (1 - j2) * t, x3 + (1 - j3) * t, x4 + (1 - j4) * t))
    return normalize_class(out)


def double_type_s(blocks: Sequence[Sequence[int]], t: int) -> list[ParallelClass]:
    """The eight Type S classes induced by one class of BP(t, 4)."""
    _check_class(blocks, t)
    return [type_s_class(blocks, t, i) for i in range(8)]


def _layer(rule, j: int, k: int) -> int:
    if rule in (0, 1):
        return rule
    return {"j": j, "k": k, "j+1": 1 - j, "k+1": 1 - k}[rule]


def type_t_class(blocks: Sequence[Sequence[int]], t: int, i: int, j: int, k: int) -> ParallelClass:
    first, second = _T_TEMPLATES[i]
    out = []
    for b in blocks:
        xs = sorted(b)
        for tpl in (first, second):
            out.append([xs[e] + _layer(rule, j, k) * t for e, rule in tpl])
    return normalize_class(out)


def t_index(q: int) -> tuple[int, int, int]:
    """Inner Type T index q in [0, 24) to (i, j, k), lexicographic."""
    return q // 4, (q // 2) % 2, q % 2


def double_type_t(blocks: Sequence[Sequence[int]], t: int) -> list[ParallelClass]:
    """The 24 Type T classes induced by one class of a resolvable SQS(t)."""
    _check_class(blocks, t)
    return [type_t_class(blocks, t, *t_index(q)) for q in range(24)]


def double_type_f(pairs: Iterable[Sequence[int]], t: int) -> ParallelClass:
    pairs = list(pairs)
    if sorted(p for pr in pairs for p in pr) != list(range(t)):
        raise DesignError(f"not a one-factor of K_{t}")
    return normalize_class((x, y, x + t, y + t) for x, y in pairs)


@dataclass(frozen=True)
class DoublingInput:
    bp: Design
    rsqs: Design
    of: Factorization

    def __post_init__(self):
        t = self.bp.n
        if not valid_doubling_size(t):
            raise DesignError(f"doubling needs t = 4 or 8 (mod 12), got {t}")
        if self.bp.kind is not Kind.BP or self.bp.k != 4:
            raise DesignError("bp must be a BP(t, 4)")
        if self.rsqs.kind is not Kind.RSQS or self.rsqs.n != t:
            raise DesignError(f"rsqs must be a resolvable SQS({t})")
        if self.of.near or self.of.m != t:
            raise DesignError(f"of must be a one-factorization of K_{t}")

    @property
    def t(self) -> int:
        return self.bp.n


def _type_s_array(arr: np.ndarray, t: int) -> np.ndarray:
    c, m, _ = arr.shape
    out = np.empty((c, 8, 2 * m, 4), dtype=np.int32)
    for i in range(8):
        lift = np.array([0, (i >> 2) & 1, (i >> 1) & 1, i & 1], dtype=np.int32) * t
        out[:, i, :m] = arr + lift
        out[:, i, m:] = arr + (t - lift)
    return out.reshape(c * 8, 2 * m, 4)


def _type_t_array(arr: np.ndarray, t: int) -> np.ndarray:
    c, m, _ = arr.shape
    out = np.empty((c, 24, 2 * m, 4), dtype=np.int32)
    for q in range(24):
        i, j, k = t_index(q)
        for half, tpl in enumerate(_T_TEMPLATES[i]):
            for col, (e, rule) in enumerate(tpl):
                out[:, q, half * m : (half + 1) * m, col] = arr[:, :, e] + _layer(rule, j, k) * t
    return out.reshape(c * 24, 2 * m, 4)


def _type_f_array(of: Factorization, t: int) -> np.ndarray:
    pairs = np.array(of.factors, dtype=np.int32)  # (t - 1, t / 2, 2)
    return np.concatenate([pairs, pairs + t], axis=2)


def double(inp: DoublingInput) -> Design:
    """Type S classes, then Type T, then Type F, each in input order."""
    t = inp.t
    s, tt, f = type_counts(t)
    counts = (len(inp.bp) * 8, len(inp.rsqs) * 24, len(inp.of))
    if counts != (s, tt, f):
        raise DesignError(f"type counts {counts} differ from {(s, tt, f)}")
    bp = np.sort(inp.bp.classes, axis=2)
    rs = np.sort(inp.rsqs.classes, axis=2)
    arr = np.concatenate([_type_s_array(bp, t), _type_t_array(rs, t), _type_f_array(inp.of, t)])
    return Design(
        Kind.BP,
        2 * t,
        4,
        normalize_array(arr),
        provenance=f"double(t={t})",
        segments=(("S", s), ("T", tt), ("F", f)),
    )


def double_design(bp: Design, rsqs: Design, of: Factorization | None = None) -> Design:
    return double(DoublingInput(bp, rsqs, of or one_factorization(bp.n)))
