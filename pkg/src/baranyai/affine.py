"""Resolvable SQS(2^m) from the affine geometry AG(m, 2).

The blocks are the affine planes of F_2^m, i.e. the cosets of 2-dimensional
subspaces, and the cosets of one subspace form a parallel class.  Subspaces
are indexed by reduced echelon form: a basis (u, v) with leading bits
P > Q, bit Q of u cleared, and the lower bits free.  There are
2^Q * 2^(P-1) such bases for each (P, Q), ordered P first, then Q.
"""

from __future__ import annotations

from functools import lru_cache

from .core import Design, DesignError, Kind, ParallelClass, design_from_classes


def dimension(v: int) -> int:
    if v < 4 or v & (v - 1):
        raise DesignError(f"affine RSQS needs v a power of two >= 4, got {v}")
    return v.bit_length() - 1


def plane_count(v: int) -> int:
    return (v - 1) * (v - 2) // 6


@lru_cache(maxsize=None)
def _offsets(m: int) -> tuple[tuple[int, int, int], ...]:
    # (P, Q, first index) for every leading-bit pair
    out = []
    start = 0
    for p in range(1, m):
        for q in range(p):
            out.append((p, q, start))
            start += (1 << q) << (p - 1)
    return tuple(out)


def _spread(bits: int, width: int, skip: int) -> int:
    """Place the low ``width - 1`` bits of ``bits`` into positions < width, skipping ``skip``."""
    low = bits & ((1 << skip) - 1)
    high = bits >> skip
    return low | (high << (skip + 1))


def subspace_basis(v: int, i: int) -> tuple[int, int]:
    """Echelon basis of the i-th (0-based) 2-dimensional subspace of F_2^m."""
    m = dimension(v)
    if not 0 <= i < plane_count(v):
        raise DesignError(f"class index {i} outside [0, {plane_count(v)})")
    for p, q, start in reversed(_offsets(m)):
        if i >= start:
            r = i - start
            vf = r & ((1 << q) - 1)
            uf = r >> q
            return (1 << p) | _spread(uf, p, q), (1 << q) | vf
    raise AssertionError("unreachable")


def affine_class(v: int, i: int) -> ParallelClass:
    """The i-th parallel class: all cosets of the i-th subspace, sorted by minimum."""
    u, w = subspace_basis(v, i)
    uw = u ^ w
    return tuple(
        (x, *sorted((x ^ u, x ^ w, x ^ uw)))
        for x in range(v)
        if x < x ^ u and x < x ^ w and x < x ^ uw
    )


def affine_rsqs(v: int) -> Design:
    classes = [affine_class(v, i) for i in range(plane_count(v))]
    return design_from_classes(Kind.RSQS, v, 4, classes, provenance=f"affine(m={dimension(v)})")
