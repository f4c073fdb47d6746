"""Latin-square completion and the Type-2 matrix."""

from __future__ import annotations

from typing import Sequence

from .core import DesignError

LatinSquare = tuple[tuple[int, ...], ...]


def check_partial_rows(rows: Sequence[Sequence[int]], n: int) -> None:
    full = set(range(n))
    for r, row in enumerate(rows):
        if len(row) != n or set(row) != full:
            raise DesignError(f"row {r} is not a permutation of [0, {n})")
    for c in range(n):
        seen = {}
        for r, row in enumerate(rows):
            if row[c] in seen:
                raise DesignError(f"column {c} repeats symbol {row[c]} in rows {seen[row[c]]} and {r}")
            seen[row[c]] = r


def _next_row(used: list[set[int]], n: int, i: int) -> list[int]:
    # Kuhn's augmenting paths; cell (i, c) tries symbols from (i + c) mod n upward.
    owner = [-1] * n  # symbol -> column
    assign = [-1] * n  # column -> symbol
    prefs = [[s for s in ((i + c + d) % n for d in range(n)) if s not in used[c]] for c in range(n)]

    def augment(c: int, seen: list[bool]) -> bool:
        for s in prefs[c]:
            if seen[s]:
                continue
            seen[s] = True
            if owner[s] < 0 or augment(owner[s], seen):
                owner[s] = c
                assign[c] = s
                return True
        return False

    for c in range(n):
        if not augment(c, [False] * n):
            raise DesignError(f"no perfect matching for row {i}")  # excluded by Hall's theorem
    return assign


def complete_latin(rows: Sequence[Sequence[int]], n: int | None = None) -> LatinSquare:
    """Complete k permutation rows with distinct columns to an n x n Latin square.

    Each new row is a perfect matching between columns and the symbols still
    missing from them.  With no rows given the result is the cyclic square.
    """
    if n is None:
        if not rows:
            raise DesignError("order n is required when no rows are given")
        n = len(rows[0])
    rows = [list(r) for r in rows]
    check_partial_rows(rows, n)
    used = [{row[c] for row in rows} for c in range(n)]
    out = [tuple(r) for r in rows]
    for i in range(len(rows), n):
        row = _next_row(used, n, i)
        for c, s in enumerate(row):
            used[c].add(s)
        out.append(tuple(row))
    return tuple(out)


def is_latin(square: Sequence[Sequence[int]]) -> bool:
    n = len(square)
    full = set(range(n))
    return all(set(r) == full for r in square) and all(
        {square[r][c] for r in range(n)} == full for c in range(n)
    )


def predetermined_rows(t: int) -> int:
    """Rows of the Type-2 matrix fixed by the residue of t mod 4."""
    return {0: 0, 3: 1, 2: 2, 1: 3}[t % 4]


def type2_matrix(triples: Sequence[Sequence[int]], t: int, residue: int | None = None) -> LatinSquare:
    """Latin square whose first rows spell the blocks of a triple class.

    ``triples`` is a parallel class of 3-subsets of Z_t, in order B_0, B_1, ...
    Row ``r`` (for r below the number of predetermined rows) has
    ``M[r][3m + i] = B_m[(i + r) % 3]`` with each B_m ascending.
    """
    if t % 3:
        raise DesignError(f"t={t} is not divisible by 3")
    if residue is None:
        residue = t % 4
    if residue != t % 4:
        raise DesignError(f"residue {residue} inconsistent with t={t}")
    blocks = [tuple(sorted(b)) for b in triples]
    if any(len(b) != 3 for b in blocks) or sorted(p for b in blocks for p in b) != list(range(t)):
        raise DesignError("triples do not form a parallel class of Z_t")
    k = predetermined_rows(t)
    rows = [[b[(i + r) % 3] for b in blocks for i in range(3)] for r in range(k)]
    return complete_latin(rows, t)
