"""Dancing-links Algorithm X over flat integer arrays.

Columns are chosen by minimum size with the lowest index winning ties, and
rows are tried in the order they were given, so a fixed instance always
yields the same first solution.
"""

from __future__ import annotations

import time
from typing import Sequence


class SearchTimeout(RuntimeError):
    """The search budget ran out before a solution was found."""


class ExactCover:
    def __init__(self, n_items: int, rows: Sequence[Sequence[int]], n_primary: int | None = None):
        # node 0 is the root; nodes 1..n_items are column headers
        self.n_items = n_items
        self.n_primary = n_items if n_primary is None else n_primary
        n_nodes = 1 + n_items + sum(len(r) for r in rows)
        L = list(range(n_nodes))
        R = list(range(n_nodes))
        U = list(range(n_nodes))
        D = list(range(n_nodes))
        C = [0] * n_nodes
        self.row_of = [-1] * n_nodes
        self.size = [0] * (n_items + 1)

        # only primary columns are linked into the header ring
        prev = 0
        for c in range(1, self.n_primary + 1):
            L[c], R[prev] = prev, c
            prev = c
        R[prev], L[0] = 0, prev
        for c in range(self.n_primary + 1, n_items + 1):
            L[c] = R[c] = c

        node = n_items + 1
        for ri, row in enumerate(rows):
            first = node
            if len(set(row)) != len(row):
                raise ValueError(f"row {ri} repeats an item")
            for item in row:
                if not 0 <= item < n_items:
                    raise ValueError(f"row {ri} has item {item} outside [0, {n_items})")
                c = item + 1
                C[node] = c
                self.row_of[node] = ri
                U[node], D[node] = U[c], c
                D[U[c]] = node
                U[c] = node
                self.size[c] += 1
                L[node], R[node] = node - 1, node + 1
                node += 1
            if row:
                L[first], R[node - 1] = node - 1, first
        self.L, self.R, self.U, self.D, self.C = L, R, U, D, C
        self.nodes = 0

    def _cover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.size
        R[L[c]], L[R[c]] = R[c], L[c]
        i = D[c]
        while i != c:
            j = R[i]
            while j != i:
                D[U[j]], U[D[j]] = D[j], U[j]
                S[C[j]] -= 1
                j = R[j]
            i = D[i]

    def _uncover(self, c: int) -> None:
        L, R, U, D, C, S = self.L, self.R, self.U, self.D, self.C, self.size
        i = U[c]
        while i != c:
            j = L[i]
            while j != i:
                S[C[j]] += 1
                D[U[j]] = U[D[j]] = j
                j = L[j]
            i = U[i]
        R[L[c]] = L[R[c]] = c

    def solve(self, timeout: float | None = None) -> list[int] | None:
        """First solution as a list of row indices, or None if infeasible."""
        deadline = None if timeout is None else time.monotonic() + timeout
        R, D, C, S = self.R, self.D, self.C, self.size
        partial: list[int] = []

        def search() -> bool:
            if R[0] == 0:
                return True
            self.nodes += 1
            if deadline is not None and self.nodes % 4096 == 1 and time.monotonic() > deadline:
                raise SearchTimeout(f"exact cover search exceeded {timeout} s after {self.nodes} nodes")
            c, best = 0, None
            j = R[0]
            while j != 0:
                if best is None or S[j] < best:
                    c, best = j, S[j]
                    if best <= 1:
                        break
                j = R[j]
            if best == 0:
                return False
            self._cover(c)
            r = D[c]
            while r != c:
                partial.append(self.row_of[r])
                j = self.R[r]
                while j != r:
                    self._cover(C[j])
                    j = self.R[j]
                if search():
                    return True
                j = self.L[r]
                while j != r:
                    self._uncover(C[j])
                    j = self.L[j]
                partial.pop()
                r = D[r]
            self._uncover(c)
            return False

        return list(partial) if search() else None


def solve_exact_cover(
    n_items: int,
    rows: Sequence[Sequence[int]],
    timeout: float | None = None,
    n_primary: int | None = None,
) -> list[int] | None:
    """Rows covering each primary item exactly once (secondary items at most once)."""
    return ExactCover(n_items, rows, n_primary).solve(timeout)
