"""BP(4t, 4) on Z_t x Z_4 from a BP(t + d, 4) and a BP(t, 3).

Classes come in five types, by which configurations their quadruples use:

1. lifted from the classes of BP(t + d, 4), where d = (-t) mod 4 and the
   extra points Omega_1..Omega_d are encoded as t, t + 1, t + 2;
2. three points in one layer and one in another, driven by BP(t, 3) and a
   Latin square per triple class;
3. two points in each of two layers, from (near-)one-factors of K_t;
4. two points in one layer and one in each of two others;
5. one point per layer, as cosets X + A of the diagonal A.

For odd t the configuration-(1,1,1,1) quadruples are split into the L-sets
below, which decide where each of them is used.  Residues 4 and 8 (mod 12)
are handled by doubling twice.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field
from math import comb
from typing import Iterable, Sequence

import numpy as np

from . import doubling
from .core import Block, Design, DesignError, Kind, normalize_array, quad_from_coords, set_sum
from .factor import Factorization, near_one_factorization, one_factorization
from .latin import predetermined_rows, type2_matrix

Coords = tuple[int, int, int, int]
Class = list[Block]

# doubled layer pairs {A, B} of Type 4, in the order M_1 .. M_6
TYPE4_PAIRS = ((0, 3), (0, 2), (0, 1), (1, 2), (1, 3), (2, 3))
# layer pairings of the three Type 3 generator sets
TYPE3_PATTERNS = (((0, 1), (2, 3)), ((0, 3), (1, 2)), ((0, 2), (1, 3)))
SUPPORTED_RESIDUES = (0, 3, 4, 6, 8, 9)


def delta1(t: int) -> int:
    return (-t) % 4


def delta2(t: int) -> int:
    return (-t) % 3


def case_of(t: int) -> int:
    r = t % 12
    if r not in SUPPORTED_RESIDUES:
        raise DesignError(f"t={t} is congruent to {r} mod 12; only 0, 3, 4, 6, 8, 9 are supported")
    return {0: 1, 3: 2, 4: 3, 6: 4, 8: 5, 9: 6}[r]


def case_counts(t: int) -> tuple[int, int, int, int, int]:
    """Expected class counts of Types 1..5 for the quadrupling cases 1, 2, 4 and 6."""
    c = case_of(t)
    if c == 1:
        return comb(t - 1, 3), 2 * t * (t - 1) * (t - 2), 3 * (t - 1) * comb(t, 2), 6 * (t - 1) * t * t, t**3
    if c == 2:
        return (
            comb(t, 3),
            (4 * t - 1) * comb(t - 1, 2),
            3 * t * comb(t, 2),
            6 * t**3,
            t**3 - 3 * comb(t, 2) - 6 * t * t,
        )
    if c == 4:
        return (
            comb(t + 1, 3),
            (2 * t - 1) * (t - 1) * (t - 2),
            3 * (t - 1) * comb(t, 2) - (t - 1),
            6 * (t - 1) * t * t,
            t**3,
        )
    if c == 6:
        return (
            comb(t + 2, 3),
            (4 * t - 3) * comb(t - 1, 2),
            3 * t * comb(t, 2) - 3 * t,
            6 * t**3,
            t**3 - 1 - 3 * comb(t, 2) + 3 - 6 * t * t,
        )
    raise DesignError(f"t={t} is built by doubling, not by Types 1-5")


def _pt(x: int, layer: int, t: int) -> int:
    return layer * t + x % t


def _blk(points: Iterable[int]) -> Block:
    return tuple(sorted(points))


# ---------------------------------------------------------------------------
# input


@dataclass(frozen=True)
class QuadInput:
    t: int
    bp4: Design
    bp3: Design | None = None
    rsqs: tuple[Design, ...] = ()

    def __post_init__(self):
        t = self.t
        case = case_of(t)
        if case == 2 and t < 15:
            raise DesignError("t = 3 (mod 12) needs t >= 15")
        if case == 6 and t < 21:
            raise DesignError("t = 9 (mod 12) needs t >= 21")
        n4 = t + (delta1(t) if case not in (3, 5) else 0)
        if self.bp4.kind is not Kind.BP or (self.bp4.n, self.bp4.k) != (n4, 4):
            raise DesignError(f"bp4 must be a BP({n4},4), got {self.bp4.kind.value}({self.bp4.n},{self.bp4.k})")
        if case in (3, 5):
            if self.rsqs and [(d.kind, d.n) for d in self.rsqs] != [(Kind.RSQS, t), (Kind.RSQS, 2 * t)]:
                raise DesignError(f"rsqs must be (RSQS({t}), RSQS({2 * t}))")
            return
        n3 = t + delta2(t)
        if self.bp3 is None or self.bp3.kind is not Kind.BP or (self.bp3.n, self.bp3.k) != (n3, 3):
            raise DesignError(f"bp3 must be a BP({n3},3)")

    @property
    def case(self) -> int:
        return case_of(self.t)


# ---------------------------------------------------------------------------
# Type 1

_SINGLE_SHIFT = {3: {1: 0}, 2: {1: 0, 2: 1}, 1: {3: 0, 2: 1, 1: 2}}
_DOUBLE_LAYERS = {
    2: {(1, 2): ((0, 1), (2, 3))},
    1: {(2, 3): ((0, 1), (2, 3)), (1, 3): ((0, 3), (1, 2)), (1, 2): ((0, 2), (1, 3))},
}


def type1_blocks(b: Sequence[int], t: int) -> list[Block]:
    """Quadruples over Z_t x Z_4 induced by one block of BP(t + d, 4)."""
    b = sorted(b)
    xs = [p for p in b if p < t]
    om = tuple(p - t + 1 for p in b if p >= t)
    r = t % 4
    if not om:
        return [_blk(_pt(x, i, t) for x in xs) for i in range(4)]
    try:
        if len(om) == 1:
            sh = _SINGLE_SHIFT[r][om[0]]
            return [_blk([*(_pt(x, i, t) for x in xs), _pt(xs[(i + sh) % 3], 3, t)]) for i in range(3)]
        if len(om) == 2:
            x0, x1 = xs
            return [_blk([_pt(x0, a, t), _pt(x1, a, t), _pt(x0, c, t), _pt(x1, c, t)]) for a, c in _DOUBLE_LAYERS[r][om]]
        if len(om) == 3 and r == 1:
            return [_blk(_pt(xs[0], i, t) for i in range(4))]
    except KeyError:
        pass
    raise DesignError(f"block {tuple(b)} has extension points {om} not allowed for t={t}")


def type1_classes(inp: QuadInput) -> list[Class]:
    t = inp.t
    if inp.bp4.n != t + delta1(t):
        raise DesignError("Type 1 needs BP(t + delta1, 4)")
    return [[q for b in cls for q in type1_blocks(b, t)] for cls in inp.bp4.iter_classes()]


# ---------------------------------------------------------------------------
# Type 2


def _phi(j: int) -> dict[int, int]:
    return {s: i for i, s in enumerate(s for s in range(4) if s != j)}


def type2_for_class(triples: Sequence[Sequence[int]], t: int) -> list[Class]:
    """The 3t classes R_{i,j} followed by one class R_i per free Latin row."""
    blocks = [tuple(sorted(b)) for b in triples]
    M = type2_matrix(blocks, t)
    out: list[Class] = []
    for i in range(t):
        for j in range(3):
            phi = _phi(j)
            cls = []
            for m, (x0, x1, x2) in enumerate(blocks):
                for s, col in phi.items():
                    cls.append(_blk([s * t + x0, s * t + x1, s * t + x2, j * t + M[i][3 * m + col]]))
            out.append(cls)
    for i in range(predetermined_rows(t), t):
        cls = []
        for m, (x0, x1, x2) in enumerate(blocks):
            for s in range(3):
                cls.append(_blk([s * t + x0, s * t + x1, s * t + x2, 3 * t + M[i][3 * m + s]]))
        out.append(cls)
    return out


def type2_classes(inp: QuadInput) -> list[Class]:
    t = inp.t
    if t % 3:
        raise DesignError(f"Type 2 needs 3 | t, got t={t}")
    return [c for R in inp.bp3.iter_classes() for c in type2_for_class(R, t)]


# ---------------------------------------------------------------------------
# Type 3


def type3_even(t: int, of: Factorization | None = None, skip_t2: bool = False) -> list[Class]:
    if t % 2:
        raise DesignError(f"type3_even needs even t, got {t}")
    of = of or one_factorization(t)
    half = t // 2
    out: list[Class] = []
    for (a, b), (c, d) in TYPE3_PATTERNS_EVEN:
        for i in range(t - 1):
            for s in range(t - 1):
                for r in range(half):
                    if skip_t2 and (a, b) == (0, 1) and i == s and r == 0:
                        continue
                    cls = []
                    for j in range(half):
                        x, y = of.pair(i, j)
                        z, v = of.pair(s, j + r)
                        cls.append(_blk([a * t + x, a * t + y, b * t + z, b * t + v]))
                        cls.append(_blk([c * t + x, c * t + y, d * t + z, d * t + v]))
                    out.append(cls)
    return out


# {a, b} = {0, 1}, {0, 2}, {0, 3} with {c, d} the complementary layers
TYPE3_PATTERNS_EVEN = (((0, 1), (2, 3)), ((0, 2), (1, 3)), ((0, 3), (1, 2)))


def colex_key(x: Coords) -> tuple[int, int, int, int]:
    """Sort key of a (1,1,1,1) quadruple by the colex order of its flat points."""
    return x[3], x[2], x[1], x[0]


def _coords(q: Sequence[int], t: int) -> Coords:
    return tuple(p - i * t for i, p in enumerate(sorted(q)))  # type: ignore[return-value]


def type3_odd(
    t: int,
    nof: Factorization | None,
    g1: Iterable[Sequence[int]],
    g2: Iterable[Sequence[int]],
    g3: Iterable[Sequence[int]],
    reserved: Sequence[Iterable[Sequence[int]]] = ((), (), ()),
) -> list[Class]:
    """One class per generator quadruple B of G_1, G_2, G_3 (flat blocks).

    Appearance indices of a generator's two layer pairs follow the colex order
    of the generators; quadruples in ``reserved[i]`` take index 0 of their
    pairs first and produce no class.
    """
    if t % 2 == 0:
        raise DesignError(f"type3_odd needs odd t, got {t}")
    nof = nof or near_one_factorization(t)
    half = (t - 1) // 2
    out: list[Class] = []
    for gens, res, ((a, b), (c, d)) in zip((g1, g2, g3), reserved, TYPE3_PATTERNS):
        first: Counter = Counter()
        second: Counter = Counter()
        for X in (_coords(q, t) for q in res):
            first[X[a], X[b]] += 1
            second[X[c], X[d]] += 1
        for X in sorted((_coords(q, t) for q in gens), key=colex_key):
            r = first[X[a], X[b]]
            s = second[X[c], X[d]]
            first[X[a], X[b]] += 1
            second[X[c], X[d]] += 1
            if r >= half or s >= half:
                raise DesignError(f"generator {X} exceeds pair frequency {half}")
            cls = [quad_from_coords(X, t)]
            for p in range(half):
                x, y = nof.pair(X[a], p)
                z, v = nof.pair(X[b], p + r)
                cls.append(_blk([a * t + x, a * t + y, b * t + z, b * t + v]))
                x, y = nof.pair(X[c], p)
                z, v = nof.pair(X[d], p + s)
                cls.append(_blk([c * t + x, c * t + y, d * t + z, d * t + v]))
            out.append(cls)
    return out


# ---------------------------------------------------------------------------
# Type 4


def _singles(A: int, B: int) -> tuple[int, int]:
    C, D = (L for L in range(4) if L not in (A, B))
    return C, D


def type4_even(t: int, of: Factorization | None = None) -> list[Class]:
    if t % 2:
        raise DesignError(f"type4_even needs even t, got {t}")
    of = of or one_factorization(t)
    half = t // 2
    out: list[Class] = []
    for A, B in TYPE4_PAIRS:
        C, D = _singles(A, B)
        for i in range(t - 1):
            pairs = [of.pair(i, r) for r in range(half)]
            for j in range(t):
                for k in range(t):
                    cls = []
                    for r, (x, y) in enumerate(pairs):
                        cls.append(_blk([A * t + x, A * t + y, _pt(j + r, C, t), _pt(k + r, D, t)]))
                        cls.append(_blk([B * t + x, B * t + y, _pt(j - r - 1, C, t), _pt(k - r - 1, D, t)]))
                    out.append(cls)
    return out


def _check_unique_triples(gens: Sequence[Coords], A: int, B: int, t: int) -> None:
    C, D = _singles(A, B)
    for keep in (A, B):
        seen = {(X[keep], X[C], X[D]) for X in gens}
        if len(seen) != len(gens) or len(gens) != t**3:
            raise DesignError(f"generator set lacks the unique-triple property on layers {keep},{C},{D}")


def type4_odd(t: int, nof: Factorization | None, hs: Sequence[Iterable[Sequence[int]]]) -> list[Class]:
    """One class per generator X of H_1..H_6 (flat blocks), H_i serving M_i."""
    if t % 2 == 0:
        raise DesignError(f"type4_odd needs odd t, got {t}")
    if len(hs) != 6:
        raise DesignError("type4_odd needs six generator sets")
    nof = nof or near_one_factorization(t)
    half = (t - 1) // 2
    out: list[Class] = []
    for h, (A, B) in zip(hs, TYPE4_PAIRS):
        gens = sorted((_coords(q, t) for q in h), key=colex_key)
        _check_unique_triples(gens, A, B, t)
        C, D = _singles(A, B)
        for X in gens:
            cls = [quad_from_coords(X, t)]
            for r in range(half):
                x, y = nof.pair(X[A], r)
                cls.append(_blk([A * t + x, A * t + y, _pt(X[C] + r + 1, C, t), _pt(X[D] + r + 1, D, t)]))
                x, y = nof.pair(X[B], r)
                cls.append(_blk([_pt(X[C] - r - 1, C, t), _pt(X[D] - r - 1, D, t), B * t + x, B * t + y]))
            out.append(cls)
    return out


# ---------------------------------------------------------------------------
# (1,1,1,1) algebra: the sets A, B, C, D and the L-sets


def _gen(t: int, f) -> frozenset[Block]:
    return frozenset(quad_from_coords(f(i), t) for i in range(t))


def diag_sets(t: int) -> tuple[frozenset[Block], ...]:
    """A, B, C, D as sets of flat blocks."""
    return (
        _gen(t, lambda i: (i, i, i, i)),
        _gen(t, lambda i: (i, 0, i, 0)),
        _gen(t, lambda i: (i, i, 0, 0)),
        _gen(t, lambda i: (i, 0, 0, 0)),
    )


def _q(t: int, *xs: Coords) -> frozenset[Block]:
    return frozenset(quad_from_coords(x, t) for x in xs)


def _sum(t: int, *sets: Iterable[Block]) -> frozenset[Block]:
    acc = frozenset(sets[0])
    for s in sets[1:]:
        acc = set_sum(acc, s, t)
    return acc


def coset_key(q: Sequence[int], t: int) -> tuple[int, int, int]:
    """(beta, gamma, delta) with q = x3*A1 + beta*B1 + gamma*C1 + delta*D1."""
    x0, x1, x2, x3 = _coords(q, t)
    return (x2 - x3) % t, (x1 - x3) % t, (x0 - x1 - x2 + x3) % t


@dataclass(frozen=True)
class LSets:
    t: int
    L: tuple[frozenset[Block], ...]
    H: tuple[frozenset[Block], ...]
    S: tuple[frozenset[Block], ...] = ()
    primed: bool = False

    @property
    def generators(self) -> tuple[frozenset[Block], ...]:
        """G_1, G_2, G_3 for Type 3: L_2..L_4, minus the S-sets when primed."""
        if not self.primed:
            return self.L[1], self.L[2], self.L[3]
        return tuple(self.L[i + 1] - self.S[i] for i in range(3))

    def type5_classes(self) -> list[Class]:
        return type5_odd(self)


def _finish(t: int, parts: list[frozenset[Block]]) -> frozenset[Block]:
    A, B, C, D = diag_sets(t)
    everything = _sum(t, A, B, C, D)
    used = frozenset().union(*parts)
    if sum(len(p) for p in parts) != len(used):
        raise DesignError("L-sets overlap")
    return everything - used


def build_L_sets(t: int) -> LSets:
    if t % 2 == 0 or t < 15:
        raise DesignError(f"L-sets need odd t >= 15, got {t}")
    A, B, C, D = diag_sets(t)
    ABC = _sum(t, A, B, C)
    AB = _sum(t, A, B)
    H = tuple(_sum(t, _q(t, (i, 0, 0, 0)), ABC) for i in range(1, 7))
    L1 = frozenset().union(*H)
    L2 = _sum(t, _q(t, *((i, i, 0, 0) for i in range(1, (t - 1) // 2 + 1))), AB)
    L3 = _sum(t, _q(t, *((i, i, 0, 0) for i in range((t + 1) // 2, t))), AB)
    L4 = _sum(t, _q(t, *((i, 0, 0, 0) for i in range(7, (t + 11) // 2 + 1))), A, C)
    L5 = _finish(t, [L1, L2, L3, L4])
    return LSets(t, (L1, L2, L3, L4, L5), H)


def s_sets(t: int) -> tuple[frozenset[Block], ...]:
    A = diag_sets(t)[0]
    h = (t + 1) // 2
    return (
        _sum(t, _q(t, (1, 1, 0, 0)), A),
        _sum(t, _q(t, (0, h, h, 0)), A),
        _sum(t, _q(t, (1, 0, 1, 0)), A),
    )


def build_Lprime_sets(t: int) -> LSets:
    if t % 12 != 9 or t < 21:
        raise DesignError(f"L'-sets need t = 9 (mod 12) and t >= 21, got {t}")
    A, B, C, D = diag_sets(t)
    ABC = _sum(t, A, B, C)
    AB = _sum(t, A, B)
    H = tuple(_sum(t, _q(t, (i, 0, 0, 0)), ABC) for i in range(1, 7))
    L1 = frozenset().union(*H)
    L2 = _sum(t, _q(t, *((i, i, 0, 0) for i in range(1, (t - 1) // 2 + 1))), AB)
    L3 = _sum(t, _q(t, (-1, 0, 0, 0)), _q(t, *((i, i, 0, 0) for i in range((t + 1) // 2, t))), AB)
    low_b = _q(t, *((i, 0, i, 0) for i in range(1, (t - 1) // 2 + 1)))
    L4 = (
        _sum(t, low_b, A)
        | _sum(t, _q(t, (7, 0, 0, 0)), _q(t, *((i, i, 0, 0) for i in range(1, t) if i != t - 7)), low_b, A)
        | _sum(t, _q(t, (7, -7, 0, 0)), low_b, A)
    )
    L5 = _finish(t, [L1, L2, L3, L4])
    S = s_sets(t)
    for i, s in enumerate(S):
        if not s <= (L2, L3, L4)[i]:
            raise DesignError(f"S_{i + 2} is not contained in L'_{i + 2}")
    return LSets(t, (L1, L2, L3, L4, L5), H, S, primed=True)


def pair_frequencies(quads: Iterable[Sequence[int]], t: int, a: int, b: int) -> Counter:
    """How often each value pair (x_a, x_b) occurs on layers a and b."""
    return Counter((X[a], X[b]) for X in (_coords(q, t) for q in quads))


def has_pair_frequency(quads: Iterable[Sequence[int]], t: int, pattern, times: int | None = None) -> bool:
    """True when every pair of Z_t^2 appears ``times`` times on each layer pair of ``pattern``."""
    quads = list(quads)
    times = (t - 1) // 2 if times is None else times
    for a, b in pattern:
        freq = pair_frequencies(quads, t, a, b)
        if len(freq) != t * t or set(freq.values()) != {times}:
            return False
    return True


def cosets(quads: Iterable[Sequence[int]], t: int) -> list[Class]:
    """Split a union of cosets X + A into its classes, sorted by the member with x3 = 0."""
    groups: dict[tuple[int, int, int], list[Block]] = {}
    for q in quads:
        groups.setdefault(coset_key(q, t), []).append(tuple(q))
    out = []
    for key in sorted(groups, key=lambda k: ((k[0] + k[1] + k[2]) % t, k[1], k[0])):
        g = groups[key]
        if len(g) != t:
            raise DesignError(f"coset {key} is only partially present ({len(g)} of {t})")
        out.append(sorted(g, key=lambda b: b[0]))
    return out


def type5_even(t: int) -> list[Class]:
    if t % 2:
        raise DesignError(f"type5_even needs even t, got {t}")
    out = []
    for x0 in range(t):
        for x1 in range(t):
            for x2 in range(t):
                out.append([quad_from_coords((x0 + a, x1 + a, x2 + a, a), t) for a in range(t)])
    return out


def type5_odd(ls: LSets) -> list[Class]:
    t = ls.t
    if not ls.primed:
        return cosets(ls.L[4], t)
    A = diag_sets(t)[0]
    if not A <= ls.L[4]:
        raise DesignError("A is not contained in L'_5")
    return cosets(ls.L[4] - A, t) + [sorted(s, key=lambda b: b[0]) for s in ls.S]


def type5_classes(t: int, used: LSets | None = None) -> list[Class]:
    if t % 2 == 0:
        return type5_even(t)
    if used is None:
        raise DesignError("odd t needs the L-sets for Type 5")
    return type5_odd(used)


# ---------------------------------------------------------------------------
# assembly


def _to_array(classes: list[Class], n: int) -> np.ndarray:
    arr = np.array(classes, dtype=np.int32)
    if arr.ndim != 3 or arr.shape[1:] != (n // 4, 4):
        raise DesignError(f"class array has shape {arr.shape}, expected (*, {n // 4}, 4)")
    return arr


def build_types(inp: QuadInput) -> list[list[Class]]:
    """Classes of Types 1..5 for cases 1, 2, 4 and 6."""
    t, case = inp.t, inp.case
    t1 = type1_classes(inp)
    t2 = type2_classes(inp)
    if case in (1, 4):
        t3 = type3_even(t, skip_t2=case == 4)
        t4 = type4_even(t)
        t5 = type5_even(t)
    else:
        ls = build_L_sets(t) if case == 2 else build_Lprime_sets(t)
        g1, g2, g3 = ls.generators
        t3 = type3_odd(t, None, g1, g2, g3, ls.S if ls.primed else ((), (), ()))
        t4 = type4_odd(t, None, ls.H)
        t5 = type5_odd(ls)
    return [t1, t2, t3, t4, t5]


def quadruple_bp(inp: QuadInput) -> Design:
    t, case = inp.t, inp.case
    if case in (3, 5):
        from .seeds import rsqs_provider

        r1, r2 = inp.rsqs or (rsqs_provider(t), rsqs_provider(2 * t))
        return doubling.double_design(doubling.double_design(inp.bp4, r1), r2)
    types = build_types(inp)
    counts = tuple(len(c) for c in types)
    expected = case_counts(t)
    if counts != expected:
        raise DesignError(f"type counts {counts} differ from the case {case} identity {expected}")
    arr = np.concatenate([_to_array(c, 4 * t) for c in types if c])
    return Design(
        Kind.BP,
        4 * t,
        4,
        normalize_array(arr),
        provenance=f"quadruple(t={t},case={case})",
        segments=tuple((str(i + 1), n) for i, n in enumerate(counts)),
    )
