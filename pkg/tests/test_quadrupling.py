from math import comb

import numpy as np
import pytest

from baranyai import seeds
from baranyai.builder import bp4
from baranyai.core import DesignError, groups_of_blocks, labeled_block, normalize_class, quad_from_coords
from baranyai.quadrupling import (
    TYPE3_PATTERNS,
    QuadInput,
    build_L_sets,
    build_Lprime_sets,
    case_counts,
    coset_key,
    delta1,
    delta2,
    diag_sets,
    has_pair_frequency,
    quadruple_bp,
    type1_blocks,
    type1_classes,
    type2_classes,
    type3_even,
    type3_odd,
    type4_even,
    type4_odd,
    type5_classes,
)
from baranyai.verify import group_coverage, verify_bp, verify_class


def quad_input(t):
    return QuadInput(t, bp4(t + delta1(t)), seeds.bp3_provider(t + delta2(t)))


def lab(t, *blocks):
    return normalize_class(labeled_block(b, t) for b in blocks)


def groups(classes, t):
    return groups_of_blocks(np.array(classes).reshape(-1, 4), t).reshape(len(classes), -1)


# ---------------------------------------------------------------- Type 1


def test_type1_templates():
    assert type1_blocks((0, 1, 2, 3), 12) == [(0, 1, 2, 3), (12, 13, 14, 15), (24, 25, 26, 27), (36, 37, 38, 39)]
    t = 15
    got = type1_blocks((2, 5, 9, t), t)
    assert got == [
        labeled_block([(2, 0), (5, 0), (9, 0), (2, 3)], t),
        labeled_block([(2, 1), (5, 1), (9, 1), (5, 3)], t),
        labeled_block([(2, 2), (5, 2), (9, 2), (9, 3)], t),
    ]
    t = 21  # t = 1 (mod 4)
    assert type1_blocks((4, t, t + 1, t + 2), t) == [labeled_block([(4, i) for i in range(4)], t)]
    assert type1_blocks((1, 2, t, t + 1), t) == [
        labeled_block([(1, 0), (2, 0), (1, 2), (2, 2)], t),
        labeled_block([(1, 1), (2, 1), (1, 3), (2, 3)], t),
    ]
    with pytest.raises(DesignError):
        type1_blocks((0, 1, 2, 12), 12)


ALLOWED = {0: {1}, 3: {1, 2}, 2: {1, 2, 3}, 1: {1, 2, 3, 5}}


@pytest.mark.parametrize("t,count", [(12, 165), (15, 455), (6, 35), (21, 1771)])
def test_type1_counts_and_purity(t, count):
    classes = type1_classes(quad_input(t))
    assert len(classes) == count == comb(t + delta1(t) - 1, 3)
    for c in classes:
        assert verify_class(c, 4 * t, 4).ok
    g = groups(classes, t)
    assert set(np.unique(g).tolist()) <= ALLOWED[t % 4]
    if t % 4 == 0:
        assert (g == 1).all()
    if t % 4 == 3:
        assert ((g == 1).sum(axis=1) == t - 3).all() and ((g == 2).sum(axis=1) == 3).all()


# ---------------------------------------------------------------- Type 2


@pytest.mark.parametrize("t,count", [(12, 2640), (15, 5369), (6, 220), (21, 15390)])
def test_type2_counts_and_groups(t, count):
    classes = type2_classes(quad_input(t))
    assert len(classes) == count
    assert (groups(classes, t) == 2).all()
    for c in classes[:: max(1, len(classes) // 50)]:
        assert verify_class(c, 4 * t, 4).ok


@pytest.mark.parametrize("t", [6, 12, 15])
def test_group2_exactly_once(t):
    inp = quad_input(t)
    size, missing, dup = group_coverage(type1_classes(inp) + type2_classes(inp), t, 2)
    assert size == 12 * t * comb(t, 3)
    assert (missing, dup) == (0, 0)


# ---------------------------------------------------------------- Type 3


def test_type3_even_example():
    c = type3_even(4)[0]
    assert normalize_class(c) == lab(
        4,
        [(1, 0), (2, 0), (1, 1), (2, 1)],
        [(0, 0), (3, 0), (0, 1), (3, 1)],
        [(1, 2), (2, 2), (1, 3), (2, 3)],
        [(0, 2), (3, 2), (0, 3), (3, 3)],
    )


@pytest.mark.parametrize("t,skip,count", [(12, False, 2178), (6, True, 3 * 5 * 15 - 5), (18, True, 3 * 17 * 153 - 17)])
def test_type3_even_counts(t, skip, count):
    classes = type3_even(t, skip_t2=skip)
    assert len(classes) == count
    assert (groups(classes, t) == 3).all()


def test_type3_odd_structure():
    t = 15
    ls = build_L_sets(t)
    classes = type3_odd(t, None, *ls.generators)
    assert len(classes) == 3 * t * comb(t, 2) == 4725
    g = groups(classes, t)
    assert ((g == 5).sum(axis=1) == 1).all() and ((g == 3).sum(axis=1) == t - 1).all()
    for c in classes[::97]:
        assert verify_class(c, 4 * t, 4).ok


def test_type3_odd_rejects_bad_frequency():
    t = 15
    L2 = build_L_sets(t).L[1]
    with pytest.raises(DesignError):
        type3_odd(t, None, L2 | {quad_from_coords((0, 0, 5, 5), t)}, (), ())


# ---------------------------------------------------------------- Type 4

# the eight worked classes for t = 4, index (x, j, k) with x the factor
WORKED_T4 = [
    ((0, 0, 0), [[(1, 0), (2, 0), (0, 1), (0, 2)], [(0, 0), (3, 0), (1, 1), (1, 2)], [(1, 3), (2, 3), (3, 1), (3, 2)], [(0, 3), (3, 3), (2, 1), (2, 2)]]),
    ((0, 0, 1), [[(1, 0), (2, 0), (0, 1), (1, 2)], [(0, 0), (3, 0), (1, 1), (2, 2)], [(1, 3), (2, 3), (3, 1), (0, 2)], [(0, 3), (3, 3), (2, 1), (3, 2)]]),
    ((0, 0, 2), [[(1, 0), (2, 0), (0, 1), (2, 2)], [(0, 0), (3, 0), (1, 1), (3, 2)], [(1, 3), (2, 3), (3, 1), (1, 2)], [(0, 3), (3, 3), (2, 1), (0, 2)]]),
    ((0, 0, 3), [[(1, 0), (2, 0), (0, 1), (3, 2)], [(0, 0), (3, 0), (1, 1), (0, 2)], [(1, 3), (2, 3), (3, 1), (2, 2)], [(0, 3), (3, 3), (2, 1), (1, 2)]]),
    ((0, 1, 0), [[(1, 0), (2, 0), (1, 1), (0, 2)], [(0, 0), (3, 0), (2, 1), (1, 2)], [(1, 3), (2, 3), (0, 1), (3, 2)], [(0, 3), (3, 3), (3, 1), (2, 2)]]),
    ((0, 1, 1), [[(1, 0), (2, 0), (1, 1), (1, 2)], [(0, 0), (3, 0), (2, 1), (2, 2)], [(1, 3), (2, 3), (0, 1), (0, 2)], [(0, 3), (3, 3), (3, 1), (3, 2)]]),
    ((0, 1, 2), [[(1, 0), (2, 0), (1, 1), (2, 2)], [(0, 0), (3, 0), (2, 1), (3, 2)], [(1, 3), (2, 3), (0, 1), (1, 2)], [(0, 3), (3, 3), (3, 1), (0, 2)]]),
    ((0, 1, 3), [[(1, 0), (2, 0), (1, 1), (3, 2)], [(0, 0), (3, 0), (2, 1), (0, 2)], [(1, 3), (2, 3), (0, 1), (2, 2)], [(0, 3), (3, 3), (3, 1), (1, 2)]]),
]


@pytest.mark.parametrize("index,expected", WORKED_T4)
def test_type4_even_worked_classes(index, expected):
    i, j, k = index
    got = type4_even(4)[i * 16 + j * 4 + k]
    assert normalize_class(got) == lab(4, *expected)


def test_type4_even_count():
    classes = type4_even(12)
    assert len(classes) == 9504
    assert (groups(classes, 12) == 4).all()


def test_type4_odd_structure():
    t = 15
    classes = type4_odd(t, None, build_L_sets(t).H)
    assert len(classes) == 6 * t**3 == 20250
    g = groups(classes, t)
    assert ((g == 5).sum(axis=1) == 1).all() and ((g == 4).sum(axis=1) == t - 1).all()
    for c in classes[::331]:
        assert verify_class(c, 4 * t, 4).ok


def test_type4_odd_rejects_non_unique_triples():
    t = 15
    H = list(build_L_sets(t).H)
    X = next(iter(H[0]))
    x0, x1, x2, x3 = (p - i * t for i, p in enumerate(X))
    H[0] = H[0] - {X} | {quad_from_coords((x0, x1, x2, x3 + 1), t)}
    with pytest.raises(DesignError):
        type4_odd(t, None, H)
    with pytest.raises(DesignError):
        type4_odd(t, None, H[:5])


# ---------------------------------------------------------------- L-sets


def test_L_sets_at_15():
    t = 15
    ls = build_L_sets(t)
    sizes = [len(L) for L in ls.L]
    assert sizes[0] == 6 * t**3
    assert sizes[1] == sizes[2] == sizes[3] == (t - 1) * t * t // 2
    assert sum(sizes) == len(frozenset().union(*ls.L)) == t**4
    A = diag_sets(t)[0]
    assert A <= ls.L[4]
    for L, pattern in zip(ls.L[1:4], TYPE3_PATTERNS):
        assert has_pair_frequency(L, t, pattern)
    # coset coordinates of the sum-set definitions
    keys = [{coset_key(q, t) for q in L} for L in ls.L]
    half = (t - 1) // 2
    assert keys[1] == {(b, c, 0) for b in range(t) for c in range(1, half + 1)}
    assert keys[2] == {(b, c, 0) for b in range(t) for c in range(half + 1, t)}
    assert keys[3] == {(0, c, d) for c in range(t) for d in range(7, (t + 11) // 2 + 1)}
    assert keys[0] == {(b, c, d) for b in range(t) for c in range(t) for d in range(1, 7)}
    assert sum(len(k) for k in keys) * t == t**4


def test_L_sets_reject_small_t():
    with pytest.raises(DesignError):
        build_L_sets(11)
    with pytest.raises(DesignError):
        build_Lprime_sets(15)


def test_Lprime_sets_at_21():
    t = 21
    ls = build_Lprime_sets(t)
    assert sum(len(L) for L in ls.L) == len(frozenset().union(*ls.L)) == t**4
    for i, s in enumerate(ls.S):
        assert len(s) == t and s <= ls.L[i + 1]
        assert verify_class(sorted(s), 4 * t, 4).ok
    assert diag_sets(t)[0] <= ls.L[4]
    for L, pattern in zip(ls.L[1:4], TYPE3_PATTERNS):
        assert has_pair_frequency(L, t, pattern, 10)


# ---------------------------------------------------------------- Type 5 and assembly


@pytest.mark.parametrize("t,count", [(12, 1728), (6, 216)])
def test_type5_even(t, count):
    classes = type5_classes(t)
    assert len(classes) == count
    assert (groups(classes, t) == 5).all()


def test_type5_odd_counts():
    assert len(type5_classes(15, build_L_sets(15))) == 1710
    assert len(type5_classes(21, build_Lprime_sets(21))) == 5987
    with pytest.raises(DesignError):
        type5_classes(15)


@pytest.mark.parametrize("t", [6, 12, 15, 18, 21, 24, 27, 33, 45, 57])
def test_case_identity(t):
    assert sum(case_counts(t)) == comb(4 * t - 1, 3)


def test_case_counts_reject_doubling_residues():
    with pytest.raises(DesignError):
        case_counts(16)
    with pytest.raises(DesignError):
        case_counts(13)


def test_quad_input_validation():
    with pytest.raises(DesignError):
        QuadInput(13, bp4(16))
    with pytest.raises(DesignError):
        QuadInput(3, bp4(4), seeds.bp3_provider(3))
    with pytest.raises(DesignError):
        QuadInput(9, bp4(12), seeds.bp3_provider(12))
    with pytest.raises(DesignError):
        QuadInput(12, bp4(16), seeds.bp3_provider(12))
    with pytest.raises(DesignError):
        QuadInput(12, bp4(12))


def test_case4_assembly_t6():
    d = quadruple_bp(quad_input(6))
    assert len(d) == comb(23, 3)
    assert d.segments == tuple((str(i + 1), c) for i, c in enumerate(case_counts(6)))
    assert verify_bp(d).ok
