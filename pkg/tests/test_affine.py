import pytest

from baranyai.affine import affine_class, affine_rsqs, plane_count, subspace_basis
from baranyai.core import DesignError
from baranyai.verify import verify_rsqs


@pytest.mark.parametrize("v", [4, 8, 16, 32, 64])
def test_affine_rsqs_verifies(v):
    d = affine_rsqs(v)
    assert len(d) == plane_count(v) == (v - 1) * (v - 2) // 6
    assert verify_rsqs(d).ok


def test_subspaces_are_distinct():
    v = 64
    spans = {frozenset((0, u, w, u ^ w)) for u, w in (subspace_basis(v, i) for i in range(plane_count(v)))}
    assert len(spans) == plane_count(v)


def test_class_is_sorted_partition():
    c = affine_class(128, 1000)
    assert [b[0] for b in c] == sorted(b[0] for b in c)
    assert sorted(p for b in c for p in b) == list(range(128))


@pytest.mark.parametrize("v", [6, 12, 2])
def test_rejects_non_powers(v):
    with pytest.raises(DesignError):
        affine_rsqs(v)


def test_rejects_bad_index():
    with pytest.raises(DesignError):
        affine_class(8, 7)
