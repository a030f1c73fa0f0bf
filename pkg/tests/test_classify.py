import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from coxdense.classify import (
    classify_subset, essential_of, essential_subset, group_order, is_spherical,
    maximal_spherical_subsets, recognize, spherical_masks, type_order,
)
from coxdense.core import INF, CoxeterSystem, GenSubset
from coxdense.words import enumerate_group
from conftest import load
from test_core import systems


def from_edges(n, edges):
    rows = [[1 if i == j else 2 for j in range(n)] for i in range(n)]
    for i, j, m in edges:
        rows[i][j] = rows[j][i] = m
    return CoxeterSystem.from_matrix(rows)


def chain(*ms):
    return from_edges(len(ms) + 1, [(i, i + 1, m) for i, m in enumerate(ms)])


def gram_positive_definite(sys_, subset):
    idx = list(subset)
    g = np.array([[1.0 if s == t else (-1.0 if sys_.m(s, t) is INF else -math.cos(math.pi / sys_.m(s, t)))
                   for t in idx] for s in idx])
    # leading principal minors: Sylvester's criterion
    return all(np.linalg.det(g[:k, :k]) > 1e-9 for k in range(1, len(idx) + 1))


NAMED = [
    (chain(3, 3, 3), "A4", 120),
    (chain(4, 3, 3), "B4", 384),
    (chain(3, 3, 4), "B4", 384),
    (chain(3, 4, 3), "F4", 1152),
    (chain(5, 3, 3), "H4", 14400),
    (chain(3, 3, 5), "H4", 14400),
    (from_edges(4, [(0, 1, 3), (1, 2, 3), (1, 3, 3)]), "D4", 192),
    (from_edges(5, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (2, 4, 3)]), "D5", 1920),
    (from_edges(6, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (2, 5, 3)]), "E6", 51840),
    (from_edges(7, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (2, 6, 3)]), "E7", 2903040),
    (from_edges(8, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (3, 4, 3), (4, 5, 3), (5, 6, 3), (2, 7, 3)]),
     "E8", 696729600),
    (chain(7), "I2(7)", 14),
    (chain(4), "I2(4)", 8),
]


@pytest.mark.parametrize("sys_,tag,order", NAMED, ids=[t for _, t, _ in NAMED])
def test_named_types(sys_, tag, order):
    assert recognize(sys_) == tag
    assert type_order(tag) == order
    assert group_order(sys_) == order


@pytest.mark.parametrize("sys_", [
    chain(3, 3, 3, 3, 3, 3, 3, 3),
    from_edges(3, [(0, 1, 3), (1, 2, 3), (0, 2, 3)]),
    chain(4, 4), chain(5, 4), chain(3, 6),
    from_edges(5, [(0, 1, 3), (1, 2, 3), (2, 3, 3), (1, 4, 3), (2, 4, 2)]),
    from_edges(9, [(i, i + 1, 3) for i in range(7)] + [(2, 8, 3)]),  # E9 = affine E8
])
def test_infinite_diagrams(sys_):
    verdict = classify_subset(sys_, sys_.full())
    assert verdict.finite == gram_positive_definite(sys_, sys_.full())


def test_fixture_verdicts(fig1):
    assert not is_spherical(fig1, fig1.full())
    assert classify_subset(fig1, fig1.parse_subset("s3,s4")).components[0].tag == "I2(3)"
    assert [fig1.labels(t) for t in maximal_spherical_subsets(fig1)] == [
        ["s1", "s2"], ["s1", "s3"], ["s2", "s3"], ["s3", "s4"]]
    sys_ = load("dinf-x-a1")
    assert sys_.labels(essential_subset(sys_)) == ["a", "b"]
    assert essential_of(sys_, sys_.parse_subset("a,b")).mask == 0b011
    assert group_order(load("a1xa1")) == 4


@pytest.mark.parametrize("name,order", [("a2", 6), ("b3", 48), ("h3", 120), ("a1xa1", 4)])
def test_orders_by_enumeration(name, order):
    sys_ = load(name)
    assert group_order(sys_) == order == len(enumerate_group(sys_))


@pytest.mark.parametrize("m", range(2, 9))
def test_dihedral_orders_by_enumeration(m):
    sys_ = chain(m)
    assert group_order(sys_) == 2 * m == len(enumerate_group(sys_))


@settings(max_examples=120, deadline=None)
@given(systems(max_rank=5))
def test_finiteness_matches_gram(sys_):
    for mask in range(1, 1 << sys_.rank):
        T = GenSubset(mask, sys_.rank)
        assert is_spherical(sys_, T) == gram_positive_definite(sys_, T)


@settings(max_examples=60, deadline=None)
@given(systems(max_rank=5))
def test_spherical_is_downward_closed(sys_):
    sph = spherical_masks(sys_)
    for mask in range(1 << sys_.rank):
        if sph[mask]:
            sub = mask
            while sub:
                sub = (sub - 1) & mask
                assert sph[sub]


@settings(max_examples=25, deadline=None)
@given(systems(max_rank=4))
def test_order_matches_enumeration(sys_):
    order = group_order(sys_)
    if order is INF or order > 2000:
        return
    assert len(enumerate_group(sys_)) == order
