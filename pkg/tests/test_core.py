import pytest
from hypothesis import given, settings, strategies as st

from coxdense.core import (
    INF, CoxeterMatrix, CoxeterSystem, GenSubset, irreducible_components, parse_system,
    product_order, restrict, serialize, validate,
)
from coxdense.errors import DiagramSyntaxError, InvalidCoxeterMatrix, SubsetError
from conftest import FIXTURES, load


@st.composite
def systems(draw, max_rank=6):
    n = draw(st.integers(1, max_rank))
    rows = [[1] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            rows[i][j] = rows[j][i] = draw(st.sampled_from([2, 2, 3, 4, 5, 6, INF]))
    return CoxeterSystem.from_matrix(rows)


def test_fig1_parses(fig1):
    assert fig1.names == ("s1", "s2", "s3", "s4")
    assert fig1.m(0, 3) is INF and fig1.m(1, 3) is INF
    assert fig1.m(2, 3) == 3 and fig1.m(0, 1) == 3
    assert fig1.m(0, 0) == 1


@pytest.mark.parametrize("name", FIXTURES)
def test_fixture_round_trip(name):
    sys_ = load(name)
    again = parse_system(serialize(sys_))
    assert again == sys_
    assert again.digest() == sys_.digest()


def test_validate_reports_each_violation():
    bad = CoxeterMatrix.from_rows([[1, 3, 2], [4, 2, 1], [2, 1, 1]])
    msgs = validate(bad)
    assert any(m.startswith("symmetry") for m in msgs)
    assert any(m.startswith("diagonal") for m in msgs)
    assert any(m.startswith("off-diagonal") for m in msgs)
    with pytest.raises(InvalidCoxeterMatrix):
        CoxeterSystem.from_matrix([[1, 3], [4, 1]])


def test_syntax_error_carries_line():
    with pytest.raises(DiagramSyntaxError) as err:
        parse_system("generators a b\nm a b 3\nm a q 3\n")
    assert err.value.line == 3


def test_subset_parsing(fig1):
    T = fig1.parse_subset("s1,s4")
    assert T.indices() == (0, 3)
    assert fig1.labels(T) == ["s1", "s4"]
    with pytest.raises(SubsetError):
        fig1.parse_subset("s1,s9")


def test_restrict_keeps_labels(fig1):
    sub = restrict(fig1, fig1.parse_subset("s3,s4"))
    assert sub.names == ("s3", "s4") and sub.m(0, 1) == 3


def test_dinf_x_a1_components():
    sys_ = load("dinf-x-a1")
    assert [c.indices() for c in irreducible_components(sys_)] == [(0, 1), (2,)]


@settings(max_examples=80, deadline=None)
@given(systems())
def test_components_partition_and_commute(sys_):
    comps = irreducible_components(sys_)
    union = 0
    for c in comps:
        assert c.mask & union == 0
        union |= c.mask
    assert union == sys_.full().mask
    for a in comps:
        for b in comps:
            if a != b:
                assert all(sys_.m(s, t) == 2 for s in a for t in b)


@settings(max_examples=80, deadline=None)
@given(systems())
def test_serialize_round_trip(sys_):
    assert parse_system(serialize(sys_)) == sys_


@settings(max_examples=60, deadline=None)
@given(systems(), st.data())
def test_product_order_symmetric(sys_, data):
    s = data.draw(st.integers(0, sys_.rank - 1))
    t = data.draw(st.integers(0, sys_.rank - 1))
    assert product_order(sys_, s, t) == product_order(sys_, t, s)
    if s == t:
        assert product_order(sys_, s, t) == 1


@given(st.integers(1, 10), st.data())
def test_gensubset_algebra(n, data):
    a = GenSubset(data.draw(st.integers(0, (1 << n) - 1)), n)
    b = GenSubset(data.draw(st.integers(0, (1 << n) - 1)), n)
    assert (a | b).mask == a.mask | b.mask
    assert (a - b) & b == GenSubset.empty(n)
    assert len(a) + len(a.complement()) == n
    assert (a & b).issubset(a)
