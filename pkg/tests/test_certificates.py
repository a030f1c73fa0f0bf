import pytest
from hypothesis import given, settings, strategies as st

from coxdense.certificates import (
    DescentClassUnion, check_corollary, check_quasidense_certificate, check_w_invariance,
    density_profile, estimate_commuting_set, infinite_proper_subsets, lemma_2_7_instances,
    left_coset_count, theorem_generator_set, verify_descent_extension,
    verify_infinite_intersection, verify_index_lemma, verify_lemma_2_7,
)
from coxdense.classify import essential_of, is_spherical
from coxdense.core import GenSubset, irreducible_components
from coxdense.errors import PreconditionError
from coxdense.words import descent_set, enumerate_ball
from conftest import FIXTURES, load
from oracles import MatrixBall


def witness_tuples(sys_, ws):
    return {(tuple(sys_.labels(w.U)), sys_.names[w.s], sys_.names[w.u0], w.condition) for w in ws}


def test_theorem_generator_set(fig1):
    assert fig1.labels(theorem_generator_set(fig1, fig1.parse_subset("s1,s4"))) == ["s4"]
    assert fig1.labels(theorem_generator_set(fig1, fig1.parse_subset("s1,s2,s3"))) == ["s1", "s2"]
    sys_ = load("dinf-x-a1")
    assert not theorem_generator_set(sys_, sys_.parse_subset("a,b"))


def test_corollary_examples(fig1):
    got = witness_tuples(fig1, check_corollary(fig1, fig1.parse_subset("s1,s4")))
    assert (("s3", "s4"), "s2", "s4", 1) in got
    got = witness_tuples(fig1, check_corollary(fig1, fig1.parse_subset("s1,s2,s3")))
    assert (("s3", "s4"), "s1", "s4", 2) in got
    assert check_corollary(fig1, fig1.parse_subset("s2,s4"))


def test_corollary_needs_infinite_T(fig1):
    with pytest.raises(PreconditionError):
        check_corollary(fig1, fig1.parse_subset("s1,s2"))


def test_direct_versus_inherited(fig1):
    T = fig1.parse_subset("s1,s2,s4")
    assert check_corollary(fig1, T, inherit=False) == []
    inherited = check_corollary(fig1, T)
    assert inherited and all(w.via != T for w in inherited)


@pytest.mark.parametrize("name", FIXTURES)
def test_witness_field_invariants(name):
    sys_ = load(name)
    for T in infinite_proper_subsets(sys_) + ([sys_.full()] if not is_spherical(sys_, sys_.full()) else []):
        ws = check_corollary(sys_, T)
        keys = [(w.U, w.s, w.u0, w.condition) for w in ws]
        assert len(keys) == len(set(keys))
        direct = [w for w in ws if w.via == T]
        assert direct == sorted(direct, key=lambda w: (w.U.mask, w.s, w.u0))
        for w in ws:
            assert w.via.issubset(T) and not is_spherical(sys_, w.via)
            assert w.T_tilde == essential_of(sys_, w.via)
            assert is_spherical(sys_, w.U) and w.u0 in w.U
            if w.condition == 1:
                assert w.u0 in w.T_tilde and w.s not in w.via
            else:
                assert w.s in w.T_tilde and w.u0 not in w.via


def test_quasidense_certificates(fig1, dinf):
    got = {(tuple(fig1.labels(U)), fig1.names[s]) for U, s in check_quasidense_certificate(fig1)}
    assert {(("s3", "s4"), "s2"), (("s3", "s4"), "s1")} <= got
    assert (dinf.parse_subset("a"), dinf.index("b")) in check_quasidense_certificate(dinf)
    for name in ["a2", "b3", "h3", "a1xa1"]:
        assert check_quasidense_certificate(load(name)) == []


def test_w_invariance(fig1):
    assert not check_w_invariance(fig1, fig1.parse_subset("s1,s4"))
    sys_ = load("dinf-x-a1")
    assert check_w_invariance(sys_, sys_.parse_subset("a,b"))
    assert check_w_invariance(fig1, fig1.parse_subset("s1,s2"))


@pytest.mark.parametrize("name", FIXTURES)
def test_w_invariance_matches_components(name):
    sys_ = load(name)
    comps = irreducible_components(sys_)
    for mask in range(1 << sys_.rank):
        T = GenSubset(mask, sys_.rank)
        tt = essential_of(sys_, T)
        splits = all(c.issubset(tt) or not (c & tt) for c in comps)
        if splits:
            assert check_w_invariance(sys_, T)


def test_dinf_density(dinf):
    prof = density_profile(dinf, DescentClassUnion(dinf.parse_subset("a")), 20, 4)
    assert [r.max_distance for r in prof.rows] == [1] * 17
    assert all(r.boundary_reliable for r in prof.rows)
    assert prof.rows[0].witness == ()


def test_fig1_density_matches_oracle(fig1):
    # oracle: BFS per element inside a matrix-keyed ball(10)
    mb = MatrixBall(fig1, 10)
    target = lambda j: mb.right_descents(j) == {3}
    expected = []
    for r in range(7):
        expected.append(max(mb.distance_to(i, target, 10) for i in range(len(mb)) if mb.depth[i] <= r))
    assert expected == [1] * 7
    T = fig1.parse_subset("s1,s4")
    prof = density_profile(fig1, DescentClassUnion(theorem_generator_set(fig1, T)), 10, 4)
    assert [r.max_distance for r in prof.rows] == expected
    assert all(r.boundary_reliable for r in prof.rows)


def test_density_full_target_is_zero(fig1):
    prof = density_profile(fig1, lambda w: True, 6, 2)
    assert all(r.max_distance == 0 for r in prof.rows)


@settings(max_examples=30, deadline=None)
@given(st.integers(1, 15), st.integers(1, 15))
def test_density_monotone_in_target(a, b):
    sys_ = load("fig1")
    ball = enumerate_ball(sys_, 7)
    small = DescentClassUnion(GenSubset(a, 4))
    big = DescentClassUnion(GenSubset(a | b, 4))
    p1 = density_profile(sys_, small, 7, 3, ball=ball)
    p2 = density_profile(sys_, big, 7, 3, ball=ball)
    for r1, r2 in zip(p1.rows, p2.rows):
        if r1.max_distance is not None:
            assert r2.max_distance is not None and r2.max_distance <= r1.max_distance


def test_density_predicate_equals_select(fig1):
    ball = enumerate_ball(fig1, 5)
    t = DescentClassUnion(fig1.parse_subset("s1,s4"))
    sel = t.select(ball)
    assert [bool(x) for x in sel] == [t(w) for w in ball.elements]


def test_chain_lemma_examples(fig1):
    assert verify_lemma_2_7(fig1, fig1.parse_subset("s1"), [fig1.index("s2")], 6) == []
    assert verify_lemma_2_7(fig1, fig1.empty(), [fig1.index("s3")], 6) == []
    with pytest.raises(PreconditionError):
        verify_lemma_2_7(fig1, fig1.parse_subset("s1"), [0], 4)


@pytest.mark.parametrize("name", FIXTURES)
def test_lemma_verifiers_empty(name):
    sys_ = load(name)
    R = 8 if name != "fig1" else 6
    ball = enumerate_ball(sys_, R + 2)
    for T, chain in lemma_2_7_instances(sys_, 2):
        assert verify_lemma_2_7(sys_, T, chain, R, ball=ball) == []
    assert verify_descent_extension(sys_, R, ball=ball) == []


def test_descent_extension_dinf(dinf):
    assert verify_descent_extension(dinf, 10) == []


def test_infinite_intersection_counts(fig1):
    T = fig1.parse_subset("s1,s4")
    for s in ("s2", "s3"):
        table = verify_infinite_intersection(fig1, T, fig1.index(s), 12)
        # frozen from the matrix-ball oracle (r <= 9) and the 2r+1 pattern
        assert table.counts == tuple(2 * r + 1 for r in range(1, 13))
        assert table.ok
    with pytest.raises(PreconditionError):
        sys_ = load("dinf-x-a1")
        verify_infinite_intersection(sys_, sys_.parse_subset("a,b"), sys_.index("c"), 6)


def test_commuting_set(fig1):
    U, rep = estimate_commuting_set(fig1, fig1.parse_subset("s1,s4"), 8)
    assert fig1.index("s3") not in U and not rep.discrepancy
    sys_ = load("dinf-x-a1")
    U, rep = estimate_commuting_set(sys_, sys_.parse_subset("a,b"), 8)
    assert sys_.labels(U) == ["c"] and not rep.discrepancy
    assert rep.counts[sys_.index("c")][-1] == 1
    with pytest.raises(PreconditionError):
        estimate_commuting_set(fig1, fig1.full(), 8)


@pytest.mark.parametrize("name", ["a2", "b3", "h3", "a1xa1"])
def test_index_lemma(name):
    sys_ = load(name)
    assert all(verify_index_lemma(sys_, GenSubset(m, sys_.rank)) for m in range(1 << sys_.rank))


def test_index_lemma_rejects_infinite(fig1):
    with pytest.raises(PreconditionError):
        verify_index_lemma(fig1, fig1.empty())


def test_left_coset_count():
    sys_ = load("dinf-x-a1")
    assert left_coset_count(enumerate_ball(sys_, 10), sys_.parse_subset("a,b")) == 2
