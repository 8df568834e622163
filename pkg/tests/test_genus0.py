from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opengw.laurent import Laurent
from opengw.specs import DescendentProblem, disk_spec
from opengw.genus0 import (
    enumerate_trees,
    ogw_genus0,
    ogw_genus0_partitions,
    tree_amplitude,
)


def L(c, e=0):
    return Laurent.term(Fraction(c), e)


def P(a=None, eps=None):
    return DescendentProblem(a or {}, eps or {})


def find_tree(trees, degree_profile):
    hits = [
        t for t in trees
        if sorted(d for _, d in t.vertices) == sorted(degree_profile)
    ]
    assert len(hits) == 1, f"profile {degree_profile}: {len(hits)} matches"
    return hits[0]


# ------------------------------------------------------------------
# enumeration


def test_tree_counts():
    assert len(enumerate_trees([1], (1, 0))) == 1
    assert len(enumerate_trees([1], (2, 0))) == 2
    assert len(enumerate_trees([1], (1, 1))) == 3


def test_degree_two_tree_shapes():
    trees = enumerate_trees([1], (2, 0))
    single = find_tree(trees, [(2, 0)])
    assert single.vertices == (((1,), (2, 0)),)
    double = find_tree(trees, [(1, 0), (1, 0)])
    assert double.edges == ((0, 1),)
    assert double.aut == 1  # the label makes the vertices distinct


def test_unlabeled_identical_vertices_have_automorphism():
    trees = enumerate_trees([], (2, 0))
    double = find_tree(trees, [(1, 0), (1, 0)])
    assert double.aut == 2


def test_three_vertex_path_automorphism():
    trees = enumerate_trees([], (3, 0))
    path = find_tree(trees, [(1, 0), (1, 0), (1, 0)])
    assert path.aut == 2


def test_enumeration_deterministic():
    a = [t.fingerprint for t in enumerate_trees([1, 2], (2, 1))]
    b = [t.fingerprint for t in enumerate_trees([1, 2], (2, 1))]
    assert a == b == sorted(a)
    assert len(set(a)) == len(a)


# ------------------------------------------------------------------
# amplitudes


def test_single_vertex_amplitude_is_contribution():
    trees = enumerate_trees([1], (2, 0))
    single = find_tree(trees, [(2, 0)])
    assert tree_amplitude(single, P({1: 1}, {1: 1})) == L(Fraction(-1, 2))


def test_two_vertex_amplitude():
    trees = enumerate_trees([1], (2, 0))
    double = find_tree(trees, [(1, 0), (1, 0)])
    assert tree_amplitude(double, P({1: 1}, {1: 1})) == Laurent.one()


def test_mixed_sign_amplitude():
    trees = enumerate_trees([1], (1, 1))
    for t in trees:
        if len(t.vertices) != 2:
            continue
        degs = [d for _, d in t.vertices]
        labelled = [ls for ls, _ in t.vertices if ls]
        amp = tree_amplitude(t, P({1: 0}, {1: 1}))
        if ((1,), (1, 0)) in t.vertices:
            assert amp == L(Fraction(-1, 2), -1)
        else:
            assert amp.is_zero()


# ------------------------------------------------------------------
# full invariants, tree route


def test_disk_cover_values():
    assert ogw_genus0([], (1, 0), P()) == Laurent.one()
    assert ogw_genus0([1], (1, 0), P({1: 0}, {1: 1})) == Laurent.one()
    assert ogw_genus0([1], (2, 0), P({1: 1}, {1: 1})) == L(Fraction(1, 2))
    assert ogw_genus0([1], (3, 0), P({1: 2}, {1: 1})) == L(Fraction(1, 6))


def test_reversed_orientation():
    # single-vertex term +1/2, two-vertex term -1
    assert ogw_genus0([], (0, 1), P()) == L(-1)
    assert ogw_genus0([1], (0, 2), P({1: 1}, {1: -1})) == L(Fraction(-1, 2))


def test_equal_degree_vanishing():
    assert ogw_genus0([1], (1, 1), P({1: 0}, {1: 1})).is_zero()
    assert ogw_genus0([1], (1, 1), P({1: 0}, {1: -1})).is_zero()
    assert ogw_genus0([1], (1, 1), P({1: 1}, {1: 1})).is_zero()
    assert ogw_genus0([], (2, 2), P()).is_zero()


def test_underdetermined_vanishing():
    assert ogw_genus0([], (2, 0), P()).is_zero()
    assert ogw_genus0([], (3, 0), P()).is_zero()
    assert ogw_genus0([1], (3, 0), P({1: 1}, {1: 1})).is_zero()


def test_zero_degree_target():
    assert ogw_genus0([1], (0, 0), P({1: 0}, {1: 1})).is_zero()


def test_trace_reports_every_tree():
    trace = []
    val = ogw_genus0([1], (1, 1), P({1: 0}, {1: 1}), trace=trace)
    assert val.is_zero()
    amps = [e for e in trace if "amplitude" in e]
    cbs = [e for e in trace if "contracted_boundary" in e]
    assert len(amps) == 3
    assert len(cbs) == 1


# ------------------------------------------------------------------
# partition route agrees


def test_partition_values():
    assert ogw_genus0_partitions([], (1, 0), P()) == Laurent.one()
    assert ogw_genus0_partitions([1], (2, 0), P({1: 1}, {1: 1})) == L(Fraction(1, 2))
    assert ogw_genus0_partitions([1], (1, 1), P({1: 0}, {1: 1})).is_zero()


@settings(deadline=None, max_examples=60)
@given(st.data())
def test_partition_route_matches_trees(data):
    dp = data.draw(st.integers(min_value=0, max_value=3), label="dp")
    dm = data.draw(st.integers(min_value=0, max_value=3 - dp), label="dm")
    nlab = data.draw(st.integers(min_value=0, max_value=2), label="n")
    if dp + dm == 0 and nlab == 0:
        return
    labels = list(range(1, nlab + 1))
    spec = disk_spec(labels, (dp, dm))
    if spec.violations():
        return
    a = {k: data.draw(st.integers(min_value=0, max_value=3), label=f"a{k}")
         for k in labels}
    eps = {k: data.draw(st.sampled_from([1, -1]), label=f"e{k}")
           for k in labels}
    p = DescendentProblem(a, eps)
    assert ogw_genus0(labels, (dp, dm), p) == \
        ogw_genus0_partitions(labels, (dp, dm), p)


# ------------------------------------------------------------------
# invariances


def test_label_renaming():
    v1 = ogw_genus0([1, 2], (2, 1), P({1: 1, 2: 1}, {1: 1, 2: -1}))
    v2 = ogw_genus0(["x", "y"], (2, 1),
                    P({"x": 1, "y": 1}, {"x": 1, "y": -1}))
    v3 = ogw_genus0([1, 2], (2, 1), P({1: 1, 2: 1}, {1: -1, 2: 1}))
    assert v1 == v2 == v3


def test_homogeneity_on_nonzero_values():
    cases = [
        ([1], (2, 0), {1: 1}, {1: 1}),
        ([1], (3, 0), {1: 2}, {1: 1}),
        ([1, 2], (2, 1), {1: 1, 2: 1}, {1: 1, 2: 1}),
        ([1], (2, 1), {1: 2}, {1: 1}),
    ]
    for labels, d, a, eps in cases:
        v = ogw_genus0(labels, d, DescendentProblem(a, eps))
        if v.is_zero():
            continue
        mono = v.as_monomial()
        assert mono is not None
        assert mono[0] == sum(a.values()) + 1 - sum(d)
