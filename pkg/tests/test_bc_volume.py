from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from opengw.bc_volume import (
    BCGraph, bc_volume, polytope_volume, sum_tree_volumes,
)


def twoface(p, q):
    return BCGraph(edges={"a": "a", "b": "b"}, wavy=[("a", "b")],
                   d_new={"a": p, "b": q}, d_old={"a": p + q})


def path3(n1, n2, n3):
    edges = {"a1": "a1", "b1": "b2", "b2": "b1", "c1": "c1"}
    wavy = [("a1", "b1"), ("b2", "c1")]
    return BCGraph(edges, wavy, d_new={"a1": n1, "b1": n2, "c1": n3},
                   d_old={"a1": n1 + n2 + n3})


def fourcycle(N):
    # one new cycle of length four whose old walk is again one cycle
    edges = {"1": "2", "2": "3", "3": "4", "4": "1"}
    wavy = [("1", "3"), ("2", "4")]
    return BCGraph(edges, wavy, d_new={"1": N}, d_old={"1": N})


class TestPolytopeVolume:
    def test_point(self):
        assert polytope_volume([], 0) == 1
        assert polytope_volume([((), -1)], 0) == 0

    def test_interval(self):
        assert polytope_volume([((1,), 3), ((-1,), 1)], 1) == 4
        assert polytope_volume([((2,), 1), ((-1,), 0)], 1) == Fraction(1, 2)
        assert polytope_volume([((1,), 0), ((-1,), -1)], 1) == 0

    def test_polygons(self):
        square = [((1, 0), 1), ((-1, 0), 0), ((0, 1), 1), ((0, -1), 0)]
        assert polytope_volume(square, 2) == 1
        tri = [((1, 1), 1), ((-1, 0), 0), ((0, -1), 0)]
        assert polytope_volume(tri, 2) == Fraction(1, 2)
        # clipped square, area 1 - 1/8
        clipped = square + [((1, 1), Fraction(3, 2))]
        assert polytope_volume(clipped, 2) == Fraction(7, 8)

    def test_three_dim(self):
        box = [((1, 0, 0), 2), ((-1, 0, 0), 0), ((0, 1, 0), 1),
               ((0, -1, 0), 0), ((0, 0, 1), 1), ((0, 0, -1), 0)]
        assert polytope_volume(box, 3) == 2
        simplex = [((1, 1, 1), 1), ((-1, 0, 0), 0), ((0, -1, 0), 0),
                   ((0, 0, -1), 0)]
        assert polytope_volume(simplex, 3) == Fraction(1, 6)
        octa = [((sx, sy, sz), 1)
                for sx in (1, -1) for sy in (1, -1) for sz in (1, -1)]
        assert polytope_volume(octa, 3) == Fraction(4, 3)

    def test_lower_dimensional_is_zero(self):
        flat = [((1, 0), 1), ((-1, 0), -1), ((0, 1), 5), ((0, -1), 0)]
        assert polytope_volume(flat, 2) == 0

    def test_empty_is_zero(self):
        gone = [((1, 0), 0), ((-1, 0), -1), ((0, 1), 1), ((0, -1), 0)]
        assert polytope_volume(gone, 2) == 0


class TestTwoFace:
    @pytest.mark.parametrize("p,q,vol", [
        (1, 2, 2), (1, -1, -1), (3, 2, 6), (-1, -2, 2), (2, -3, -6),
    ])
    def test_values(self, p, q, vol):
        assert bc_volume(twoface(p, q)) == vol

    def test_lone_loop(self):
        g = BCGraph(edges={}, wavy=[], d_new={}, d_old={},
                    loops={"l": (2, 2)})
        assert bc_volume(g) == 1

    def test_inconsistent_old_degree(self):
        g = BCGraph(edges={"a": "a", "b": "b"}, wavy=[("a", "b")],
                    d_new={"a": 1, "b": 2}, d_old={"a": 2})
        with pytest.raises(ValueError):
            bc_volume(g)


class TestPath3:
    @pytest.mark.parametrize("ns", [
        (1, 1, 1), (2, 3, 1), (1, -2, 1), (-1, 2, -3), (2, 2, 2),
        (3, -1, 2), (-2, -2, -2),
    ])
    def test_signed_product(self, ns):
        n1, n2, n3 = ns
        assert bc_volume(path3(*ns)) == n1 * n2 * n2 * n3

    def test_relabeling_invariance(self):
        # a different vertex order forces a different chart choice
        ren = {"a1": "z", "b1": "m", "b2": "a", "c1": "k"}
        g = path3(2, 3, 1)
        h = BCGraph(
            edges={ren[v]: ren[w] for v, w in g.succ.items()},
            wavy=[(ren[a], ren[b]) for a, b in g.wavy],
            d_new={ren[v]: d for v, d in g._dnew_in.items()},
            d_old={ren[v]: d for v, d in g._dold_in.items()},
        )
        assert bc_volume(h) == bc_volume(g) == 18


class TestFourCycle:
    # hand lattice counts: the two independent circuit functionals are
    # sliced at integers, leaving intervals of total length 1, 4, 10
    @pytest.mark.parametrize("N,vol", [(2, 2), (3, 12), (4, 40)])
    def test_values(self, N, vol):
        assert bc_volume(fourcycle(N)) == vol

    def test_relabeling_invariance(self):
        ren = {"1": "d", "2": "c", "3": "b", "4": "a"}
        g = fourcycle(3)
        h = BCGraph(
            edges={ren[v]: ren[w] for v, w in g.succ.items()},
            wavy=[(ren[a], ren[b]) for a, b in g.wavy],
            d_new={ren["1"]: 3}, d_old={ren["1"]: 3},
        )
        assert bc_volume(h) == 12


class TestValidation:
    def test_not_a_permutation(self):
        g = BCGraph(edges={"a": "b", "b": "b"}, wavy=[("a", "b")],
                    d_new={"a": 1}, d_old={"a": 1})
        with pytest.raises(ValueError):
            g.validate()

    def test_wavy_self_glue(self):
        g = BCGraph(edges={"a": "a"}, wavy=[("a", "a")],
                    d_new={"a": 1}, d_old={"a": 1})
        with pytest.raises(ValueError):
            g.validate()

    def test_unmatched_vertex(self):
        g = BCGraph(edges={"a": "b", "b": "a"}, wavy=[],
                    d_new={"a": 1}, d_old={"a": 1})
        with pytest.raises(ValueError):
            g.validate()

    def test_zero_new_perimeter(self):
        g = twoface(0, 1)
        with pytest.raises(ValueError):
            g.validate()

    def test_loop_mismatch(self):
        g = BCGraph(edges={}, wavy=[], d_new={}, d_old={},
                    loops={"l": (2, 3)})
        with pytest.raises(ValueError):
            g.validate()

    def test_conservation(self):
        g = BCGraph(edges={"a": "a", "b": "b"}, wavy=[("a", "b")],
                    d_new={"a": 1, "b": 2}, d_old={"a": 4})
        with pytest.raises(ValueError):
            g.validate()

    def test_missing_degree(self):
        g = BCGraph(edges={"a": "a", "b": "b"}, wavy=[("a", "b")],
                    d_new={"a": 1}, d_old={"a": 3})
        with pytest.raises(ValueError):
            g.validate()

    def test_conflicting_degree(self):
        g = BCGraph(edges={"a": "b", "b": "a"}, wavy=[("a", "b")],
                    d_new={"a": 1, "b": 2}, d_old={"a": 3})
        with pytest.raises(ValueError):
            g.validate()


class TestJson:
    def test_round_trip(self):
        g = path3(2, 3, 1)
        obj = g.to_json_obj()
        assert obj["d_new"] == {"n:a1": 2, "n:b1,b2": 3, "n:c1": 1}
        assert list(obj["d_old"]) == ["o:a1,b1,c1,b2"]
        h = BCGraph.from_json(obj)
        assert bc_volume(h) == bc_volume(g)

    def test_round_trip_with_loop(self):
        g = BCGraph(edges={"a": "a", "b": "b"}, wavy=[("a", "b")],
                    d_new={"a": 1, "b": 2}, d_old={"a": 3},
                    loops={"free": (4, 4)})
        obj = g.to_json_obj()
        assert obj["d_new"]["free"] == 4
        h = BCGraph.from_json(obj)
        assert h.loops == {"free": (4, 4)}
        assert bc_volume(h) == 2

    def test_bad_face_key(self):
        obj = path3(1, 1, 1).to_json_obj()
        obj["d_new"]["n:nonsense"] = 5
        with pytest.raises(ValueError):
            BCGraph.from_json(obj)


class TestTreeSums:
    def test_single_vertex(self):
        assert sum_tree_volumes([], {"A": 5}) == 1

    @pytest.mark.parametrize("edges,weights,want", [
        ([("A", "B")], {"A": 2, "B": 3}, 6),
        ([("A", "B"), ("B", "C")], {"A": 1, "B": 2, "C": 1}, 4),
        ([("A", "B"), ("B", "C")], {"A": -1, "B": 2, "C": 3}, -12),
        ([("A", "B"), ("A", "C"), ("A", "D")],
         {"A": 2, "B": 1, "C": 1, "D": 3}, 24),
        ([("A", "B"), ("B", "C"), ("C", "D")],
         {"A": 1, "B": -2, "C": 3, "D": 1}, 1 * 4 * 9 * 1),
    ])
    def test_product_rule(self, edges, weights, want):
        assert sum_tree_volumes(edges, weights) == want

    @given(st.integers(min_value=2, max_value=4),
           st.data())
    @settings(max_examples=30, deadline=None)
    def test_random_trees(self, n, data):
        # random labeled tree on n vertices plus nonzero weights
        edges = []
        for v in range(1, n):
            u = data.draw(st.integers(min_value=0, max_value=v - 1))
            edges.append((f"v{u}", f"v{v}"))
        weights = {}
        for v in range(n):
            w = data.draw(st.integers(min_value=-3, max_value=3).filter(
                lambda x: x != 0))
            weights[f"v{v}"] = w
        val = {v: 0 for v in weights}
        for a, b in edges:
            val[a] += 1
            val[b] += 1
        want = Fraction(1)
        for v, w in weights.items():
            want *= Fraction(w) ** val[v]
        assert sum_tree_volumes(edges, weights) == want
