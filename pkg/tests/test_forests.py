from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import oracles
from conftest import connected_graphs
from rayleighkit.forests import (
    SearchSpec,
    SpecError,
    enumerate_forests,
    forest_correlation,
    search_counterexample,
)
from rayleighkit.graph import GraphError, Multigraph
from rayleighkit.trees import CapExceeded


class TestEnumerate:
    def test_triangle(self, triangle):
        fs = enumerate_forests(triangle)
        assert len(fs) == 7
        assert frozenset({"e1", "e2", "e3"}) not in fs
        assert fs[0] == frozenset()

    def test_single_edge(self):
        g = Multigraph.from_tuples(2, [("e", 0, 1)])
        assert enumerate_forests(g) == [frozenset(), frozenset({"e"})]

    def test_parallel_pair(self, pair):
        assert enumerate_forests(pair) == [frozenset(), frozenset({"e1"}), frozenset({"e2"})]

    def test_tree_all_subsets(self):
        g = Multigraph.from_tuples(5, [("a", 0, 1), ("b", 1, 2), ("c", 1, 3), ("d", 3, 4)])
        assert len(enumerate_forests(g)) == 2**4

    def test_cap(self):
        g = Multigraph.from_tuples(2, [(f"e{k}", 0, 1) for k in range(4)])
        with pytest.raises(CapExceeded):
            enumerate_forests(g, cap=3)

    @settings(max_examples=60, deadline=None)
    @given(connected_graphs(max_vertices=5, max_edges=8, loops=True))
    def test_matches_subset_scan(self, g):
        fast = enumerate_forests(g)
        assert len(fast) == len(set(fast))
        assert set(fast) == set(oracles.forests(g))
        keys = [(len(f), sorted(f)) for f in fast]
        assert keys == sorted(keys)


class TestCorrelation:
    def test_triangle(self, triangle):
        c = forest_correlation(triangle, "e1", "e2")
        assert c.p_given_absent == Fraction(1, 2)
        assert c.p_given_present == Fraction(1, 3)
        assert c.holds and c.delta_f == 2

    def test_parallel_pair(self):
        g = Multigraph.from_tuples(2, [("e1", 0, 1), ("e2", 0, 1)])
        c = forest_correlation(g, "e1", "e2")
        assert (c.p_given_absent, c.p_given_present) == (Fraction(1, 2), 0)
        assert c.holds

    def test_disjoint_components_independent(self):
        g = Multigraph.from_tuples(4, [("e1", 0, 1, 3), ("e2", 2, 3, Fraction(1, 5))])
        c = forest_correlation(g, "e1", "e2")
        assert c.p_given_absent == c.p_given_present == Fraction(3, 4)
        assert c.delta_f == 0

    def test_loop_conditioning_reported(self):
        g = Multigraph.from_tuples(2, [("e1", 0, 1), ("l", 1, 1)])
        c = forest_correlation(g, "e1", "l")
        assert c.p_given_present is None
        assert c.p_given_absent == Fraction(1, 2)

    def test_errors(self, triangle):
        with pytest.raises(GraphError):
            forest_correlation(triangle, "e1", "e1")
        with pytest.raises(GraphError):
            forest_correlation(triangle, "e1", "nope")

    @settings(max_examples=60, deadline=None)
    @given(connected_graphs(max_vertices=5, max_edges=7), st.data())
    def test_partition_and_oracle(self, g, data):
        if len(g.edges) < 2:
            return
        e1, e2 = data.draw(st.lists(st.sampled_from(g.edge_ids), min_size=2, max_size=2, unique=True))
        c = forest_correlation(g, e1, e2)
        fs = oracles.forests(g)
        assert c.total == sum(oracles.weight(g, f) for f in fs)
        assert c.f_both == sum(oracles.weight(g, f) for f in fs if e1 in f and e2 in f)
        assert c.holds == (c.delta_f >= 0) == (c.p_given_absent >= c.p_given_present)

    @settings(max_examples=30, deadline=None)
    @given(connected_graphs(max_vertices=5, max_edges=7), st.data())
    def test_unit_weights_integer_delta(self, g, data):
        if len(g.edges) < 2:
            return
        unit = Multigraph.from_tuples(g.n, [(e.id, e.tail, e.head) for e in g.edges])
        e1, e2 = data.draw(st.lists(st.sampled_from(g.edge_ids), min_size=2, max_size=2, unique=True))
        assert forest_correlation(unit, e1, e2).delta_f.denominator == 1


class TestSpec:
    @pytest.mark.parametrize(
        "doc",
        [
            {},
            {"mode": "sideways", "max_vertices": 3, "max_edges": 3},
            {"mode": "exhaustive", "max_vertices": 1, "max_edges": 3},
            {"mode": "exhaustive", "max_vertices": 3, "max_edges": 0},
            {"mode": "random", "max_vertices": 3, "max_edges": 3, "count": 0},
            {"mode": "exhaustive", "max_vertices": 3, "max_edges": 3, "weights": "heavy"},
        ],
    )
    def test_bad_specs(self, doc):
        with pytest.raises(SpecError):
            SearchSpec.from_json(doc)

    def test_parse_text(self):
        spec = SearchSpec.parse('{"mode": "random", "max_vertices": 5, "max_edges": 7, "weights": {"random_seed": 3}, "count": 4}')
        assert spec.weight_seed == 3 and spec.count == 4
        with pytest.raises(SpecError, match="malformed JSON"):
            SearchSpec.parse("{")


class TestSearch:
    def test_exhaustive_small(self):
        spec = SearchSpec.from_json({"mode": "exhaustive", "max_vertices": 3, "max_edges": 4, "weights": "unit"})
        rep = search_counterexample(spec)
        assert not rep.found
        assert rep.min_delta_f >= 0
        assert rep.argmin is not None

    def test_random_deterministic(self):
        doc = {"mode": "random", "max_vertices": 6, "max_edges": 8, "weights": {"random_seed": 11}, "count": 200, "seed": 5}
        a = search_counterexample(SearchSpec.from_json(doc))
        b = search_counterexample(SearchSpec.from_json(doc))
        assert not a.found
        assert a.graphs_checked == 200
        assert (a.instances_checked, a.min_delta_f, a.argmin.index, a.argmin.e1, a.argmin.e2) == (
            b.instances_checked,
            b.min_delta_f,
            b.argmin.index,
            b.argmin.e1,
            b.argmin.e2,
        )
        assert a.argmin.graph == b.argmin.graph

    def test_random_weights_applied(self):
        spec = SearchSpec.from_json({"mode": "random", "max_vertices": 4, "max_edges": 5, "weights": {"random_seed": 1}, "count": 3})
        graphs = list(spec.graphs())
        assert len(graphs) == 3
        assert any(e.weight != 1 for g in graphs for e in g.edges)
        assert graphs == list(spec.graphs())
