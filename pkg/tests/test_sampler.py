from collections import Counter
from fractions import Fraction

import pytest

import oracles
from conftest import k4, parallel_pair
from rayleighkit.graph import GraphError, Multigraph
from rayleighkit.sampler import (
    Xoshiro256,
    derive_seed,
    empirical_conditionals,
    exact_conditionals,
    sample_spanning_tree,
    sample_spanning_trees,
    splitmix64,
)

SEED = 20070901


class TestGenerator:
    def test_splitmix64_reference(self):
        x = 0
        outs = []
        for _ in range(3):
            x, out = splitmix64(x)
            outs.append(out)
        assert outs == [0xE220A8397B1DCDAF, 0x6E789E6AA1B965F4, 0x06C45D188009454F]

    def test_xoshiro_reference(self):
        rng = Xoshiro256(0)
        rng.s = [1, 2, 3, 4]
        assert [rng.next_u64() for _ in range(4)] == [11520, 0, 1509978240, 1215971899390074240]

    def test_seeded_state_comes_from_splitmix(self):
        x, s = 7, []
        for _ in range(4):
            x, out = splitmix64(x)
            s.append(out)
        assert Xoshiro256(7).s == s

    def test_randbelow_range_and_spread(self):
        rng = Xoshiro256(1)
        draws = [rng.randbelow(6) for _ in range(6000)]
        assert set(draws) == set(range(6))
        assert all(800 < c < 1200 for c in Counter(draws).values())
        assert all(0 <= rng.randbelow(3 << 70) < 3 << 70 for _ in range(100))

    def test_randbelow_one(self):
        assert Xoshiro256(3).randbelow(1) == 0

    def test_derive_seed_differs_per_stream(self):
        assert len({derive_seed(5, k) for k in range(10)}) == 10


def frequencies(g, n, seed):
    counts = Counter(sample_spanning_trees(g, n, seed))
    return {t: Fraction(c, n) for t, c in counts.items()}


class TestSampler:
    def test_path_always_same_tree(self, path):
        rng = Xoshiro256(SEED)
        assert {sample_spanning_tree(path, rng) for _ in range(50)} == {frozenset({"e1", "e2"})}

    def test_disconnected(self):
        with pytest.raises(GraphError, match="disconnected"):
            sample_spanning_tree(Multigraph(2, ()), Xoshiro256(0))

    def test_triangle_uniform(self, triangle):
        freq = frequencies(triangle, 30000, SEED)
        assert len(freq) == 3
        assert all(abs(p - Fraction(1, 3)) < Fraction(2, 100) for p in freq.values())

    def test_parallel_pair_weighted(self):
        g = parallel_pair(Fraction(1), Fraction(3))
        freq = frequencies(g, 30000, SEED)
        assert abs(freq[frozenset({"e2"})] - Fraction(3, 4)) < Fraction(2, 100)

    def test_deterministic(self, triangle):
        assert sample_spanning_trees(triangle, 200, 9) == sample_spanning_trees(triangle, 200, 9)
        assert sample_spanning_trees(triangle, 200, 9) != sample_spanning_trees(triangle, 200, 10)

    def test_loops_ignored(self):
        g = Multigraph.from_tuples(2, [("a", 0, 1), ("l", 0, 0, 50)])
        assert set(sample_spanning_trees(g, 20, 1)) == {frozenset({"a"})}

    def test_weighted_small_graph_against_exact(self):
        # diamond with a chord and a parallel edge: 8 spanning trees or fewer per check
        g = Multigraph.from_tuples(
            3,
            [("a", 0, 1, Fraction(1, 2)), ("b", 1, 2, 3), ("c", 0, 2, 1), ("d", 0, 1, Fraction(5, 2))],
        )
        trees = oracles.spanning_trees(g)
        total = sum(oracles.weight(g, t) for t in trees)
        assert len(trees) <= 8
        freq = frequencies(g, 30000, SEED)
        for t in trees:
            assert abs(freq.get(t, 0) - oracles.weight(g, t) / total) < Fraction(2, 100)


class TestConditionals:
    def test_triangle_exact(self, triangle):
        assert exact_conditionals(triangle, "e1", "e2") == (1, Fraction(1, 2))

    def test_parallel_exact(self, pair):
        assert exact_conditionals(pair, "e1", "e2") == (1, 0)

    def test_k4_adjacent_exact(self):
        # oracle family sums (3, 5, 5, 3): 5/(5+3) and 3/(3+5)
        first, second = exact_conditionals(k4(), "e1", "e2")
        assert (first, second) == (Fraction(5, 8), Fraction(3, 8))
        assert first >= second

    def test_bridge_rejected(self, path):
        with pytest.raises(GraphError, match="e2 is a bridge"):
            exact_conditionals(path, "e1", "e2")
        with pytest.raises(GraphError, match="e2 is a bridge"):
            empirical_conditionals(path, "e1", "e2", 100, 1)

    def test_e1_bridge_still_reported(self):
        g = Multigraph.from_tuples(3, [("b", 0, 1), ("x", 1, 2), ("y", 1, 2)])
        assert exact_conditionals(g, "b", "x") == (1, 1)

    def test_zero_samples(self, triangle):
        with pytest.raises(ValueError):
            empirical_conditionals(triangle, "e1", "e2", 0, 1)

    def test_triangle_empirical(self, triangle):
        absent, present = empirical_conditionals(triangle, "e1", "e2", 30000, SEED)
        assert absent.exact_p == 1 and present.exact_p == Fraction(1, 2)
        assert absent.abs_gap < Fraction(2, 100)
        assert present.abs_gap < Fraction(2, 100)
        assert absent.event_count + present.event_count == 30000
        assert 0 <= absent.empirical_p <= 1

    def test_insufficient_samples(self, pair):
        # a single draw can only land on one side of the conditioning event
        reports = empirical_conditionals(pair, "e1", "e2", 1, SEED)
        assert sum(r.insufficient for r in reports) == 1
        assert all((r.empirical_p is None) == (r.event_count == 0) for r in reports)
