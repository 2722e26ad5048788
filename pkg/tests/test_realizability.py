import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import graphs, random_graph
from instances import ten_vertex_graph
from kanon.dp import AnonymizationSolution, build_target_table, enumerate_targets, min_cost, solutions
from kanon.graph import BlockSequence, Graph, block_sequence, degree_sequence, difference, dominates, is_k_anonymous
from kanon.oracle import brute_force_realizable, brute_force_target_realizable
from kanon.realizability import (
    EGVerdict,
    advanced_erdos_gallai_test,
    degree_cap,
    erdos_gallai_test,
    iter_waste_candidates,
    realize_sequence,
    waste_to_realizable,
)

B = BlockSequence


def solution(g, target):
    return AnonymizationSolution.from_target(block_sequence(g), B(target))


class TestErdosGallai:
    def test_clique(self):
        assert erdos_gallai_test([3, 3, 3, 3]) == EGVerdict(True, None, True)

    def test_fails_at_two(self):
        assert erdos_gallai_test([3, 3, 1, 1]) == EGVerdict(False, 2, True)

    def test_odd_sum(self):
        verdict = erdos_gallai_test([1, 1, 1])
        assert not verdict and not verdict.parity_ok

    def test_pair_of_twos(self):
        assert erdos_gallai_test([2, 2]).first_failing_r == 2

    def test_empty_and_zeros(self):
        assert erdos_gallai_test([])
        assert erdos_gallai_test([0, 0, 0])

    def test_negative(self):
        assert not erdos_gallai_test([1, -1, 0])

    def test_order_irrelevant(self):
        assert erdos_gallai_test([1, 3, 1, 3]) == erdos_gallai_test([3, 3, 1, 1])

    @given(st.lists(st.integers(0, 9), max_size=12))
    def test_verdict_consistent(self, d):
        v = erdos_gallai_test(d)
        if v.realizable:
            assert v.parity_ok and v.first_failing_r is None

    @settings(max_examples=500)
    @given(st.lists(st.integers(0, 12), max_size=14))
    def test_agrees_with_havel_hakimi(self, d):
        assert bool(erdos_gallai_test(d)) == (realize_sequence(d) is not None)

    @settings(max_examples=200)
    @given(st.lists(st.integers(0, 5), max_size=7))
    def test_agrees_with_brute_force(self, d):
        assert bool(erdos_gallai_test(d)) == brute_force_realizable(d)


class TestHavelHakimi:
    def test_triangle(self):
        assert realize_sequence([2, 2, 2]) == Graph(3, [(0, 1), (1, 2), (0, 2)])

    def test_star(self):
        assert realize_sequence([3, 1, 1, 1]) == Graph(4, [(0, 1), (0, 2), (0, 3)])

    def test_none(self):
        assert realize_sequence([3, 3, 1, 1]) is None
        assert realize_sequence([1]) is None

    @given(graphs(max_n=9))
    def test_graphical_sequences_realized_exactly(self, g):
        d = degree_sequence(g)
        h = realize_sequence(d)
        assert h is not None and h.degrees() == d


class TestAdvanced:
    def test_rejects_target_needing_existing_edge(self):
        g = ten_vertex_graph()
        assert erdos_gallai_test(difference(B((0, 2, 2, 4, 0, 0, 2)), block_sequence(g)).degrees())
        assert not advanced_erdos_gallai_test(g, solution(g, (0, 2, 2, 4, 0, 0, 2)))

    def test_accepts_single_edge_target(self):
        g = ten_vertex_graph()
        assert advanced_erdos_gallai_test(g, solution(g, (0, 3, 0, 5, 0, 0, 2)))

    def test_zero_difference(self):
        g = ten_vertex_graph()
        assert advanced_erdos_gallai_test(g, solution(g, block_sequence(g).counts))

    @settings(max_examples=150, deadline=None)
    @given(graphs(max_n=8), st.integers(2, 3))
    def test_implies_plain(self, g, k):
        b = block_sequence(g)
        if g.n < k:
            return
        table = build_target_table(b, k, 6, degree_cap(g) if g.delta else g.n - 1)
        for s in range(7):
            for sol in enumerate_targets(table, s, limit=30):
                plain = erdos_gallai_test(difference(sol.target, b).degrees())
                if advanced_erdos_gallai_test(g, sol):
                    assert plain

    @settings(max_examples=150, deadline=None)
    @given(graphs(max_n=7), st.integers(2, 3))
    def test_sound(self, g, k):
        b = block_sequence(g)
        if g.n < k:
            return
        table = build_target_table(b, k, 8, g.n - 1)
        for s in range(0, 9, 2):
            for sol in enumerate_targets(table, s, limit=20):
                if brute_force_target_realizable(g, sol.target) is not None:
                    assert advanced_erdos_gallai_test(g, sol), (sorted(g.edges()), sol.target)


class TestWasting:
    def test_already_realizable(self):
        g = ten_vertex_graph()
        sol = solution(g, (0, 3, 0, 5, 0, 0, 2))
        assert waste_to_realizable(g, sol, 2) == (sol, 0)

    def test_parity_repair(self):
        g = Graph(5, [(0, 1), (1, 2), (3, 4)])
        sol = solution(g, (0, 3, 2))
        assert sol.cost == 1
        fixed, waste = waste_to_realizable(g, sol, 2)
        assert waste >= 1 and fixed.cost % 2 == 0

    def test_single_hungry_vertex(self):
        # a triangle plus an isolated vertex: lifting the isolated vertex to 2
        # alone asks for two edges with nobody else gaining a degree
        g = Graph(4, [(1, 2), (1, 3), (2, 3)])
        sol = solution(g, (0, 0, 4))
        assert erdos_gallai_test(difference(sol.target, sol.source).degrees()).first_failing_r == 1
        fixed, waste = waste_to_realizable(g, sol, 2)
        assert (fixed.target, waste) == (B((0, 0, 2, 2)), 2)
        assert brute_force_target_realizable(g, fixed.target) is not None

    def test_budget_exhausted(self):
        g = Graph(4, [(1, 2), (1, 3), (2, 3)])
        assert waste_to_realizable(g, solution(g, (0, 0, 4)), 2, budget=1) is None

    def test_large_block_fast_path(self):
        # 8 vertices of degree 1 and 8 of degree 2 (two blocks of size >= 2k for k=2)
        edges = [(2 * i, 2 * i + 1) for i in range(4)]
        edges += [(8 + i, 8 + (i + 1) % 8) for i in range(8)]
        g = Graph(16, edges)
        sol = solution(g, (0, 8, 8))
        found = list(iter_waste_candidates(g, AnonymizationSolution(sol.source, sol.target, 0, ()), 2, budget=4))
        assert found and all(w >= 1 for _, w in found)
        assert [w for _, w in found] == sorted(w for _, w in found)

    @settings(max_examples=100, deadline=None)
    @given(graphs(max_n=8, min_n=2), st.integers(2, 3))
    def test_output_properties(self, g, k):
        b = block_sequence(g)
        if g.n < k:
            return
        s = min_cost(b, k, g.n * g.n)
        for sol in solutions(b, k, s, limit=5):
            result = waste_to_realizable(g, sol, k)
            if result is None:
                continue
            fixed, waste = result
            assert is_k_anonymous(fixed.target, k)
            assert dominates(fixed.target, sol.target)
            assert advanced_erdos_gallai_test(g, fixed)
            assert waste == fixed.target.norm - sol.target.norm
            assert max(fixed.target.degrees()) <= max(degree_cap(g), b.delta)


def test_degree_cap():
    assert degree_cap(Graph(10, [(0, 1)])) == 2
    assert degree_cap(ten_vertex_graph()) == 9


@pytest.mark.parametrize("seed", range(3))
def test_waste_is_deterministic(seed):
    rng = random.Random(seed)
    g = random_graph(rng, 8, 0.3)
    b = block_sequence(g)
    s = min_cost(b, 2, 64)
    sols = list(solutions(b, 2, s, limit=3))
    assert [waste_to_realizable(g, x, 2) for x in sols] == [waste_to_realizable(g, x, 2) for x in sols]
