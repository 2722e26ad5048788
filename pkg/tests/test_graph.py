import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import block_sequences, graphs
from instances import four_vertex_graph, jump_graph, ten_vertex_graph
from kanon.graph import (
    BlockSequence,
    Graph,
    GraphFormatError,
    add_edges,
    block_sequence,
    degree_sequence,
    difference,
    dominates,
    format_edgelist,
    format_metis,
    is_k_anonymous,
    load_graph,
    parse_edgelist,
    parse_metis,
    positional_pairs,
    write_graph,
)

B = BlockSequence


class TestGraph:
    def test_basic_counts(self):
        g = four_vertex_graph()
        assert (g.n, g.m, g.delta) == (4, 4, 3)
        assert sorted(g.degrees()) == [1, 2, 2, 3]
        assert g.neighbors(1) == [0, 2, 3]
        assert g.has_edge(3, 2) and not g.has_edge(0, 2)

    def test_duplicate_edges_collapse(self):
        assert Graph(3, [(0, 1), (1, 0), (0, 1)]).m == 1

    @pytest.mark.parametrize("edges", [[(0, 0)], [(0, 3)], [(-1, 0)]])
    def test_rejects_bad_edges(self, edges):
        with pytest.raises(ValueError):
            Graph(3, edges)

    def test_equality_and_hash(self):
        assert Graph(3, [(0, 1)]) == Graph(3, [(1, 0)])
        assert hash(Graph(3, [(0, 1)])) == hash(Graph(3, [(1, 0)]))
        assert Graph(3, [(0, 1)]) != Graph(4, [(0, 1)])

    @given(graphs())
    def test_simple_and_symmetric(self, g):
        assert 2 * g.m == sum(g.degrees())
        assert g.delta == max(g.degrees(), default=0)
        for u in range(g.n):
            assert u not in g.adjacency(u)
            for v in g.adjacency(u):
                assert u in g.adjacency(v)


class TestBlockSequence:
    def test_known_block_sequences(self):
        assert block_sequence(ten_vertex_graph()) == B((0, 3, 1, 4, 0, 1, 1))
        assert block_sequence(jump_graph()) == B((0, 15, 0, 3, 2, 1, 0, 2, 0, 1))
        assert block_sequence(Graph(4)) == B((4,))

    def test_trailing_zeros_trimmed(self):
        assert B((1, 2, 0, 0)).counts == (1, 2)
        assert B(()).delta == 0 and B(()).n == 0

    def test_rejects_negative(self):
        with pytest.raises(ValueError):
            B((1, -1))

    def test_accessors(self):
        b = B((0, 1, 2, 1))
        assert (b.n, b.delta, b.norm) == (4, 3, 8)
        assert b[10] == 0
        assert b.degrees() == [1, 2, 2, 3]
        assert b.padded(6) == [0, 1, 2, 1, 0, 0]
        assert str(b) == "{0,1,2,1}"

    @given(graphs())
    def test_round_trip_with_degrees(self, g):
        assert block_sequence(g) == B.from_degrees(degree_sequence(g))
        assert B.from_degrees(block_sequence(g).degrees()) == block_sequence(g)


class TestAnonymity:
    def test_examples(self):
        assert is_k_anonymous(B((0, 3, 0, 5, 0, 0, 2)), 2)
        assert not is_k_anonymous(B((0, 3, 1, 4, 0, 1, 1)), 2)

    @given(block_sequences())
    def test_everything_is_1_anonymous(self, b):
        assert is_k_anonymous(b, 1)

    def test_rejects_k_below_one(self):
        with pytest.raises(ValueError):
            is_k_anonymous(B((1,)), 0)


class TestDominance:
    def test_examples(self):
        assert dominates(B((0, 0, 0, 4)), B((0, 1, 2, 1)))
        assert dominates(B((0, 3, 2)), B((0, 4, 1)))
        assert not dominates(B((0, 4, 1)), B((0, 3, 2)))

    def test_mismatched_sizes(self):
        with pytest.raises(ValueError):
            dominates(B((1,)), B((2,)))

    @given(block_sequences())
    def test_reflexive(self, b):
        assert dominates(b, b)
        assert difference(b, b).norm == 0

    @given(st.lists(st.integers(0, 6), max_size=12), st.data())
    def test_matches_sorted_comparison(self, degrees, data):
        raised = [d + data.draw(st.integers(0, 3)) for d in degrees]
        b1, b2 = B.from_degrees(degrees), B.from_degrees(raised)
        assert dominates(b2, b1)
        diff = difference(b2, b1)
        assert diff.norm == b2.norm - b1.norm
        expected = [y - x for x, y in zip(sorted(degrees), sorted(raised))]
        assert diff == B.from_degrees(expected)

    def test_difference_examples(self):
        assert sorted(difference(B((0, 0, 0, 4)), B((0, 1, 2, 1))).degrees(), reverse=True) == [2, 1, 1, 0]
        d = difference(B((0, 3, 0, 5, 0, 0, 2)), B((0, 3, 1, 4, 0, 1, 1)))
        assert d.norm == 2 and d[1] == 2

    def test_difference_requires_dominance(self):
        with pytest.raises(ValueError):
            difference(B((0, 4, 1)), B((0, 3, 2)))

    def test_positional_pairs(self):
        pairs = list(positional_pairs(B((0, 0, 0, 4)), B((0, 1, 2, 1))))
        assert sum(c for _, _, c in pairs) == 4
        assert {(s, d) for s, d, _ in pairs} == {(1, 3), (2, 3), (3, 3)}


class TestAddEdges:
    def test_known_insertions(self):
        assert block_sequence(add_edges(four_vertex_graph(), [(0, 2), (0, 3)])) == B((0, 0, 0, 4))
        assert block_sequence(add_edges(ten_vertex_graph(), [(3, 5)])) == B((0, 3, 0, 5, 0, 0, 2))

    def test_empty_is_identity(self):
        g = ten_vertex_graph()
        assert add_edges(g, []) == g

    @pytest.mark.parametrize("edges", [[(0, 1)], [(2, 2)], [(0, 2), (2, 0)]])
    def test_rejects(self, edges):
        with pytest.raises(ValueError):
            add_edges(four_vertex_graph(), edges)

    def test_input_unchanged(self):
        g = four_vertex_graph()
        add_edges(g, [(0, 2)])
        assert g.m == 4

    @given(graphs(min_n=2), st.data())
    def test_each_edge_adds_two_increments(self, g, data):
        free = [(u, v) for u in range(g.n) for v in range(u + 1, g.n) if not g.has_edge(u, v)]
        chosen = data.draw(st.lists(st.sampled_from(free), unique=True)) if free else []
        h = add_edges(g, chosen)
        assert h.m == g.m + len(chosen)
        assert dominates(block_sequence(h), block_sequence(g))
        assert difference(block_sequence(h), block_sequence(g)).norm == 2 * len(chosen)


class TestFiles:
    def test_edgelist_example(self):
        g = parse_edgelist("0 1\n1 2\n1 3\n2 3\n")
        assert sorted(g.degrees()) == [1, 2, 2, 3]

    def test_declared_isolated_vertices(self):
        g = parse_edgelist("# vertices: 3\n")
        assert (g.n, g.delta) == (3, 0)
        assert parse_edgelist("", n=3).n == 3

    def test_edgelist_one_based_and_dirty(self, caplog):
        g = parse_edgelist("# comment\n1 2\n2 1\n3 3\n2 3\n", index_base=1)
        assert g.n == 3 and g.m == 2
        assert "dropped 1 self-loops and 1 duplicate" in caplog.text

    @pytest.mark.parametrize("text", ["0\n", "a b\n", "0 -1\n"])
    def test_edgelist_errors(self, text):
        with pytest.raises(GraphFormatError) as err:
            parse_edgelist(text)
        assert err.value.line == 1

    def test_metis_cycle(self):
        g = parse_metis("% a 5-cycle\n5 5\n2 5\n1 3\n2 4\n3 5\n4 1\n")
        assert (g.n, g.m, g.delta) == (5, 5, 2)

    @pytest.mark.parametrize(
        "text",
        [
            "3 1\n2\n1\n",  # too few lines
            "2 2\n2\n1\n",  # wrong m
            "2 1\n2\n\n",  # asymmetric
            "2 1\n1\n\n",  # self-loop
            "2 1\n3\n1\n",  # out of range
            "2 1 1\n2 1\n1 1\n",  # weighted
        ],
    )
    def test_metis_errors(self, text):
        with pytest.raises(GraphFormatError):
            parse_metis(text)

    def test_metis_writer_is_sorted(self):
        assert format_metis(four_vertex_graph()) == "4 4\n2\n1 3 4\n2 4\n2 3\n"

    @settings(max_examples=50)
    @given(graphs(max_n=10), st.sampled_from(["metis", "edgelist"]), st.sampled_from([0, 1]))
    def test_write_load_round_trip(self, tmp_path_factory, g, fmt, base):
        path = tmp_path_factory.mktemp("g") / "graph"
        write_graph(g, path, fmt, base)
        assert load_graph(path, fmt, base) == g

    def test_edgelist_text_round_trip(self):
        g = jump_graph()
        assert parse_edgelist(format_edgelist(g, 1), index_base=1) == g

    def test_unknown_format(self, tmp_path):
        path = tmp_path / "g"
        path.write_text("")
        with pytest.raises(ValueError):
            load_graph(path, "dimacs")
