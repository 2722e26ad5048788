"""Small hand-built instances with known optimal insertions."""

from kanon.graph import Graph


def four_vertex_graph() -> Graph:
    """Triangle 1-2-3 with a pendant on vertex 1; two chords make it K4."""
    return Graph(4, [(0, 1), (1, 2), (1, 3), (2, 3)])


def ten_vertex_graph() -> Graph:
    """Ten vertices, block sequence {0,3,1,4,0,1,1}; one edge 3-5 (0-based) makes it 2-anonymous."""
    one_based = [
        (1, 4), (2, 4), (3, 4), (4, 5), (4, 7), (5, 6), (5, 7),
        (5, 8), (5, 9), (5, 10), (6, 10), (10, 9), (9, 8), (7, 8),
    ]
    return Graph(10, [(u - 1, v - 1) for u, v in one_based])


def jump_graph() -> Graph:
    """24 vertices whose only 3-edge 2-anonymization needs a degree to skip a block.

    Vertices 0..8 form the core, 9..23 are pendants. The optimal insertion is
    {(1, 7), (2, 7), (1, 2)}: vertex 7 goes from degree 3 to 5, passing the
    degree-4 block.
    """
    edges = [(0, p) for p in range(9, 18)]
    edges += [(1, p) for p in range(18, 21)]
    edges += [(2, p) for p in range(21, 24)]
    core = [
        (2, 7), (3, 9), (4, 5), (4, 7), (5, 6), (6, 8), (6, 9), (2, 4), (2, 5),
        (2, 6), (3, 4), (3, 5), (3, 6), (7, 8), (8, 9),
    ]
    edges += [(u - 1, v - 1) for u, v in core]
    return Graph(24, edges)


JUMP_OPTIMUM = [(1, 7), (2, 7), (1, 2)]
