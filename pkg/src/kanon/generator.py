"""Preferential-attachment random graphs."""

from __future__ import annotations

import random

from kanon.graph import Graph


def barabasi_albert(steps: int, m0: int, seed: int) -> Graph:
    """Grow a graph from a clique on ``m0 + 1`` vertices.

    Each of the ``steps`` new vertices is joined to ``m0`` distinct existing
    vertices, drawn with probability proportional to their current degree.
    The result has ``m0 + 1 + steps`` vertices and ``C(m0 + 1, 2) + m0 * steps`` edges.
    """
    if m0 < 1:
        raise ValueError("m0 must be at least 1")
    if steps < 1:
        raise ValueError("steps must be at least 1")
    rng = random.Random(seed)
    edges = [(u, v) for u in range(m0 + 1) for v in range(u + 1, m0 + 1)]
    # every vertex appears once per incident edge, so a uniform pick is degree-weighted
    ends = [x for e in edges for x in e]
    for new in range(m0 + 1, m0 + 1 + steps):
        targets: set[int] = set()
        while len(targets) < m0:
            targets.add(ends[rng.randrange(len(ends))])
        for t in sorted(targets):
            edges.append((t, new))
            ends.extend((t, new))
    return Graph(m0 + 1 + steps, edges)


__all__ = ["barabasi_albert"]
