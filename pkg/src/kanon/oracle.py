"""Brute-force reference solvers for small instances.

Nothing here reuses the production algorithms; only the ``Graph`` and
``BlockSequence`` containers are shared. Use them to cross-check results,
never on large inputs.
"""

from __future__ import annotations

from collections import Counter
from itertools import combinations
from typing import Sequence

from kanon.graph import BlockSequence, Graph

Edge = tuple[int, int]


class OracleLimitError(ValueError):
    """Raised when an instance is too large for exhaustive search."""


def _anonymous(degrees: Sequence[int], k: int) -> bool:
    return all(c >= k for c in Counter(degrees).values())


def brute_force_min_insertion(
    g: Graph, k: int, edge_cap: int | None = None, max_n: int = 10
) -> list[Edge] | None:
    """Smallest edge set whose insertion makes ``g`` k-anonymous, by increasing subset size."""
    if g.n > max_n:
        raise OracleLimitError(f"n={g.n} exceeds the oracle limit {max_n}")
    free = [(u, v) for u, v in combinations(range(g.n), 2) if not g.has_edge(u, v)]
    if edge_cap is None:
        edge_cap = len(free)
    base = g.degrees()
    for size in range(min(edge_cap, len(free)) + 1):
        for chosen in combinations(free, size):
            degs = list(base)
            for u, v in chosen:
                degs[u] += 1
                degs[v] += 1
            if _anonymous(degs, k):
                return list(chosen)
    return None


def brute_force_kdsa_targets(
    b: BlockSequence, k: int, max_n: int = 12, max_delta: int = 6
) -> tuple[int, list[tuple[int, ...]]]:
    """Minimum increments and every optimal target degree sequence (ascending tuples).

    Targets are assigned to the ascending degree list as a non-decreasing
    sequence bounded by the maximum degree; swapping any crossed pair of
    targets keeps the cost, so nothing optimal is lost.
    """
    degs = sorted(d for d, c in enumerate(b.counts) for _ in range(c))
    n = len(degs)
    top = max(degs, default=0)
    if n > max_n or top > max_delta:
        raise OracleLimitError(f"n={n}, delta={top} exceed the oracle limits ({max_n}, {max_delta})")
    best = [None]
    found: list[tuple[int, ...]] = []
    chosen: list[int] = []

    def visit(i: int, cost: int) -> None:
        if best[0] is not None and cost > best[0]:
            return
        if i == n:
            if _anonymous(chosen, k):
                if best[0] is None or cost < best[0]:
                    best[0] = cost
                    found.clear()
                found.append(tuple(chosen))
            return
        low = max(degs[i], chosen[-1] if chosen else 0)
        for t in range(low, top + 1):
            chosen.append(t)
            visit(i + 1, cost + t - degs[i])
            chosen.pop()

    visit(0, 0)
    return best[0], found


def brute_force_kdsa(b: BlockSequence, k: int, max_n: int = 12, max_delta: int = 6) -> int:
    """Minimum total increments that make ``b`` k-anonymous."""
    return brute_force_kdsa_targets(b, k, max_n, max_delta)[0]


def brute_force_realizable(d: Sequence[int], max_n: int = 8) -> bool:
    """Whether some simple graph on ``len(d)`` labelled vertices has degree sequence ``d``."""
    n = len(d)
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the oracle limit {max_n}")
    if any(x < 0 for x in d):
        return False
    rem = list(d)

    def visit(v: int) -> bool:
        if v == n:
            return True
        later = [u for u in range(v + 1, n) if rem[u] > 0]
        need = rem[v]
        if need > len(later):
            return False
        for nbrs in combinations(later, need):
            for u in nbrs:
                rem[u] -= 1
            rem[v] = 0
            ok = visit(v + 1)
            rem[v] = need
            for u in nbrs:
                rem[u] += 1
            if ok:
                return True
        return False

    return visit(0)


def brute_force_realizable_in(g: Graph, demand: Sequence[int], max_n: int = 10) -> list[Edge] | None:
    """An edge set of non-edges of ``g`` giving vertex ``v`` exactly ``demand[v]`` new edges, if any."""
    n = g.n
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the oracle limit {max_n}")
    rem = list(demand)
    edges: list[Edge] = []

    def visit(v: int) -> bool:
        if v == n:
            return True
        later = [u for u in range(v + 1, n) if rem[u] > 0 and not g.has_edge(v, u)]
        need = rem[v]
        if need > len(later):
            return False
        for nbrs in combinations(later, need):
            for u in nbrs:
                rem[u] -= 1
                edges.append((v, u))
            rem[v] = 0
            if visit(v + 1):
                return True
            rem[v] = need
            for u in nbrs:
                rem[u] += 1
                edges.pop()
        return False

    return list(edges) if visit(0) else None


def brute_force_target_realizable(g: Graph, target: BlockSequence, max_n: int = 8) -> list[Edge] | None:
    """Edges realizing ``target`` in ``g`` under some assignment of target degrees to vertices, if any."""
    n = g.n
    if n > max_n:
        raise OracleLimitError(f"n={n} exceeds the oracle limit {max_n}")
    if target.n != n:
        return None
    pool = Counter({d: c for d, c in enumerate(target.counts) if c})
    base = g.degrees()
    assigned = [0] * n

    def visit(v: int) -> list[Edge] | None:
        if v == n:
            return brute_force_realizable_in(g, [t - d for t, d in zip(assigned, base)], max_n)
        for t in sorted(pool):
            if pool[t] and t >= base[v]:
                pool[t] -= 1
                assigned[v] = t
                found = visit(v + 1)
                pool[t] += 1
                if found is not None:
                    return found
        return None

    return visit(0)


__all__ = [
    "OracleLimitError",
    "brute_force_kdsa",
    "brute_force_kdsa_targets",
    "brute_force_min_insertion",
    "brute_force_realizable",
    "brute_force_realizable_in",
    "brute_force_target_realizable",
]
