"""Realizability tests for difference sequences, and wasting.

``advanced_erdos_gallai_test`` is a necessary condition for realizing a
target block sequence inside a given graph, under *any* degree-vertex
mapping (jumps included). That makes it safe for lower bounds.
"""

from __future__ import annotations

import heapq
from collections import Counter
from dataclasses import dataclass
from itertools import accumulate
from typing import Iterable, Iterator

from kanon.dp import AnonymizationSolution
from kanon.graph import BlockSequence, Graph, difference, is_k_anonymous


@dataclass(frozen=True)
class EGVerdict:
    realizable: bool
    first_failing_r: int | None
    parity_ok: bool

    def __bool__(self) -> bool:
        return self.realizable


def erdos_gallai_test(d: Iterable[int]) -> EGVerdict:
    """Erdős–Gallai test, evaluated only at the last index of each block of equal values."""
    hist = Counter(d)
    if hist and min(hist) < 0:
        return EGVerdict(False, None, False)
    n = sum(hist.values())
    total = sum(v * c for v, c in hist.items())
    parity_ok = total % 2 == 0
    if not hist:
        return EGVerdict(True, None, True)
    top = max(hist)
    cnt = [hist.get(v, 0) for v in range(top + 1)]
    below_count = [0, *accumulate(cnt)]  # below_count[x] = #{d < x}
    below_sum = [0, *accumulate(v * c for v, c in enumerate(cnt))]

    r = lhs = 0
    for v in range(top, -1, -1):
        if not cnt[v]:
            continue
        r += cnt[v]
        lhs += v * cnt[v]
        # degrees after position r are exactly those below v
        x = min(v, r)
        rhs = r * (r - 1) + below_sum[x] + r * (below_count[v] - below_count[x])
        if lhs > rhs:
            return EGVerdict(False, r, parity_ok)
        if r >= n:
            break
    return EGVerdict(parity_ok, None, parity_ok)


def realize_sequence(d: list[int]) -> Graph | None:
    """Havel–Hakimi: a graph in which vertex ``i`` has degree ``d[i]``, or ``None``."""
    n = len(d)
    if any(x < 0 or x > max(n - 1, 0) for x in d) or sum(d) % 2:
        return None
    rem = list(d)
    heap = [(-x, v) for v, x in enumerate(d) if x > 0]
    heapq.heapify(heap)
    edges = []
    while heap:
        neg, v = heapq.heappop(heap)
        need = -neg
        if need > len(heap):
            return None
        taken = [heapq.heappop(heap) for _ in range(need)]
        for _, u in taken:
            rem[u] -= 1
            edges.append((v, u))
        rem[v] = 0
        for _, u in taken:
            if rem[u]:
                heapq.heappush(heap, (-rem[u], u))
    return Graph(n, edges)


# ---------------------------------------------------------------------------
# graph-aware test


class _Slack:
    """Which source degrees can be lifted, and how far, under some valid mapping."""

    def __init__(self, source: BlockSequence, target: BlockSequence):
        size = max(len(source), len(target)) + 1
        src = source.padded(size)
        dst = target.padded(size)
        self.target = dst
        # slack[v] = #targets >= v  -  #sources >= v
        s_ge = list(accumulate(reversed(src)))[::-1]
        t_ge = list(accumulate(reversed(dst)))[::-1]
        self.slack = [t - s for t, s in zip(t_ge, s_ge)]
        self.size = size

    def next_target(self, j: int) -> int | None:
        for t in range(j + 1, self.size):
            if self.target[t]:
                return t
        return None

    def max_lift(self, j: int) -> int:
        """Largest increment any vertex of source degree ``j`` can receive (0 if none)."""
        best = 0
        for v in range(j + 1, self.size):
            if self.slack[v] < 1:
                break
            if self.target[v]:
                best = v - j
        return best


_last_blocks: list = [None, None]  # (graph, (degrees, blocks)) of the most recent call


def _vertex_blocks(g: Graph) -> tuple[list[int], dict[int, list[int]]]:
    if _last_blocks[0] is not g:
        degs = g.degrees()
        blocks: dict[int, list[int]] = {}
        for v, d in enumerate(degs):
            blocks.setdefault(d, []).append(v)
        _last_blocks[:] = [g, (degs, blocks)]
    return _last_blocks[1]


def _graph_check(g: Graph, sol: AnonymizationSolution, max_forced: int = 64) -> int | None:
    """Return the size of a violating forced set, or ``None`` if no violation is found.

    A source block with no target slot at its own degree is lifted entirely
    in every mapping, so its vertices are known. For the ``r`` forced
    vertices with the largest guaranteed lifts, the guaranteed demand must
    fit into non-edges among them plus non-edges to vertices that can be
    lifted at all, and into the total cost. Only the first ``max_forced``
    prefixes are checked; skipping some only weakens the test.
    """
    source, target = sol.source, sol.target
    slack = _Slack(source, target)
    degs, blocks = _vertex_blocks(g)

    lift = {j: slack.max_lift(j) for j in blocks}
    forced: list[tuple[int, int]] = []  # (-guaranteed lift, vertex)
    for j, members in blocks.items():
        if target[j] == 0:
            nt = slack.next_target(j)
            if nt is None:  # not dominated; the plain test already failed
                return 0
            forced.extend((j - nt, v) for v in members)
    if not forced:
        return None
    forced.sort()

    liftable_total = {}  # r -> sum over liftable vertices of min(lift, r), filled lazily
    chosen: list[int] = []
    chosen_set: set[int] = set()
    need = 0
    non_edges = 0
    for neg, v in forced[:max_forced]:
        chosen.append(v)
        chosen_set.add(v)
        need += -neg
        adj_v = g.adjacency(v)
        non_edges += sum(1 for u in chosen[:-1] if u not in adj_v)
        r = len(chosen)
        if r not in liftable_total:
            liftable_total[r] = sum(len(m) * min(lift[j], r) for j, m in blocks.items())
        outside = liftable_total[r]
        touched = set(chosen)
        for u in chosen:
            touched.update(g.adjacency(u))
        for u in touched:
            cap = lift[degs[u]]
            if not cap:
                continue
            outside -= min(cap, r)
            if u not in chosen_set:
                outside += min(cap, r - len(g.adjacency(u) & chosen_set))
        if need > 2 * non_edges + min(sol.cost - need, outside):
            return r
    return None


def advanced_erdos_gallai_test(g: Graph, sol: AnonymizationSolution) -> EGVerdict:
    """Plain test on the difference sequence, strengthened with edges already in ``g``."""
    plain = erdos_gallai_test(difference(sol.target, sol.source).degrees())
    if not plain.realizable:
        return plain
    r = _graph_check(g, sol)
    if r is None:
        return plain
    return EGVerdict(False, r, True)


# ---------------------------------------------------------------------------
# wasting


def degree_cap(g: Graph) -> int:
    """Highest target degree worth considering: a simple-graph ceiling and 2*delta^2."""
    return min(g.n - 1, 2 * g.delta**2)


def _large_pairs(target: BlockSequence, k: int, cap: int) -> list[int]:
    pairs = [i for i in range(len(target) - 1) if i + 1 <= cap and target[i] >= 2 * k and target[i + 1] >= 2 * k]
    return sorted(pairs, key=lambda i: (-(target[i] + target[i + 1]), i))


def _shift(target: BlockSequence, i: int, w: int) -> BlockSequence:
    counts = target.padded(i + 2)
    counts[i] -= w
    counts[i + 1] += w
    return BlockSequence(tuple(counts))


def _unit_lifts(counts: tuple[int, ...], cap: int) -> Iterator[tuple[int, ...]]:
    for d, c in enumerate(counts):
        if c and d + 1 <= cap:
            nxt = list(counts) + ([0] if d + 1 == len(counts) else [])
            nxt[d] -= 1
            nxt[d + 1] += 1
            yield tuple(nxt)


def iter_waste_candidates(
    g: Graph,
    sol: AnonymizationSolution,
    k: int,
    budget: int | None = None,
    state_cap: int = 20000,
) -> Iterator[tuple[AnonymizationSolution, int]]:
    """Yield k-anonymous over-lifts of ``sol.target`` that pass the advanced test, by increasing waste.

    With two adjacent target blocks of size >= 2k, degrees are moved one step
    from the lower to the upper block. Otherwise every block sequence reachable
    by ``w`` single-step lifts is examined, level by level.
    """
    if budget is None:
        budget = 4 * max(g.delta, 1)
    cap = degree_cap(g)
    source = sol.source

    def accept(target: BlockSequence) -> AnonymizationSolution | None:
        if not is_k_anonymous(target, k):
            return None
        cand = AnonymizationSolution.from_target(source, target)
        if cand.cost % 2:
            return None
        return cand if advanced_erdos_gallai_test(g, cand).realizable else None

    pairs = _large_pairs(sol.target, k, cap)
    if pairs:
        for w in range(1, budget + 1):
            for i in pairs:
                if sol.target[i] - w < k:
                    continue
                cand = accept(_shift(sol.target, i, w))
                if cand is not None:
                    yield cand, w
        return

    level = {sol.target.counts}
    for w in range(1, budget + 1):
        nxt: set[tuple[int, ...]] = set()
        for counts in sorted(level):
            for lifted in _unit_lifts(counts, cap):
                nxt.add(BlockSequence(lifted).counts)
                if len(nxt) >= state_cap:
                    break
            if len(nxt) >= state_cap:
                break
        for counts in sorted(nxt):
            cand = accept(BlockSequence(counts))
            if cand is not None:
                yield cand, w
        level = nxt
        if not level:
            return


def waste_to_realizable(
    g: Graph, sol: AnonymizationSolution, k: int, budget: int | None = None
) -> tuple[AnonymizationSolution, int] | None:
    if advanced_erdos_gallai_test(g, sol).realizable:
        return sol, 0
    return next(iter_waste_candidates(g, sol, k, budget), None)


__all__ = [
    "EGVerdict",
    "advanced_erdos_gallai_test",
    "degree_cap",
    "erdos_gallai_test",
    "iter_waste_candidates",
    "realize_sequence",
    "waste_to_realizable",
]
