"""Exact k-anonymization of block sequences.

The table ``T[i][t]`` is stored as an integer bitset over the cost axis:
bit ``c`` is set iff the first ``i+1`` blocks, minus their ``t`` highest
degrees, can be k-anonymized with exactly ``c`` increments. Shifting a
bitset by a cost and OR-ing replaces the inner loop over ``c``.
"""

from __future__ import annotations

from collections import Counter
from itertools import accumulate
from dataclasses import dataclass, field
from typing import Iterator

from kanon.graph import BlockSequence, is_k_anonymous, positional_pairs

Move = tuple[int, int, int]


@dataclass(frozen=True)
class CostTable:
    """``cost(i, t)``: increments needed to lift the ``t`` highest degrees of blocks ``0..i`` to ``i+1``.

    Rows run over ``0 <= i <= delta``. Entries are ``None`` when blocks
    ``0..i`` hold fewer than ``t`` degrees.
    """

    k: int
    rows: tuple[tuple[int | None, ...], ...]

    def __call__(self, i: int, t: int) -> int | None:
        return self.rows[i][t]


def compute_cost_table(b: BlockSequence, k: int) -> CostTable:
    if k < 1:
        raise ValueError("k must be at least 1")
    width = 2 * k
    rows = []
    top: list[int] = []  # highest degrees of the current prefix, descending
    for i in range(b.delta + 1):
        top = ([i] * min(b[i], width - 1) + top)[: width - 1]
        row: list[int | None] = [0]
        acc = 0
        for t in range(1, width):
            if t > len(top):
                row.append(None)
            else:
                acc += i + 1 - top[t - 1]
                row.append(acc)
        rows.append(tuple(row))
    return CostTable(k, tuple(rows))


@dataclass
class DPTable:
    source: BlockSequence
    k: int
    s_max: int
    cost: CostTable
    rows: list[list[int]] = field(repr=False)

    def feasible(self, i: int, t: int, c: int) -> bool:
        return 0 <= c <= self.s_max and bool(self.rows[i][t] >> c & 1)

    def final(self) -> int:
        """Bitset of all costs ``c <= s_max`` with ``T[delta][0][c]`` true."""
        if not self.rows:
            return 1
        return self.rows[-1][0]

    def feasible_costs(self) -> list[int]:
        bits = self.final()
        return [c for c in range(bits.bit_length()) if bits >> c & 1]


def run_dp(b: BlockSequence, k: int, s_max: int, cost: CostTable | None = None) -> DPTable:
    if k < 1:
        raise ValueError("k must be at least 1")
    if s_max < 0:
        raise ValueError("s_max must be non-negative")
    cost = cost or compute_cost_table(b, k)
    width = 2 * k
    mask = (1 << (s_max + 1)) - 1
    if b.n == 0:
        return DPTable(b, k, s_max, cost, [])

    b0 = b[0]
    rows = [[1 if t <= b0 and (b0 - t == 0 or b0 - t >= k) else 0 for t in range(width)]]
    for i in range(1, b.delta + 1):
        prev = rows[-1]
        costs = cost.rows[i - 1]
        # suffix[tp] = OR over tp' >= tp of prev[tp'] shifted by cost(i-1, tp')
        suffix = [0] * (width + 1)
        for tp in range(width - 1, -1, -1):
            c = costs[tp]
            shifted = (prev[tp] << c) & mask if c is not None else 0
            suffix[tp] = suffix[tp + 1] | shifted
        bi = b[i]
        row = []
        for t in range(width):
            if bi <= t:
                row.append(prev[t - bi])
            else:
                row.append(suffix[max(0, k - (bi - t))])
        rows.append(row)
    return DPTable(b, k, s_max, cost, rows)


def grow(table: DPTable, s_needed: int) -> DPTable:
    """Rebuild ``table`` with its cost axis doubled until it covers ``s_needed``."""
    if s_needed <= table.s_max:
        return table
    s_max = max(table.s_max, 1)
    while s_max < s_needed:
        s_max *= 2
    return run_dp(table.source, table.k, s_max, table.cost)


def min_cost(b: BlockSequence, k: int, budget: int, start: int = 16) -> int | None:
    """Smallest number of increments that k-anonymizes ``b``, or ``None`` above ``budget``."""
    if budget < 0:
        raise ValueError("budget must be non-negative")
    cost = compute_cost_table(b, k)
    s_max = min(start, budget)
    while True:
        bits = run_dp(b, k, s_max, cost).final()
        if bits:
            return (bits & -bits).bit_length() - 1
        if s_max >= budget:
            return None
        s_max = min(2 * s_max, budget)


def first_feasible(b: BlockSequence, k: int, budget: int) -> tuple[DPTable, int | None]:
    """Like :func:`min_cost` but also hands back the table it built."""
    cost = compute_cost_table(b, k)
    s_max = min(16, budget)
    while True:
        table = run_dp(b, k, s_max, cost)
        bits = table.final()
        if bits:
            return table, (bits & -bits).bit_length() - 1
        if s_max >= budget:
            return table, None
        s_max = min(2 * s_max, budget)


# ---------------------------------------------------------------------------
# solutions


def natural_moves(source: BlockSequence, target: BlockSequence) -> tuple[Move, ...]:
    """Moves ``(from, to, count)`` of the sorted (jump-free) pairing of source and target."""
    moves: Counter[tuple[int, int]] = Counter()
    for src, dst, count in positional_pairs(target, source):
        if dst != src:
            moves[src, dst] += count
    return tuple(sorted((j, i, c) for (j, i), c in moves.items()))


@dataclass(frozen=True)
class AnonymizationSolution:
    source: BlockSequence
    target: BlockSequence
    cost: int
    moves: tuple[Move, ...]

    @classmethod
    def from_target(cls, source: BlockSequence, target: BlockSequence) -> AnonymizationSolution:
        return cls(source, target, target.norm - source.norm, natural_moves(source, target))

    def to_json(self) -> dict:
        return {
            "target": list(self.target.counts),
            "cost": self.cost,
            "moves": [list(m) for m in self.moves],
        }


def enumerate_solutions(
    table: DPTable, b: BlockSequence, k: int, s: int, limit: int | None = None
) -> Iterator[AnonymizationSolution]:
    """Yield every DP solution of cost exactly ``s`` (at most ``limit`` of them).

    Depth-first backtracking through the table; each branch point tries the
    number ``t'`` of degrees lifted into the current block in ascending order,
    so the output order is fixed for a given table.
    """
    if table.source != b or table.k != k:
        raise ValueError("table was built for a different instance")
    if s > table.s_max:
        raise ValueError(f"cost {s} exceeds the table's cost axis ({table.s_max})")
    if b.n == 0:
        if s != 0:
            raise ValueError(f"cost {s} is infeasible")
        yield AnonymizationSolution(b, b, 0, ())
        return
    if not table.feasible(b.delta, 0, s):
        raise ValueError(f"cost {s} is infeasible for k={k}")

    width = 2 * k
    seen: set[BlockSequence] = set()
    emitted = 0
    # frame: (block i, degrees lifted above i, remaining cost, assigned target sizes)
    stack: list[tuple[int, int, int, tuple | None]] = [(b.delta, 0, s, None)]
    while stack:
        i, t, c, chain = stack.pop()
        if i == 0:
            counts = [0] * (b.delta + 1)
            counts[0] = b[0] - t
            while chain is not None:
                idx, size, chain = chain
                counts[idx] = size
            target = BlockSequence(tuple(counts))
            if target in seen:
                continue
            seen.add(target)
            yield AnonymizationSolution(b, target, s, natural_moves(b, target))
            emitted += 1
            if limit is not None and emitted >= limit:
                return
            continue
        bi = b[i]
        if bi <= t:
            stack.append((i - 1, t - bi, c, (i, 0, chain)))
            continue
        children = []
        for tp in range(max(0, k - (bi - t)), width):
            step = table.cost(i - 1, tp)
            if step is None:
                break
            if table.feasible(i - 1, tp, c - step):
                children.append((i - 1, tp, c - step, (i, bi - t + tp, chain)))
        stack.extend(reversed(children))


def solutions(b: BlockSequence, k: int, s: int, limit: int | None = None) -> Iterator[AnonymizationSolution]:
    return enumerate_solutions(run_dp(b, k, s), b, k, s, limit)


# ---------------------------------------------------------------------------
# unrestricted targets


@dataclass
class TargetTable:
    """Every k-anonymous ``B' >= B`` with degrees up to ``top``, indexed by cost.

    Scanning degrees upward, ``carry`` counts the degrees still being lifted
    past the current value; each one costs one increment per boundary it
    crosses. ``rows[v][t]`` is the bitset of costs with which the values
    ``v..top`` can be finished when ``t`` lifted degrees arrive at ``v``.
    Unlike :func:`run_dp` nothing restricts where targets land or how many
    degrees cross a boundary, so enumeration is exhaustive at every cost.
    """

    source: BlockSequence
    k: int
    s_max: int
    top: int
    rows: list[list[int]] = field(repr=False)

    def feasible(self, s: int) -> bool:
        return 0 <= s <= self.s_max and bool(self.rows[0][0] >> s & 1)


def build_target_table(b: BlockSequence, k: int, s_max: int, top: int | None = None) -> TargetTable:
    if k < 1:
        raise ValueError("k must be at least 1")
    if s_max < 0:
        raise ValueError("s_max must be non-negative")
    if top is None:
        top = b.delta + s_max
    top = max(top, b.delta)
    mask = (1 << (s_max + 1)) - 1
    width = s_max + 1
    after = [1] + [0] * s_max  # past the top value nothing may still be carried
    rows: list[list[int]] = [after]
    for v in range(top, -1, -1):
        # shifted[c] = costs after v when c degrees cross from v to v+1
        shifted = [(after[c] << c) & mask for c in range(width)]
        prefix = list(accumulate(shifted, lambda x, y: x | y))
        bv = b[v]
        row = []
        for t in range(width):
            pool = bv + t
            bits = shifted[pool] if pool < width else 0
            if pool >= k:
                bits |= prefix[min(pool - k, s_max)]
            row.append(bits)
        rows.append(row)
        after = row
    rows.reverse()
    return TargetTable(b, k, s_max, top, rows)


def enumerate_targets(table: TargetTable, s: int, limit: int | None = None) -> Iterator[AnonymizationSolution]:
    """Yield every target of cost exactly ``s`` in the table (at most ``limit``)."""
    if not table.feasible(s):
        return
    b, k, top = table.source, table.k, table.top
    emitted = 0
    # frame: (value v, carried into v, remaining cost, assigned sizes as a linked chain)
    stack: list[tuple[int, int, int, tuple | None]] = [(0, 0, s, None)]
    while stack:
        v, t, r, chain = stack.pop()
        if r == 0 and v <= top:
            # nothing may be lifted further: the rest of the source stays put
            chain = (v, b[v] + t, chain)
            for u in range(v + 1, min(top, b.delta) + 1):
                chain = (u, b[u], chain)
            v = top + 1
        if v > top:
            counts = [0] * (top + 1)
            while chain is not None:
                idx, size, chain = chain
                counts[idx] = size
            yield AnonymizationSolution.from_target(b, BlockSequence(tuple(counts)))
            emitted += 1
            if limit is not None and emitted >= limit:
                return
            continue
        pool = b[v] + t
        nxt = table.rows[v + 1]
        options = list(range(0, min(pool - k, r) + 1)) if pool >= k else []
        if pool <= r and pool not in options:
            options.append(pool)
        children = [
            (v + 1, c, r - c, (v, pool - c, chain))
            for c in options
            if nxt[c] >> (r - c) & 1
        ]
        stack.extend(reversed(children))


# ---------------------------------------------------------------------------
# data reduction


@dataclass(frozen=True)
class Substitution:
    start: int
    end: int
    before: tuple[int, ...]
    after: tuple[int, ...]

    @property
    def cost(self) -> int:
        return sum(d * (a - b) for d, (a, b) in enumerate(zip(self.after, self.before)))


def _find_pattern(counts: list[int], k: int, start: int) -> tuple[int, int] | None:
    # A run j..j+t of blocks >= k carrying at least k-1 spare degrees, preceded
    # (after some blocks below k, at least one of them non-empty) by an anchor >= k.
    n = len(counts)
    anchor = None
    for j in range(start, n):
        if counts[j] >= k:
            total = 0
            for t in range(n - j):
                if counts[j + t] < k:
                    break
                total += counts[j + t]
                if total >= (t + 1) * k + k - 1:
                    if anchor is not None and any(counts[anchor + 1 : j]):
                        return anchor, j
                    break
            anchor = j
    return None


def _light_anonymization(sub: list[int], k: int) -> tuple[int, ...] | None:
    """A minimum k-anonymization of ``sub`` raising each degree by at most one and keeping its first block >= k."""
    seq = BlockSequence(tuple(sub))
    table, best = first_feasible(seq, k, seq.n * len(sub))
    if best is None:
        return None
    for sol in enumerate_solutions(table, seq, k, best, limit=256):
        if all(j + 1 == i for j, i, _ in sol.moves) and sol.target[0] >= k:
            return tuple(sol.target.padded(len(sub)))
    return None


def apply_reduction_rule(b: BlockSequence, k: int) -> tuple[BlockSequence, list[Substitution]]:
    """Pre-solve anchored patterns whose minimum anonymization is local and lifts degrees by one.

    Scans left to right without overlap and repeats until nothing changes.
    Returns the reduced sequence and the substitutions applied, in order.
    """
    if k < 1:
        raise ValueError("k must be at least 1")
    counts = list(b.counts)
    log: list[Substitution] = []
    changed = True
    while changed:
        changed = False
        pos = 0
        while (hit := _find_pattern(counts, k, pos)) is not None:
            i, j = hit
            before = tuple(counts[i : j + 1])
            after = _light_anonymization(list(before), k)
            if after is not None and after != before:
                counts[i : j + 1] = after
                log.append(Substitution(i, j, before, after))
                changed = True
                pos = j
            else:
                pos = i + 1
    return BlockSequence(tuple(counts)), log


def reduction_cost(log: list[Substitution]) -> int:
    return sum(s.cost for s in log)


__all__ = [
    "AnonymizationSolution",
    "CostTable",
    "DPTable",
    "Substitution",
    "TargetTable",
    "apply_reduction_rule",
    "build_target_table",
    "compute_cost_table",
    "enumerate_solutions",
    "enumerate_targets",
    "first_feasible",
    "grow",
    "is_k_anonymous",
    "min_cost",
    "natural_moves",
    "reduction_cost",
    "run_dp",
    "solutions",
]
