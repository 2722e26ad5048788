"""Turning a target block sequence into actual edges.

A solution says how many degrees move from block ``j`` to block ``i``. To
insert edges we must decide which vertices move (a degree-vertex mapping),
which yields a per-vertex demand, and then find a set of non-edges whose
degrees equal that demand (local exchange).
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field
from itertools import combinations, product
from math import comb
from typing import Iterable, Iterator, Sequence

from kanon.dp import AnonymizationSolution, Move
from kanon.graph import BlockSequence, Edge, Graph, add_edges, block_sequence, is_k_anonymous, normalize_edge


@dataclass(frozen=True)
class JumpConfiguration:
    """Blocks to skip over, with how many degrees skip each one, applied in ascending block order."""

    jumps: tuple[tuple[int, int], ...] = ()

    @property
    def jump_blocks(self) -> tuple[int, ...]:
        return tuple(i for i, _ in self.jumps)

    def __bool__(self) -> bool:
        return bool(self.jumps)

    def apply(self, moves: Iterable[Move]) -> tuple[Move, ...] | None:
        """Rewrite ``moves`` so degrees pass over the jump blocks, or ``None`` if that is impossible.

        Skipping block ``i`` ``x`` times replaces ``x`` moves ``j -> i`` and
        ``x`` moves ``i -> l`` by ``x`` moves ``j -> l``; the highest ``j`` and
        the lowest ``l`` are used first.
        """
        pool: Counter[tuple[int, int]] = Counter()
        for j, i, c in moves:
            pool[j, i] += c
        for block, count in self.jumps:
            incoming = sorted(((j, c) for (j, i), c in pool.items() if i == block and c), reverse=True)
            outgoing = sorted((i, c) for (j, i), c in pool.items() if j == block and c)
            if sum(c for _, c in incoming) < count or sum(c for _, c in outgoing) < count:
                return None
            left = count
            while left:
                j, cin = incoming[0]
                l, cout = outgoing[0]
                x = min(cin, cout, left)
                pool[j, block] -= x
                pool[block, l] -= x
                pool[j, l] += x
                left -= x
                incoming[0] = (j, cin - x)
                outgoing[0] = (l, cout - x)
                if not incoming[0][1]:
                    incoming.pop(0)
                if not outgoing[0][1]:
                    outgoing.pop(0)
        return tuple(sorted((j, i, c) for (j, i), c in pool.items() if c))


def jump_candidates(moves: Sequence[Move], cap: int) -> list[tuple[int, int]]:
    """Blocks that both receive and send degrees, with the largest useful jump count."""
    into: Counter[int] = Counter()
    out: Counter[int] = Counter()
    for j, i, c in moves:
        out[j] += c
        into[i] += c
    return [(i, min(cap, into[i], out[i])) for i in sorted(into) if out[i]]


def enumerate_jump_configs(
    b: BlockSequence, sol: AnonymizationSolution, max_jump_blocks: int = 10, cap: int = 5
) -> Iterator[JumpConfiguration]:
    """The jump-free configuration first, then all choices of 1, 2, ... jump blocks.

    Only configurations that can actually be applied to ``sol.moves`` are
    yielded, and each distinct resulting set of moves appears once.
    """
    if b != sol.source:
        raise ValueError("solution was built for a different block sequence")
    yield JumpConfiguration()
    seen = {tuple(sol.moves)}
    candidates = jump_candidates(sol.moves, cap)
    for alpha in range(1, min(max_jump_blocks, len(candidates)) + 1):
        for chosen in combinations(candidates, alpha):
            for counts in product(*(range(1, c + 1) for _, c in chosen)):
                cfg = JumpConfiguration(tuple((i, x) for (i, _), x in zip(chosen, counts)))
                moves = cfg.apply(sol.moves)
                if moves is None or moves in seen:
                    continue
                seen.add(moves)
                yield cfg


# ---------------------------------------------------------------------------
# mappings and demands


@dataclass(frozen=True)
class DegreeVertexMapping:
    """Target degree per vertex."""

    assignment: tuple[int, ...]

    def demand(self, g: Graph) -> list[int]:
        return [t - d for t, d in zip(self.assignment, g.degrees())]


def demand(g: Graph, mapping: DegreeVertexMapping) -> list[int]:
    return mapping.demand(g)


def _blocks(g: Graph) -> dict[int, list[int]]:
    blocks: dict[int, list[int]] = {}
    for v, d in enumerate(g.degrees()):
        blocks.setdefault(d, []).append(v)
    return blocks


def _moves_by_source(moves: Iterable[Move]) -> dict[int, list[tuple[int, int]]]:
    out: dict[int, list[tuple[int, int]]] = {}
    for j, i, c in sorted(moves):
        out.setdefault(j, []).append((i, c))
    return out


def count_mappings(g: Graph, moves: Iterable[Move]) -> int:
    """Number of distinct degree-vertex mappings realizing ``moves``."""
    blocks = _blocks(g)
    total = 1
    for j, dests in _moves_by_source(moves).items():
        free = len(blocks.get(j, ()))
        for _, c in dests:
            total *= comb(free, c)
            free -= c
    return total


def mapping_for_moves(g: Graph, moves: Iterable[Move], rng: random.Random) -> DegreeVertexMapping:
    assignment = list(g.degrees())
    blocks = _blocks(g)
    for j, dests in _moves_by_source(moves).items():
        members = blocks.get(j, [])
        need = sum(c for _, c in dests)
        if need > len(members):
            raise ValueError(f"block {j} has {len(members)} vertices, {need} requested")
        picked = rng.sample(members, need)
        pos = 0
        for i, c in dests:
            for v in picked[pos : pos + c]:
                assignment[v] = i
            pos += c
    return DegreeVertexMapping(tuple(assignment))


def sample_mapping(
    g: Graph, sol: AnonymizationSolution, jumps: JumpConfiguration, rng: random.Random
) -> DegreeVertexMapping:
    """Pick the raised vertices of every source block uniformly without replacement."""
    moves = jumps.apply(sol.moves)
    if moves is None:
        raise ValueError("jump configuration does not fit the solution")
    return mapping_for_moves(g, moves, rng)


# ---------------------------------------------------------------------------
# local exchange


class _ExchangeState:
    """Remaining demands and inserted edges of one local-exchange run."""

    def __init__(self, g: Graph, rem: dict[int, int], rng: random.Random):
        self.g = g
        self.rem = rem
        self.rng = rng
        self.inserted: dict[Edge, None] = {}  # insertion order matters for exchanges
        self.active = sorted(v for v, d in rem.items() if d > 0)
        self.slot = {v: i for i, v in enumerate(self.active)}

    def free(self, u: int, v: int) -> bool:
        return u != v and not self.g.has_edge(u, v) and normalize_edge(u, v) not in self.inserted

    def _served(self, v: int) -> None:
        self.rem[v] -= 1
        if self.rem[v]:
            return
        i = self.slot.pop(v)
        last = self.active.pop()
        if last != v:
            self.active[i] = last
            self.slot[last] = i

    def insert(self, u: int, v: int) -> None:
        self.inserted[normalize_edge(u, v)] = None
        self._served(u)
        self._served(v)

    def random_insert(self, attempts: int = 32) -> bool:
        for _ in range(attempts):
            u, v = self.rng.sample(self.active, 2)
            if self.free(u, v):
                self.insert(u, v)
                return True
        return False

    def scan_insert(self) -> bool:
        items = self.active
        n = len(items)
        start = self.rng.randrange(n)
        for a in range(n):
            u = items[(start + a) % n]
            for b in range(a + 1, n):
                v = items[(start + b) % n]
                if self.free(u, v):
                    self.insert(u, v)
                    return True
        return False

    def exchange_pair(self) -> bool:
        """Trade an inserted ``{u, w}`` for ``{v1, u}, {v2, w}`` (or crossed) for two stuck vertices."""
        for v1, v2 in combinations(sorted(self.active), 2):
            for u, w in self.inserted:
                if u in (v1, v2) or w in (v1, v2):
                    continue
                for a, c in ((u, w), (w, u)):
                    if self.free(v1, a) and self.free(v2, c):
                        del self.inserted[u, w]
                        self.inserted[normalize_edge(v1, a)] = None
                        self.inserted[normalize_edge(v2, c)] = None
                        self._served(v1)
                        self._served(v2)
                        return True
        return False

    def exchange_single(self, v: int) -> bool:
        """Trade an inserted ``{u, w}`` for ``{v, u}, {v, w}`` when only ``v`` has demand left."""
        for u, w in self.inserted:
            if v in (u, w):
                continue
            if self.free(v, u) and self.free(v, w):
                del self.inserted[u, w]
                self.inserted[normalize_edge(v, u)] = None
                self.inserted[normalize_edge(v, w)] = None
                self._served(v)
                self._served(v)
                return True
        return False


def local_exchange(
    g: Graph, demand: Sequence[int] | dict[int, int], rng: random.Random, exchanges: bool = True
) -> list[Edge] | None:
    """Find non-edges of ``g`` giving every vertex exactly its demanded number of new edges.

    Random insertable pairs among vertices with remaining demand are added
    first. When no insertable pair is left, an already inserted edge is
    traded for two edges serving the stuck vertices. Returns the edges in
    insertion order, or ``None`` when no move applies.
    """
    items = demand.items() if isinstance(demand, dict) else enumerate(demand)
    rem = {v: d for v, d in items if d}
    if any(d < 0 for d in rem.values()):
        raise ValueError("demand must be non-negative")
    if sum(rem.values()) % 2:
        return None
    state = _ExchangeState(g, rem, rng)
    while state.active:
        if len(state.active) >= 2:
            if state.random_insert() or state.scan_insert():
                continue
            if exchanges and state.exchange_pair():
                continue
            return None
        v = state.active[0]
        if rem[v] >= 2 and exchanges and state.exchange_single(v):
            continue
        return None
    return list(state.inserted)


# ---------------------------------------------------------------------------
# driver


@dataclass(frozen=True)
class TrialSchedule:
    mappings: int = 100
    trials: int = 25
    max_jump_blocks: int = 10
    jump_cap: int = 5

    def __post_init__(self):
        for name in ("mappings", "trials", "jump_cap"):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_jump_blocks < 0:
            raise ValueError("max_jump_blocks must be non-negative")


@dataclass(frozen=True)
class Realization:
    edges: tuple[Edge, ...]
    jumps: JumpConfiguration
    attempts: int = field(compare=False)


class Deadline:
    """Cooperative time limit; ``None`` seconds means no limit."""

    def __init__(self, seconds: float | None = None):
        self.end = None if seconds is None else time.monotonic() + seconds

    def expired(self) -> bool:
        return self.end is not None and time.monotonic() >= self.end


def realize(
    g: Graph,
    sol: AnonymizationSolution,
    cfg: TrialSchedule | None = None,
    rng: random.Random | None = None,
    deadline: Deadline | None = None,
) -> Realization | None:
    """Try jump configurations in order; for each, several mappings times several exchange runs."""
    cfg = cfg or TrialSchedule()
    rng = rng or random.Random(0)
    deadline = deadline or Deadline()
    attempts = 0
    for jumps in enumerate_jump_configs(sol.source, sol, cfg.max_jump_blocks, cfg.jump_cap):
        moves = jumps.apply(sol.moves)
        possible = count_mappings(g, moves)
        seen: set[DegreeVertexMapping] = set()
        for _ in range(cfg.mappings):
            if len(seen) >= possible or deadline.expired():
                break
            mapping = mapping_for_moves(g, moves, rng)
            if mapping in seen:
                continue
            seen.add(mapping)
            need = mapping.demand(g)
            for _ in range(cfg.trials):
                if deadline.expired():
                    return None
                attempts += 1
                edges = local_exchange(g, need, rng)
                if edges is not None:
                    return Realization(tuple(sorted(edges)), jumps, attempts)
        if deadline.expired():
            return None
    return None


# ---------------------------------------------------------------------------
# verification


@dataclass(frozen=True)
class VerificationReport:
    valid: bool
    k_anonymous: bool
    edge_count: int
    block_sequence: BlockSequence
    violations: tuple[str, ...]

    @property
    def ok(self) -> bool:
        return self.valid and self.k_anonymous

    def to_json(self) -> dict:
        return {
            "ok": self.ok,
            "valid": self.valid,
            "k_anonymous": self.k_anonymous,
            "edges": self.edge_count,
            "block_sequence": list(self.block_sequence.counts),
            "violations": list(self.violations),
        }


def verify_insertion(g: Graph, s: Iterable[Edge], k: int, index_base: int = 0) -> VerificationReport:
    """Check that ``s`` is a set of new simple edges and that ``g + s`` is k-anonymous.

    ``index_base`` only affects how offending pairs are named in the report.
    """
    violations = []
    clean: list[Edge] = []
    seen: set[Edge] = set()
    for u, v in s:
        name = f"({u + index_base}, {v + index_base})"
        if not (0 <= u < g.n and 0 <= v < g.n):
            violations.append(f"{name}: vertex out of range")
        elif u == v:
            violations.append(f"{name}: self-loop")
        elif g.has_edge(u, v):
            violations.append(f"{name}: already in the graph")
        elif normalize_edge(u, v) in seen:
            violations.append(f"{name}: listed twice")
        else:
            seen.add(normalize_edge(u, v))
            clean.append(normalize_edge(u, v))
    valid = not violations
    result = block_sequence(add_edges(g, clean))
    anonymous = is_k_anonymous(result, k)
    if not anonymous:
        short = [d for d, c in enumerate(result.counts) if 0 < c < k]
        violations.append(f"degrees shared by fewer than {k} vertices: {short}")
    return VerificationReport(valid, anonymous, len(clean), result, tuple(violations))


__all__ = [
    "Deadline",
    "DegreeVertexMapping",
    "JumpConfiguration",
    "Realization",
    "TrialSchedule",
    "VerificationReport",
    "count_mappings",
    "demand",
    "enumerate_jump_configs",
    "jump_candidates",
    "local_exchange",
    "mapping_for_moves",
    "realize",
    "sample_mapping",
    "verify_insertion",
]
