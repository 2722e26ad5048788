"""Simple undirected graphs, degree/block sequences and graph file I/O."""

from __future__ import annotations

import logging
from collections import Counter
from dataclasses import dataclass
from itertools import accumulate
from pathlib import Path
from typing import Iterable, Iterator, Sequence

logger = logging.getLogger(__name__)

Edge = tuple[int, int]


class GraphFormatError(ValueError):
    """Raised when a graph file cannot be parsed."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


def normalize_edge(u: int, v: int) -> Edge:
    return (u, v) if u < v else (v, u)


class Graph:
    """Immutable simple undirected graph on vertices ``0..n-1``.

    Duplicate edges passed to the constructor collapse; self-loops and
    out-of-range endpoints raise ``ValueError``.
    """

    __slots__ = ("_adj", "_m")

    def __init__(self, n: int, edges: Iterable[Edge] = ()):
        if n < 0:
            raise ValueError("vertex count must be non-negative")
        adj: list[set[int]] = [set() for _ in range(n)]
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            adj[u].add(v)
            adj[v].add(u)
        self._adj = tuple(frozenset(s) for s in adj)
        self._m = sum(len(s) for s in adj) // 2

    @property
    def n(self) -> int:
        return len(self._adj)

    @property
    def m(self) -> int:
        return self._m

    @property
    def delta(self) -> int:
        return max((len(s) for s in self._adj), default=0)

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    def degrees(self) -> list[int]:
        return [len(s) for s in self._adj]

    def adjacency(self, v: int) -> frozenset[int]:
        return self._adj[v]

    def neighbors(self, v: int) -> list[int]:
        return sorted(self._adj[v])

    def has_edge(self, u: int, v: int) -> bool:
        return v in self._adj[u]

    def edges(self) -> Iterator[Edge]:
        for u, nbrs in enumerate(self._adj):
            for v in sorted(nbrs):
                if u < v:
                    yield (u, v)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Graph):
            return NotImplemented
        return self._adj == other._adj

    def __hash__(self) -> int:
        return hash(self._adj)

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, delta={self.delta})"


@dataclass(frozen=True)
class BlockSequence:
    """Counts ``b_0..b_delta`` of vertices per degree.

    Trailing zero counts are trimmed on construction, so the last entry is
    positive unless the sequence is empty.
    """

    counts: tuple[int, ...]

    def __post_init__(self):
        counts = tuple(int(c) for c in self.counts)
        if any(c < 0 for c in counts):
            raise ValueError("block sizes must be non-negative")
        end = len(counts)
        while end and counts[end - 1] == 0:
            end -= 1
        object.__setattr__(self, "counts", counts[:end])

    @classmethod
    def from_degrees(cls, degrees: Iterable[int]) -> BlockSequence:
        hist = Counter(degrees)
        if not hist:
            return cls(())
        if min(hist) < 0:
            raise ValueError("degrees must be non-negative")
        return cls(tuple(hist.get(d, 0) for d in range(max(hist) + 1)))

    def degrees(self) -> list[int]:
        """Ascending degree sequence."""
        out: list[int] = []
        for d, c in enumerate(self.counts):
            out.extend([d] * c)
        return out

    @property
    def n(self) -> int:
        return sum(self.counts)

    @property
    def delta(self) -> int:
        return max(len(self.counts) - 1, 0)

    @property
    def norm(self) -> int:
        return sum(d * c for d, c in enumerate(self.counts))

    def __getitem__(self, d: int) -> int:
        # Out-of-range degrees are empty blocks.
        return self.counts[d] if 0 <= d < len(self.counts) else 0

    def __len__(self) -> int:
        return len(self.counts)

    def __iter__(self) -> Iterator[int]:
        return iter(self.counts)

    def padded(self, length: int) -> list[int]:
        return list(self.counts) + [0] * max(0, length - len(self.counts))

    def __str__(self) -> str:
        return "{" + ",".join(map(str, self.counts)) + "}"


def degree_sequence(g: Graph) -> list[int]:
    return sorted(g.degrees())


def block_sequence(g: Graph) -> BlockSequence:
    return BlockSequence.from_degrees(g.degrees())


def is_k_anonymous(b: BlockSequence | Sequence[int], k: int) -> bool:
    if k < 1:
        raise ValueError("k must be at least 1")
    return all(c == 0 or c >= k for c in b)


def _check_same_size(b2: BlockSequence, b1: BlockSequence) -> None:
    if b2.n != b1.n:
        raise ValueError(f"block sequences cover {b2.n} and {b1.n} vertices")


def dominates(b2: BlockSequence, b1: BlockSequence) -> bool:
    """True iff the ascending degree sequence of ``b2`` is positionwise >= that of ``b1``.

    Equivalent to: for every degree d, b2 has no more vertices of degree <= d
    than b1 does.
    """
    _check_same_size(b2, b1)
    size = max(len(b1), len(b2))
    return all(x <= y for x, y in zip(accumulate(b2.padded(size)), accumulate(b1.padded(size))))


def positional_pairs(b2: BlockSequence, b1: BlockSequence) -> Iterator[tuple[int, int, int]]:
    """Run-length merge of two ascending degree sequences.

    Yields ``(source_degree, target_degree, count)`` runs pairing the i-th
    smallest degree of ``b1`` with the i-th smallest degree of ``b2``.
    """
    _check_same_size(b2, b1)
    src = [(d, c) for d, c in enumerate(b1) if c]
    dst = [(d, c) for d, c in enumerate(b2) if c]
    i = j = 0
    left_src = src[0][1] if src else 0
    left_dst = dst[0][1] if dst else 0
    while i < len(src) and j < len(dst):
        take = min(left_src, left_dst)
        yield src[i][0], dst[j][0], take
        left_src -= take
        left_dst -= take
        if not left_src:
            i += 1
            left_src = src[i][1] if i < len(src) else 0
        if not left_dst:
            j += 1
            left_dst = dst[j][1] if j < len(dst) else 0


def difference(b2: BlockSequence, b1: BlockSequence) -> BlockSequence:
    """Block sequence of positionwise differences ``b2 (-) b1``; requires ``b2`` to dominate ``b1``."""
    if not dominates(b2, b1):
        raise ValueError(f"{b2} does not dominate {b1}")
    hist: Counter[int] = Counter()
    for src, dst, count in positional_pairs(b2, b1):
        hist[dst - src] += count
    if not hist:
        return BlockSequence(())
    return BlockSequence(tuple(hist.get(d, 0) for d in range(max(hist) + 1)))


def add_edges(g: Graph, edges: Iterable[Edge]) -> Graph:
    """Return ``g`` plus ``edges``; every edge must be new, loop-free and listed once."""
    new: set[Edge] = set()
    for u, v in edges:
        if u == v:
            raise ValueError(f"self-loop at vertex {u}")
        e = normalize_edge(u, v)
        if g.has_edge(u, v):
            raise ValueError(f"edge {e} already present in the graph")
        if e in new:
            raise ValueError(f"edge {e} listed twice")
        new.add(e)
    return Graph(g.n, [*g.edges(), *new])


# ---------------------------------------------------------------------------
# file formats

FORMATS = ("metis", "edgelist")


def _data_lines(text: str, comment: str) -> Iterator[tuple[int, str]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if line.startswith(comment):
            continue
        yield lineno, line


def parse_metis(text: str) -> Graph:
    """Parse an unweighted METIS adjacency file (1-based neighbor ids)."""
    lines = _data_lines(text, "%")
    header = None
    for lineno, line in lines:
        if line:
            header = (lineno, line.split())
            break
    if header is None:
        raise GraphFormatError("missing METIS header")
    hline, fields = header
    try:
        n, m = int(fields[0]), int(fields[1])
    except (IndexError, ValueError):
        raise GraphFormatError("header must start with 'n m'", hline) from None
    if len(fields) > 2 and fields[2].strip("0"):
        raise GraphFormatError(f"weighted METIS format {fields[2]!r} is not supported", hline)

    adj: list[list[int]] = []
    for lineno, line in lines:
        if len(adj) == n:
            if line:
                raise GraphFormatError(f"more than {n} adjacency lines", lineno)
            continue
        try:
            nbrs = [int(tok) - 1 for tok in line.split()]
        except ValueError:
            raise GraphFormatError("non-integer neighbor id", lineno) from None
        u = len(adj)
        for v in nbrs:
            if not 0 <= v < n:
                raise GraphFormatError(f"neighbor {v + 1} out of range 1..{n}", lineno)
            if v == u:
                raise GraphFormatError(f"self-loop at vertex {u + 1}", lineno)
        adj.append(nbrs)
    if len(adj) < n:
        raise GraphFormatError(f"header declares {n} vertices but found {len(adj)} adjacency lines")

    edges = set()
    for u, nbrs in enumerate(adj):
        if len(set(nbrs)) != len(nbrs):
            raise GraphFormatError(f"duplicate neighbor in adjacency of vertex {u + 1}")
        for v in nbrs:
            edges.add(normalize_edge(u, v))
    if sum(len(a) for a in adj) != 2 * len(edges):
        raise GraphFormatError("adjacency lists are not symmetric")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges but found {len(edges)}")
    return Graph(n, edges)


def parse_edgelist(text: str, index_base: int = 0, n: int | None = None) -> Graph:
    """Parse whitespace-separated ``u v`` lines.

    ``#`` lines are comments, except ``# vertices: N`` which fixes the vertex
    count (written by :func:`format_edgelist`). Self-loops and repeated edges
    are dropped and counted.
    """
    edges: set[Edge] = set()
    loops = dupes = 0
    declared = None
    top = -1
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line:
            continue
        if line.startswith("#"):
            key, _, value = line[1:].partition(":")
            if key.strip() == "vertices":
                try:
                    declared = int(value)
                except ValueError:
                    raise GraphFormatError("bad vertex count comment", lineno) from None
            continue
        fields = line.split()
        if len(fields) < 2:
            raise GraphFormatError("expected 'u v'", lineno)
        try:
            u, v = int(fields[0]) - index_base, int(fields[1]) - index_base
        except ValueError:
            raise GraphFormatError("non-integer vertex id", lineno) from None
        if u < 0 or v < 0:
            raise GraphFormatError(f"vertex id below index base {index_base}", lineno)
        if u == v:
            loops += 1
            continue
        e = normalize_edge(u, v)
        if e in edges:
            dupes += 1
            continue
        edges.add(e)
        top = max(top, e[1])
    if loops or dupes:
        logger.warning("dropped %d self-loops and %d duplicate edges", loops, dupes)
    size = max(top + 1, declared or 0, n or 0)
    return Graph(size, edges)


def format_metis(g: Graph) -> str:
    lines = [f"{g.n} {g.m}"]
    lines.extend(" ".join(str(v + 1) for v in g.neighbors(u)) for u in range(g.n))
    return "\n".join(lines) + "\n"


def format_edgelist(g: Graph, index_base: int = 0) -> str:
    lines = [f"# vertices: {g.n}"]
    lines.extend(f"{u + index_base} {v + index_base}" for u, v in g.edges())
    return "\n".join(lines) + "\n"


def load_graph(path: str | Path, fmt: str = "metis", index_base: int = 0, n: int | None = None) -> Graph:
    text = Path(path).read_text()
    if fmt == "metis":
        return parse_metis(text)
    if fmt == "edgelist":
        return parse_edgelist(text, index_base=index_base, n=n)
    raise ValueError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")


def write_graph(g: Graph, path: str | Path, fmt: str = "metis", index_base: int = 0) -> None:
    if fmt == "metis":
        text = format_metis(g)
    elif fmt == "edgelist":
        text = format_edgelist(g, index_base)
    else:
        raise ValueError(f"unknown graph format {fmt!r}; expected one of {FORMATS}")
    Path(path).write_text(text)


def read_edges(path: str | Path, index_base: int = 0) -> list[Edge]:
    """Read an edge insertion list (same syntax as edge-list graphs, order kept)."""
    out = []
    for lineno, raw in enumerate(Path(path).read_text().splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        try:
            out.append((int(fields[0]) - index_base, int(fields[1]) - index_base))
        except (IndexError, ValueError):
            raise GraphFormatError("expected 'u v'", lineno) from None
    return out


__all__ = [
    "BlockSequence",
    "Edge",
    "Graph",
    "GraphFormatError",
    "add_edges",
    "block_sequence",
    "degree_sequence",
    "difference",
    "dominates",
    "format_edgelist",
    "format_metis",
    "is_k_anonymous",
    "load_graph",
    "normalize_edge",
    "parse_edgelist",
    "parse_metis",
    "positional_pairs",
    "read_edges",
    "write_graph",
]
