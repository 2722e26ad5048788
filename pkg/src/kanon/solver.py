"""Lower and upper bounds on the number of edges needed for k-degree anonymity.

Costs are counted in degree increments; a set of ``e`` new edges costs
``2e``. Candidate target block sequences are visited by increasing cost.
A cost level is ruled out when every target at that level fails the
realizability test, which raises the lower bound. Targets that pass are
handed to the randomized realizer; the first success gives an upper bound.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import random
import time
from dataclasses import asdict, dataclass, field, fields
from typing import Callable, Iterator

from kanon.dp import (
    AnonymizationSolution,
    TargetTable,
    apply_reduction_rule,
    build_target_table,
    enumerate_solutions,
    enumerate_targets,
    first_feasible,
    grow,
    reduction_cost,
)
from kanon.graph import BlockSequence, Edge, Graph, block_sequence, difference, is_k_anonymous
from kanon.realizability import (
    EGVerdict,
    advanced_erdos_gallai_test,
    degree_cap,
    erdos_gallai_test,
    iter_waste_candidates,
)
from kanon.realizer import Deadline, JumpConfiguration, Realization, TrialSchedule, realize

log = logging.getLogger(__name__)

DEFAULT_K_LIST = (2, 3, 4, 5, 7, 10, 15, 20, 30, 50, 100, 150, 200)


@dataclass(frozen=True)
class SolverConfig:
    k_list: tuple[int, ...] = DEFAULT_K_LIST
    time_limit_s: float | None = 3600.0
    seed: int = 0
    mappings: int = 100
    trials: int = 25
    max_jump_blocks: int = 10
    jump_cap: int = 5
    reduction: bool = True
    advanced_eg: bool = True
    waste_budget: int | None = None  # None: 4 * max degree
    waste_candidates: int = 8  # wasted targets tried per solution
    waste_mappings: int = 10  # lighter trial schedule for wasted targets
    waste_trials: int = 5
    enumeration_limit: int = 2000  # solutions examined per cost level

    def __post_init__(self):
        for name in (
            "mappings", "trials", "jump_cap", "enumeration_limit", "waste_candidates", "waste_mappings", "waste_trials"
        ):
            if getattr(self, name) < 1:
                raise ValueError(f"{name} must be at least 1")
        if self.max_jump_blocks < 0:
            raise ValueError("max_jump_blocks must be non-negative")
        if any(k < 2 for k in self.k_list):
            raise ValueError("every k must be at least 2")
        if self.time_limit_s is not None and self.time_limit_s <= 0:
            raise ValueError("time limit must be positive")

    @property
    def schedule(self) -> TrialSchedule:
        return TrialSchedule(self.mappings, self.trials, self.max_jump_blocks, self.jump_cap)


@dataclass
class BoundsReport:
    graph: str
    n: int
    m: int
    delta: int
    k: int
    lower_bound_edges: int | None
    upper_bound_edges: int | None
    optimal: bool
    phase1_cost: int | None
    solutions_tested: int
    phase1_time_ms: float
    phase2_time_ms: float
    seed: int
    timed_out: bool
    lower_bound_certified: bool
    waste: int | None = None
    jump_blocks: tuple[int, ...] | None = None
    insertion: tuple[Edge, ...] | None = field(default=None, repr=False)

    TIMING = ("phase1_time_ms", "phase2_time_ms")

    def to_json(self, timings: bool = True) -> dict:
        out = asdict(self)
        out.pop("insertion")
        if out["jump_blocks"] is not None:
            out["jump_blocks"] = list(out["jump_blocks"])
        if not timings:
            for key in self.TIMING:
                out.pop(key)
        return out


CSV_COLUMNS = tuple(f.name for f in fields(BoundsReport) if f.name != "insertion")


def reports_to_json(reports: list[BoundsReport], timings: bool = True) -> str:
    return json.dumps([r.to_json(timings) for r in reports], indent=2, sort_keys=True)


def reports_to_csv(reports: list[BoundsReport]) -> str:
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=CSV_COLUMNS, lineterminator="\n")
    writer.writeheader()
    for r in reports:
        row = r.to_json()
        if row["jump_blocks"] is not None:
            row["jump_blocks"] = " ".join(map(str, row["jump_blocks"]))
        writer.writerow(row)
    return buf.getvalue()


# ---------------------------------------------------------------------------
# cost levels


class _Levels:
    """All k-anonymous targets of the input, by cost, with degrees capped; the table grows on demand."""

    def __init__(self, b: BlockSequence, k: int, cap: int):
        self.b = b
        self.k = k
        self.cap = max(cap, b.delta)
        self.max_cost = self.b.n * self.cap - self.b.norm
        self.table: TargetTable | None = None

    def _ensure(self, s: int) -> TargetTable:
        if self.table is None or s > self.table.s_max:
            s_max = max(16, s, 2 * self.table.s_max if self.table else 0)
            self.table = build_target_table(self.b, self.k, s_max, min(self.cap, self.b.delta + s_max))
        return self.table

    def feasible(self, s: int) -> bool:
        return self._ensure(s).feasible(s)

    def solutions(self, s: int, limit: int) -> Iterator[AnonymizationSolution]:
        return enumerate_targets(self._ensure(s), s, limit)


class _WindowLevels:
    """Canonical targets from the windowed DP, optionally on the reduced sequence, stated for the input."""

    def __init__(self, b: BlockSequence, k: int, reduction: bool):
        self.b = b
        self.k = k
        self.rb, self.offset = b, 0
        if reduction:
            self.rb, subs = apply_reduction_rule(b, k)
            self.offset = reduction_cost(subs)
        self.budget = sum(self.rb.delta - d for d in self.rb.degrees())
        self.table, cost = first_feasible(self.rb, k, self.budget)
        self.min_cost = cost + self.offset

    def solutions(self, s: int, limit: int) -> list[AnonymizationSolution]:
        r = s - self.offset
        if not 0 <= r <= self.budget:
            return []
        self.table = grow(self.table, r)
        if not self.table.feasible(self.rb.delta, 0, r):
            return []
        return [
            AnonymizationSolution.from_target(self.b, sol.target)
            for sol in enumerate_solutions(self.table, self.rb, self.k, r, limit)
        ]


def _plain_test(g: Graph, sol: AnonymizationSolution) -> EGVerdict:
    return erdos_gallai_test(difference(sol.target, sol.source).degrees())


class _Run:
    def __init__(self, g: Graph, k: int, cfg: SolverConfig, graph_id: str):
        self.g = g
        self.k = k
        self.cfg = cfg
        self.graph_id = graph_id
        self.b = block_sequence(g)
        self.deadline = Deadline(cfg.time_limit_s)
        self.rng = random.Random(f"{cfg.seed}/{k}")
        self.test: Callable[[Graph, AnonymizationSolution], EGVerdict] = (
            advanced_erdos_gallai_test if cfg.advanced_eg else _plain_test
        )
        self.tested = 0
        self.p1 = 0.0
        self.p2 = 0.0
        self.lower: int | None = None
        self.certified = True
        self.upper: int | None = None
        self.best: Realization | None = None
        self.best_waste: int | None = None
        self.phase1_cost: int | None = None
        self.timed_out = False

    # -- helpers -------------------------------------------------------

    def _expired(self) -> bool:
        if self.deadline.expired():
            self.timed_out = True
        return self.timed_out

    def _realize(self, sol: AnonymizationSolution) -> Realization | None:
        t0 = time.perf_counter()
        try:
            return realize(self.g, sol, self.cfg.schedule, self.rng, self.deadline)
        finally:
            self.p2 += time.perf_counter() - t0

    def _record(self, found: Realization, cost: int, waste: int) -> None:
        if self.upper is None or cost < self.upper:
            self.upper = cost
            self.best = found
            self.best_waste = waste

    def _collect(
        self, sols: Iterator[AnonymizationSolution], limit: int, skip: set[BlockSequence] = frozenset()
    ) -> tuple[list[AnonymizationSolution], list[AnonymizationSolution], bool]:
        """Split solutions into passing and failing the test; report truncation."""
        t0 = time.perf_counter()
        passing, failing = [], []
        truncated = False
        for count, sol in enumerate(sols):
            if count >= limit or self._expired():
                truncated = True
                break
            if sol.target in skip:
                continue
            self.tested += 1
            verdict = self.test(self.g, sol)
            if verdict.realizable and not _plain_test(self.g, sol).realizable:
                raise AssertionError("advanced test accepted a sequence the plain test rejects")
            (passing if verdict.realizable else failing).append(sol)
        self.p1 += time.perf_counter() - t0
        return passing, failing, truncated

    def _try(self, sols: list[AnonymizationSolution]) -> bool:
        for sol in sols:
            if self._expired():
                return False
            found = self._realize(sol)
            if found is not None:
                self._record(found, sol.cost, 0)
                return True
        return False

    # -- main loop -----------------------------------------------------

    def run(self) -> BoundsReport:
        if is_k_anonymous(self.b, self.k):
            self.lower = self.upper = self.phase1_cost = 0
            self.best = Realization((), JumpConfiguration(), 0)
            self.best_waste = 0
            return self.report()
        if self.b.n < self.k:
            # no graph on fewer than k vertices is k-anonymous
            self.certified = False
            return self.report()

        t0 = time.perf_counter()
        window = _WindowLevels(self.b, self.k, self.cfg.reduction)
        self.phase1_cost = window.min_cost
        levels = _Levels(self.b, self.k, degree_cap(self.g))
        self.p1 += time.perf_counter() - t0
        limit = self.cfg.enumeration_limit

        wasted = False
        s = self.phase1_cost
        while not self._expired() and s <= levels.max_cost and (self.upper is None or s < self.upper):
            if s % 2:  # an odd number of increments is never a set of edges
                s += 1
                continue
            t0 = time.perf_counter()
            proposed = window.solutions(s, limit)
            self.p1 += time.perf_counter() - t0
            passing, failing, _ = self._collect(iter(proposed), limit)
            if self.lower is None and passing:
                self.lower = s
            if self._try(passing):
                break
            if (self.lower is None or self.certified) and levels.feasible(s):
                # every target of this cost, not only the windowed DP's canonical ones
                seen = {sol.target for sol in proposed}
                more, more_failing, truncated = self._collect(levels.solutions(s, limit + 1), limit, seen)
                if self.lower is None and (more or truncated):
                    self.lower = s
                    self.certified = not truncated
                failing += more_failing
                if self._try(more):
                    break
                passing += more
            if self.lower is not None and not wasted:
                wasted = True
                n = self.cfg.waste_candidates
                self._waste(passing[:n] + failing[:n])
            s += 1
        if self.lower is None:
            # every level below s was ruled out; s itself was not finished
            self.lower = s
            self.certified = False
        return self.report()

    def _waste(self, sols: list[AnonymizationSolution]) -> None:
        """Over-lift solutions until a realizable target is found.

        Waste amounts are probed with doubling gaps, so a target that needs
        a lot of waste is reached after few expensive realization attempts.
        """
        t0 = time.perf_counter()
        schedule = TrialSchedule(
            self.cfg.waste_mappings, self.cfg.waste_trials, 0, self.cfg.jump_cap
        )
        try:
            for sol in sols:
                tried = 0
                threshold, gap = 0, 1
                for cand, waste in iter_waste_candidates(self.g, sol, self.k, self.cfg.waste_budget):
                    if self._expired() or tried >= self.cfg.waste_candidates:
                        break
                    if self.upper is not None and cand.cost >= self.upper:
                        break
                    if waste < threshold:
                        continue
                    tried += 1
                    found = realize(self.g, cand, schedule, self.rng, self.deadline)
                    if found is not None:
                        self._record(found, cand.cost, waste)
                        break
                    threshold, gap = waste + gap, gap * 2
                if self._expired():
                    return
        finally:
            self.p2 += time.perf_counter() - t0

    def report(self) -> BoundsReport:
        lower = None if self.lower is None else (self.lower + 1) // 2
        upper = None if self.upper is None else self.upper // 2
        return BoundsReport(
            graph=self.graph_id,
            n=self.g.n,
            m=self.g.m,
            delta=self.g.delta,
            k=self.k,
            lower_bound_edges=lower,
            upper_bound_edges=upper,
            optimal=lower is not None and lower == upper,
            phase1_cost=self.phase1_cost,
            solutions_tested=self.tested,
            phase1_time_ms=round(self.p1 * 1000, 3),
            phase2_time_ms=round(self.p2 * 1000, 3),
            seed=self.cfg.seed,
            timed_out=self.timed_out,
            lower_bound_certified=self.certified,
            waste=self.best_waste,
            jump_blocks=None if self.best is None else self.best.jumps.jump_blocks,
            insertion=None if self.best is None else self.best.edges,
        )


def solve(g: Graph, k: int, cfg: SolverConfig | None = None, graph_id: str = "graph") -> BoundsReport:
    """Bounds on the minimum number of edges whose insertion makes ``g`` k-anonymous."""
    if k < 2:
        raise ValueError("k must be at least 2")
    return _Run(g, k, cfg or SolverConfig(), graph_id).run()


def sweep(g: Graph, cfg: SolverConfig | None = None, graph_id: str = "graph") -> list[BoundsReport]:
    """One independent ``solve`` per value in ``cfg.k_list``, each with its own time limit."""
    cfg = cfg or SolverConfig()
    return [solve(g, k, cfg, graph_id) for k in cfg.k_list]


__all__ = [
    "BoundsReport",
    "CSV_COLUMNS",
    "DEFAULT_K_LIST",
    "SolverConfig",
    "reports_to_csv",
    "reports_to_json",
    "solve",
    "sweep",
]
