"""Exact minimum-blocking-set search and classification.

The search treats blocking as a set-cover problem over the 2*theta_n
candidate blockers (points, then hyperplanes by dual ordinal) and finds
every minimum cover up to a size cap:

* exhaustive mode sweeps subsets by increasing size;
* branch-and-bound branches on a currently unblocked k-space with the
  fewest remaining candidates, pruning with coverage lower bounds, and
  keeps leaves duplicate-free by forbidding, inside each branch, the
  candidates tried earlier at the same node.

Reports are deterministic for a given (geometry, k, cap, mode): worker
sharding splits the root branches, each shard runs with its own local
incumbent, and the merge is order-independent.  Wall time is reported but
excluded from the canonical form of a report.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from itertools import combinations

from . import constructions
from .blocking import BlockingSet, incidence, is_blocking
from .counting import OPEN, gaussian, minimum_size_bound, theta
from .pgkernel import BudgetExceeded, GeometryContext

_WORKER_STATE = {}


class TimeBudgetExceeded(BudgetExceeded):
    """Raised when a wall-clock budget runs out; carries partial counters."""

    def __init__(self, message, nodes_expanded=0, pruned=0):
        super().__init__(message)
        self.nodes_expanded = nodes_expanded
        self.pruned = pruned


@dataclass(frozen=True)
class SearchReport:
    n: int
    q: int
    k: int
    size_cap: int
    mode: str
    workers: int
    minimum_size: int | None
    minimum_sets: tuple[tuple[int, ...], ...]
    nodes_expanded: int
    pruned: int
    wall_time: float

    def canonical_dict(self) -> dict:
        """Deterministic payload: identical across reruns and worker counts."""
        return {
            "n": self.n,
            "q": self.q,
            "k": self.k,
            "size_cap": self.size_cap,
            "mode": self.mode,
            "minimum_size": self.minimum_size,
            "minimum_sets": [list(s) for s in self.minimum_sets],
            "nodes_expanded": self.nodes_expanded,
            "pruned": self.pruned,
        }

    def to_dict(self) -> dict:
        out = self.canonical_dict()
        out["workers"] = self.workers
        out["wall_time"] = round(self.wall_time, 3)
        return out

    def blocking_sets(self, ctx: GeometryContext):
        return [BlockingSet.from_indices(ctx, self.k, ids) for ids in self.minimum_sets]


class _Cover:
    """Immutable cover data shared by all shards of one search."""

    def __init__(self, ctx: GeometryContext, k: int,
                 max_points: int | None = None, max_hyperplanes: int | None = None):
        inc = incidence(ctx, k)
        self.covers = inc.covers
        self.candidates = inc.candidates
        self.candidate_masks = inc.candidate_masks
        self.full = inc.full_mask
        self.num_spaces = len(inc.spaces)
        self.num_points = inc.num_points
        self.universe = inc.universe_size
        self.static_max = max((c.bit_count() for c in self.covers), default=1)
        self.max_cover_points = max(
            (c.bit_count() for c in self.covers[:self.num_points]), default=0)
        self.max_cover_hyps = max(
            (c.bit_count() for c in self.covers[self.num_points:]), default=0)
        self.max_points = max_points
        self.max_hyperplanes = max_hyperplanes


def _shard_search(cover: _Cover, cap: int, chosen0, covered0: int, forbidden0: int,
                  deadline: float | None, first_only: bool = False):
    """Explore one branch-and-bound shard; returns (best, sets, nodes, pruned).

    best is the smallest solution size found (initialized to cap), sets the
    complete list of solutions of that size inside this shard.
    """
    covers = cover.covers
    candidates = cover.candidates
    cand_masks = cover.candidate_masks
    full = cover.full
    num_points = cover.num_points
    static_max = cover.static_max
    max_pts = cover.max_points
    max_hyps = cover.max_hyperplanes
    composition = max_pts is not None or max_hyps is not None

    best = cap
    sets: list[tuple[int, ...]] = []
    nodes = 0
    pruned = 0
    check_every = 1024
    if deadline is not None and time.monotonic() > deadline:
        raise TimeBudgetExceeded("search budget exhausted", nodes, pruned)

    def explore(chosen, covered, forbidden, pts_used, hyps_used):
        nonlocal best, sets, nodes, pruned
        nodes += 1
        if deadline is not None and nodes % check_every == 0 and time.monotonic() > deadline:
            raise TimeBudgetExceeded("search budget exhausted", nodes, pruned)
        if covered == full:
            size = len(chosen)
            if size < best:
                best = size
                sets = [tuple(chosen)]
            elif size == best:
                sets.append(tuple(chosen))
            return
        if first_only and sets:
            return
        need = best - len(chosen)
        if need <= 0:
            pruned += 1
            return
        uncovered = full & ~covered
        ucnt = uncovered.bit_count()
        room = need
        if composition:
            pts_room = need if max_pts is None else min(need, max_pts - pts_used)
            hyps_room = need if max_hyps is None else min(need, max_hyps - hyps_used)
            room = min(need, pts_room + hyps_room)
            ceiling = (pts_room * cover.max_cover_points
                       + hyps_room * cover.max_cover_hyps)
            if ceiling < ucnt:
                pruned += 1
                return
        elif ucnt > need * static_max:
            pruned += 1
            return
        # most-constrained unblocked space
        best_j = -1
        best_cnt = cover.universe + 1
        m = uncovered
        while m:
            low = m & -m
            j = low.bit_length() - 1
            m ^= low
            cnt = (cand_masks[j] & ~forbidden).bit_count()
            if cnt < best_cnt:
                best_cnt = cnt
                best_j = j
                if cnt <= 1:
                    break
        if best_cnt == 0:
            pruned += 1
            return
        if best_cnt > 1:
            # packing bound: spaces with pairwise disjoint candidate sets need
            # pairwise distinct new elements (any blocker of a space is one of
            # its candidates), so their count is a valid lower bound
            packing = 0
            taken = 0
            union = 0
            m = uncovered
            while m:
                low = m & -m
                j = low.bit_length() - 1
                m ^= low
                cm = cand_masks[j] & ~forbidden
                union |= cm
                if cm & taken == 0:
                    packing += 1
                    taken |= cm
            if packing > room:
                pruned += 1
                return
            # adaptive coverage bound over the elements that still matter
            # (every blocker of an uncovered space lies in the union mask)
            adaptive = 0
            m = union
            while m:
                low = m & -m
                e = low.bit_length() - 1
                m ^= low
                c = (covers[e] & uncovered).bit_count()
                if c > adaptive:
                    adaptive = c
                    if adaptive >= static_max:
                        break
            if ucnt > room * adaptive:
                pruned += 1
                return
        tried = 0
        for e in candidates[best_j]:
            bit = 1 << e
            if bit & forbidden:
                continue
            is_point = e < num_points
            if composition:
                if is_point and max_pts is not None and pts_used >= max_pts:
                    continue
                if not is_point and max_hyps is not None and hyps_used >= max_hyps:
                    continue
            chosen.append(e)
            explore(chosen, covered | covers[e], forbidden | tried,
                    pts_used + is_point, hyps_used + (not is_point))
            chosen.pop()
            if first_only and sets:
                return
            tried |= bit
    pts0 = sum(1 for e in chosen0 if e < num_points)
    explore(list(chosen0), covered0, forbidden0, pts0, len(chosen0) - pts0)
    return best, sets, nodes, pruned


def _init_worker(cover, cap, deadline, first_only):
    _WORKER_STATE["args"] = (cover, cap, deadline, first_only)


def _run_task(task):
    cover, cap, deadline, first_only = _WORKER_STATE["args"]
    chosen0, covered0, forbidden0 = task
    return _shard_search(cover, cap, chosen0, covered0, forbidden0, deadline, first_only)


def _branch_and_bound(cover: _Cover, cap: int, workers: int,
                      deadline: float | None, first_only: bool = False):
    """Shard the root branches and merge; the merge is associative, so the
    result does not depend on worker count or scheduling."""
    nodes = 1  # the root
    pruned = 0
    root_j = min(range(cover.num_spaces), key=lambda j: len(cover.candidates[j]))
    tasks = []
    tried = 0
    for e in cover.candidates[root_j]:
        if cover.max_points is not None and e < cover.num_points and cover.max_points == 0:
            continue
        if cover.max_hyperplanes is not None and e >= cover.num_points and cover.max_hyperplanes == 0:
            continue
        tasks.append(((e,), cover.covers[e], tried))
        tried |= 1 << e
    if cap < 1 or not tasks:
        return None, (), nodes, pruned
    results = []
    if workers <= 1 or len(tasks) == 1:
        _init_worker(cover, cap, deadline, first_only)
        for task in tasks:
            results.append(_run_task(task))
    else:
        import multiprocessing

        mp = multiprocessing.get_context("fork")
        with mp.Pool(min(workers, len(tasks)), _init_worker,
                     (cover, cap, deadline, first_only)) as pool:
            results = pool.map(_run_task, tasks)
    best = cap + 1
    merged: set[tuple[int, ...]] = set()
    for shard_best, shard_sets, shard_nodes, shard_pruned in results:
        nodes += shard_nodes
        pruned += shard_pruned
        if shard_sets:
            if shard_best < best:
                best = shard_best
                merged = set()
            if shard_best == best:
                merged.update(tuple(sorted(s)) for s in shard_sets)
    if not merged:
        return None, (), nodes, pruned
    return best, tuple(sorted(merged)), nodes, pruned


def _exhaustive(cover: _Cover, cap: int, deadline: float | None):
    covers = cover.covers
    full = cover.full
    nodes = 0
    for size in range(cap + 1):
        found = []
        if size == 0:
            nodes += 1
            if full == 0:
                found.append(())
        else:
            for combo in combinations(range(cover.universe), size):
                nodes += 1
                if deadline is not None and nodes % 65536 == 0 \
                        and time.monotonic() > deadline:
                    raise TimeBudgetExceeded("search budget exhausted", nodes, 0)
                mask = 0
                for e in combo:
                    mask |= covers[e]
                if mask == full:
                    found.append(combo)
        if found:
            return size, tuple(sorted(found)), nodes, 0
    return None, (), nodes, 0


def min_blocking_search(ctx: GeometryContext, k: int, size_cap: int,
                        mode: str = "branch_and_bound", workers: int = 1,
                        budget_seconds: float | None = None) -> SearchReport:
    """Find every blocking set of minimum size <= size_cap.

    The minimum_sets list is complete: each entry is the sorted tuple of
    universe ordinals of one minimum blocking set.
    """
    if mode not in ("branch_and_bound", "exhaustive"):
        raise ValueError(f"unknown mode {mode!r}")
    start = time.monotonic()
    deadline = start + budget_seconds if budget_seconds is not None else None
    cover = _Cover(ctx, k)
    if mode == "exhaustive":
        best, sets, nodes, pruned = _exhaustive(cover, size_cap, deadline)
    else:
        best, sets, nodes, pruned = _branch_and_bound(cover, size_cap, workers, deadline)
    return SearchReport(
        n=ctx.n, q=ctx.q, k=k, size_cap=size_cap, mode=mode, workers=workers,
        minimum_size=best, minimum_sets=sets,
        nodes_expanded=nodes, pruned=pruned,
        wall_time=time.monotonic() - start,
    )


# -- bound-assisted refutation ------------------------------------------------


@dataclass(frozen=True)
class CompositionOutcome:
    points: int
    hyperplanes: int
    method: str           # "counting-bound" or "search"
    nodes: int = 0


@dataclass(frozen=True)
class RefutationReport:
    """Outcome of proving that no blocking set of size < target exists."""

    target: int
    refuted: bool
    compositions: tuple[CompositionOutcome, ...]
    counterexample: tuple[int, ...] | None
    nodes_expanded: int

    def to_dict(self) -> dict:
        return {
            "target": self.target,
            "refuted": self.refuted,
            "counterexample": list(self.counterexample) if self.counterexample else None,
            "nodes_expanded": self.nodes_expanded,
            "compositions": [
                {"points": c.points, "hyperplanes": c.hyperplanes,
                 "method": c.method, "nodes": c.nodes}
                for c in self.compositions
            ],
        }


def _skew_space_floor(n: int, q: int, k: int, count: int, dual: bool) -> int:
    """Best counting lower bound on the k-spaces a part of `count` elements
    leaves unblocked (points for dual=False, hyperplanes for dual=True)."""
    from .counting import HypothesisViolated, metsch_dual_lower_bound, metsch_lower_bound

    best = 0
    for d in range(0, n + 1):
        if count > theta(d, q):
            continue
        try:
            if dual:
                value = metsch_dual_lower_bound(n, q, d, k, count)
            else:
                value = metsch_lower_bound(n, q, d, k, count)
        except HypothesisViolated:
            continue
        best = max(best, value)
    return best


def refute_below(ctx: GeometryContext, k: int, target: int,
                 workers: int = 1, budget_seconds: float | None = None) -> RefutationReport:
    """Prove no blocking set of size < target exists (or exhibit one).

    Every exact composition (points, hyperplanes) with total < target is
    either killed by the skew-space counting bounds (the part left
    unblocked by one side exceeds what the other side can possibly cover)
    or settled by a composition-constrained branch-and-bound run.
    """
    n, q = ctx.n, ctx.q
    start = time.monotonic()
    deadline = start + budget_seconds if budget_seconds is not None else None
    per_point = gaussian(n, k, q)          # k-spaces through a point
    per_hyperplane = gaussian(n, k + 1, q)  # k-spaces inside a hyperplane
    outcomes = []
    total_nodes = 0
    for total in range(target):
        for b0 in range(total + 1):
            b1 = total - b0
            if (_skew_space_floor(n, q, k, b0, dual=False) > b1 * per_hyperplane
                    or _skew_space_floor(n, q, k, b1, dual=True) > b0 * per_point):
                outcomes.append(CompositionOutcome(b0, b1, "counting-bound"))
                continue
            cover = _Cover(ctx, k, max_points=b0, max_hyperplanes=b1)
            _, sets, nodes, _ = _branch_and_bound(cover, total, workers,
                                                  deadline, first_only=True)
            total_nodes += nodes
            outcomes.append(CompositionOutcome(b0, b1, "search", nodes))
            if sets:
                return RefutationReport(target, False, tuple(outcomes),
                                        sets[0], total_nodes)
    return RefutationReport(target, True, tuple(outcomes), None, total_nodes)


# -- classification -----------------------------------------------------------


@dataclass(frozen=True)
class ClassificationVerdict:
    expected_bound: object            # exact integer or "open"
    observed_minimum: int | None
    all_minima_match_theorem: bool | None  # None: not determined (fallback path)
    mismatches: tuple[tuple[int, ...], ...]
    minima_count: int
    method: str                       # "search" or "fallback"
    report: SearchReport | None
    fallback: "MiddleCaseFallback | None" = None

    def to_dict(self) -> dict:
        return {
            "expected_bound": self.expected_bound,
            "observed_minimum": self.observed_minimum,
            "all_minima_match_theorem": self.all_minima_match_theorem,
            "mismatches": [list(m) for m in self.mismatches],
            "minima_count": self.minima_count,
            "method": self.method,
            "report": self.report.to_dict() if self.report else None,
            "fallback": self.fallback.to_dict() if self.fallback else None,
        }


@dataclass(frozen=True)
class MiddleCaseFallback:
    """Instance verification plus refutation, for when a full enumeration of
    the minima is out of budget."""

    parameter_tuples: int
    distinct_sets: int
    all_blocking: bool
    refutation: RefutationReport

    def to_dict(self) -> dict:
        return {
            "parameter_tuples": self.parameter_tuples,
            "distinct_sets": self.distinct_sets,
            "all_blocking": self.all_blocking,
            "refutation": self.refutation.to_dict(),
        }


def matches_theorem_family(ctx: GeometryContext, k: int, bset: BlockingSet) -> bool:
    """Does a minimum set belong to the family the classification predicts?"""
    n = ctx.n
    if 2 * k < n - 1:
        if bset.points or len(bset.hyperplanes) != theta(k + 1, ctx.q):
            return False
        it = iter(bset.hyperplanes)
        common = next(it)
        for hp in it:
            common = ctx.meet(common, hp)
        return common.dim == n - k - 2
    if 2 * k > n - 1:
        if bset.hyperplanes or len(bset.points) != theta(n - k, ctx.q):
            return False
        return ctx.span(*bset.points).dim == n - k
    return constructions.recognize_pencil_partition(bset) is not None


def verify_middle_case(ctx: GeometryContext, k: int, workers: int = 1,
                       budget_seconds: float | None = None) -> MiddleCaseFallback:
    """Generate every pencil-partition instance, check each blocks, and refute
    all sizes below (q+1) q^k with bound-assisted pruning."""
    sets, tuples = constructions.distinct_pencil_partition_sets(ctx, k)
    all_blocking = True
    for ids in sets:
        if not is_blocking(BlockingSet.from_indices(ctx, k, ids))[0]:
            all_blocking = False
            break
    bound = (ctx.q + 1) * ctx.q ** k
    refutation = refute_below(ctx, k, bound, workers, budget_seconds)
    return MiddleCaseFallback(tuples, len(sets), all_blocking, refutation)


def classify_minimum(ctx: GeometryContext, k: int, size_cap: int | None = None,
                     mode: str = "branch_and_bound", workers: int = 1,
                     budget_seconds: float | None = None,
                     allow_fallback: bool = True) -> ClassificationVerdict:
    """Search for the minimum and compare it, and every minimum set, with the
    classification.  For the open q = 2 middle cases the expected bound is
    reported as "open" and the empirical minimum stands on its own.  If a
    wall-clock budget interrupts the middle-case search, the fallback path
    (instance verification plus bound-assisted refutation) runs instead.
    """
    expected = minimum_size_bound(ctx.n, k, ctx.q)
    if size_cap is None:
        size_cap = expected if isinstance(expected, int) else \
            min(theta(k + 1, ctx.q), theta(ctx.n - k, ctx.q))
    middle = ctx.n == 2 * k + 1
    try:
        report = min_blocking_search(ctx, k, size_cap, mode, workers, budget_seconds)
    except TimeBudgetExceeded:
        if not (middle and allow_fallback):
            raise
        fallback = verify_middle_case(ctx, k, workers)
        bound = (ctx.q + 1) * ctx.q ** k
        confirmed = fallback.all_blocking and fallback.refutation.refuted
        return ClassificationVerdict(
            expected_bound=expected,
            observed_minimum=bound if confirmed else None,
            all_minima_match_theorem=None,
            mismatches=(),
            minima_count=fallback.distinct_sets if confirmed else 0,
            method="fallback",
            report=None,
            fallback=fallback,
        )
    if expected == OPEN:
        return ClassificationVerdict(
            expected_bound=OPEN,
            observed_minimum=report.minimum_size,
            all_minima_match_theorem=True,  # nothing is claimed for open cases
            mismatches=(),
            minima_count=len(report.minimum_sets),
            method="search",
            report=report,
        )
    mismatches = tuple(
        ids for ids in report.minimum_sets
        if not matches_theorem_family(ctx, k, BlockingSet.from_indices(ctx, k, ids)))
    return ClassificationVerdict(
        expected_bound=expected,
        observed_minimum=report.minimum_size,
        all_minima_match_theorem=(report.minimum_size == expected and not mismatches),
        mismatches=mismatches,
        minima_count=len(report.minimum_sets),
        method="search",
        report=report,
    )
