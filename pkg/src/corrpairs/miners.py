"""All-strong-pairs correlation miners: FP-tree based, upper-bound filter-and-refine, brute force.

All three return the same canonical result list for a given database and
threshold; :func:`verify_equivalence` checks exactly that.
"""

from __future__ import annotations

import math
import os
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from itertools import combinations
from typing import Callable, Mapping

import numpy as np

from .corrmath import phi_from_counts, phi_upper_bound
from .fptree import build_fptree, cooccurrence_counts
from .txdb import SupportTable, TransactionDatabase, count_supports

ALGORITHMS = ("tcp", "taper", "brute")
BRUTE_MAX_ITEMS_ENV = "CORRPAIRS_BRUTE_MAX_ITEMS"
DEFAULT_BRUTE_MAX_ITEMS = 20_000

# Slack on the pruning test: a pair is pruned only if its bound is below
# theta by more than this.  Keeps rounding in the bound from pruning a pair
# whose phi sits exactly at the bound and the threshold.
BOUND_SLACK = 1e-12


class EmptyDatabaseError(ValueError):
    pass


class OracleUnavailableError(RuntimeError):
    """The database is too wide for the dense brute-force matrix."""


@dataclass(frozen=True)
class MiningQuery:
    theta: float
    algorithm: str = "tcp"

    def __post_init__(self):
        if not (isinstance(self.theta, (int, float)) and 0.0 < self.theta <= 1.0):
            raise ValueError(f"theta must lie in (0, 1], got {self.theta!r}")
        if self.algorithm not in ALGORITHMS:
            raise ValueError(f"unknown algorithm {self.algorithm!r}; choose from {ALGORITHMS}")


@dataclass(frozen=True)
class PairResult:
    item_a: int
    item_b: int
    count_a: int
    count_b: int
    count_ab: int
    phi: float


@dataclass
class MiningStats:
    pairs_considered: int = 0
    pairs_pruned_by_bound: int = 0
    pairs_refined: int = 0


@dataclass
class MiningReport:
    algorithm: str
    theta: float
    results: list[PairResult]
    stats: MiningStats
    elapsed: float = 0.0
    constant_items: list[int] = field(default_factory=list)
    # (item_a, item_b) pairs dropped by the bound; only filled when traced
    pruned_pairs: list[tuple[int, int]] | None = None

    @property
    def elapsed_ms(self) -> float:
        return self.elapsed * 1000.0


def canonical_order(results: list[PairResult]) -> list[PairResult]:
    return sorted(results, key=lambda r: (-r.phi, r.item_a, r.item_b))


def _pair(a: int, b: int, counts, count_ab: int, n: int) -> PairResult:
    if a > b:
        a, b = b, a
    return PairResult(a, b, counts[a], counts[b], count_ab, phi_from_counts(counts[a], counts[b], count_ab, n))


def _prepare(db: TransactionDatabase, theta: float) -> tuple[SupportTable, list[int]]:
    MiningQuery(theta)
    if len(db) == 0:
        raise EmptyDatabaseError("cannot mine an empty database")
    supports = count_supports(db)
    constant = [i for i in range(db.n_items) if supports.is_constant(i)]
    return supports, constant


def mine_tcp(db: TransactionDatabase, theta: float, workers: int = 1) -> MiningReport:
    """Exact phi for every co-occurring pair, read off an unpruned FP-tree.

    For each header item the co-occurrence counts with all higher-ranked
    items come from its conditional pattern base, so each co-occurring pair
    is evaluated exactly once, from its lower-ranked member.  Work does not
    depend on ``theta``; the threshold only filters output.
    """
    supports, constant = _prepare(db, theta)
    start = time.perf_counter()
    n = supports.n_transactions
    counts = supports.counts
    tree = build_fptree(db, supports)
    skip = set(constant)

    def per_item(a: int) -> tuple[int, list[PairResult]]:
        if a in skip:
            return 0, []
        considered = 0
        hits = []
        co = cooccurrence_counts(tree.conditional_pattern_base(a))
        for b, count_ab in co.items():
            if b in skip:
                continue
            considered += 1
            r = _pair(a, b, counts, count_ab, n)
            if r.phi >= theta:
                hits.append(r)
        return considered, hits

    items = [e.item for e in tree.header]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(per_item, items))
    else:
        parts = [per_item(a) for a in items]

    stats = MiningStats()
    results: list[PairResult] = []
    for considered, hits in parts:
        stats.pairs_considered += considered
        results.extend(hits)
    stats.pairs_refined = stats.pairs_considered
    results = canonical_order(results)
    elapsed = time.perf_counter() - start
    return MiningReport("tcp", theta, results, stats, elapsed, constant)


def _taper_candidates(supports: SupportTable, ranked: list[int], theta: float, stats: MiningStats, trace):
    """Filtering step: pairs whose upper bound reaches ``theta``.

    ``ranked`` is sorted by descending support, so for a fixed first item the
    bound only shrinks as the partner moves down the list and the scan can
    stop at the first failure.
    """
    n = supports.n_transactions
    sup = [supports.counts[i] / n for i in ranked]
    m = len(ranked)
    candidates = []
    for i in range(m):
        a = ranked[i]
        sa = sup[i]
        j = i + 1
        while j < m and phi_upper_bound(sa, sup[j]) + BOUND_SLACK >= theta:
            b = ranked[j]
            candidates.append((a, b) if a < b else (b, a))
            j += 1
        if trace is not None:
            trace.extend((min(a, ranked[k]), max(a, ranked[k])) for k in range(j, m))
    stats.pairs_considered = m * (m - 1) // 2
    stats.pairs_pruned_by_bound = stats.pairs_considered - len(candidates)
    return candidates


def mine_taper(db: TransactionDatabase, theta: float, trace: bool = False) -> MiningReport:
    """Filter pairs by the support-only phi bound, then count survivors in one scan."""
    supports, constant = _prepare(db, theta)
    start = time.perf_counter()
    n = supports.n_transactions
    counts = supports.counts
    skip = set(constant)
    ranked = sorted((i for i in range(db.n_items) if i not in skip), key=lambda i: (-counts[i], i))

    stats = MiningStats()
    pruned = [] if trace else None
    candidates = _taper_candidates(supports, ranked, theta, stats, pruned)
    stats.pairs_refined = len(candidates)

    pair_counts = dict.fromkeys(candidates, 0)
    if pair_counts:
        for t in db.transactions:
            items = sorted(t)
            for p in combinations(items, 2):
                if p in pair_counts:
                    pair_counts[p] += 1

    results = []
    for (a, b), count_ab in pair_counts.items():
        r = _pair(a, b, counts, count_ab, n)
        if r.phi >= theta:
            results.append(r)
    results = canonical_order(results)
    elapsed = time.perf_counter() - start
    return MiningReport("taper", theta, results, stats, elapsed, constant, pruned)


def brute_max_items() -> int:
    value = os.environ.get(BRUTE_MAX_ITEMS_ENV)
    return int(value) if value else DEFAULT_BRUTE_MAX_ITEMS


def mine_brute(db: TransactionDatabase, theta: float, max_items: int | None = None) -> MiningReport:
    """Reference miner: dense co-occurrence matrix, phi for every non-constant pair."""
    cap = brute_max_items() if max_items is None else max_items
    if db.n_items > cap:
        raise OracleUnavailableError(f"{db.n_items} items exceed the brute-force cap of {cap}")
    supports, constant = _prepare(db, theta)
    start = time.perf_counter()
    n = supports.n_transactions
    counts = supports.counts
    m = db.n_items

    co = np.zeros((m, m), dtype=np.int32)
    for t in db.transactions:
        idx = np.fromiter(t, dtype=np.intp, count=len(t))
        co[np.ix_(idx, idx)] += 1

    live = [i for i in range(m) if not supports.is_constant(i)]
    stats = MiningStats()
    stats.pairs_considered = len(live) * (len(live) - 1) // 2
    stats.pairs_refined = stats.pairs_considered
    results = []
    for x, a in enumerate(live):
        row = co[a]
        for b in live[x + 1:]:
            count_ab = int(row[b])
            f = phi_from_counts(counts[a], counts[b], count_ab, n)
            if f >= theta:
                results.append(PairResult(a, b, counts[a], counts[b], count_ab, f))
    results = canonical_order(results)
    elapsed = time.perf_counter() - start
    return MiningReport("brute", theta, results, stats, elapsed, constant)


MINERS: dict[str, Callable[[TransactionDatabase, float], MiningReport]] = {
    "tcp": mine_tcp,
    "taper": mine_taper,
    "brute": mine_brute,
}


def mine(db: TransactionDatabase, query: MiningQuery) -> MiningReport:
    return MINERS[query.algorithm](db, query.theta)


@dataclass
class Equivalence:
    ok: bool
    diff: list[str]

    def __bool__(self):
        return self.ok


def _describe(r: PairResult, names) -> str:
    a = names[r.item_a] if names else r.item_a
    b = names[r.item_b] if names else r.item_b
    return f"({a},{b}) counts={r.count_a}/{r.count_b}/{r.count_ab} phi={r.phi:.12f}"


def compare_results(
    left: list[PairResult], right: list[PairResult], tol: float = 1e-9, names=None, labels=("left", "right")
) -> list[str]:
    """Differences between two result lists; empty when they agree."""
    diff = []
    lmap = {(r.item_a, r.item_b): r for r in left}
    rmap = {(r.item_a, r.item_b): r for r in right}
    for key in sorted(lmap.keys() - rmap.keys()):
        diff.append(f"only in {labels[0]}: {_describe(lmap[key], names)}")
    for key in sorted(rmap.keys() - lmap.keys()):
        diff.append(f"only in {labels[1]}: {_describe(rmap[key], names)}")
    for key in sorted(lmap.keys() & rmap.keys()):
        x, y = lmap[key], rmap[key]
        if (x.count_a, x.count_b, x.count_ab) != (y.count_a, y.count_b, y.count_ab) or not math.isclose(
            x.phi, y.phi, rel_tol=0.0, abs_tol=tol
        ):
            diff.append(f"mismatch: {labels[0]} {_describe(x, names)} vs {labels[1]} {_describe(y, names)}")
    return diff


def verify_equivalence(
    db: TransactionDatabase,
    theta: float,
    miners: Mapping[str, Callable[[TransactionDatabase, float], MiningReport]] | None = None,
    tol: float = 1e-9,
) -> Equivalence:
    """Run every miner and compare each against the brute-force oracle."""
    miners = dict(MINERS if miners is None else miners)
    reference = miners.pop("brute")(db, theta)
    names = db.item_names
    diff = []
    for name, fn in miners.items():
        report = fn(db, theta)
        diff.extend(f"theta={theta}: " + d for d in compare_results(
            reference.results, report.results, tol, names, ("brute", name)
        ))
    return Equivalence(not diff, diff)
