"""Threshold-sweep benchmark over datasets and miners."""

from __future__ import annotations

import csv
import os
import statistics
from dataclasses import astuple, dataclass, fields
from typing import Callable, Sequence, TextIO

from .datagen import generate, preset
from .miners import MINERS, MiningReport, PairResult
from .txdb import TransactionDatabase, load_basket_file

DEFAULT_THETAS = (0.9, 0.8, 0.7, 0.6, 0.5, 0.4, 0.3, 0.2, 0.1)
# the T10I{400..1000}D100K shapes with a tenth of the transactions
DESK_PRESETS = ("T10I400D10K", "T10I600D10K", "T10I800D10K", "T10I1000D10K")
RESULT_HEADER = ("item_a", "item_b", "count_a", "count_b", "count_ab", "phi")


def resolve_dataset(source: str, seed: int = 1) -> TransactionDatabase:
    """A basket file path, or a ``T..I..D..`` preset name generated with ``seed``."""
    if os.path.exists(source):
        return load_basket_file(source)
    try:
        params = preset(source, seed=seed)
    except ValueError:
        raise FileNotFoundError(f"{source!r} is neither a readable file nor a preset name") from None
    return generate(params)


@dataclass
class BenchPlan:
    datasets: Sequence[str] = DESK_PRESETS
    thetas: Sequence[float] = DEFAULT_THETAS
    algorithms: Sequence[str] = ("tcp", "taper")
    repeats: int = 3
    seed: int = 1

    def __post_init__(self):
        ts = list(self.thetas)
        if not ts:
            raise ValueError("at least one theta is required")
        if any(not 0.0 < t <= 1.0 for t in ts):
            raise ValueError("thetas must lie in (0, 1]")
        if any(a <= b for a, b in zip(ts, ts[1:])):
            raise ValueError("thetas must be strictly descending")
        unknown = set(self.algorithms) - set(MINERS)
        if unknown:
            raise ValueError(f"unknown algorithms: {sorted(unknown)}")
        if self.repeats < 1:
            raise ValueError("repeats must be at least 1")


@dataclass
class BenchRow:
    dataset: str
    algorithm: str
    theta: float
    elapsed_ms: float
    pairs_considered: int
    pairs_pruned: int
    results_count: int
    status: str = "ok"


def run_bench(
    plan: BenchPlan,
    loader: Callable[[str, int], TransactionDatabase] = resolve_dataset,
    miners=None,
) -> list[BenchRow]:
    """One row per (dataset, algorithm, theta); failures land in ``status``."""
    miners = MINERS if miners is None else miners
    rows: list[BenchRow] = []
    for name in plan.datasets:
        try:
            db = loader(name, plan.seed)
        except Exception as exc:  # noqa: BLE001 - recorded per cell
            for algo in plan.algorithms:
                for theta in plan.thetas:
                    rows.append(BenchRow(name, algo, theta, 0.0, 0, 0, 0, f"error: {exc}"))
            continue
        for algo in plan.algorithms:
            for theta in plan.thetas:
                try:
                    reports = [miners[algo](db, theta) for _ in range(plan.repeats)]
                except Exception as exc:  # noqa: BLE001
                    rows.append(BenchRow(name, algo, theta, 0.0, 0, 0, 0, f"error: {exc}"))
                    continue
                last = reports[-1]
                rows.append(BenchRow(
                    name,
                    algo,
                    theta,
                    statistics.median(r.elapsed_ms for r in reports),
                    last.stats.pairs_considered,
                    last.stats.pairs_pruned_by_bound,
                    len(last.results),
                ))
    _flag_mismatches(rows)
    rows.sort(key=lambda r: (r.dataset, r.algorithm, -r.theta))
    return rows


def _flag_mismatches(rows: list[BenchRow]) -> None:
    cells: dict[tuple[str, float], list[BenchRow]] = {}
    for r in rows:
        if r.status == "ok":
            cells.setdefault((r.dataset, r.theta), []).append(r)
    for group in cells.values():
        if len({r.results_count for r in group}) > 1:
            for r in group:
                r.status = "mismatch"


def write_bench_csv(rows: list[BenchRow], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow([f.name for f in fields(BenchRow)])
    for r in rows:
        values = list(astuple(r))
        values[3] = f"{r.elapsed_ms:.3f}"
        w.writerow(values)


def write_results_csv(report: MiningReport, names: Sequence[str], out: TextIO) -> None:
    w = csv.writer(out, lineterminator="\n")
    w.writerow(RESULT_HEADER)
    for r in report.results:
        w.writerow(_result_row(r, names))


def _result_row(r: PairResult, names: Sequence[str]) -> list[str]:
    return [names[r.item_a], names[r.item_b], r.count_a, r.count_b, r.count_ab, f"{r.phi:.6f}"]


def stats_line(report: MiningReport) -> str:
    s = report.stats
    return (
        f"algo={report.algorithm} theta={report.theta} considered={s.pairs_considered} "
        f"pruned={s.pairs_pruned_by_bound} refined={s.pairs_refined} "
        f"results={len(report.results)} elapsed_ms={report.elapsed_ms:.3f}"
    )
