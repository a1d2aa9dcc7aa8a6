import concurrent.futures
import csv
import logging
import time
from dataclasses import asdict, dataclass, replace
from typing import Callable, Dict, Iterable, List, Sequence, TextIO, Tuple

import numpy as np
from scipy import stats

from src.graph.digraph import DirectedGraph
from src.resolver.resolver import ResolutionStatus, ResolverConfig, resolve

logger = logging.getLogger(__name__)

CSV_HEADER = ["B", "run", "seed", "removed", "iterations", "wall_ms", "status"]
SUMMARY_RUN = "mean/std"


@dataclass
class SweepRow:
    B: int
    run: int
    seed: int
    removed: int
    iterations: int
    wall_ms: float
    status: str

    def as_dict(self):
        return asdict(self)


def cell_seed(template: ResolverConfig, run: int) -> int:
    # the same run index uses the same seed for every B
    return template.seed + run


def _run_cell(graph: DirectedGraph, bound: int, run: int, template: ResolverConfig,
              clock: Callable[[], float]) -> SweepRow:
    cfg = replace(template, bound=bound, seed=cell_seed(template, run), wcnf_dir=None)
    started = clock()
    report = resolve(graph.copy(), cfg, clock=clock)
    wall_ms = round((clock() - started) * 1000.0, 3) if cfg.record_timing else 0.0
    return SweepRow(
        B=bound,
        run=run,
        seed=cfg.seed,
        removed=len(report.removals),
        iterations=len(report.iterations),
        wall_ms=wall_ms,
        status=report.status.value,
    )


def sweep(graph: DirectedGraph, bounds: Iterable[int], runs: int, template: ResolverConfig,
          workers: int = 1, clock: Callable[[], float] = time.perf_counter) -> List[SweepRow]:
    """
    Resolve a fresh copy of graph once per (B, run) cell. Cells are independent
    and may run on a process pool; rows always come back ordered by (B, run).
    """
    cells: List[Tuple[int, int]] = [(b, run) for b in sorted(set(bounds)) for run in range(runs)]
    logger.info(f"sweep: {len(cells)} cells over B={sorted(set(bounds))} on {graph!r}, {workers} worker(s)")
    results: Dict[Tuple[int, int], SweepRow] = {}
    if workers <= 1:
        for b, run in cells:
            results[b, run] = _run_cell(graph, b, run, template, clock)
            logger.info(f"sweep: B={b} run={run} removed={results[b, run].removed} status={results[b, run].status}")
    else:
        with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as executor:
            futures = {executor.submit(_run_cell, graph, b, run, template, clock): (b, run) for b, run in cells}
            for future in concurrent.futures.as_completed(futures):
                b, run = futures[future]
                results[b, run] = future.result()
                logger.info(f"sweep: B={b} run={run} removed={results[b, run].removed} status={results[b, run].status}")
    return [results[key] for key in sorted(results)]


def _mean_std(values: Sequence[float]) -> Tuple[float, float]:
    data = np.asarray(values, dtype=float)
    if data.size == 0:
        return 0.0, 0.0
    std = float(np.std(data, ddof=1)) if data.size > 1 else 0.0
    return float(np.mean(data)), std


def summarize(rows: Sequence[SweepRow]) -> List[Dict[str, str]]:
    """One summary row per B; numeric columns read `<mean>/<std>`"""
    summary = []
    for b in sorted({row.B for row in rows}):
        cell = [row for row in rows if row.B == b]
        timeouts = sum(1 for row in cell if row.status == ResolutionStatus.TIMEOUT.value)
        entry = {"B": str(b), "run": SUMMARY_RUN, "seed": ""}
        for column in ("removed", "iterations", "wall_ms"):
            mean, std = _mean_std([getattr(row, column) for row in cell])
            entry[column] = f"{mean:.3f}/{std:.3f}"
        entry["status"] = ResolutionStatus.ACYCLIC.value if not timeouts else f"timeout {timeouts}/{len(cell)}"
        summary.append(entry)
    return summary


def write_csv(rows: Sequence[SweepRow], sink: TextIO) -> None:
    writer = csv.DictWriter(sink, fieldnames=CSV_HEADER, lineterminator="\n")
    writer.writeheader()
    for row in rows:
        writer.writerow(row.as_dict())
    writer.writerows(summarize(rows))


def mean_removals(rows: Sequence[SweepRow]) -> Dict[int, float]:
    return {b: _mean_std([r.removed for r in rows if r.B == b])[0] for b in sorted({r.B for r in rows})}


def trend(rows: Sequence[SweepRow]) -> float:
    """Spearman correlation between B and the mean number of removed edges; 0.0 when it is undefined"""
    means = mean_removals(rows)
    if len(means) < 2 or len(set(means.values())) < 2:
        return 0.0
    rho, _ = stats.spearmanr(list(means), list(means.values()))
    rho = float(rho)
    return 0.0 if np.isnan(rho) else rho
