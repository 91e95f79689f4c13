"""
Scaling benchmark: generate histories of growing size, time
standardization plus checking, and report how the runtime grows
against n log n.
"""
from __future__ import annotations

import logging
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import numpy as np
import pandas as pd

from src import config
from src.generator import GenConfig, MutationKind, generate_linearizable, mutate
from src.model import AdtKind
from src.monitor import Monitor

logger = logging.getLogger(__name__)

CSV_COLUMNS = ["adt", "size", "rep", "seed", "verdict", "elapsed_ns"]


@dataclass(frozen=True)
class BenchPlan:
    adt: AdtKind
    sizes: Sequence[int]
    reps: int = config.BENCH_REPS
    seed: int = 0
    include_mutants: bool = False
    engine: str = "fast"
    n_procs: int = 40
    roles: str = "producer_consumer"
    jobs: int = 1

    def validate(self) -> None:
        if not self.sizes:
            raise ValueError("at least one size is required")
        if any(s <= 0 for s in self.sizes):
            raise ValueError("sizes must be positive")
        if list(self.sizes) != sorted(self.sizes):
            raise ValueError("sizes must be ascending")
        if self.reps <= 0:
            raise ValueError("reps must be positive")
        if self.engine not in ("fast", "naive"):
            raise ValueError("bench engine must be 'fast' or 'naive'")
        if self.jobs <= 0:
            raise ValueError("jobs must be positive")


@dataclass
class BenchRow:
    adt: str
    size: int
    rep: int
    seed: int
    verdict: str
    elapsed_ns: int
    peak_ops_in_structures: int = 0
    variant: str = "generated"


def _time_one(plan: BenchPlan, size: int, rep: int) -> List[BenchRow]:
    seed = plan.seed + rep
    cfg = GenConfig(plan.adt, size, n_procs=plan.n_procs, seed=seed,
                    roles=plan.roles if plan.n_procs > 1 else "mixed")
    try:
        h = generate_linearizable(cfg)
    except Exception:
        logger.exception("generation failed for %s size %d rep %d", plan.adt.value, size, rep)
        return [BenchRow(plan.adt.value, size, rep, seed, "error", -1)]

    monitor = Monitor(plan.engine)
    rows = []
    candidates = [("generated", h)]
    if plan.include_mutants:
        mutant = mutate(h, MutationKind.SWAP_REMOVE_VALUES, seed)
        if mutant.changed:
            candidates.append(("mutant", mutant.history))
    for variant, history in candidates:
        report = monitor.check(history)
        rows.append(BenchRow(plan.adt.value, size, rep, seed, report.verdict.value,
                             report.elapsed_ns, report.checked_ops, variant))
        logger.debug("bench %s n=%d rep=%d %s: %.3f ms", plan.adt.value, size, rep, variant,
                     report.elapsed_ns / 1e6)
    return rows


def _run_size(plan: BenchPlan, size: int) -> List[BenchRow]:
    rows = []
    for rep in range(plan.reps):
        rows.extend(_time_one(plan, size, rep))
    return rows


def summarize_rows(rows: List[BenchRow], adt: str, engine: str = "fast",
                   soft_budget_s: float = config.BENCH_SOFT_BUDGET_S) -> Dict[str, Any]:
    """Per-size statistics, r(n) = mean / (n log2 n) and doubling ratios."""
    frame = pd.DataFrame([asdict(r) for r in rows], columns=[f.name for f in fields(BenchRow)])
    warnings: List[str] = []
    generated = frame[(frame["variant"] == "generated") & (frame["verdict"] != "error")]

    rejected = generated[generated["verdict"] != "linearizable"]
    for _, row in rejected.iterrows():
        message = f"generated history rejected: size {row['size']} seed {row['seed']}"
        logger.error(message)
        warnings.append(message)

    per_size = []
    if not generated.empty:
        stats = generated.groupby("size")["elapsed_ns"].agg(["mean", "median", "max"]).sort_index()
        sizes = stats.index.to_numpy(dtype=np.float64)
        # n log2 n, with log2 1 = 0 guarded
        nlogn = sizes * np.maximum(np.log2(sizes), 1.0)
        ratios = stats["mean"].to_numpy() / nlogn
        for (size, row), r_n in zip(stats.iterrows(), ratios):
            per_size.append({
                "size": int(size),
                "mean_ns": float(row["mean"]),
                "median_ns": float(row["median"]),
                "max_ns": int(row["max"]),
                "r_n": float(r_n),
            })
            if size >= 1_000_000 and row["max"] / 1e9 > soft_budget_s:
                message = f"size {int(size)} took {row['max'] / 1e9:.2f}s (soft budget {soft_budget_s}s)"
                logger.warning(message)
                warnings.append(message)

    doubling = []
    for a, b in zip(per_size, per_size[1:]):
        if b["size"] == 2 * a["size"] and a["median_ns"] > 0:
            doubling.append({"from": a["size"], "to": b["size"], "ratio": b["median_ns"] / a["median_ns"]})

    return {
        "schema_version": config.JSON_SCHEMA_VERSION,
        "adt": adt,
        "engine": engine,
        "rows": len(rows),
        "errors": int((frame["verdict"] == "error").sum()) if not frame.empty else 0,
        "sizes": per_size,
        "doubling_ratios": doubling,
        "warnings": warnings,
    }


def write_csv(rows: List[BenchRow], out: Union[str, Path]) -> Path:
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    frame = pd.DataFrame([asdict(r) for r in rows], columns=[f.name for f in fields(BenchRow)])
    frame.to_csv(path, columns=CSV_COLUMNS, index=False)
    return path


def run_bench(plan: BenchPlan, out: Optional[Union[str, Path]] = None) -> Dict[str, Any]:
    """
    Run the plan and optionally write one CSV row per timed check.

    Args:
        plan: What to generate and how often
        out: CSV destination (header adt,size,rep,seed,verdict,elapsed_ns)

    Returns:
        Summary dict (see summarize_rows)
    """
    plan.validate()
    logger.info("bench %s sizes=%s reps=%d engine=%s", plan.adt.value, list(plan.sizes), plan.reps, plan.engine)
    if plan.jobs > 1 and len(plan.sizes) > 1:
        with ProcessPoolExecutor(max_workers=plan.jobs) as pool:
            chunks = list(pool.map(_run_size, [plan] * len(plan.sizes), plan.sizes))
    else:
        chunks = [_run_size(plan, size) for size in plan.sizes]
    rows = [row for chunk in chunks for row in chunk]
    if out is not None:
        write_csv(rows, out)
    summary = summarize_rows(rows, plan.adt.value, plan.engine)
    if out is not None:
        summary["csv"] = str(out)
    return summary
