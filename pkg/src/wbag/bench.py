"""Benchmark runner over a directory of size-named subdirectories.

Layout::

    root/
      100/  bag_0.bag  bag_1.bag ...
      200/  ...

Every file is parsed, solved and timed; per-size minimum, mean and maximum
solve times are aggregated.  Parsing is not timed.  One untimed warm-up solve
runs before the first measurement.
"""
from __future__ import annotations

import csv
import logging
import math
import os
import re
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Optional, Union

from .bag import BagError, load_bag
from .semantics import SemanticsModel, get_model
from .solver import SolverConfig, SolverError, fixed_point_residual, solve

__all__ = [
    "BenchRecord",
    "BenchmarkResult",
    "SizeStats",
    "read_stats_csv",
    "run_benchmark",
    "write_records_csv",
    "write_stats_csv",
]

log = logging.getLogger(__name__)

PARSE_ERROR = "parse_error"
SOLVER_ERROR = "solver_error"
RECORD_HEADER = ("size", "file", "status", "steps", "wall_ms", "residual")
STATS_HEADER = ("size", "count", "min_ms", "mean_ms", "max_ms")


@dataclass(frozen=True)
class BenchRecord:
    size: int
    file: str
    status: str
    steps: int
    wall_time: float  # seconds
    final_residual: float

    @property
    def timed(self) -> bool:
        return self.status not in (PARSE_ERROR, SOLVER_ERROR)


@dataclass(frozen=True)
class SizeStats:
    size: int
    count: int
    min_ms: float
    mean_ms: float
    max_ms: float


@dataclass
class BenchmarkResult:
    records: list[BenchRecord]
    stats: list[SizeStats]

    def converged_fraction(self) -> float:
        if not self.records:
            return 1.0
        ok = sum(r.status in ("converged", "exact") for r in self.records)
        return ok / len(self.records)


def _natural_key(path: Path):
    return [int(p) if p.isdigit() else p for p in re.split(r"(\d+)", path.name)]


def _collect(root: Path) -> list[tuple[int, Path]]:
    if not root.is_dir():
        raise NotADirectoryError(f"benchmark directory {root} does not exist")
    jobs = []
    sizes = []
    for sub in root.iterdir():
        if not sub.is_dir():
            continue
        if not sub.name.isdigit():
            log.warning("skipping non-numeric benchmark directory %s", sub)
            continue
        sizes.append((int(sub.name), sub))
    for size, sub in sorted(sizes):
        files = [f for f in sub.iterdir() if f.is_file() and not f.name.startswith(".")]
        jobs += [(size, f) for f in sorted(files, key=_natural_key)]
    return jobs


def _run_one(size: int, path: Path, model: SemanticsModel, config: SolverConfig,
             algo: str) -> BenchRecord:
    try:
        bag = load_bag(path)
    except (BagError, OSError, UnicodeDecodeError) as exc:
        log.warning("cannot load %s: %s", path, exc)
        return BenchRecord(size, path.name, PARSE_ERROR, 0, 0.0, math.nan)
    started = time.perf_counter()
    try:
        sol = solve(model, bag, config, algo=algo)
    except SolverError as exc:
        log.warning("solver failed on %s: %s", path, exc)
        return BenchRecord(size, path.name, SOLVER_ERROR, 0, time.perf_counter() - started, math.nan)
    elapsed = time.perf_counter() - started
    residual = fixed_point_residual(model, bag, sol.state)
    return BenchRecord(size, path.name, sol.status, sol.steps, elapsed, residual)


def _aggregate(records: list[BenchRecord]) -> list[SizeStats]:
    by_size: dict[int, list[float]] = {}
    for r in records:
        by_size.setdefault(r.size, [])
        if r.timed:
            by_size[r.size].append(r.wall_time * 1e3)
    stats = []
    for size in sorted(by_size):
        ms = by_size[size]
        if ms:
            stats.append(SizeStats(size, len(ms), min(ms), math.fsum(ms) / len(ms), max(ms)))
        else:
            stats.append(SizeStats(size, 0, math.nan, math.nan, math.nan))
    return stats


def run_benchmark(
    directory: Union[str, os.PathLike],
    model: SemanticsModel | str = "quad",
    config: SolverConfig = SolverConfig(),
    algo: str = "auto",
    jobs: int = 1,
    records_csv: Optional[Union[str, os.PathLike]] = None,
    stats_csv: Optional[Union[str, os.PathLike]] = None,
) -> BenchmarkResult:
    """Solve every benchmark file under ``directory``.

    Files that fail to parse or hit a cap are kept as records with the
    corresponding status.  Stats cover records that produced a timing.
    ``jobs > 1`` solves files on a thread pool; use ``jobs=1`` for clean
    timings.
    """
    model = get_model(model)
    if jobs < 1:
        raise ValueError("jobs must be positive")
    work = _collect(Path(directory))

    if work:
        for _, path in work:
            try:
                solve(model, load_bag(path), config, algo=algo)
                break
            except (BagError, OSError, UnicodeDecodeError, SolverError):
                continue

    if jobs == 1:
        records = [_run_one(size, path, model, config, algo) for size, path in work]
    else:
        with ThreadPoolExecutor(max_workers=jobs) as pool:
            records = list(pool.map(lambda job: _run_one(*job, model, config, algo), work))

    result = BenchmarkResult(records, _aggregate(records))
    if records_csv is not None:
        write_records_csv(result.records, records_csv)
    if stats_csv is not None:
        write_stats_csv(result.stats, stats_csv, model, config, algo)
    return result


def write_records_csv(records, path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RECORD_HEADER)
        for r in records:
            w.writerow([r.size, r.file, r.status, r.steps, f"{r.wall_time * 1e3:.6g}",
                        f"{r.final_residual:.6g}"])


def write_stats_csv(stats, path, model=None, config=None, algo=None) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        if model is not None:
            fh.write(f"# model={get_model(model).key} algo={algo} config={config}; "
                     f"one untimed warm-up solve before timing; parse time excluded\n")
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(STATS_HEADER)
        for s in stats:
            w.writerow([s.size, s.count, f"{s.min_ms:.6g}", f"{s.mean_ms:.6g}", f"{s.max_ms:.6g}"])


def read_stats_csv(path) -> list[SizeStats]:
    with open(path, encoding="utf-8") as fh:
        rows = list(csv.DictReader(line for line in fh if not line.startswith("#")))
    return [SizeStats(int(r["size"]), int(r["count"]), float(r["min_ms"]),
                      float(r["mean_ms"]), float(r["max_ms"])) for r in rows]
