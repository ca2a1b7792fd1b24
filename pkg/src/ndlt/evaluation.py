"""Grid runner over (beta, gamma) x w2 x seeds, summaries and CSV output."""

from __future__ import annotations

import csv
import math
import time
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Optional, Sequence

from ndlt.baseline import build_exhaustive_thresholds_greedy, reference_hyperparams
from ndlt.builder import build_tree
from ndlt.core import DatasetView, Hyperparams, NDLTError
from ndlt.data import train_test_split
from ndlt.metrics import accuracy, confusion, f1

DEFAULT_CONFIGS = ((1, 3), (3, 3), (3, 5))
W2_GRID = tuple(k / 10 for k in range(1, 11))
SEEDS = tuple(range(10))
QUICK_W2_GRID = (0.1, 0.5, 0.9)
QUICK_SEEDS = (0, 1, 2)
MID_WINDOW = (0.5, 0.9)

RESULT_COLUMNS = ["dataset", "beta", "gamma", "w2", "seed", "f1", "accuracy", "train_seconds"]
SUMMARY_COLUMNS = ["dataset", "beta", "gamma", "mean_f1", "mid_f1", "max_f1", "mean_acc", "mid_acc", "max_acc"]


@dataclass(frozen=True)
class ExperimentRecord:
    dataset: str
    beta: int
    gamma: int
    w2: float
    seed: int
    f1: float
    accuracy: float
    train_seconds: float = 0.0


@dataclass(frozen=True)
class SummaryRow:
    dataset: str
    beta: int
    gamma: int
    mean_f1: float
    mid_f1: float
    max_f1: float
    mean_acc: float
    mid_acc: float
    max_acc: float


class CellError(NDLTError):
    pass


def in_mid_window(w2: float) -> bool:
    lo, hi = MID_WINDOW
    return lo - 1e-9 <= w2 <= hi + 1e-9


def run_cell(ds: DatasetView, name: str, beta: int, gamma: int, w2: float, seed: int, h_base: Hyperparams) -> ExperimentRecord:
    """Train and score one grid cell; the seed drives both the split and the model."""
    try:
        split = train_test_split(ds, 0.7, seed)
        h = h_base.replace(beta=beta, gamma=gamma, w2=w2, seed=seed)
        t0 = time.perf_counter()
        tree = build_tree(split.train.features, split.train.labels, h)
        elapsed = time.perf_counter() - t0
        c = confusion(split.test.labels, tree.predict(split.test.features), ds.positive_class)
    except Exception as exc:
        raise CellError(f"cell dataset={name} beta={beta} gamma={gamma} w2={w2} seed={seed}: {exc}") from exc
    return ExperimentRecord(name, beta, gamma, w2, seed, f1(c), accuracy(c), elapsed)


def _run_cell_args(args):
    return run_cell(*args)


def run_grid(
    ds: DatasetView,
    name: str,
    configs: Sequence[tuple[int, int]] = DEFAULT_CONFIGS,
    w2_grid: Sequence[float] = W2_GRID,
    seeds: Sequence[int] = SEEDS,
    h_base: Optional[Hyperparams] = None,
    jobs: int = 1,
) -> list[ExperimentRecord]:
    if not configs or not w2_grid or not seeds:
        raise ValueError("configs, w2_grid and seeds must be non-empty")
    h_base = h_base or Hyperparams()
    cells = [(ds, name, b, g, w2, s, h_base) for b, g in configs for w2 in w2_grid for s in seeds]
    if jobs <= 1:
        return [run_cell(*c) for c in cells]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        # map preserves submission order, so output order is canonical
        return list(pool.map(_run_cell_args, cells))


@dataclass(frozen=True)
class BaselineRecord:
    dataset: str
    seed: int
    f1: float
    accuracy: float
    train_seconds: float = 0.0


def run_baseline(ds: DatasetView, name: str, seeds: Sequence[int] = SEEDS, h: Optional[Hyperparams] = None) -> list[BaselineRecord]:
    """Reference-mode greedy tree on the same seeded splits as :func:`run_grid`."""
    h = h or reference_hyperparams()
    out = []
    for seed in seeds:
        split = train_test_split(ds, 0.7, seed)
        t0 = time.perf_counter()
        tree = build_exhaustive_thresholds_greedy(split.train.features, split.train.labels, h)
        elapsed = time.perf_counter() - t0
        c = confusion(split.test.labels, tree.predict(split.test.features), ds.positive_class)
        out.append(BaselineRecord(name, seed, f1(c), accuracy(c), elapsed))
    return out


def _mean(values: Iterable[float]) -> float:
    values = list(values)
    return math.fsum(values) / len(values) if values else math.nan


def summarize(records: Iterable[ExperimentRecord]) -> list[SummaryRow]:
    """Seed-average every w2 cell, then take the mean, mid-window mean and max over cells."""
    groups: dict[tuple, dict[float, list[ExperimentRecord]]] = defaultdict(lambda: defaultdict(list))
    for r in records:
        groups[(r.dataset, r.beta, r.gamma)][r.w2].append(r)
    rows = []
    for key in sorted(groups):
        cells = groups[key]
        seed_sets = {tuple(sorted(r.seed for r in recs)) for recs in cells.values()}
        if len(seed_sets) != 1:
            raise ValueError(f"incomplete grid for {key}: w2 cells cover different seeds")
        w2s = sorted(cells)
        avg_f1 = {w: _mean(r.f1 for r in cells[w]) for w in w2s}
        avg_acc = {w: _mean(r.accuracy for r in cells[w]) for w in w2s}
        mid = [w for w in w2s if in_mid_window(w)]
        rows.append(
            SummaryRow(
                *key,
                mean_f1=_mean(avg_f1.values()),
                mid_f1=_mean(avg_f1[w] for w in mid),
                max_f1=max(avg_f1.values()),
                mean_acc=_mean(avg_acc.values()),
                mid_acc=_mean(avg_acc[w] for w in mid),
                max_acc=max(avg_acc.values()),
            )
        )
    return rows


def _fmt(value) -> str:
    if isinstance(value, float):
        return repr(value)
    return str(value)


def write_results_csv(records: Sequence[ExperimentRecord], path, include_timing: bool = True) -> Path:
    """Write per-cell records; with ``include_timing=False`` train_seconds is left blank."""
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(RESULT_COLUMNS)
        for r in records:
            timing = _fmt(r.train_seconds) if include_timing else ""
            w.writerow([r.dataset, r.beta, r.gamma, _fmt(r.w2), r.seed, _fmt(r.f1), _fmt(r.accuracy), timing])
    return path


def read_results_csv(path) -> list[ExperimentRecord]:
    out = []
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            out.append(
                ExperimentRecord(
                    row["dataset"],
                    int(row["beta"]),
                    int(row["gamma"]),
                    float(row["w2"]),
                    int(row["seed"]),
                    float(row["f1"]),
                    float(row["accuracy"]),
                    float(row["train_seconds"]) if row["train_seconds"] else math.nan,
                )
            )
    return out


def write_summary_csv(rows: Sequence[SummaryRow], path) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(SUMMARY_COLUMNS)
        for r in rows:
            w.writerow([_fmt(getattr(r, c)) for c in SUMMARY_COLUMNS])
    return path


def write_baseline_csv(records: Sequence[BaselineRecord], path, include_timing: bool = True) -> Path:
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", "seed", "f1", "accuracy", "train_seconds"])
        for r in records:
            w.writerow([r.dataset, r.seed, _fmt(r.f1), _fmt(r.accuracy), _fmt(r.train_seconds) if include_timing else ""])
    return path


def emit_boxplot_data(records: Sequence[ExperimentRecord], path) -> int:
    """Write the per-run F1 values inside the mid w2 window; returns the group count."""
    rows = [r for r in records if in_mid_window(r.w2)]
    if not rows:
        raise ValueError("no records in w2 window")
    path = Path(path)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["dataset", "beta", "gamma", "w2", "seed", "f1"])
        for r in rows:
            w.writerow([r.dataset, r.beta, r.gamma, _fmt(r.w2), r.seed, _fmt(r.f1)])
    return len({(r.dataset, r.beta, r.gamma) for r in rows})
