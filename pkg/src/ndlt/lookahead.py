"""Threshold generation, the one-step side search, and the composite objective."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from ndlt.core import Hyperparams
from ndlt.impurity import gini_from_histogram, weighted_impurity


@dataclass(frozen=True)
class ThresholdSet:
    feature: int
    thresholds: tuple[float, ...]
    u_f: int


@dataclass(frozen=True)
class LookaheadScores:
    g_left_min: float
    g_right_min: float
    g_lower: float


def gap_indices(u_f: int, gamma: Optional[int]) -> np.ndarray:
    """Indices of the gaps (between consecutive distinct values) to keep.

    All gaps when ``u_f <= gamma`` (or ``gamma is None``); otherwise
    ``gamma`` evenly spaced order statistics, position
    ``round_half_up(k * u_f / (gamma + 1)) - 1`` for ``k = 1..gamma``.
    """
    if u_f <= 0:
        return np.empty(0, dtype=np.int64)
    if gamma is None or u_f <= gamma:
        return np.arange(u_f, dtype=np.int64)
    denom = 2 * (gamma + 1)
    picks = []
    for k in range(1, gamma + 1):
        idx = (2 * k * u_f + gamma + 1) // denom - 1
        idx = min(max(idx, 0), u_f - 1)
        if not picks or picks[-1] != idx:
            picks.append(idx)
    return np.asarray(picks, dtype=np.int64)


def midpoints(lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
    mid = (lo + hi) / 2.0
    # Adjacent doubles can round the midpoint up onto ``hi``; pull it back so
    # that ``x <= s`` still separates the two values.
    return np.where(mid >= hi, lo, mid)


def generate_thresholds(column_values, gamma: Optional[int], feature: int = 0) -> ThresholdSet:
    values = np.asarray(column_values, dtype=float)
    if values.size == 0:
        raise ValueError("generate_thresholds needs at least one value")
    distinct = np.unique(values)
    u_f = max(distinct.size - 1, 0)
    idx = gap_indices(u_f, gamma)
    mids = midpoints(distinct[idx], distinct[idx + 1]) if idx.size else np.empty(0)
    return ThresholdSet(feature, tuple(float(t) for t in mids), u_f)


@dataclass(frozen=True)
class FeatureScan:
    """Admissible thresholds of one feature with their split impurities."""

    feature: int
    thresholds: np.ndarray
    g_upper: np.ndarray
    n_left: np.ndarray
    u_f: int


def scan_feature(
    column: np.ndarray,
    y: np.ndarray,
    n_classes: int,
    gamma: Optional[int],
    min_samples_leaf: int,
    feature: int = 0,
) -> FeatureScan:
    """Score the generated thresholds of one column with a single sort.

    Only thresholds whose two sides both hold ``min_samples_leaf`` rows are
    returned; ``thresholds`` comes out ascending.
    """
    order = np.argsort(column, kind="stable")
    xs = column[order]
    n = xs.size
    # last position of each run of equal values
    run_ends = np.flatnonzero(np.diff(xs) != 0)
    u_f = run_ends.size
    idx = gap_indices(u_f, gamma)
    if idx.size == 0:
        empty = np.empty(0)
        return FeatureScan(feature, empty, empty, np.empty(0, dtype=np.int64), u_f)
    cut = run_ends[idx]
    n_left = cut + 1
    ok = (n_left >= min_samples_leaf) & (n - n_left >= min_samples_leaf)
    cut, n_left = cut[ok], n_left[ok]
    if cut.size == 0:
        empty = np.empty(0)
        return FeatureScan(feature, empty, empty, np.empty(0, dtype=np.int64), u_f)
    onehot = np.zeros((n, n_classes), dtype=np.int64)
    onehot[np.arange(n), y[order]] = 1
    cum = np.cumsum(onehot, axis=0)
    left = cum[cut]
    right = cum[-1] - left
    g = weighted_impurity(n_left, gini_from_histogram(left), n - n_left, gini_from_histogram(right))
    thresholds = midpoints(xs[cut], xs[cut + 1])
    return FeatureScan(feature, thresholds, np.asarray(g, dtype=float), n_left, u_f)


def sample_features(pool: Sequence[int], r_t: float, rng: Optional[np.random.Generator]) -> list[int]:
    """Draw ``ceil(r_t * |pool|)`` features without replacement, ascending.

    ``r_t == 1`` returns the pool itself and leaves ``rng`` untouched, so
    full-sampling runs do not depend on the generator at all.
    """
    pool = sorted(int(f) for f in pool)
    k = max(1, math.ceil(r_t * len(pool)))
    if k >= len(pool):
        return pool
    if rng is None:
        raise ValueError("feature subsampling requires a random generator")
    picked = rng.permutation(len(pool))[:k]
    return sorted(pool[i] for i in picked)


def compute_side_min_impurity(
    X_S: np.ndarray,
    y_S: np.ndarray,
    top_beta_pool: Sequence[int],
    h: Hyperparams,
    rng: Optional[np.random.Generator],
    n_classes: Optional[int] = None,
) -> float:
    """Best admissible inner split impurity of one child, 0 when none exists."""
    if len(top_beta_pool) == 0:
        raise ValueError("top_beta_pool must be non-empty")
    if len(y_S) < 2 * h.min_samples_leaf:
        return 0.0
    if n_classes is None:
        n_classes = int(np.max(y_S)) + 1
    best = math.inf
    for f in sample_features(top_beta_pool, h.r_t, rng):
        scan = scan_feature(X_S[:, f], y_S, n_classes, h.gamma, h.min_samples_leaf, f)
        if scan.g_upper.size:
            best = min(best, float(scan.g_upper.min()))
    return 0.0 if best == math.inf else best


def aggregate_lower(g_left_min: float, g_right_min: float) -> LookaheadScores:
    g_lower = min(g_left_min, g_right_min) + (g_left_min + g_right_min) / 2
    return LookaheadScores(g_left_min, g_right_min, g_lower)


def lower_eval(X_L, y_L, X_R, y_R, top_beta_pool, h: Hyperparams, rng, n_classes=None) -> LookaheadScores:
    # left side consumes the generator first
    g_left = compute_side_min_impurity(X_L, y_L, top_beta_pool, h, rng, n_classes)
    g_right = compute_side_min_impurity(X_R, y_R, top_beta_pool, h, rng, n_classes)
    return aggregate_lower(g_left, g_right)


def weight_w1(depth: int, e_bar: float, delta: float) -> float:
    if depth < 0:
        raise ValueError("depth must be non-negative")
    return (1.0 - e_bar) * delta**depth


def total_error(g_upper: float, g_lower: float, e_bar: float, depth: int, h: Hyperparams) -> float:
    w1 = weight_w1(depth, e_bar, h.delta)
    w2 = h.w2
    return g_upper * w1 * w2 + (g_lower + h.epsilon) * (1.0 - w1) * (1.0 - w2)
