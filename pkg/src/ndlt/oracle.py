"""Brute-force reference searches for checking the optimized code paths.

Everything here is written from scratch with per-threshold boolean masks;
only :func:`ndlt.impurity.gini` is shared, so that equal partitions score
bit-identically on both sides of a comparison.
"""

from __future__ import annotations

from typing import Optional

import numpy as np

from ndlt.core import Hyperparams, Internal, Leaf, TreeNode
from ndlt.impurity import gini

_TIE = 1e-12


def _all_midpoints(column):
    v = np.unique(column)
    return [(v[i] + v[i + 1]) / 2 for i in range(len(v) - 1)]


def _admissible_splits(X, y, min_leaf):
    """Yield ``(f, s, mask, weighted_gini)`` over every feature and every midpoint."""
    n = len(y)
    for f in range(X.shape[1]):
        for s in _all_midpoints(X[:, f]):
            mask = X[:, f] <= s
            n_l = int(mask.sum())
            n_r = n - n_l
            if n_l < min_leaf or n_r < min_leaf:
                continue
            g = (n_l / n) * gini(y[mask]) + (n_r / n) * gini(y[~mask])
            yield f, float(s), mask, float(g)


def _argmin(items):
    """items: list of (score, f, s, payload); near-ties go to lowest (f, s)."""
    if not items:
        return None
    best = min(it[0] for it in items)
    tied = [it for it in items if it[0] <= best + _TIE]
    return min(tied, key=lambda it: (it[1], it[2]))


def brute_best_gupper(X, y, min_samples_leaf: int = 1) -> Optional[tuple[int, float, float]]:
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    if len(y) > 512:
        raise ValueError("brute_best_gupper is limited to n <= 512")
    items = [(g, f, s, None) for f, s, _, g in _admissible_splits(X, y, min_samples_leaf)]
    best = _argmin(items)
    if best is None:
        return None
    return best[1], best[2], best[0]


def _side_min(X_S, y_S, pool, min_leaf) -> float:
    if len(y_S) < 2 * min_leaf:
        return 0.0
    values = [g for f, s, _, g in _admissible_splits(X_S[:, pool], y_S, min_leaf)]
    return min(values) if values else 0.0


def brute_best_etotal(X, y, h: Hyperparams, depth: int = 0) -> Optional[tuple[int, float, float]]:
    """Exhaustive composite-objective argmin at a node at ``depth``.

    Thresholds are all midpoints (no gamma cap) and every admissible
    threshold of the top-beta features is retained.
    """
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    if n > 256 or d > 6:
        raise ValueError("brute_best_etotal is limited to n <= 256, d <= 6")
    if h.r_t != 1:
        raise ValueError("brute_best_etotal requires r_t == 1")
    m = h.min_samples_leaf
    splits = list(_admissible_splits(X, y, m))
    if not splits:
        return None
    per_feature = {}
    for f, s, mask, g in splits:
        per_feature.setdefault(f, []).append((f, s, mask, g))
    feature_best = sorted(per_feature, key=lambda f: (min(c[3] for c in per_feature[f]), f))
    pool = sorted(feature_best[: h.beta])
    retained = [c for f in pool for c in per_feature[f]]
    e_bar = sum(c[3] for c in retained) / len(retained)
    w1 = (1 - e_bar) * h.delta**depth
    items = []
    for f, s, mask, g_upper in retained:
        g_l = _side_min(X[mask], y[mask], pool, m)
        g_r = _side_min(X[~mask], y[~mask], pool, m)
        g_lower = min(g_l, g_r) + 0.5 * (g_l + g_r)
        e = g_upper * w1 * h.w2 + (g_lower + h.epsilon) * (1 - w1) * (1 - h.w2)
        items.append((e, f, s, None))
    best = _argmin(items)
    return best[1], best[2], best[0]


def _leaf(y, n_classes) -> Leaf:
    counts = [int(np.sum(y == c)) for c in range(n_classes)]
    return Leaf(int(np.argmax(counts)), tuple(counts))


def leaf_impurity(node: TreeNode, X, y) -> float:
    """Sample-weighted Gini summed over the leaves reached by ``(X, y)``."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    n = len(y)
    total = 0.0

    def walk(node, rows):
        nonlocal total
        if rows.size == 0:
            return
        if isinstance(node, Leaf):
            total += rows.size / n * gini(y[rows])
            return
        mask = X[rows, node.feature] <= node.threshold
        walk(node.left, rows[mask])
        walk(node.right, rows[~mask])

    walk(node, np.arange(n))
    return total


def brute_optimal_depth2(X, y, min_samples_leaf: int = 1) -> tuple[TreeNode, float]:
    """Depth-2 tree minimizing total weighted leaf Gini by exhaustive search."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y, dtype=np.int64)
    n, d = X.shape
    if n > 128 or d > 4:
        raise ValueError("brute_optimal_depth2 is limited to n <= 128, d <= 4")
    k = int(y.max()) + 1

    def best_depth1(Xs, ys):
        # returns (subtree, impurity weighted within this subset)
        best_node, best_imp = _leaf(ys, k), gini(ys)
        for f, s, mask, g in _admissible_splits(Xs, ys, min_samples_leaf):
            if g < best_imp - _TIE:
                best_node = Internal(f, s, _leaf(ys[mask], k), _leaf(ys[~mask], k))
                best_imp = g
        return best_node, best_imp

    best_tree, best_imp = _leaf(y, k), gini(y)
    for f, s, mask, _ in _admissible_splits(X, y, min_samples_leaf):
        left, imp_l = best_depth1(X[mask], y[mask])
        right, imp_r = best_depth1(X[~mask], y[~mask])
        n_l = int(mask.sum())
        imp = n_l / n * imp_l + (n - n_l) / n * imp_r
        if imp < best_imp - _TIE:
            best_tree, best_imp = Internal(f, s, left, right), imp
    return best_tree, best_imp
