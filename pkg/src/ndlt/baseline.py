"""Greedy Gini CART sharing the threshold rule, admissibility and tie-breaks of the lookahead tree."""

from __future__ import annotations

from typing import Optional

import numpy as np

from ndlt.builder import NodeContext, _Grower, check_inputs, finish_tree, pick_min
from ndlt.core import Hyperparams, SplitCandidate, TrainedTree
from ndlt.lookahead import scan_feature

# Depth cap standing in for "unbounded" in the reference mode.
UNBOUNDED_DEPTH = 10_000


def best_greedy_split(X, y, rows, gamma: Optional[int], min_samples_leaf: int, n_classes: int) -> Optional[SplitCandidate]:
    Xn, yn = X[rows], y[rows]
    candidates = []
    for f in range(X.shape[1]):
        scan = scan_feature(Xn[:, f], yn, n_classes, gamma, min_samples_leaf, f)
        candidates.extend(SplitCandidate(f, float(s), float(g)) for s, g in zip(scan.thresholds, scan.g_upper))
    if not candidates:
        return None
    return pick_min(candidates, lambda c: c.g_upper)


def _build(X, y, h: Hyperparams, gamma: Optional[int], meta=None) -> TrainedTree:
    X, y = check_inputs(X, y, h)
    n_classes = int(y.max()) + 1

    def chooser(ctx: NodeContext):
        return best_greedy_split(X, y, ctx.row_indices, gamma, h.min_samples_leaf, n_classes)

    root = _Grower(X, y, h, chooser, n_classes).grow(np.arange(X.shape[0]), 0)
    return finish_tree(root, X, y, h, n_classes, meta)


def build_greedy_tree(X, y, h: Hyperparams, meta=None) -> TrainedTree:
    """Greedy tree using ``h.gamma`` thresholds per feature.

    Only ``max_depth``, ``min_samples_leaf`` and ``gamma`` are read from ``h``.
    """
    return _build(X, y, h, h.gamma, meta)


def build_exhaustive_thresholds_greedy(X, y, h: Hyperparams, meta=None) -> TrainedTree:
    """Greedy tree over every midpoint of every feature (no threshold cap)."""
    return _build(X, y, h, None, meta)


def reference_hyperparams(h: Optional[Hyperparams] = None) -> Hyperparams:
    """Library-default style CART settings: unbounded depth, leaves of one sample."""
    h = h or Hyperparams()
    return h.replace(max_depth=UNBOUNDED_DEPTH, min_samples_leaf=1)
