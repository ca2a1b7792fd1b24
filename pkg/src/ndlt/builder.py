"""Recursive construction of the next-depth lookahead tree.

Random draws come from one ``numpy.random.Generator(PCG64(seed))`` per
training run and are consumed in pre-order: parent feature sampling at a
node, then for each retained candidate (ascending feature, threshold) the
left-side and right-side inner sampling, then the left subtree, then the
right subtree. With ``r_t == 1`` no draws are made.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np

from ndlt.core import (
    DataError,
    Hyperparams,
    Internal,
    Leaf,
    SplitCandidate,
    TrainedTree,
    TreeNode,
    tree_depth,
    validate_hyperparams,
)
from ndlt.impurity import TIE_TOL, split_impurity_from_counts
from ndlt.lookahead import lower_eval, sample_features, scan_feature, total_error


@dataclass
class NodeContext:
    row_indices: np.ndarray
    depth: int
    e_bar: float = math.nan


@dataclass(frozen=True)
class FixedSplitPlan:
    """Per-depth (feature, threshold) overrides; ``None`` entries are skipped."""

    splits: tuple[Optional[tuple[int, float]], ...] = ()

    def at(self, depth: int) -> Optional[tuple[int, float]]:
        if depth < len(self.splits):
            return self.splits[depth]
        return None

    @classmethod
    def from_list(cls, entries, feature_names: Optional[Sequence[str]] = None) -> "FixedSplitPlan":
        splits = []
        for entry in entries:
            if entry is None:
                splits.append(None)
                continue
            feature, threshold = entry
            if isinstance(feature, str):
                if feature_names is None or feature not in feature_names:
                    raise DataError(f"fixed split references unknown feature {feature!r}")
                feature = list(feature_names).index(feature)
            threshold = float(threshold)
            if not math.isfinite(threshold):
                raise DataError("fixed split threshold must be finite")
            splits.append((int(feature), threshold))
        return cls(tuple(splits))


@dataclass
class Ranking:
    retained: list[SplitCandidate]
    e_bar: float
    pool: list[int]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def majority_leaf(y: np.ndarray, n_classes: int) -> Leaf:
    counts = np.bincount(y, minlength=n_classes)
    # argmax returns the lowest class id among ties
    return Leaf(int(np.argmax(counts)), tuple(int(c) for c in counts))


def pick_min(candidates: Sequence[SplitCandidate], score: Callable[[SplitCandidate], float]) -> SplitCandidate:
    """Minimum score; near-ties go to the lowest (feature, threshold)."""
    best = min(score(c) for c in candidates)
    tied = [c for c in candidates if score(c) <= best + TIE_TOL]
    return min(tied, key=lambda c: (c.feature, c.threshold))


def rank_parent_candidates(X, y, ctx: NodeContext, h: Hyperparams, rng, n_classes: Optional[int] = None) -> Ranking:
    rows = ctx.row_indices
    Xn, yn = X[rows], y[rows]
    if n_classes is None:
        n_classes = int(y.max()) + 1
    kept: dict[int, list[SplitCandidate]] = {}
    for f in sample_features(range(X.shape[1]), h.r_t, rng):
        scan = scan_feature(Xn[:, f], yn, n_classes, h.gamma, h.min_samples_leaf, f)
        if scan.g_upper.size == 0:
            continue
        # lowest impurity first, lower threshold on ties
        order = np.lexsort((scan.thresholds, scan.g_upper))
        if h.candidates_per_feature is not None:
            order = order[: h.candidates_per_feature]
        kept[f] = [SplitCandidate(f, float(scan.thresholds[i]), float(scan.g_upper[i])) for i in order]
    if not kept:
        ctx.e_bar = math.nan
        return Ranking([], math.nan, [])
    ranked = sorted(kept, key=lambda f: (kept[f][0].g_upper, f))
    pool = sorted(ranked[: h.beta])
    retained = sorted(
        (c for f in pool for c in kept[f]),
        key=lambda c: (c.feature, c.threshold),
    )
    e_bar = float(np.mean([c.g_upper for c in retained]))
    ctx.e_bar = e_bar
    return Ranking(retained, e_bar, pool)


def split_rows(X, rows: np.ndarray, feature: int, threshold: float) -> tuple[np.ndarray, np.ndarray]:
    mask = X[rows, feature] <= threshold
    return rows[mask], rows[~mask]


def score_candidates(X, y, ctx: NodeContext, ranking: Ranking, h: Hyperparams, rng, n_classes: int) -> list[SplitCandidate]:
    scored = []
    for cand in ranking.retained:
        left, right = split_rows(X, ctx.row_indices, cand.feature, cand.threshold)
        g_upper = float(
            split_impurity_from_counts(np.bincount(y[left], minlength=n_classes), np.bincount(y[right], minlength=n_classes))
        )
        scores = lower_eval(X[left], y[left], X[right], y[right], ranking.pool, h, rng, n_classes)
        e_total = total_error(g_upper, scores.g_lower, ranking.e_bar, ctx.depth, h)
        scored.append(SplitCandidate(cand.feature, cand.threshold, g_upper, scores.g_lower, e_total))
    return scored


def choose_split(X, y, ctx: NodeContext, h: Hyperparams, rng, n_classes: Optional[int] = None, trace: Optional[list] = None):
    """Return the retained candidate minimizing the composite objective, or ``None``."""
    if n_classes is None:
        n_classes = int(y.max()) + 1
    ranking = rank_parent_candidates(X, y, ctx, h, rng, n_classes)
    if not ranking.retained:
        return None
    scored = score_candidates(X, y, ctx, ranking, h, rng, n_classes)
    best = pick_min(scored, lambda c: c.e_total)
    if trace is not None:
        trace.append(
            {
                "depth": ctx.depth,
                "n": int(len(ctx.row_indices)),
                "e_bar": ranking.e_bar,
                "pool": ranking.pool,
                "candidates": [
                    {"f": c.feature, "s": c.threshold, "g_upper": c.g_upper, "g_lower": c.g_lower, "e_total": c.e_total}
                    for c in scored
                ],
                "chosen": {"f": best.feature, "s": best.threshold},
            }
        )
    return best


@dataclass
class _Grower:
    """Shared recursion for the lookahead tree and the greedy baseline."""

    X: np.ndarray
    y: np.ndarray
    h: Hyperparams
    chooser: Callable[[NodeContext], Optional[SplitCandidate]]
    n_classes: int
    fixed_plan: Optional[FixedSplitPlan] = None
    trace: Optional[list] = field(default=None)

    def grow(self, rows: np.ndarray, depth: int) -> TreeNode:
        y_node = self.y[rows]
        h = self.h
        if np.all(y_node == y_node[0]) or rows.size <= h.min_samples_leaf or depth >= h.max_depth:
            return majority_leaf(y_node, self.n_classes)
        planned = self.fixed_plan.at(depth) if self.fixed_plan is not None else None
        if planned is not None:
            feature, threshold = planned
        else:
            chosen = self.chooser(NodeContext(rows, depth))
            if chosen is None:
                return majority_leaf(y_node, self.n_classes)
            feature, threshold = chosen.feature, chosen.threshold
        left, right = split_rows(self.X, rows, feature, threshold)
        if left.size < h.min_samples_leaf or right.size < h.min_samples_leaf:
            return majority_leaf(y_node, self.n_classes)
        return Internal(feature, threshold, self.grow(left, depth + 1), self.grow(right, depth + 1))


def check_inputs(X, y, h: Hyperparams):
    validate_hyperparams(h)
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    if X.ndim != 2:
        raise DataError("X must be a 2-d matrix")
    if y.ndim != 1 or y.shape[0] != X.shape[0]:
        raise DataError(f"dimension mismatch: X has {X.shape[0]} rows, y has {y.shape[0] if y.ndim else 0}")
    if X.shape[0] == 0:
        raise DataError("cannot train on an empty dataset")
    if not np.all(np.isfinite(X)):
        raise DataError("X contains non-finite values")
    if not np.issubdtype(y.dtype, np.integer) or y.min() < 0:
        raise DataError("labels must be non-negative integer class ids")
    return X, y.astype(np.int64)


def finish_tree(root: TreeNode, X, y, h: Hyperparams, n_classes: int, meta: Optional[dict] = None) -> TrainedTree:
    meta = meta or {}
    return TrainedTree(
        root=root,
        hyperparams=h,
        n_features=X.shape[1],
        depth_reached=tree_depth(root),
        n_classes=n_classes,
        feature_names=meta.get("feature_names"),
        label_values=meta.get("label_values"),
        categories=meta.get("categories"),
    )


def build_tree(
    X,
    y,
    h: Hyperparams,
    fixed_plan: Optional[FixedSplitPlan] = None,
    trace: Optional[list] = None,
    meta: Optional[dict] = None,
) -> TrainedTree:
    """Train a lookahead tree.

    Parameters
    ----------
    X, y : training matrix and dense integer labels.
    h : hyperparameters; validated before training.
    fixed_plan : optional per-depth split overrides.
    trace : if a list is given, one record per dynamically split node is
        appended (retained candidates with their three scores).
    meta : optional feature/label metadata copied onto the tree.
    """
    X, y = check_inputs(X, y, h)
    if fixed_plan is not None:
        for entry in fixed_plan.splits:
            if entry is not None and not 0 <= entry[0] < X.shape[1]:
                raise DataError(f"fixed split feature {entry[0]} out of range for {X.shape[1]} columns")
    n_classes = int(y.max()) + 1
    rng = make_rng(h.seed)

    def chooser(ctx: NodeContext):
        return choose_split(X, y, ctx, h, rng, n_classes, trace)

    grower = _Grower(X, y, h, chooser, n_classes, fixed_plan, trace)
    root = grower.grow(np.arange(X.shape[0]), 0)
    return finish_tree(root, X, y, h, n_classes, meta)


def predict(tree: TrainedTree, X) -> np.ndarray:
    X = np.asarray(X, dtype=float)
    if X.ndim == 1 and X.size == 0:
        return np.empty(0, dtype=np.int64)
    if X.ndim != 2 or X.shape[1] != tree.n_features:
        got = X.shape[1] if X.ndim == 2 else X.ndim
        raise DataError(f"expected {tree.n_features} feature columns, got {got}")
    out = np.empty(X.shape[0], dtype=np.int64)
    stack = [(tree.root, np.arange(X.shape[0]))]
    while stack:
        node, rows = stack.pop()
        if isinstance(node, Leaf):
            out[rows] = node.label
            continue
        mask = X[rows, node.feature] <= node.threshold
        stack.append((node.left, rows[mask]))
        stack.append((node.right, rows[~mask]))
    return out
