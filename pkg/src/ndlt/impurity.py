"""Gini impurity and weighted split impurity.

``gini_from_histogram`` is the single arithmetic kernel: it accepts one
histogram or a stacked batch of them, and always accumulates the squared
class proportions in class-id order. Every caller (the fast scans and the
brute-force oracles) goes through it, so equal class counts always produce
bit-identical scores.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

# Scores closer than this are treated as tied; genuine gaps between split
# impurities on integer counts are many orders of magnitude larger.
TIE_TOL = 1e-12


@dataclass(frozen=True)
class ClassHistogram:
    counts: tuple[int, ...]

    @property
    def total(self) -> int:
        return sum(self.counts)

    @classmethod
    def of(cls, y, n_classes: int | None = None) -> "ClassHistogram":
        y = np.asarray(y, dtype=np.int64)
        minlength = n_classes if n_classes is not None else 0
        return cls(tuple(int(c) for c in np.bincount(y, minlength=minlength)))


def gini_from_histogram(counts):
    """Gini impurity ``1 - sum_c (n_c / n)^2`` of class counts.

    ``counts`` may be a :class:`ClassHistogram`, a 1-d count vector, or an
    array of shape ``(..., C)``; the result has the leading shape.
    """
    if isinstance(counts, ClassHistogram):
        counts = counts.counts
    counts = np.asarray(counts)
    total = counts.sum(axis=-1)
    if np.any(total <= 0):
        raise ValueError("gini of an empty histogram is undefined")
    acc = np.zeros(total.shape, dtype=float)
    for c in range(counts.shape[-1]):
        p = counts[..., c] / total
        acc = acc + p * p
    result = 1.0 - acc
    if result.ndim == 0:
        return float(result)
    return result


def gini(y) -> float:
    y = np.asarray(y, dtype=np.int64)
    if y.size == 0:
        raise ValueError("gini of an empty label sequence is undefined")
    return gini_from_histogram(np.bincount(y))


def weighted_impurity(n_left, g_left, n_right, g_right):
    """``(n_L/n)·G_L + (n_R/n)·G_R``; works elementwise on arrays."""
    n = n_left + n_right
    return (n_left / n) * g_left + (n_right / n) * g_right


def split_impurity(y_left, y_right) -> float:
    y_left = np.asarray(y_left, dtype=np.int64)
    y_right = np.asarray(y_right, dtype=np.int64)
    if y_left.size == 0 or y_right.size == 0:
        raise ValueError("split_impurity requires two non-empty sides")
    n_classes = int(max(y_left.max(), y_right.max())) + 1
    g_left = gini_from_histogram(np.bincount(y_left, minlength=n_classes))
    g_right = gini_from_histogram(np.bincount(y_right, minlength=n_classes))
    return float(weighted_impurity(y_left.size, g_left, y_right.size, g_right))


def split_impurity_from_counts(left_counts, right_counts):
    """Batch form of :func:`split_impurity` over ``(..., C)`` count arrays."""
    left_counts = np.asarray(left_counts)
    right_counts = np.asarray(right_counts)
    n_left = left_counts.sum(axis=-1)
    n_right = right_counts.sum(axis=-1)
    return weighted_impurity(n_left, gini_from_histogram(left_counts), n_right, gini_from_histogram(right_counts))
