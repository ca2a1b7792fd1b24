"""Shared domain types: hyperparameters, datasets, tree nodes, serialization."""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, field, fields
from typing import Optional, Sequence, Union

import numpy as np


class NDLTError(Exception):
    """Base class for package errors."""


class HyperparamError(NDLTError, ValueError):
    pass


class DataError(NDLTError, ValueError):
    pass


class InvariantError(NDLTError, AssertionError):
    pass


@dataclass(frozen=True)
class Hyperparams:
    """All tunables of the lookahead tree.

    ``candidates_per_feature=None`` keeps every admissible threshold of a
    feature during parent-level ranking.
    """

    max_depth: int = 10
    min_samples_leaf: int = 1
    r_t: float = 1.0
    gamma: int = 3
    beta: int = 1
    delta: float = 0.99
    w2: float = 0.5
    epsilon: float = 1e-6
    seed: int = 0
    candidates_per_feature: Optional[int] = 1

    def replace(self, **changes) -> "Hyperparams":
        values = asdict(self)
        values.update(changes)
        return Hyperparams(**values)

    def to_dict(self) -> dict:
        return asdict(self)

    @classmethod
    def from_dict(cls, data: dict) -> "Hyperparams":
        known = {f.name for f in fields(cls)}
        return cls(**{k: v for k, v in data.items() if k in known})


def _is_int(value) -> bool:
    return isinstance(value, (int, np.integer)) and not isinstance(value, bool)


def validate_hyperparams(h: Hyperparams) -> None:
    """Raise :class:`HyperparamError` naming the first violated bound."""
    if not _is_int(h.max_depth) or h.max_depth < 0:
        raise HyperparamError("max_depth must be a non-negative integer")
    if not _is_int(h.min_samples_leaf) or h.min_samples_leaf < 1:
        raise HyperparamError("min_samples_leaf must be >= 1")
    if not 0 < h.r_t <= 1:
        raise HyperparamError("r_t out of (0,1]")
    if not _is_int(h.gamma) or h.gamma < 1:
        raise HyperparamError("gamma must be >= 1")
    if not _is_int(h.beta) or h.beta < 1:
        raise HyperparamError("beta must be >= 1")
    if not 0 < h.delta < 1:
        raise HyperparamError("delta out of (0,1)")
    if not 0 <= h.w2 <= 1:
        raise HyperparamError("w2 out of [0,1]")
    if not h.epsilon > 0:
        raise HyperparamError("epsilon must be > 0")
    if not _is_int(h.seed) or h.seed < 0:
        raise HyperparamError("seed must be an unsigned integer")
    cpf = h.candidates_per_feature
    if cpf is not None and (not _is_int(cpf) or cpf < 1):
        raise HyperparamError("candidates_per_feature must be >= 1 or None")


@dataclass
class DatasetView:
    """Numeric feature matrix with dense integer labels.

    ``label_values`` holds the original label strings indexed by class id
    and ``categories`` the per-column vocabulary used for ordinal encoding,
    so that prediction-time files can be encoded identically.
    """

    features: np.ndarray
    labels: np.ndarray
    feature_names: list[str]
    positive_class: int = 1
    label_values: list[str] = field(default_factory=list)
    categories: dict[str, list[str]] = field(default_factory=dict)

    def __post_init__(self):
        self.features = np.asarray(self.features, dtype=float)
        self.labels = np.asarray(self.labels, dtype=np.int64)
        if self.features.ndim != 2:
            raise DataError("features must be a 2-d matrix")
        n, d = self.features.shape
        if n < 1 or d < 1:
            raise DataError(f"dataset must have n >= 1 and d >= 1, got {n}x{d}")
        if self.labels.shape != (n,):
            raise DataError(f"labels length {self.labels.shape[0]} != n_samples {n}")
        if len(self.feature_names) != d:
            raise DataError("feature_names length does not match column count")
        if not np.all(np.isfinite(self.features)):
            raise DataError("non-finite feature values")
        if self.labels.min() < 0:
            raise DataError("labels must be non-negative class ids")

    @property
    def n_samples(self) -> int:
        return self.features.shape[0]

    @property
    def n_features(self) -> int:
        return self.features.shape[1]

    @property
    def n_classes(self) -> int:
        return int(self.labels.max()) + 1

    def subset(self, rows) -> "DatasetView":
        return DatasetView(
            self.features[rows],
            self.labels[rows],
            list(self.feature_names),
            self.positive_class,
            list(self.label_values),
            dict(self.categories),
        )


@dataclass(frozen=True)
class Leaf:
    label: int
    class_counts: tuple[int, ...]

    @property
    def n_samples(self) -> int:
        return sum(self.class_counts)


@dataclass(frozen=True)
class Internal:
    feature: int
    threshold: float
    left: "TreeNode"
    right: "TreeNode"


TreeNode = Union[Leaf, Internal]


@dataclass(frozen=True)
class SplitCandidate:
    feature: int
    threshold: float
    g_upper: float
    g_lower: Optional[float] = None
    e_total: Optional[float] = None


@dataclass(frozen=True)
class TrainedTree:
    root: TreeNode
    hyperparams: Hyperparams
    n_features: int
    depth_reached: int
    n_classes: int = 2
    feature_names: Optional[tuple[str, ...]] = None
    label_values: Optional[tuple[str, ...]] = None
    categories: Optional[dict] = None

    def predict(self, X) -> np.ndarray:
        from ndlt.builder import predict

        return predict(self, X)


def tree_depth(node: TreeNode) -> int:
    if isinstance(node, Leaf):
        return 0
    return 1 + max(tree_depth(node.left), tree_depth(node.right))


def iter_nodes(node: TreeNode, depth: int = 0):
    """Yield ``(node, depth)`` pairs in pre-order, left before right."""
    stack = [(node, depth)]
    while stack:
        current, d = stack.pop()
        yield current, d
        if isinstance(current, Internal):
            stack.append((current.right, d + 1))
            stack.append((current.left, d + 1))


def node_to_dict(node: TreeNode) -> dict:
    if isinstance(node, Leaf):
        return {"kind": "leaf", "label": int(node.label), "counts": [int(c) for c in node.class_counts]}
    return {
        "kind": "internal",
        "feature": int(node.feature),
        "threshold": float(node.threshold),
        "left": node_to_dict(node.left),
        "right": node_to_dict(node.right),
    }


def node_from_dict(data: dict) -> TreeNode:
    try:
        kind = data["kind"]
        if kind == "leaf":
            return Leaf(int(data["label"]), tuple(int(c) for c in data["counts"]))
        if kind == "internal":
            return Internal(
                int(data["feature"]),
                float(data["threshold"]),
                node_from_dict(data["left"]),
                node_from_dict(data["right"]),
            )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"corrupt tree node: {exc}") from exc
    raise DataError(f"corrupt tree node: unknown kind {kind!r}")


def dumps_node(node: TreeNode) -> str:
    """Canonical JSON for a tree structure; floats use shortest round-trip repr."""
    return json.dumps(node_to_dict(node), sort_keys=True, separators=(",", ":"))


def tree_to_dict(tree: TrainedTree) -> dict:
    return {
        "format": "ndlt-tree",
        "version": 1,
        "n_features": tree.n_features,
        "n_classes": tree.n_classes,
        "depth_reached": tree.depth_reached,
        "hyperparams": tree.hyperparams.to_dict(),
        "feature_names": list(tree.feature_names) if tree.feature_names else None,
        "label_values": list(tree.label_values) if tree.label_values else None,
        "categories": tree.categories or {},
        "root": node_to_dict(tree.root),
    }


def dumps_tree(tree: TrainedTree) -> str:
    return json.dumps(tree_to_dict(tree), sort_keys=True, indent=1)


def loads_tree(text: str) -> TrainedTree:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise DataError(f"corrupt model file: {exc}") from exc
    if not isinstance(data, dict) or data.get("format") != "ndlt-tree":
        raise DataError("corrupt model file: not an ndlt-tree document")
    try:
        root = node_from_dict(data["root"])
        tree = TrainedTree(
            root=root,
            hyperparams=Hyperparams.from_dict(data["hyperparams"]),
            n_features=int(data["n_features"]),
            depth_reached=int(data["depth_reached"]),
            n_classes=int(data["n_classes"]),
            feature_names=tuple(data["feature_names"]) if data.get("feature_names") else None,
            label_values=tuple(data["label_values"]) if data.get("label_values") else None,
            categories=data.get("categories") or {},
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise DataError(f"corrupt model file: {exc}") from exc
    check_tree(tree)
    return tree


def check_tree(tree: TrainedTree) -> None:
    """Structural checks that hold for every well-formed tree."""
    if tree.depth_reached > tree.hyperparams.max_depth:
        raise InvariantError("depth_reached exceeds max_depth")
    for node, depth in iter_nodes(tree.root):
        if isinstance(node, Internal):
            if not 0 <= node.feature < tree.n_features:
                raise InvariantError(f"feature index {node.feature} out of range")
            if depth >= tree.hyperparams.max_depth:
                raise InvariantError(f"internal node at depth {depth} >= max_depth")


def leaf_counts_by_replay(tree: TrainedTree, X: np.ndarray, y: Sequence[int]) -> list[tuple[Leaf, list[int]]]:
    """Route rows through the tree and recount labels at every leaf (pre-order)."""
    X = np.asarray(X, dtype=float)
    y = np.asarray(y)
    out = []

    def walk(node, rows):
        if isinstance(node, Leaf):
            counts = [int(np.sum(y[rows] == c)) for c in range(len(node.class_counts))]
            out.append((node, counts))
            return
        mask = X[rows, node.feature] <= node.threshold
        walk(node.left, rows[mask])
        walk(node.right, rows[~mask])

    walk(tree.root, np.arange(len(y)))
    return out
