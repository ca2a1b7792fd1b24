import os
from pathlib import Path

import numpy as np
import pytest


def random_instance(rng, n_max=64, d_max=6, n_min=2):
    """Binary-label dataset mixing continuous and small-integer columns."""
    n = int(rng.integers(n_min, n_max + 1))
    d = int(rng.integers(1, d_max + 1))
    cols = []
    for _ in range(d):
        kind = rng.integers(3)
        if kind == 0:
            cols.append(np.round(rng.normal(size=n), 2))
        elif kind == 1:
            cols.append(rng.integers(0, 4, size=n).astype(float))
        else:
            cols.append(rng.integers(0, 2, size=n).astype(float))
    X = np.column_stack(cols)
    # labels loosely tied to the first column so trees have something to find
    logits = X[:, 0] + rng.normal(scale=1.0, size=n)
    y = (logits > np.median(logits)).astype(np.int64)
    return X, y


def xor_dataset(copies=4):
    X = np.array([[0, 0], [0, 1], [1, 0], [1, 1]] * copies, dtype=float)
    y = np.array([0, 1, 1, 0] * copies)
    return X, y


def breast_csv(directory: Path) -> Path:
    """Write the WDBC data in the manifest's CSV layout (diagnosis M/B).

    Prefers a user-provided file in ``$NDLT_DATA_DIR``; otherwise uses the
    copy bundled with scikit-learn.
    """
    user = Path(os.environ.get("NDLT_DATA_DIR", "data")) / "breast.csv"
    if user.exists():
        return user
    sk = pytest.importorskip("sklearn.datasets")
    bunch = sk.load_breast_cancer()
    path = directory / "breast.csv"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(",".join(["diagnosis", *bunch.feature_names]) + "\n")
        for row, target in zip(bunch.data, bunch.target):
            label = "B" if target == 1 else "M"
            fh.write(",".join([label, *(repr(float(v)) for v in row)]) + "\n")
    return path
