"""Delimited-text ingestion, zero-fill/ordinal preprocessing, seeded splits."""

from __future__ import annotations

import csv
import json
import logging
import math
import os
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from pathlib import Path
from typing import Iterable, Optional, Sequence

import numpy as np

from ndlt.core import DataError, DatasetView

log = logging.getLogger(__name__)

DATA_DIR_ENV = "NDLT_DATA_DIR"


@dataclass
class RawTable:
    """Rectangular string table; missing cells are ``None``."""

    header: list[str]
    rows: list[list[Optional[str]]]
    label_column: Optional[str] = None

    @property
    def n_rows(self) -> int:
        return len(self.rows)

    def column(self, name: str) -> list[Optional[str]]:
        j = self.header.index(name)
        return [row[j] for row in self.rows]


@dataclass
class SplitPair:
    train: DatasetView
    test: DatasetView
    seed: int
    ratio: float = 0.7
    train_rows: np.ndarray = field(default=None, repr=False)
    test_rows: np.ndarray = field(default=None, repr=False)


def load_csv(
    path,
    label_column: Optional[str] = None,
    missing_tokens: Iterable[str] = ("",),
    delimiter: str = ",",
) -> RawTable:
    path = Path(path)
    missing = {t.strip() for t in missing_tokens}
    with open(path, newline="", encoding="utf-8") as fh:
        reader = csv.reader(fh, delimiter=delimiter, skipinitialspace=True)
        try:
            header = [h.strip() for h in next(reader)]
        except StopIteration:
            raise DataError(f"{path}: empty file") from None
        rows = []
        for line_no, row in enumerate(reader, start=2):
            if not row or all(not c.strip() for c in row):
                continue
            if len(row) != len(header):
                raise DataError(f"{path}: line {line_no} has {len(row)} fields, expected {len(header)}")
            rows.append([None if c.strip() in missing else c.strip() for c in row])
    if label_column is not None and label_column not in header:
        raise DataError(f"{path}: label column {label_column!r} not in header")
    return RawTable(header, rows, label_column)


def _parse_float(cell: str) -> Optional[float]:
    try:
        value = float(cell)
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def encode_column(cells: Sequence[Optional[str]], vocabulary: Optional[list[str]] = None):
    """Encode one column; returns ``(values, vocabulary or None)``.

    A column is categorical when any present cell fails numeric parsing or
    when a vocabulary is supplied. Categories map to their rank in sorted
    order; missing cells become 0.0 either way.
    """
    present = [c for c in cells if c is not None]
    if vocabulary is None:
        parsed = [_parse_float(c) for c in present]
        if all(v is not None for v in parsed):
            return np.array([0.0 if c is None else float(c) for c in cells]), None
        vocabulary = sorted(set(present))
    codes = {v: float(i) for i, v in enumerate(vocabulary)}
    unseen = {c for c in present if c not in codes}
    if unseen:
        log.warning("unseen categories %s encoded as 0.0", sorted(unseen)[:5])
    return np.array([codes.get(c, 0.0) if c is not None else 0.0 for c in cells]), vocabulary


def _label_matches(cell: str, spec: str) -> bool:
    if cell == spec:
        return True
    a, b = _parse_float(cell), _parse_float(spec)
    return a is not None and b is not None and a == b


def encode_features(raw: RawTable, feature_names: Sequence[str], categories: Optional[dict] = None) -> np.ndarray:
    """Feature matrix for ``feature_names`` using fixed category vocabularies."""
    categories = categories or {}
    missing = [n for n in feature_names if n not in raw.header]
    if missing:
        raise DataError(f"missing feature columns: {missing}")
    cols = []
    for name in feature_names:
        values, _ = encode_column(raw.column(name), categories.get(name))
        cols.append(values)
    if not raw.rows:
        return np.empty((0, len(feature_names)))
    return np.column_stack(cols)


def preprocess(raw: RawTable, positive_class: str, categories: Optional[dict] = None) -> DatasetView:
    """Numeric matrix + {0,1} labels with the positive class mapped to 1."""
    if raw.label_column is None:
        raise DataError("no label column designated")
    labels_raw = raw.column(raw.label_column)
    if any(c is None for c in labels_raw):
        raise DataError("label column has missing values")
    distinct = sorted(set(labels_raw))
    if len(distinct) != 2:
        raise DataError(f"label column must be binary, found {len(distinct)} distinct values")
    pos = [v for v in distinct if _label_matches(v, str(positive_class))]
    if len(pos) != 1:
        raise DataError(f"positive class {positive_class!r} not among labels {distinct}")
    neg = [v for v in distinct if v != pos[0]][0]
    y = np.array([1 if c == pos[0] else 0 for c in labels_raw], dtype=np.int64)

    names = [h for h in raw.header if h != raw.label_column]
    vocab_in = categories or {}
    cols, vocab_out = [], {}
    for name in names:
        cells = raw.column(name)
        if all(c is None for c in cells):
            log.warning("column %r is entirely missing; kept as zeros", name)
        values, vocab = encode_column(cells, vocab_in.get(name))
        if vocab is not None:
            vocab_out[name] = vocab
        cols.append(values)
    if not names:
        raise DataError("table has no feature columns")
    X = np.column_stack(cols) if raw.rows else np.empty((0, len(names)))
    return DatasetView(X, y, names, positive_class=1, label_values=[neg, pos[0]], categories=vocab_out)


def train_test_split(ds: DatasetView, ratio: float = 0.7, seed: int = 0) -> SplitPair:
    """Plain (unstratified) seeded split; the first ``ceil(ratio*n)`` permuted rows train."""
    n = ds.n_samples
    if n < 2:
        raise DataError("need at least two rows to split")
    n_train = math.ceil(Fraction(str(ratio)) * n)
    if not 0 < n_train < n:
        raise DataError(f"ratio {ratio} leaves an empty side for n={n}")
    perm = np.random.Generator(np.random.PCG64(seed)).permutation(n)
    tr, te = perm[:n_train], perm[n_train:]
    return SplitPair(ds.subset(tr), ds.subset(te), seed, ratio, tr, te)


@dataclass(frozen=True)
class DatasetSpec:
    name: str
    file: str
    label_column: str
    positive_class: str
    delimiter: str = ","
    missing_tokens: tuple[str, ...] = ("",)
    expected_n: Optional[int] = None
    expected_d: Optional[int] = None
    source: str = ""
    notes: str = ""


def load_manifest() -> dict[str, DatasetSpec]:
    text = resources.files("ndlt").joinpath("datasets.json").read_text(encoding="utf-8")
    out = {}
    for rec in json.loads(text):
        rec = dict(rec)
        rec["missing_tokens"] = tuple(rec.get("missing_tokens", ("",)))
        out[rec["name"]] = DatasetSpec(**rec)
    return out


def data_dir(explicit=None) -> Path:
    if explicit:
        return Path(explicit)
    return Path(os.environ.get(DATA_DIR_ENV, "data"))


def dataset_path(spec: DatasetSpec, directory=None) -> Path:
    return data_dir(directory) / spec.file


def load_dataset(name: str, directory=None, verify: bool = True) -> DatasetView:
    manifest = load_manifest()
    if name not in manifest:
        raise DataError(f"unknown dataset {name!r}; known: {', '.join(sorted(manifest))}")
    spec = manifest[name]
    path = dataset_path(spec, directory)
    if not path.exists():
        raise DataError(f"dataset file {path} not found; download from {spec.source} ({spec.notes})")
    raw = load_csv(path, spec.label_column, spec.missing_tokens, spec.delimiter)
    ds = preprocess(raw, spec.positive_class)
    if verify:
        if spec.expected_n is not None and ds.n_samples != spec.expected_n:
            raise DataError(f"{name}: expected {spec.expected_n} rows, found {ds.n_samples}")
        if spec.expected_d is not None and ds.n_features != spec.expected_d:
            raise DataError(f"{name}: expected {spec.expected_d} feature columns, found {ds.n_features}")
    return ds
