import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from ndlt.core import DataError, DatasetView
from ndlt.data import encode_column, load_csv, load_dataset, load_manifest, preprocess, train_test_split


def write(tmp_path, text, name="t.csv"):
    p = tmp_path / name
    p.write_text(text, encoding="utf-8")
    return p


def test_load_csv_basic(tmp_path):
    raw = load_csv(write(tmp_path, "a,b,y\n1,2,0\n3,4,1\n5,6,0\n"), "y")
    assert raw.n_rows == 3 and raw.header == ["a", "b", "y"] and raw.label_column == "y"


def test_load_csv_errors(tmp_path):
    with pytest.raises(DataError, match="line 3"):
        load_csv(write(tmp_path, "a,b,y\n1,2,0\n3,4\n"), "y")
    with pytest.raises(DataError, match="empty"):
        load_csv(write(tmp_path, ""), "y")
    with pytest.raises(DataError, match="label column"):
        load_csv(write(tmp_path, "a,b\n1,2\n"), "y")


def test_missing_tokens(tmp_path):
    raw = load_csv(write(tmp_path, "a,y\n?,1\n2,0\n"), "y", ("", "?"))
    assert raw.column("a") == [None, "2"]


def test_semicolon_delimiter(tmp_path):
    raw = load_csv(write(tmp_path, 'a;"y"\n1;"yes"\n2;"no"\n'), "y", delimiter=";")
    assert raw.column("y") == ["yes", "no"]


def test_preprocess_examples(tmp_path):
    raw = load_csv(write(tmp_path, "c,n,y\nb,1.5,yes\na,,no\nb,2,no\n"), "y")
    ds = preprocess(raw, "yes")
    assert ds.features[:, 0].tolist() == [1.0, 0.0, 1.0]
    assert ds.features[:, 1].tolist() == [1.5, 0.0, 2.0]
    assert ds.labels.tolist() == [1, 0, 0]
    assert ds.label_values == ["no", "yes"] and ds.categories == {"c": ["a", "b"]}


def test_preprocess_errors(tmp_path):
    with pytest.raises(DataError, match="binary"):
        preprocess(load_csv(write(tmp_path, "a,y\n1,x\n2,y\n3,z\n"), "y"), "x")
    with pytest.raises(DataError, match="positive class"):
        preprocess(load_csv(write(tmp_path, "a,y\n1,0\n2,1\n"), "y"), "7")


def test_all_missing_column_warns(tmp_path, caplog):
    ds = preprocess(load_csv(write(tmp_path, "a,b,y\n,1,0\n,2,1\n"), "y"), "1")
    assert ds.features[:, 0].tolist() == [0.0, 0.0]
    assert "entirely missing" in caplog.text


def test_numeric_positive_class_matches_float_spelling(tmp_path):
    ds = preprocess(load_csv(write(tmp_path, "a,y\n1,1.0\n2,2.0\n"), "y"), "2")
    assert ds.labels.tolist() == [0, 1]


cells = st.lists(st.one_of(st.none(), st.sampled_from(["red", "green", "blue", "x"])), min_size=1, max_size=30)


@given(cells, st.randoms())
def test_encoding_order_stable(col, r):
    vals, vocab = encode_column(col)
    shuffled = list(col)
    r.shuffle(shuffled)
    _, vocab2 = encode_column(shuffled)
    if vocab is not None:
        assert vocab == vocab2 == sorted(vocab)
    assert np.all(np.isfinite(vals))


@given(st.lists(st.one_of(st.none(), st.floats(-1e9, 1e9, allow_nan=False).map(repr)), min_size=1, max_size=30))
def test_numeric_columns_finite_and_idempotent(col):
    vals, vocab = encode_column(col)
    assert vocab is None and np.all(np.isfinite(vals))
    again, _ = encode_column([repr(float(v)) for v in vals])
    assert again.tolist() == vals.tolist()


def view(n):
    return DatasetView(np.arange(n, dtype=float)[:, None], np.arange(n) % 2, ["a"])


def test_split_sizes_and_determinism():
    sp = train_test_split(view(10), 0.7, 0)
    assert sp.train.n_samples == 7 and sp.test.n_samples == 3
    assert set(sp.train_rows).isdisjoint(sp.test_rows)
    assert sorted([*sp.train_rows, *sp.test_rows]) == list(range(10))
    again = train_test_split(view(10), 0.7, 0)
    assert again.train_rows.tolist() == sp.train_rows.tolist()
    a = train_test_split(view(40), 0.7, 0).train_rows
    b = train_test_split(view(40), 0.7, 1).train_rows
    assert a.tolist() != b.tolist()


def test_split_errors():
    with pytest.raises(DataError):
        train_test_split(view(1))
    with pytest.raises(DataError):
        train_test_split(view(5), ratio=1.0)


def test_manifest_covers_suite():
    m = load_manifest()
    assert len(m) == 13
    assert m["bank"].delimiter == ";" and m["bank"].expected_n == 45211 and m["bank"].expected_d == 16
    assert "?" in m["horse"].missing_tokens
    assert all(spec.source.startswith("http") for spec in m.values())


def test_missing_dataset_message_names_source(tmp_path):
    with pytest.raises(DataError) as err:
        load_dataset("rice", tmp_path)
    assert load_manifest()["rice"].source in str(err.value)
    with pytest.raises(DataError, match="unknown dataset"):
        load_dataset("nope", tmp_path)


def test_load_dataset_verifies_shape(tmp_path):
    spec = load_manifest()["blood"]
    write(tmp_path, f"a,{spec.label_column}\n1,0\n2,1\n", spec.file)
    with pytest.raises(DataError, match="expected"):
        load_dataset("blood", tmp_path)
    assert load_dataset("blood", tmp_path, verify=False).n_samples == 2
