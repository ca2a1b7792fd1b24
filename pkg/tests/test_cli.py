import json
import re

import numpy as np
import pytest

from ndlt.cli import main
from ndlt.core import Internal, iter_nodes, loads_tree
from ndlt.data import encode_features, load_csv


@pytest.fixture
def csv_path(tmp_path, monkeypatch):
    monkeypatch.chdir(tmp_path)
    rng = np.random.default_rng(0)
    a = rng.normal(size=60).round(3)
    b = rng.integers(0, 3, 60)
    colour = rng.choice(["red", "blue"], 60)
    label = np.where(a + 0.3 * b > 0.2, "yes", "no")
    lines = ["a,b,colour,label"] + [f"{x},{y},{c},{l}" for x, y, c, l in zip(a, b, colour, label)]
    path = tmp_path / "toy.csv"
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


TRAIN = ["train", "--data", "toy.csv", "--label", "label", "--positive", "yes"]


def test_train_smoke(csv_path, capsys):
    code = main(TRAIN + ["--beta", "1", "--gamma", "3", "--w2", "0.5", "--seed", "0", "--out", "tree.json"])
    out = capsys.readouterr()
    assert code == 0
    assert re.search(r"^f1=\d\.\d+$", out.out, re.M) and re.search(r"^accuracy=\d\.\d+$", out.out, re.M)
    assert "effective config" in out.err
    assert loads_tree((csv_path.parent / "tree.json").read_text()).n_features == 3


def test_train_bad_w2(csv_path, capsys):
    assert main(TRAIN + ["--w2", "1.5"]) == 2
    assert "w2" in capsys.readouterr().err


def test_train_missing_file(csv_path, capsys):
    assert main(["train", "--data", "nope.csv", "--label", "label"]) == 3


def test_train_baseline_and_trace(csv_path):
    assert main(TRAIN + ["--baseline", "--out", "dt.json"]) == 0
    assert main(TRAIN + ["--trace", "trace.jsonl", "--out", "t.json", "--beta", "2"]) == 0
    lines = (csv_path.parent / "trace.jsonl").read_text().splitlines()
    assert lines and all("chosen" in json.loads(l) for l in lines)


def test_fixed_splits(csv_path):
    (csv_path.parent / "plan.json").write_text(json.dumps([["colour", 0.5], None]))
    assert main(TRAIN + ["--fixed-splits", "plan.json", "--out", "fx.json"]) == 0
    root = loads_tree((csv_path.parent / "fx.json").read_text()).root
    assert (root.feature, root.threshold) == (2, 0.5)


def test_predict_round_trip(csv_path, capsys):
    main(TRAIN + ["--out", "tree.json"])
    capsys.readouterr()
    assert main(["predict", "--model", "tree.json", "--data", "toy.csv", "--out", "pred.txt"]) == 0
    pred = (csv_path.parent / "pred.txt").read_text().splitlines()
    assert len(pred) == 60 and set(pred) <= {"yes", "no"}
    tree = loads_tree((csv_path.parent / "tree.json").read_text())
    X = encode_features(load_csv(csv_path), tree.feature_names, tree.categories)
    assert pred == [tree.label_values[i] for i in tree.predict(X)]


def test_predict_errors_and_empty(csv_path, capsys):
    main(TRAIN + ["--out", "tree.json"])
    (csv_path.parent / "bad.csv").write_text("a,b\n1,2\n")
    assert main(["predict", "--model", "tree.json", "--data", "bad.csv"]) == 3
    (csv_path.parent / "empty.csv").write_text("")
    capsys.readouterr()
    assert main(["predict", "--model", "tree.json", "--data", "empty.csv"]) == 0
    assert capsys.readouterr().out == ""
    (csv_path.parent / "corrupt.json").write_text("{not json")
    assert main(["predict", "--model", "corrupt.json", "--data", "toy.csv"]) == 3


def test_inspect_stump_and_dot(tmp_path, monkeypatch, capsys):
    monkeypatch.chdir(tmp_path)
    (tmp_path / "s.csv").write_text("x,y\n1,0\n2,0\n3,1\n4,1\n")
    main(["train", "--data", "s.csv", "--label", "y", "--split-ratio", "0.75", "--out", "s.json"])
    capsys.readouterr()
    assert main(["inspect", "--model", "s.json", "--dot", "s.dot"]) == 0
    lines = capsys.readouterr().out.strip().splitlines()
    tree = loads_tree((tmp_path / "s.json").read_text())
    assert isinstance(tree.root, Internal) and len(lines) == 2
    for line in lines:
        counts = [int(c) for c in re.search(r"counts=\[([\d, ]+)\]", line).group(1).split(",")]
        assert sum(counts) == int(re.search(r"n=(\d+)", line).group(1))
    dot = (tmp_path / "s.dot").read_text()
    assert dot.startswith("digraph") and dot.rstrip().endswith("}")
    n_nodes = sum(1 for _ in iter_nodes(tree.root))
    assert len(re.findall(r"^\s*n\d+ \[label=", dot, re.M)) == n_nodes
    assert len(re.findall(r"->", dot)) == n_nodes - 1


def test_bench_quick(csv_path, capsys):
    args = ["bench", "--data", "toy.csv", "--label", "label", "--positive", "yes", "--quick", "--configs", "1x3,3x3", "--baseline"]
    assert main(args) == 0
    out = capsys.readouterr().out
    assert "18 records, 2 summary rows, 2 boxplot groups" in out and "DT" in out
    results = (csv_path.parent / "results" / "results.csv").read_text().splitlines()
    assert results[0] == "dataset,beta,gamma,w2,seed,f1,accuracy,train_seconds" and len(results) == 19
    assert all(line.endswith(",") for line in results[1:])  # no timing unless asked
    assert len((csv_path.parent / "results" / "summary.csv").read_text().splitlines()) == 3


def test_bench_bad_config_spec(csv_path):
    assert main(["bench", "--data", "toy.csv", "--label", "label", "--configs", "1by3"]) == 2


def test_config_file_and_override(csv_path, capsys):
    (csv_path.parent / "run.conf").write_text(
        "# training setup\ndata = toy.csv\nlabel = label\npositive = yes\nw2 = 0.3\nmax-depth = 2\nout = c.json\n"
    )
    assert main(["train", "--config", "run.conf"]) == 0
    err = capsys.readouterr().err
    assert "w2=0.3" in err and "max_depth=2" in err
    assert main(["train", "--config", "run.conf", "--w2", "0.9"]) == 0
    assert "w2=0.9" in capsys.readouterr().err
    (csv_path.parent / "bad.conf").write_text("colour_scheme = dark\n")
    with pytest.raises(SystemExit) as exc:
        main(["train", "--config", "bad.conf"])
    assert exc.value.code == 2


def test_missing_dataset_names_source(tmp_path, monkeypatch, capsys):
    monkeypatch.setenv("NDLT_DATA_DIR", str(tmp_path))
    assert main(["bench", "--dataset", "rice", "--quick"]) == 3
    assert "archive.ics.uci.edu" in capsys.readouterr().err
