"""``ndlt`` command line: train, predict, bench, inspect.

Any long flag can also be given in a flat ``key = value`` file passed with
``--config``; keys use the flag name without dashes (``max-depth`` or
``max_depth``). Command-line flags win over the file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from pathlib import Path

import numpy as np

from ndlt.baseline import build_exhaustive_thresholds_greedy
from ndlt.builder import FixedSplitPlan, build_tree
from ndlt.core import (
    DataError,
    Hyperparams,
    HyperparamError,
    Internal,
    InvariantError,
    Leaf,
    NDLTError,
    check_tree,
    dumps_tree,
    iter_nodes,
    loads_tree,
    validate_hyperparams,
)
from ndlt.data import encode_features, load_csv, load_dataset, preprocess, train_test_split
from ndlt.evaluation import (
    DEFAULT_CONFIGS,
    QUICK_SEEDS,
    QUICK_W2_GRID,
    SEEDS,
    W2_GRID,
    emit_boxplot_data,
    run_baseline,
    run_grid,
    summarize,
    write_baseline_csv,
    write_results_csv,
    write_summary_csv,
)
from ndlt.metrics import accuracy, confusion, f1

EXIT_OK, EXIT_USAGE, EXIT_DATA, EXIT_INVARIANT = 0, 2, 3, 4

log = logging.getLogger("ndlt")


def _cpf(text: str):
    if text.lower() in ("all", "none", "unbounded"):
        return None
    return int(text)


def _add_hyperparams(p: argparse.ArgumentParser, bench: bool = False) -> None:
    d = Hyperparams()
    g = p.add_argument_group("hyperparameters")
    g.add_argument("--max-depth", type=int, default=d.max_depth)
    g.add_argument("--min-samples-leaf", type=int, default=d.min_samples_leaf)
    g.add_argument("--r-t", type=float, default=d.r_t, help="feature sampling ratio")
    g.add_argument("--delta", type=float, default=d.delta, help="depth decay factor")
    g.add_argument("--epsilon", type=float, default=d.epsilon)
    g.add_argument("--candidates-per-feature", type=_cpf, default=d.candidates_per_feature,
                   help="thresholds kept per feature during ranking, or 'all'")
    if not bench:
        g.add_argument("--gamma", type=int, default=d.gamma, help="thresholds per feature")
        g.add_argument("--beta", type=int, default=d.beta, help="top-ranked features kept")
        g.add_argument("--w2", type=float, default=d.w2, help="upper/lower trade-off weight")
        g.add_argument("--seed", type=int, default=d.seed)


def _add_data(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("data")
    g.add_argument("--data", help="delimited text file with a header row")
    g.add_argument("--dataset", help="dataset name from the bundled manifest")
    g.add_argument("--data-dir", help="directory holding manifest files (default $NDLT_DATA_DIR or ./data)")
    g.add_argument("--label", help="label column name")
    g.add_argument("--positive", default="1", help="label value treated as the positive class")
    g.add_argument("--delimiter", default=",")
    g.add_argument("--missing", default="", help="comma-separated missing-value tokens (empty cell always counts)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ndlt", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("train", help="train one tree and score it on a held-out split")
    p.add_argument("--config")
    _add_data(p)
    _add_hyperparams(p)
    p.add_argument("--baseline", action="store_true", help="train the greedy reference tree instead")
    p.add_argument("--fixed-splits", help="JSON list of [feature, threshold] or null per depth")
    p.add_argument("--split-ratio", type=float, default=0.7)
    p.add_argument("--out", default="tree.json")
    p.add_argument("--trace", help="write per-node candidate scores as JSON lines")
    p.set_defaults(func=cmd_train)

    p = sub.add_parser("predict", help="predict labels for a feature file")
    p.add_argument("--config")
    p.add_argument("--model", required=False)
    p.add_argument("--data", required=False)
    p.add_argument("--delimiter", default=",")
    p.add_argument("--missing", default="")
    p.add_argument("--out", help="output file (default stdout)")
    p.set_defaults(func=cmd_predict)

    p = sub.add_parser("bench", help="run the (beta,gamma) x w2 x seed grid")
    p.add_argument("--config")
    _add_data(p)
    p.add_argument("--name", help="dataset name used in output rows (defaults to --dataset or file stem)")
    _add_hyperparams(p, bench=True)
    p.add_argument("--configs", default=",".join(f"{b}x{g}" for b, g in DEFAULT_CONFIGS), help="e.g. 1x3,3x3,3x5")
    p.add_argument("--w2-grid", help="comma-separated w2 values (default 0.1..1.0)")
    p.add_argument("--seeds", help="comma list or range a-b (default 0-9)")
    p.add_argument("--quick", action="store_true", help="3 seeds x 3 w2 values")
    p.add_argument("--baseline", action="store_true", help="also score the greedy reference tree")
    p.add_argument("--timing", action="store_true", help="record wall-clock seconds in results.csv")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out-dir", default="results")
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("inspect", help="print a trained tree as rules, optionally as DOT")
    p.add_argument("--config")
    p.add_argument("--model", required=False)
    p.add_argument("--dot", help="write a Graphviz DOT file")
    p.set_defaults(func=cmd_inspect)
    return parser


def read_config(path) -> dict:
    out = {}
    for n, line in enumerate(Path(path).read_text(encoding="utf-8").splitlines(), start=1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        if "=" not in line:
            raise DataError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        out[key.replace("-", "_")] = value
    return out


def _apply_config(parser: argparse.ArgumentParser, argv) -> argparse.Namespace:
    args = parser.parse_args(argv)
    if not getattr(args, "config", None):
        return args
    conf = read_config(args.config)
    sub = parser._subparsers._group_actions[0].choices[args.command]  # noqa: SLF001
    by_dest = {a.dest: a for a in sub._actions}  # noqa: SLF001
    defaults = {}
    for key, value in conf.items():
        action = by_dest.get(key)
        if action is None or key in ("config", "help"):
            parser.error(f"unknown config key {key!r} in {args.config}")
        if action.nargs == 0:
            defaults[key] = value.lower() in ("1", "true", "yes", "on")
        else:
            conv = action.type or str
            try:
                defaults[key] = conv(value)
            except (TypeError, ValueError):
                parser.error(f"bad value for {key!r} in {args.config}: {value!r}")
    sub.set_defaults(**defaults)
    return parser.parse_args(argv)


def _echo_config(args) -> None:
    items = {k: v for k, v in sorted(vars(args).items()) if k not in ("func",)}
    print("# effective config: " + " ".join(f"{k}={v}" for k, v in items.items()), file=sys.stderr)


def _hyperparams(args, **override) -> Hyperparams:
    fields = dict(
        max_depth=args.max_depth,
        min_samples_leaf=args.min_samples_leaf,
        r_t=args.r_t,
        delta=args.delta,
        epsilon=args.epsilon,
        candidates_per_feature=args.candidates_per_feature,
    )
    for name in ("gamma", "beta", "w2", "seed"):
        if hasattr(args, name):
            fields[name] = getattr(args, name)
    fields.update(override)
    h = Hyperparams(**fields)
    validate_hyperparams(h)
    return h


def _load_view(args):
    if args.dataset:
        return load_dataset(args.dataset, args.data_dir)
    if not args.data or not args.label:
        raise HyperparamError("either --dataset or both --data and --label are required")
    if not Path(args.data).exists():
        raise DataError(f"data file {args.data} not found")
    tokens = [""] + [t for t in args.missing.split(",") if t]
    raw = load_csv(args.data, args.label, tokens, args.delimiter)
    return preprocess(raw, args.positive)


def cmd_train(args) -> int:
    h = _hyperparams(args)
    ds = _load_view(args)
    split = train_test_split(ds, args.split_ratio, h.seed)
    plan = None
    if args.fixed_splits:
        try:
            entries = json.loads(Path(args.fixed_splits).read_text(encoding="utf-8"))
        except (OSError, json.JSONDecodeError) as exc:
            raise DataError(f"cannot read fixed split plan: {exc}") from exc
        plan = FixedSplitPlan.from_list(entries, ds.feature_names)
    meta = {
        "feature_names": tuple(ds.feature_names),
        "label_values": tuple(ds.label_values),
        "categories": ds.categories,
    }
    trace = [] if args.trace else None
    if args.baseline:
        tree = build_exhaustive_thresholds_greedy(split.train.features, split.train.labels, h, meta)
    else:
        tree = build_tree(split.train.features, split.train.labels, h, plan, trace, meta)
    check_tree(tree)
    Path(args.out).write_text(dumps_tree(tree), encoding="utf-8")
    if trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for rec in trace:
                fh.write(json.dumps(rec) + "\n")
    c = confusion(split.test.labels, tree.predict(split.test.features), ds.positive_class)
    print(f"f1={f1(c):.6f}")
    print(f"accuracy={accuracy(c):.6f}")
    return EXIT_OK


def _read_model(path):
    if not path:
        raise HyperparamError("--model is required")
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise DataError(f"cannot read model file: {exc}") from exc
    return loads_tree(text)


def cmd_predict(args) -> int:
    tree = _read_model(args.model)
    if not args.data:
        raise HyperparamError("--data is required")
    path = Path(args.data)
    if not path.exists():
        raise DataError(f"data file {path} not found")
    if path.stat().st_size == 0:
        labels = []
    else:
        tokens = [""] + [t for t in args.missing.split(",") if t]
        raw = load_csv(path, None, tokens, args.delimiter)
        d = tree.n_features
        if len(raw.header) not in (d, d + 1):
            raise DataError(f"expected {d} feature columns, file has {len(raw.header)}")
        if tree.feature_names:
            X = encode_features(raw, tree.feature_names, tree.categories)
        else:
            if len(raw.header) != d:
                raise DataError(f"expected {d} feature columns, file has {len(raw.header)}")
            X = encode_features(raw, raw.header)
        ids = tree.predict(X) if len(X) else []
        names = tree.label_values
        labels = [names[i] if names else str(i) for i in ids]
    text = "".join(f"{label}\n" for label in labels)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def _parse_configs(text: str) -> list[tuple[int, int]]:
    out = []
    for part in text.split(","):
        try:
            b, g = part.lower().split("x")
            out.append((int(b), int(g)))
        except ValueError:
            raise HyperparamError(f"bad config {part!r}; expected BETAxGAMMA") from None
    return out


def _parse_seeds(text: str) -> list[int]:
    if "-" in text and "," not in text:
        a, b = text.split("-")
        return list(range(int(a), int(b) + 1))
    return [int(s) for s in text.split(",")]


def cmd_bench(args) -> int:
    configs = _parse_configs(args.configs)
    w2_grid = [float(w) for w in args.w2_grid.split(",")] if args.w2_grid else list(QUICK_W2_GRID if args.quick else W2_GRID)
    seeds = _parse_seeds(args.seeds) if args.seeds else list(QUICK_SEEDS if args.quick else SEEDS)
    h_base = _hyperparams(args)
    for b, g in configs:
        for w2 in w2_grid:
            validate_hyperparams(h_base.replace(beta=b, gamma=g, w2=w2))
    ds = _load_view(args)
    name = args.name or args.dataset or Path(args.data).stem
    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    t0 = time.perf_counter()
    records = run_grid(ds, name, configs, w2_grid, seeds, h_base, args.jobs)
    write_results_csv(records, out_dir / "results.csv", include_timing=args.timing)
    rows = summarize(records)
    write_summary_csv(rows, out_dir / "summary.csv")
    groups = emit_boxplot_data(records, out_dir / "boxplot.csv")
    log.info("grid of %d cells finished in %.1fs", len(records), time.perf_counter() - t0)

    print(f"{len(records)} records, {len(rows)} summary rows, {groups} boxplot groups -> {out_dir}")
    print(f"{'dataset':<12} {'(b,g)':<7} {'mean_f1':>8} {'mid_f1':>8} {'max_f1':>8} {'mean_acc':>9}")
    for r in rows:
        print(f"{r.dataset:<12} {f'({r.beta},{r.gamma})':<7} {r.mean_f1:8.3f} {r.mid_f1:8.3f} {r.max_f1:8.3f} {r.mean_acc:9.3f}")
    if args.baseline:
        base = run_baseline(ds, name, seeds)
        write_baseline_csv(base, out_dir / "baseline.csv", include_timing=args.timing)
        mean_f1 = sum(r.f1 for r in base) / len(base)
        mean_acc = sum(r.accuracy for r in base) / len(base)
        print(f"{name:<12} {'DT':<7} {mean_f1:8.3f} {'':>8} {'':>8} {mean_acc:9.3f}")
    return EXIT_OK


def _feature_label(tree, f: int) -> str:
    if tree.feature_names:
        return str(tree.feature_names[f])
    return f"x[{f}]"


def format_rules(tree) -> list[str]:
    """One line per leaf: the path conditions, predicted label and class counts."""
    lines = []

    def label_name(i):
        return tree.label_values[i] if tree.label_values else str(i)

    def walk(node, conds):
        if isinstance(node, Leaf):
            path = " and ".join(conds) if conds else "(always)"
            counts = ", ".join(str(c) for c in node.class_counts)
            indent = "  " * max(len(conds) - 1, 0)
            lines.append(f"{indent}{path} -> {label_name(node.label)}  counts=[{counts}] n={node.n_samples}")
            return
        name = _feature_label(tree, node.feature)
        walk(node.left, conds + [f"{name} <= {node.threshold!r}"])
        walk(node.right, conds + [f"{name} > {node.threshold!r}"])

    walk(tree.root, [])
    return lines


def to_dot(tree) -> str:
    ids = {}
    out = ["digraph ndlt {", "  node [shape=box];"]
    for i, (node, _) in enumerate(iter_nodes(tree.root)):
        ids[id(node)] = i
    for node, _ in iter_nodes(tree.root):
        i = ids[id(node)]
        if isinstance(node, Internal):
            label = f"{_feature_label(tree, node.feature)} <= {node.threshold!r}"
        else:
            label = f"class {node.label}\\ncounts {list(node.class_counts)}"
        label = label.replace('"', '\\"')
        out.append(f'  n{i} [label="{label}"];')
    for node, _ in iter_nodes(tree.root):
        if isinstance(node, Internal):
            i = ids[id(node)]
            out.append(f'  n{i} -> n{ids[id(node.left)]} [label="yes"];')
            out.append(f'  n{i} -> n{ids[id(node.right)]} [label="no"];')
    out.append("}")
    return "\n".join(out) + "\n"


def cmd_inspect(args) -> int:
    tree = _read_model(args.model)
    for line in format_rules(tree):
        print(line)
    if args.dot:
        Path(args.dot).write_text(to_dot(tree), encoding="utf-8")
    return EXIT_OK


def main(argv=None) -> int:
    parser = build_parser()
    args = _apply_config(parser, argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    _echo_config(args)
    prog = f"ndlt {args.command}"
    try:
        return args.func(args)
    except HyperparamError as exc:
        print(f"{prog}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvariantError as exc:
        print(f"{prog}: invariant failure: {exc}", file=sys.stderr)
        return EXIT_INVARIANT
    except (DataError, NDLTError, OSError) as exc:
        print(f"{prog}: data error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
